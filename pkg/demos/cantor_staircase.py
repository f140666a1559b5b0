"""Perimeter-preserving deformation driven by a devil's staircase.

The half-angle profile is a constant plus a ternary staircase on [1.5, 2.5].
Letting the cap centre turn by half the staircase gives a set with the same
perimeter as the symmetral, although no single rotation matches it. Each
step approximant replaces the staircase by 2^k small jumps; the identity
holds exactly at every level and the approximants converge to the limit.
"""

from sphsym.families import staircase_profile
from sphsym.perimeter import perimeter_capfield, perimeter_symmetral
from sphsym.rigidity import cantor_step_pair, counterexample_cantor, orbit_distance

p = staircase_profile(count=1025)
E = counterexample_cantor(p, lam=0.5)
ref = perimeter_symmetral(p).total
print(f"P(F_v) = {ref:.12f}")
print(f"P(E)   = {perimeter_capfield(E).total:.12f}")
print(f"distance from every rotation of F_v >= {orbit_distance(E).bound:.4f}\n")

print(f"{'k':>3} {'P(E^k) - P(F_v^k)':>20} {'P(F_v^k) - P(F_v)':>20}")
for k in range(1, 11):
    Ek, Fk = cantor_step_pair(p, 0.5, k)
    pk = perimeter_symmetral(Fk.profile).total
    print(f"{k:3d} {perimeter_capfield(Ek).total - pk:20.2e} {pk - ref:20.3e}")
