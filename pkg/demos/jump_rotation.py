"""Rotating the outer half of a set across a jump of its cap angle.

The profile has half-angle pi/3 on 1 < r < 2 and pi/6 on 2 < r < 3. Turning
the outer part by gamma keeps the perimeter of the symmetral as long as the
narrow outer arc stays inside the shadow of the wide inner one, i.e. while
gamma is at most the jump size pi/6. Past that the perimeter grows linearly.
"""

import math

import numpy as np

from sphsym.families import jump_example
from sphsym.rigidity import classify, orbit_distance, probe_jump

p = jump_example(count=1025)
verdict = classify(p)
print("rigidity holds:", verdict.holds)
for reason in verdict.reasons:
    print("  reason:", reason.to_dict())

print(f"\n{'gamma':>8} {'P(E) - P(F_v)':>16} {'distance to orbit >=':>22}")
for gamma in np.linspace(0.0, math.pi / 3, 9):
    res = probe_jump(p, 2.0, gamma)
    bound = orbit_distance(res.witness).bound if gamma > 0 else 0.0
    print(f"{gamma:8.4f} {res.slack:16.3e} {bound:22.4f}")

print(f"\nthreshold pi/6 = {math.pi / 6:.4f}; beyond it the excess is 2 * 2 * (gamma - pi/6)")
