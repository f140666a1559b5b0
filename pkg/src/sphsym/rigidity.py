"""Rigidity classifier and the three families of non-rigid extremals.

Rigidity holds for a profile exactly when

1. the set of radii where ``0 < alpha^ and alpha^v < pi`` is an interval, and
2. ``alpha`` has neither jumps nor Cantor mass inside that interval.

When either condition fails the generators below build a cap-field set
with the same perimeter as ``F_v`` that is not an orthogonal image of it:
rotate the outer part across a separating radius, across a jump by less
than ``lam`` times the jump size, or let the centre follow the Cantor part
of ``alpha``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .profile import Profile, approx_limits, step_approximant
from .sets import CantorFlow, CapFieldSet, glue, planar_rotation, symmetral_from_profile
from .sphere_geometry import cap_symmetric_difference_array, sphere_measure

EPS0 = 1e-9


@dataclass
class Reason:
    kind: str  # "interval_violation" | "jump" | "cantor"
    r: float | None = None
    detail: dict = field(default_factory=dict)

    def to_dict(self):
        return {"kind": self.kind, "r": self.r, **self.detail}


@dataclass
class RigidityVerdict:
    holds: bool
    reasons: list
    witness: CapFieldSet | None = None
    interval: tuple[float, float] | None = None

    def to_dict(self):
        return {
            "holds": self.holds,
            "reasons": [r.to_dict() for r in self.reasons],
            "interval": None if self.interval is None else list(self.interval),
            "has_witness": self.witness is not None,
        }


def _limits(p: Profile, r: np.ndarray):
    g = p.grid
    left = np.asarray(p.alpha.left_limit(r), dtype=float)
    right = np.asarray(p.alpha.right_limit(r), dtype=float)
    left = np.where(r <= g.r_min, right, left)
    right = np.where(r >= g.r_max, left, right)
    return np.minimum(left, right), np.maximum(left, right)


def sample_radii(p: Profile, refine: int = 8) -> np.ndarray:
    """Refined grid plus every jump radius."""
    nodes = p.grid.nodes
    fine = np.linspace(nodes[0], nodes[-1], refine * (len(nodes) - 1) + 1)
    return np.unique(np.concatenate([fine, p.alpha.jump_radii]))


def good_set(p: Profile, eps0: float = EPS0, refine: int = 8):
    """Sample radii, approximate limits, and membership in ``{0 < alpha^ <= alpha^v < pi}``."""
    r = sample_radii(p, refine)
    lo, hi = _limits(p, r)
    return r, lo, hi, (lo > eps0) & (hi < math.pi - eps0)


def classify(p: Profile, eps0: float = EPS0, witness: bool = True, lam: float = 0.5) -> RigidityVerdict:
    """Decide whether every extremal for ``p`` is an orthogonal image of ``F_v``."""
    r, lo, hi, inS = good_set(p, eps0)
    idx = np.nonzero(inS)[0]
    if idx.size == 0:
        return RigidityVerdict(True, [], None, None)
    first, last = idx[0], idx[-1]
    interval = (float(r[first]), float(r[last]))
    reasons: list[Reason] = []

    # interval condition: runs of bad samples strictly between good ones
    bad = ~inS[first : last + 1]
    if bad.any():
        edges = np.diff(np.concatenate([[0], bad.astype(int), [0]]))
        starts = np.nonzero(edges == 1)[0] + first
        stops = np.nonzero(edges == -1)[0] + first
        for s, e in zip(starts, stops):
            run = np.arange(s, e)
            zero = lo[run] <= eps0
            if zero.any():
                k = run[np.argmin(lo[run])]
                kind = "alpha_zero"
            else:
                k = run[np.argmax(hi[run])]
                kind = "alpha_pi"
            reasons.append(
                Reason("interval_violation", float(r[k]), {"violation": kind, "alpha_lower": float(lo[k]), "alpha_upper": float(hi[k])})
            )

    # regularity inside the open interval
    a, b = interval
    for j in p.alpha.jumps:
        if a < j.r < b and abs(j.size) > eps0:
            lo_j, hi_j = approx_limits(p, j.r)
            if lo_j > eps0 and hi_j < math.pi - eps0:
                reasons.append(Reason("jump", j.r, {"alpha_lower": lo_j, "alpha_upper": hi_j}))
    c = p.alpha.cantor
    if c is not None and c.scale != 0:
        ca, cb = max(a, c.support[0]), min(b, c.support[1])
        if cb > ca:
            mass = c.variation(ca, cb)
            if mass > eps0:
                reasons.append(Reason("cantor", None, {"interval": [ca, cb], "mass": mass}))

    holds = not reasons
    wit = None
    if witness and not holds:
        wit = witness_for(p, reasons[0], lam)
    return RigidityVerdict(holds, reasons, wit, interval)


def witness_for(p: Profile, reason: Reason, lam: float = 0.5) -> CapFieldSet:
    if reason.kind == "interval_violation":
        return counterexample_disconnect(p, reason.r)
    if reason.kind == "jump":
        return counterexample_jump(p, reason.r, lam)
    if reason.kind == "cantor":
        return counterexample_cantor(p, lam)
    raise ValueError(f"unknown reason {reason.kind!r}")


# ---------------------------------------------------------------------------
# generators
# ---------------------------------------------------------------------------


def counterexample_disconnect(p: Profile, r_bar: float, rotation: np.ndarray | None = None, eps0: float = EPS0) -> CapFieldSet:
    """Rotate ``F_v`` outside ``B(r_bar)`` where ``r_bar`` separates the good set.

    ``r_bar`` must have ``alpha^(r_bar) = 0`` or ``alpha^v(r_bar) = pi`` and
    good radii on both sides. The default rotation is a quarter turn in the
    (x1, x2) plane.
    """
    lo, hi = approx_limits(p, r_bar)
    if not (lo <= eps0 or hi >= math.pi - eps0):
        raise ValueError(f"r_bar={r_bar} is not a separating radius (alpha limits {lo:.6g}, {hi:.6g})")
    r, _, _, inS = good_set(p, eps0)
    if not (inS[r < r_bar].any() and inS[r > r_bar].any()):
        raise ValueError(f"r_bar={r_bar} does not separate two parts of the good set")
    q = planar_rotation(p.n, math.pi / 2) if rotation is None else rotation
    Fv = symmetral_from_profile(p)
    return glue(Fv, Fv, r_bar, q)


def jump_bound(p: Profile, r_bar: float, lam: float) -> float:
    lo, hi = approx_limits(p, r_bar)
    return lam * (hi - lo)


def counterexample_jump(p: Profile, r_bar: float, lam: float = 0.5, gamma: float | None = None) -> CapFieldSet:
    """Rotate the outer part by ``gamma`` across a jump of ``alpha``.

    Requires ``0 < gamma < lam (alpha^v - alpha^)`` with ``0 < lam < 1``; the
    default is half the bound. Use :func:`probe_jump` for other angles.
    """
    if not 0 < lam < 1:
        raise ValueError("lam must lie in (0, 1)")
    lo, hi = approx_limits(p, r_bar)
    if hi - lo <= EPS0:
        raise ValueError(f"alpha does not jump at r={r_bar}")
    bound = lam * (hi - lo)
    gamma = 0.5 * bound if gamma is None else float(gamma)
    if not 0 < gamma < bound:
        raise ValueError(f"rotation angle {gamma} must lie in (0, {bound}) for lam={lam}")
    Fv = symmetral_from_profile(p)
    return glue(Fv, Fv, r_bar, planar_rotation(p.n, gamma))


@dataclass
class ProbeResult:
    gamma: float
    threshold: float
    P_E: float
    P_Fv: float
    slack: float
    witness: CapFieldSet

    def to_dict(self):
        return {"gamma": self.gamma, "threshold": self.threshold, "P_E": self.P_E, "P_Fv": self.P_Fv, "slack": self.slack}


def probe_jump(p: Profile, r_bar: float, gamma: float, mesh: int = 512) -> ProbeResult:
    """Perimeter excess for any rotation angle across a jump (reports, does not judge)."""
    from .perimeter import check_inequality

    lo, hi = approx_limits(p, r_bar)
    Fv = symmetral_from_profile(p)
    E = glue(Fv, Fv, r_bar, planar_rotation(p.n, gamma))
    res = check_inequality(E, mesh=mesh, method="semi-analytic" if p.n == 3 else "auto")
    return ProbeResult(gamma, hi - lo, res.P_E, res.P_Fv, res.slack, E)


def _check_cantor_support(p: Profile, eps0: float = EPS0):
    c = p.alpha.cantor
    if c is None or c.scale == 0:
        raise ValueError("profile has no Cantor mass")
    a, b = c.support
    rr = np.linspace(a, b, 4097)
    lo, hi = _limits(p, rr)
    if lo.min() <= eps0 or hi.max() >= math.pi - eps0:
        raise ValueError("the Cantor support must lie where 0 < alpha < pi")
    return c


def counterexample_cantor(p: Profile, lam: float = 0.5) -> CapFieldSet:
    """Centre direction ``R_{lam (c(r) - c(a))} e1`` driven by the Cantor part ``c`` of alpha."""
    c = _check_cantor_support(p)
    return CapFieldSet(p, CantorFlow(p.n, lam, c))


def cantor_step_pair(p: Profile, lam: float, level: int):
    """Step approximants ``(E^k, F_{v^k})``: all Cantor mass turned into ``2^k`` jumps."""
    c = _check_cantor_support(p)
    pk = step_approximant(p, level)
    Ek = CapFieldSet(pk, CantorFlow(p.n, lam, c).step(level))
    return Ek, symmetral_from_profile(pk)


# ---------------------------------------------------------------------------
# distance from the orbit of F_v
# ---------------------------------------------------------------------------


@dataclass
class OrbitDistance:
    """Certified lower bound on ``min_Q |E sym-diff Q F_v|`` over orthogonal ``Q``."""

    bound: float
    estimate: float
    omega: np.ndarray
    lipschitz: float
    cells: int

    def to_dict(self):
        return {"bound": self.bound, "estimate": self.estimate, "omega": self.omega.tolist(), "cells": self.cells}


def _radial_quadrature(E: CapFieldSet, cells: int = 128, order: int = 6):
    p = E.profile
    g = p.grid
    cuts = np.unique(
        np.concatenate([np.linspace(g.r_min, g.r_max, cells + 1), p.alpha.jump_radii, E.direction.breakpoints()])
    )
    cuts = cuts[(cuts >= g.r_min) & (cuts <= g.r_max)]
    x, w = np.polynomial.legendre.leggauss(order)
    a, b = cuts[:-1], cuts[1:]
    rr = (0.5 * (b - a)[:, None] * x + 0.5 * (a + b)[:, None]).ravel()
    ww = (0.5 * (b - a)[:, None] * w).ravel()
    return rr, ww


def orbit_distance(E: CapFieldSet, max_cells: int = 200_000, target: float = 0.5) -> OrbitDistance:
    """Branch-and-bound lower bound on the volume distance from ``E`` to rotations of ``F_v``.

    For a cap-field set ``|E sym-diff Q F_v| = int r^(n-1) f(alpha, dist(d(r), Q e1)) dr``
    with ``f`` the symmetric difference of two equal caps. Its dependence on
    ``omega = Q e1`` is Lipschitz with constant
    ``L = int 2 r^(n-1) sphere_measure(n, 1, alpha) dr``; each cell's value
    at its centre minus ``L`` times its radius is a lower bound. The radial
    integral uses a fixed Gauss rule and the bound certifies that sum.
    """
    n = E.n
    if n not in (2, 3):
        raise ValueError("orbit distance is implemented for n in {2, 3}")
    rr, ww = _radial_quadrature(E)
    alpha = np.clip(E.profile.alpha(rr), 0.0, math.pi)
    d = E.direction(rr)
    wt = ww * rr ** (n - 1)
    lip = float(np.sum(2.0 * wt * sphere_measure(n, 1.0, alpha)))

    def value(omega):
        dist = np.arccos(np.clip(d @ omega.T, -1.0, 1.0))  # (K, M)
        f = cap_symmetric_difference_array(n, alpha[:, None], alpha[:, None], dist)
        return wt @ f

    if n == 2:
        lo = np.linspace(-math.pi, math.pi, 361)[:-1]
        widths = np.full(lo.shape, 2 * math.pi / 360)

        def centres(lo, w):
            t = lo + 0.5 * w
            return np.stack([np.cos(t), np.sin(t)], axis=-1), 0.5 * w

        def split(lo, w):
            return np.concatenate([lo, lo + 0.5 * w]), np.concatenate([0.5 * w, 0.5 * w])

        cell = (lo, widths)
    else:
        th = np.linspace(0, math.pi, 19)[:-1]
        ph = np.linspace(-math.pi, math.pi, 37)[:-1]
        T, P = np.meshgrid(th, ph, indexing="ij")
        cell = (T.ravel(), P.ravel(), np.full(T.size, math.pi / 18), np.full(T.size, 2 * math.pi / 36))

        def centres(t0, p0, dt, dp):
            tc, pc = t0 + 0.5 * dt, p0 + 0.5 * dp
            om = np.stack([np.cos(tc), np.sin(tc) * np.cos(pc), np.sin(tc) * np.sin(pc)], axis=-1)
            smax = np.where((t0 <= math.pi / 2) & (t0 + dt >= math.pi / 2), 1.0, np.maximum(np.sin(t0), np.sin(t0 + dt)))
            return om, 0.5 * dt + 0.5 * smax * dp

        def split(t0, p0, dt, dp):
            h_t, h_p = 0.5 * dt, 0.5 * dp
            return (
                np.concatenate([t0, t0 + h_t, t0, t0 + h_t]),
                np.concatenate([p0, p0, p0 + h_p, p0 + h_p]),
                np.concatenate([h_t] * 4),
                np.concatenate([h_p] * 4),
            )

    best = math.inf
    best_om = None
    lower = -math.inf
    frozen = 0.0
    frozen_min = math.inf
    total_cells = 0
    while True:
        om, rad = centres(*cell)
        vals = np.concatenate([value(om[i : i + 256]) for i in range(0, len(om), 256)])
        total_cells += len(vals)
        k = int(np.argmin(vals))
        if vals[k] < best:
            best, best_om = float(vals[k]), om[k]
        lbs = vals - lip * rad
        # cells that can no longer shrink are settled with their current bound
        active = (lbs < target * best) & (rad > 1e-13)
        done_lbs = lbs[~active]
        if done_lbs.size:
            frozen_min = min(frozen_min, float(done_lbs.min()))
        if not active.any() or total_cells > max_cells:
            rest = float(lbs[active].min()) if active.any() else math.inf
            lower = min(frozen_min, rest)
            break
        cell = split(*(c[active] for c in cell))
    # the sampled minimum caps the bound; this only matters when the minimum is hit exactly
    lower = min(lower, best)
    return OrbitDistance(lower, best, best_om, lip, total_cells)
