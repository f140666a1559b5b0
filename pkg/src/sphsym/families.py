"""Seeded generators for profiles, cap-field sets and rasters.

Every generator takes a ``numpy.random.Generator`` so that test suites and
demos are reproducible. Profile classes match the rigidity dichotomy:
smooth AC profiles inside ``(0, pi)``, profiles with interior jumps,
profiles with Cantor mass, and profiles whose good set is disconnected.
"""

from __future__ import annotations

import math

import numpy as np

from .profile import CantorComponent, Profile, RadialGrid, jumps_from_sizes, make_profile
from .sets import (
    CapFieldSet,
    ConstantDirection,
    FourierRandom,
    VoxelSet,
    PiecewiseRotation,
    planar_rotation,
    raster_shape,
)

LO, HI = 0.25, math.pi - 0.25


def _smooth(rng, r, a, b, modes=3, amp=0.35):
    """Random trigonometric polynomial in [LO + amp, HI - amp]-ish around a random level."""
    t = (r - a) / (b - a)
    level = rng.uniform(LO + amp + 0.1, HI - amp - 0.1)
    c = rng.normal(size=modes) * amp / (np.arange(1, modes + 1) * math.sqrt(modes))
    ph = rng.uniform(0, 2 * math.pi, size=modes)
    out = level + sum(ci * np.sin((k + 1) * math.pi * t + p) for k, (ci, p) in enumerate(zip(c, ph)))
    return np.clip(out, LO, HI)


def random_window(rng, r_min_zero: bool = False):
    a = 0.0 if r_min_zero else rng.uniform(0.3, 1.2)
    return a, a + rng.uniform(1.0, 2.5)


def annular_sector(a: float, b: float, alpha0: float, count: int = 4096) -> Profile:
    """n = 2 annular sector of half-angle ``alpha0``; perimeter ``2(b-a) + 2 alpha0 (a+b)``."""
    g = RadialGrid(a, b, count)
    return make_profile(2, g, np.full(count, alpha0), interp="linear")


def ball(R: float, n: int = 3, count: int = 4096) -> Profile:
    """Centred ball of radius ``R``."""
    g = RadialGrid(0.0, R, count)
    return make_profile(n, g, np.full(count, math.pi), interp="linear")


def jump_example(n: int = 2, count: int = 4096) -> Profile:
    """``alpha = pi/3`` on (1, 2) and ``pi/6`` on (2, 3); for n = 2 the perimeter is ``7 pi/3 + 4``."""
    g = RadialGrid(1.0, 3.0, count)
    return make_profile(n, g, np.full(count, math.pi / 3), [(2.0, math.pi / 3, math.pi / 6)], interp="linear")


def staircase_profile(n: int = 2, level: float = 1.0, scale: float = 0.5, window=(1.0, 3.0), support=(1.5, 2.5), count: int = 4096, depth: int = 8) -> Profile:
    """Constant AC part plus a ternary staircase of height ``scale`` on ``support``."""
    g = RadialGrid(*window, count)
    return make_profile(n, g, np.full(count, level), cantor=CantorComponent(tuple(support), scale, depth), interp="linear")


def smooth_profile(n: int, rng, count: int = 1024, window=None) -> Profile:
    a, b = window or random_window(rng)
    g = RadialGrid(a, b, count)
    return make_profile(n, g, _smooth(rng, g.nodes, a, b))


def jump_profile(n: int, rng, count: int = 1024, window=None, njumps: int | None = None) -> Profile:
    a, b = window or random_window(rng)
    g = RadialGrid(a, b, count)
    ac = _smooth(rng, g.nodes, a, b, amp=0.15)
    k = njumps or int(rng.integers(1, 3))
    radii = np.sort(rng.uniform(a + 0.15 * (b - a), b - 0.15 * (b - a), size=k))
    sizes = []
    total = 0.0
    for r in radii:
        base = float(np.interp(r, g.nodes, ac)) + total
        target = rng.uniform(LO, HI)
        if abs(target - base) < 0.15:
            target = base + (0.3 if base < 0.5 * math.pi else -0.3)
        sizes.append((float(r), target - base))
        total += target - base
    # keep the AC part inside the range after the shifts
    shift = np.zeros_like(ac)
    for r, d in sizes:
        shift += np.where(g.nodes > r, d, 0.0)
    ac = np.clip(ac + shift, LO, HI) - shift
    return make_profile(n, g, ac, jumps_from_sizes(g, ac, sizes))


def cantor_profile(n: int, rng, count: int = 1024, window=None) -> Profile:
    a, b = window or random_window(rng)
    g = RadialGrid(a, b, count)
    L = b - a
    s0 = a + rng.uniform(0.1, 0.3) * L
    s1 = b - rng.uniform(0.1, 0.3) * L
    scale = float(rng.choice([-1, 1]) * rng.uniform(0.2, 0.6))
    ac = _smooth(rng, g.nodes, a, b, amp=0.1)
    ac = np.clip(ac, LO + max(0.0, -scale), HI - max(0.0, scale))
    return make_profile(n, g, ac, cantor=CantorComponent((s0, s1), scale, 8))


def disconnected_profile(n: int, rng, count: int = 1024, window=None, kind: str | None = None) -> Profile:
    """Good set split by a plateau where ``alpha = 0`` (or ``alpha = pi``)."""
    a, b = window or random_window(rng)
    g = RadialGrid(a, b, count)
    r = g.nodes
    c = rng.uniform(a + 0.35 * (b - a), b - 0.35 * (b - a))
    half = rng.uniform(0.03, 0.08) * (b - a)
    ramp = rng.uniform(0.05, 0.12) * (b - a)
    w = np.clip((np.abs(r - c) - half) / ramp, 0.0, 1.0)
    base = _smooth(rng, r, a, b, amp=0.2)
    kind = kind or str(rng.choice(["alpha_zero", "alpha_pi"]))
    alpha = base * w if kind == "alpha_zero" else math.pi - (math.pi - base) * w
    return make_profile(n, g, alpha, interp="pchip")


PROFILE_CLASSES = {
    "smooth": smooth_profile,
    "jump": jump_profile,
    "cantor": cantor_profile,
    "disconnected": disconnected_profile,
}


def random_direction(n: int, rng, window, kind: str | None = None):
    kind = kind or str(rng.choice(["constant", "fourier", "piecewise"]))
    if kind == "constant":
        return ConstantDirection(n, planar_rotation(n, rng.uniform(-math.pi, math.pi)))
    if kind == "fourier":
        return FourierRandom.random(n, window, modes=3, amplitude=rng.uniform(0.1, 0.6), seed=int(rng.integers(2**31)))
    a, b = window
    k = int(rng.integers(1, 3))
    breaks = np.sort(rng.uniform(a + 0.1 * (b - a), b - 0.1 * (b - a), size=k))
    rots = [np.eye(n)]
    for _ in range(k):
        q = planar_rotation(n, rng.uniform(-1.0, 1.0))
        if n == 3 and rng.random() < 0.5:
            q = planar_rotation(3, rng.uniform(-1.0, 1.0), (0, 2)) @ q
        rots.append(q)
    return PiecewiseRotation(ConstantDirection(n), breaks, rots)


def random_capfield(n: int, rng, count: int = 1024, profile_kind: str | None = None, direction_kind: str | None = None) -> CapFieldSet:
    profile_kind = profile_kind or str(rng.choice(["smooth", "jump"]))
    p = PROFILE_CLASSES[profile_kind](n, rng, count)
    return CapFieldSet(p, random_direction(n, rng, (p.grid.r_min, p.grid.r_max), direction_kind))


# ---------------------------------------------------------------------------
# rasters
# ---------------------------------------------------------------------------


def _coords(n: int, size: int, h: float):
    ax = (np.arange(size) - 0.5 * (size - 1)) * h
    return np.meshgrid(*([ax] * n), indexing="ij")


def voxel_square(side: float = 1.0, h: float = 1 / 128, centre=(0.6, 0.0)) -> VoxelSet:
    """Axis-aligned square; shells that cut its corners have non-arc slices."""
    reach = math.hypot(abs(centre[0]) + side / 2, abs(centre[1]) + side / 2)
    size = raster_shape(reach, h)
    X, Y = _coords(2, size, h)
    occ = (np.abs(X - centre[0]) <= side / 2) & (np.abs(Y - centre[1]) <= side / 2)
    return VoxelSet(occ, h)


def random_blobs(n: int, rng, h: float, count: int | None = None, extent: float = 1.5) -> VoxelSet:
    """Union of a few random balls inside ``B(extent)``."""
    size = raster_shape(extent, h)
    grids = _coords(n, size, h)
    occ = np.zeros(grids[0].shape, dtype=bool)
    for _ in range(count or int(rng.integers(1, 4))):
        rad = rng.uniform(0.2, 0.5)
        c = rng.normal(size=n)
        c *= rng.uniform(0.1, extent - rad - 0.05) / np.linalg.norm(c)
        occ |= sum((g - ci) ** 2 for g, ci in zip(grids, c)) <= rad * rad
    return VoxelSet(occ, h)


def random_sphere_subset(rng, nt: int = 128, blobs: int | None = None) -> np.ndarray:
    """Lat-long occupancy of a union of random geodesic caps on the unit sphere."""
    nph = 2 * nt
    th = (np.arange(nt) + 0.5) * math.pi / nt
    ph = (np.arange(nph) + 0.5) * 2 * math.pi / nph
    T, P = np.meshgrid(th, ph, indexing="ij")
    X = np.stack([np.sin(T) * np.cos(P), np.sin(T) * np.sin(P), np.cos(T)], axis=-1)
    occ = np.zeros(T.shape, dtype=bool)
    for _ in range(blobs or int(rng.integers(1, 5))):
        c = rng.normal(size=3)
        c /= np.linalg.norm(c)
        occ |= np.arccos(np.clip(X @ c, -1, 1)) < rng.uniform(0.2, 1.2)
    return occ
