"""Concrete set representations.

A cap-field set has, at every radius ``r``, the slice ``B_{alpha(r)}(r d(r))``:
a geodesic cap whose angle comes from a :class:`~sphsym.profile.Profile`
and whose centre comes from a :class:`DirectionField`. The symmetral
``F_v`` is the cap-field set with ``d == e1``. Voxel sets are boolean
rasters used as a brute-force oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .profile import CantorComponent, Jump, Profile, make_profile
from .sphere_geometry import check_dimension, sphere_area

# ---------------------------------------------------------------------------
# rotations
# ---------------------------------------------------------------------------


def planar_rotation(n: int, gamma: float, plane: tuple[int, int] = (0, 1)) -> np.ndarray:
    """Counterclockwise rotation by ``gamma`` in the coordinate plane ``plane``."""
    i, j = plane
    q = np.eye(n)
    c, s = math.cos(gamma), math.sin(gamma)
    q[i, i], q[i, j], q[j, i], q[j, j] = c, -s, s, c
    return q


def _check_orthogonal(q: np.ndarray, n: int) -> np.ndarray:
    q = np.asarray(q, dtype=float)
    if q.shape != (n, n) or not np.allclose(q @ q.T, np.eye(n), atol=1e-10):
        raise ValueError("expected an orthogonal n x n matrix")
    return q


def _e1(n):
    e = np.zeros(n)
    e[0] = 1.0
    return e


def _planar_angle_of(q: np.ndarray) -> tuple[float, float]:
    # n = 2: q R_theta e1 = R_{phi + s theta} e1 with s = det q
    s = float(np.sign(np.linalg.det(q)))
    col = q[:, 0]
    return math.atan2(col[1], col[0]), s


def minimal_rotation(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Rotation taking unit ``a`` to unit ``b`` about the axis ``a x b`` (stacked)."""
    a = np.atleast_2d(a)
    b = np.atleast_2d(b)
    n = a.shape[-1]
    out = np.empty(a.shape[:-1] + (n, n))
    for idx in np.ndindex(a.shape[:-1]):
        u, v = a[idx], b[idx]
        c = float(np.clip(u @ v, -1.0, 1.0))
        w = v - c * u
        nw = np.linalg.norm(w)
        if nw < 1e-15:
            out[idx] = np.eye(n)
            continue
        w = w / nw
        s = math.sqrt(max(0.0, 1 - c * c))
        # rotation in span(u, w) by angle acos(c)
        out[idx] = (
            np.eye(n)
            + s * (np.outer(w, u) - np.outer(u, w))
            + (c - 1) * (np.outer(u, u) + np.outer(w, w))
        )
    return out


# ---------------------------------------------------------------------------
# direction fields
# ---------------------------------------------------------------------------


class DirectionField:
    """A map ``r -> d(r)`` on the unit sphere with known BV structure.

    Subclasses provide values, the a.e. derivative, jump radii, and (for
    n = 2) a lifted planar angle ``theta_c`` so that ``d = (cos, sin)(theta_c)``.
    """

    kind: str = "abstract"
    n: int

    def __call__(self, r) -> np.ndarray:
        raise NotImplementedError

    def right(self, r) -> np.ndarray:
        return self(r)

    def derivative(self, r) -> np.ndarray:
        raise NotImplementedError

    def jump_radii(self) -> np.ndarray:
        return np.zeros(0)

    def breakpoints(self) -> np.ndarray:
        return self.jump_radii()

    # planar angle (n = 2) -------------------------------------------------
    def angle(self, r) -> np.ndarray:
        raise NotImplementedError

    def angle_right(self, r) -> np.ndarray:
        return self.angle(r)

    def angle_derivative(self, r) -> np.ndarray:
        raise NotImplementedError

    def cantor_coupling(self, r):
        """(component, kappa(r)): the Cantor part of theta_c is kappa dC."""
        return None, np.zeros_like(np.asarray(r, dtype=float))

    @property
    def cantor(self) -> CantorComponent | None:
        return None

    def step(self, level: int) -> "DirectionField":
        """Pure-jump version with the Cantor part frozen at construction ``level``."""
        return self

    def to_dict(self) -> dict:
        raise NotImplementedError


class ConstantDirection(DirectionField):
    """``d(r) = Q e1`` for a fixed orthogonal ``Q`` (identity by default)."""

    kind = "constant"

    def __init__(self, n: int, rotation: np.ndarray | None = None):
        self.n = check_dimension(n)
        self.rotation = np.eye(n) if rotation is None else _check_orthogonal(rotation, n)
        self.vector = self.rotation[:, 0].copy()

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        return np.broadcast_to(self.vector, r.shape + (self.n,)).copy()

    def derivative(self, r):
        r = np.asarray(r, dtype=float)
        return np.zeros(r.shape + (self.n,))

    def angle(self, r):
        r = np.asarray(r, dtype=float)
        return np.full(r.shape, math.atan2(self.vector[1], self.vector[0]))

    def angle_derivative(self, r):
        return np.zeros_like(np.asarray(r, dtype=float))

    def to_dict(self):
        return {"kind": "constant", "n": self.n, "rotation": self.rotation.tolist()}


class CantorFlow(DirectionField):
    """``d(r) = R_{beta(r)} e1`` with ``beta = lam (c(r) - c(a))``.

    ``c`` is the Cantor component of the profile's ``alpha``, so the flow
    has no absolutely continuous part and rotates only where ``alpha``
    carries Cantor mass. ``R`` is the planar rotation in ``plane``.
    """

    kind = "cantor_flow"

    def __init__(self, n: int, lam: float, cantor: CantorComponent, plane=(0, 1)):
        self.n = check_dimension(n)
        self.lam = float(lam)
        self._cantor = cantor
        self.plane = tuple(plane)

    @property
    def cantor(self):
        return self._cantor

    def beta(self, r):
        a, _ = self._cantor.support
        return self.lam * (np.asarray(self._cantor(r)) - self._cantor(a))

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        b = self.beta(r)
        out = np.zeros(r.shape + (self.n,))
        i, j = self.plane
        out[..., i] = np.cos(b)
        out[..., j] = np.sin(b)
        return out

    def derivative(self, r):
        r = np.asarray(r, dtype=float)
        return np.zeros(r.shape + (self.n,))

    def breakpoints(self):
        return np.array(self._cantor.support)

    def angle(self, r):
        if self.plane != (0, 1):
            raise ValueError("planar angle needs the (x1, x2) plane")
        return self.beta(r)

    def angle_derivative(self, r):
        return np.zeros_like(np.asarray(r, dtype=float))

    def cantor_coupling(self, r):
        return self._cantor, np.full(np.shape(r), self.lam)

    def step(self, level):
        radii, rises = self._cantor.step_points(level)
        angles = self.lam * np.concatenate([[0.0], np.cumsum(rises)])
        rots = [planar_rotation(self.n, g, self.plane) for g in angles]
        return PiecewiseRotation(ConstantDirection(self.n), radii, rots)

    def to_dict(self):
        return {
            "kind": "cantor_flow",
            "n": self.n,
            "lambda": self.lam,
            "cantor": self._cantor.to_dict(),
            "plane": list(self.plane),
        }


class FourierRandom(DirectionField):
    """Smooth seeded direction field.

    ``theta(r) = sum_k a_k sin(k pi t)`` with ``t`` the normalized radius.
    For n = 2 ``d = R_theta e1``; for n = 3 a second process ``psi`` tilts
    out of the plane: ``d = R_{13}(psi) R_{12}(theta) e1``.
    """

    kind = "fourier_random"

    def __init__(self, n: int, window: tuple[float, float], coeffs: np.ndarray, seed: int | None = None):
        self.n = check_dimension(n)
        if self.n not in (2, 3):
            raise ValueError("fourier_random is implemented for n in {2, 3}")
        if hasattr(window, "lo"):
            window = (window.lo, window.hi)
        self.window = (float(window[0]), float(window[1]))
        self.coeffs = np.atleast_2d(np.asarray(coeffs, dtype=float))
        if self.coeffs.shape[0] != self.n - 1:
            raise ValueError(f"need {self.n - 1} coefficient rows")
        self.seed = seed

    @classmethod
    def random(cls, n: int, window, modes: int = 4, amplitude: float = 0.5, seed: int = 0):
        rng = np.random.default_rng(seed)
        k = np.arange(1, modes + 1)
        coeffs = rng.normal(size=(n - 1, modes)) * amplitude / k
        return cls(n, window, coeffs, seed)

    def _angles(self, r, deriv=False):
        r = np.asarray(r, dtype=float)
        a, b = self.window
        t = (r - a) / (b - a)
        k = np.arange(1, self.coeffs.shape[1] + 1)
        arg = np.pi * t[..., None] * k
        if deriv:
            return (np.cos(arg) * (k * np.pi / (b - a))) @ self.coeffs.T
        return np.sin(arg) @ self.coeffs.T

    def __call__(self, r):
        ang = self._angles(r)
        th = ang[..., 0]
        if self.n == 2:
            return np.stack([np.cos(th), np.sin(th)], axis=-1)
        ps = ang[..., 1]
        return np.stack([np.cos(ps) * np.cos(th), np.sin(th), np.sin(ps) * np.cos(th)], axis=-1)

    def derivative(self, r):
        ang = self._angles(r)
        dang = self._angles(r, deriv=True)
        th, dth = ang[..., 0], dang[..., 0]
        if self.n == 2:
            return np.stack([-np.sin(th) * dth, np.cos(th) * dth], axis=-1)
        ps, dps = ang[..., 1], dang[..., 1]
        return np.stack(
            [
                -np.sin(ps) * dps * np.cos(th) - np.cos(ps) * np.sin(th) * dth,
                np.cos(th) * dth,
                np.cos(ps) * dps * np.cos(th) - np.sin(ps) * np.sin(th) * dth,
            ],
            axis=-1,
        )

    def angle(self, r):
        if self.n != 2:
            raise ValueError("planar angle is defined for n = 2")
        return self._angles(r)[..., 0]

    def angle_derivative(self, r):
        return self._angles(r, deriv=True)[..., 0]

    def to_dict(self):
        return {"kind": "fourier_random", "n": self.n, "window": list(self.window), "coeffs": self.coeffs.tolist()}


class PiecewiseRotation(DirectionField):
    """``d(r) = Q_k base(r)`` on the k-th piece cut by ``breaks``.

    The radius ``breaks[k]`` belongs to the inner piece ``k``, matching the
    open inner ball used when gluing.
    """

    kind = "piecewise_rotation"

    def __init__(self, base: DirectionField, breaks: Sequence[float], rotations: Sequence[np.ndarray]):
        self.base = base
        self.n = base.n
        self.breaks = np.asarray(breaks, dtype=float)
        if np.any(np.diff(self.breaks) <= 0):
            raise ValueError("break radii must be strictly increasing")
        if len(rotations) != len(self.breaks) + 1:
            raise ValueError("need one rotation per piece")
        self.rotations = [_check_orthogonal(q, self.n) for q in rotations]
        self._stack = np.stack(self.rotations)

    def _piece(self, r, right=False):
        r = np.asarray(r, dtype=float)
        side = "right" if right else "left"
        return np.searchsorted(self.breaks, r, side=side)

    def __call__(self, r):
        k = self._piece(r)
        return np.einsum("...ij,...j->...i", self._stack[k], self.base(r))

    def right(self, r):
        k = self._piece(r, right=True)
        return np.einsum("...ij,...j->...i", self._stack[k], self.base.right(r))

    def derivative(self, r):
        k = self._piece(r)
        return np.einsum("...ij,...j->...i", self._stack[k], self.base.derivative(r))

    def jump_radii(self):
        keep = [
            b for b, q0, q1 in zip(self.breaks, self.rotations[:-1], self.rotations[1:]) if not np.allclose(q0, q1)
        ]
        return np.unique(np.concatenate([np.asarray(keep, dtype=float), self.base.jump_radii()]))

    def breakpoints(self):
        return np.unique(np.concatenate([self.breaks, self.base.breakpoints()]))

    def _angle_params(self, k):
        phis = np.array([_planar_angle_of(q)[0] for q in self.rotations])
        signs = np.array([_planar_angle_of(q)[1] for q in self.rotations])
        return phis[k], signs[k]

    def angle(self, r):
        if self.n != 2:
            raise ValueError("planar angle is defined for n = 2")
        phi, s = self._angle_params(self._piece(r))
        return phi + s * self.base.angle(r)

    def angle_right(self, r):
        phi, s = self._angle_params(self._piece(r, right=True))
        return phi + s * self.base.angle_right(r)

    def angle_derivative(self, r):
        _, s = self._angle_params(self._piece(r))
        return s * self.base.angle_derivative(r)

    @property
    def cantor(self):
        return self.base.cantor

    def cantor_coupling(self, r):
        comp, kappa = self.base.cantor_coupling(r)
        if comp is None:
            return None, kappa
        _, s = self._angle_params(self._piece(r))
        return comp, s * kappa

    def step(self, level):
        base = self.base.step(level)
        if base is self.base:
            return self
        if isinstance(base, PiecewiseRotation) and isinstance(base.base, ConstantDirection):
            # compose outer pieces with the base step pieces
            radii = np.unique(np.concatenate([self.breaks, base.breaks]))
            mids = np.concatenate([[radii[0] - 1.0], 0.5 * (radii[:-1] + radii[1:]), [radii[-1] + 1.0]])
            rots = [
                self._stack[self._piece(m)] @ base._stack[base._piece(m)] @ base.base.rotation for m in mids
            ]
            return PiecewiseRotation(ConstantDirection(self.n), radii, rots)
        raise NotImplementedError("step of this nested direction field")

    def to_dict(self):
        return {
            "kind": "piecewise_rotation",
            "n": self.n,
            "base": self.base.to_dict(),
            "breaks": self.breaks.tolist(),
            "rotations": [q.tolist() for q in self.rotations],
        }


def direction_from_dict(d: dict, profile: Profile | None = None) -> DirectionField:
    kind = d["kind"]
    n = int(d.get("n", profile.n if profile is not None else 2))
    if kind == "constant":
        rot = d.get("rotation")
        if rot is None and "angle" in d:
            rot = planar_rotation(n, float(d["angle"]))
        return ConstantDirection(n, None if rot is None else np.asarray(rot))
    if kind == "cantor_flow":
        if "cantor" in d:
            from .profile import _coerce_cantor

            comp = _coerce_cantor(d["cantor"])
        else:
            if profile is None or profile.alpha.cantor is None:
                raise ValueError("cantor_flow needs a profile with a Cantor component")
            comp = profile.alpha.cantor
        lam = float(d.get("lambda", d.get("lam", 0.5)))
        return CantorFlow(n, lam, comp, tuple(d.get("plane", (0, 1))))
    if kind == "fourier_random":
        if "coeffs" in d:
            return FourierRandom(n, tuple(d["window"]), np.asarray(d["coeffs"]))
        window = tuple(d.get("window", (profile.grid.r_min, profile.grid.r_max)))
        return FourierRandom.random(n, window, int(d.get("modes", 4)), float(d.get("amplitude", 0.5)), int(d.get("seed", 0)))
    if kind == "piecewise_rotation":
        base = direction_from_dict(d["base"], profile) if "base" in d else ConstantDirection(n)
        return PiecewiseRotation(base, d["breaks"], [np.asarray(q) for q in d["rotations"]])
    raise ValueError(f"unknown direction field kind {kind!r}")


# ---------------------------------------------------------------------------
# sets
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class CapFieldSet:
    """Slices ``B_{alpha(r)}(r d(r))``; spherically v-distributed by construction."""

    profile: Profile
    direction: DirectionField

    def __post_init__(self):
        if self.direction.n != self.profile.n:
            raise ValueError("direction field and profile dimensions differ")

    @property
    def n(self) -> int:
        return self.profile.n

    def contains(self, x) -> np.ndarray:
        """Membership of points (..., n); slices are open caps."""
        x = np.asarray(x, dtype=float)
        r = np.linalg.norm(x, axis=-1)
        g = self.profile.grid
        origin = (r == 0) & (g.r_min == 0)
        inside = ((r > g.r_min) | origin) & (r < g.r_max)
        rr = np.where(inside & ~origin, r, 0.5 * (g.r_min + g.r_max))
        rr = np.where(origin, min(1e-12, 0.5 * g.r_max), rr)
        alpha = self.profile.alpha(rr)
        d = self.direction(rr)
        with np.errstate(invalid="ignore", divide="ignore"):
            cosang = np.sum(x * d, axis=-1) / np.where(r > 0, r, 1.0)
        dist = np.where(origin, 0.0, np.arccos(np.clip(cosang, -1.0, 1.0)))
        # a full cap also holds the antipode, and the origin follows its nearest shell
        return inside & ((dist < alpha) | (alpha >= np.pi))

    def volume(self) -> float:
        """Lebesgue measure, from the profile (direction-independent)."""
        from scipy import integrate

        g = self.profile.grid
        pts = np.unique(np.concatenate([g.nodes, self.profile.alpha.jump_radii]))
        x, w = np.polynomial.legendre.leggauss(8)
        a, b = pts[:-1], pts[1:]
        rr = 0.5 * (b - a)[:, None] * x + 0.5 * (a + b)[:, None]
        return float(np.sum(self.profile.v_at(rr) * w * 0.5 * (b - a)[:, None]))

    def to_dict(self) -> dict:
        from .io import profile_to_dict

        return {"profile": profile_to_dict(self.profile), "direction": self.direction.to_dict()}


@dataclass(frozen=True, eq=False)
class MultiArcSet:
    """Planar set whose slices are unions of disjoint arcs (n = 2 only).

    Each component is a cap-field set; the caller guarantees that the
    components' slices are pairwise disjoint at every radius.
    """

    components: tuple[CapFieldSet, ...]

    def __post_init__(self):
        if not self.components or any(c.n != 2 for c in self.components):
            raise ValueError("MultiArcSet needs at least one n = 2 component")
        g0 = self.components[0].profile.grid
        if any(c.profile.grid != g0 for c in self.components):
            raise ValueError("components must share a radial grid")

    n = 2

    def contains(self, x):
        out = np.zeros(np.shape(x)[:-1], dtype=bool)
        for c in self.components:
            out |= c.contains(x)
        return out

    def total_profile(self) -> Profile:
        """Profile of the summed slice measures (alpha adds for n = 2)."""
        g = self.components[0].profile.grid
        ac = sum(c.profile.alpha.ac_values for c in self.components)
        sizes: dict[float, float] = {}
        for c in self.components:
            if c.profile.alpha.cantor is not None:
                raise ValueError("MultiArcSet components must not carry Cantor parts")
            for j in c.profile.alpha.jumps:
                sizes[j.r] = sizes.get(j.r, 0.0) + j.size
        from .profile import jumps_from_sizes

        interp = self.components[0].profile.alpha.interp
        jumps = jumps_from_sizes(g, ac, sorted(sizes.items()), None, interp)
        return make_profile(2, g, ac, jumps, None, interp)


@dataclass(frozen=True, eq=False)
class VoxelSet:
    """Origin-centred raster; cell ``i`` along each axis is centred at ``(i - (N-1)/2) h``."""

    occupancy: np.ndarray
    h: float

    def __post_init__(self):
        occ = np.asarray(self.occupancy, dtype=bool)
        if occ.ndim not in (2, 3):
            raise ValueError("voxel sets are implemented for n in {2, 3}")
        if not self.h > 0:
            raise ValueError("voxel spacing h must be positive")
        object.__setattr__(self, "occupancy", occ)

    @property
    def n(self) -> int:
        return self.occupancy.ndim

    @property
    def shape(self):
        return self.occupancy.shape

    def axis_coords(self, axis: int) -> np.ndarray:
        m = self.occupancy.shape[axis]
        return (np.arange(m) - 0.5 * (m - 1)) * self.h

    @property
    def extent(self) -> float:
        """Radius of the largest origin-centred ball inside the raster."""
        return 0.5 * (min(self.occupancy.shape) - 1) * self.h

    def volume(self) -> float:
        return float(self.occupancy.sum()) * self.h**self.n

    def lookup(self, x) -> np.ndarray:
        """Occupancy of the cell containing each point (False outside)."""
        x = np.asarray(x, dtype=float)
        shape = np.array(self.occupancy.shape)
        idx = np.rint(x / self.h + 0.5 * (shape - 1)).astype(np.int64)
        ok = np.all((idx >= 0) & (idx < shape), axis=-1)
        idx = np.clip(idx, 0, shape - 1)
        vals = self.occupancy[tuple(idx[..., k] for k in range(self.n))]
        return vals & ok

    def symmetric_difference_volume(self, other: "VoxelSet") -> float:
        if other.shape != self.shape or not math.isclose(other.h, self.h):
            raise ValueError("voxel sets must share a raster")
        return float(np.count_nonzero(self.occupancy ^ other.occupancy)) * self.h**self.n


def symmetral_from_profile(p: Profile) -> CapFieldSet:
    """``F_v``: the cap-field set with direction ``e1``."""
    return CapFieldSet(p, ConstantDirection(p.n))


def glue(inner: CapFieldSet, outer: CapFieldSet, r_bar: float, rotation: np.ndarray) -> CapFieldSet:
    """``inner`` on the open ball ``B(r_bar)``, ``rotation`` applied to ``outer`` outside.

    Both sets must carry the same profile (the profile is shared, only the
    direction field is cut and rotated).
    """
    g = inner.profile.grid
    if not g.r_min < r_bar < g.r_max:
        raise ValueError(f"r_bar={r_bar} must lie inside the window ({g.r_min}, {g.r_max})")
    if outer.profile is not inner.profile:
        a = inner.profile.alpha
        b = outer.profile.alpha
        if a.grid != b.grid or not np.array_equal(a.values, b.values):
            raise ValueError("glued sets must share their profile")
    q = _check_orthogonal(rotation, inner.n)

    if _same_field(inner.direction, outer.direction):
        base = inner.direction
        return CapFieldSet(inner.profile, PiecewiseRotation(base, [r_bar], [np.eye(inner.n), q]))
    raise NotImplementedError("gluing two different direction fields")


def _same_field(a: DirectionField, b: DirectionField) -> bool:
    if a is b:
        return True
    return a.to_dict() == b.to_dict()


def rotate(E: CapFieldSet, q: np.ndarray) -> CapFieldSet:
    """Image of ``E`` under the orthogonal map ``q``."""
    q = _check_orthogonal(q, E.n)
    return CapFieldSet(E.profile, PiecewiseRotation(E.direction, [], [q]))


# ---------------------------------------------------------------------------
# rasters
# ---------------------------------------------------------------------------


def raster_shape(r_max: float, h: float) -> int:
    """Cells per axis for an origin-centred raster covering ``B(r_max)`` with one spare cell."""
    return 2 * int(math.ceil(r_max / h)) + 3


def rasterize(s, h: float, size: int | None = None) -> VoxelSet:
    """Centre-point membership raster of a cap-field or multi-arc set."""
    if not h > 0:
        raise ValueError("voxel spacing h must be positive")
    n = s.n
    if n not in (2, 3):
        raise ValueError("rasterize supports n in {2, 3}")
    grid = s.components[0].profile.grid if isinstance(s, MultiArcSet) else s.profile.grid
    m = raster_shape(grid.r_max, h) if size is None else int(size)
    c = (np.arange(m) - 0.5 * (m - 1)) * h
    if n == 2:
        x, y = np.meshgrid(c, c, indexing="ij")
        occ = s.contains(np.stack([x, y], axis=-1))
    else:
        occ = np.zeros((m, m, m), dtype=bool)
        y, z = np.meshgrid(c, c, indexing="ij")
        for i, xv in enumerate(c):
            pts = np.stack([np.full_like(y, xv), y, z], axis=-1)
            occ[i] = s.contains(pts)
    return VoxelSet(occ, h)


def shell_directions(n: int, m: int, seed: int | None = None) -> np.ndarray:
    """Stratified unit directions: equispaced angles (n = 2) or a Fibonacci lattice (n = 3).

    A seed applies a random rotation/offset so repeated calls are independent
    strata; ``None`` gives the canonical lattice.
    """
    if n == 2:
        off = 0.5 if seed is None else np.random.default_rng(seed).uniform()
        phi = 2 * np.pi * (np.arange(m) + off) / m
        return np.stack([np.cos(phi), np.sin(phi)], axis=-1)
    if n == 3:
        k = np.arange(m) + 0.5
        z = 1 - 2 * k / m
        phi = np.pi * (1 + 5**0.5) * k
        s = np.sqrt(1 - z * z)
        pts = np.stack([s * np.cos(phi), s * np.sin(phi), z], axis=-1)
        if seed is not None:
            from scipy.spatial.transform import Rotation

            pts = pts @ Rotation.random(random_state=seed).as_matrix().T
        return pts
    raise ValueError("shell sampling is implemented for n in {2, 3}")


def slice_measure(V: VoxelSet, r: float, m: int = 4096, seed: int | None = None) -> float:
    """Estimated ``H^{n-1}(E cap dB(r))`` from ``m`` stratified shell samples."""
    if r <= 0:
        return 0.0
    dirs = shell_directions(V.n, m, seed)
    frac = float(np.mean(V.lookup(r * dirs)))
    return frac * sphere_area(V.n, r)


def slice_center(V: VoxelSet, r: float, m: int = 4096, seed: int | None = None) -> np.ndarray:
    """Normalized mean of occupied shell directions; ``e1`` when empty or balanced."""
    dirs = shell_directions(V.n, m, seed)
    occ = V.lookup(r * dirs)
    e1 = _e1(V.n)
    if not occ.any():
        return e1
    mean = dirs[occ].sum(axis=0) / m
    nrm = np.linalg.norm(mean)
    return e1 if nrm < 1e-9 else mean / nrm
