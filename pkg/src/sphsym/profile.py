"""Distribution profiles on a radial window.

A profile stores the cap angle ``alpha(r)`` as an explicit BV
decomposition ``alpha = ac + jumps + cantor`` and derives the normalized
slice measure ``xi = cap_area(n, 1, alpha)`` and the slice measure
``v = r^(n-1) xi`` from it. Outside the window the profile is zero.

Representative convention: at a jump radius the stored value is the left
limit. Nothing downstream depends on that choice.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Iterable, Sequence

import numpy as np
from scipy import interpolate

from .sphere_geometry import (
    cap_area,
    check_dimension,
    omega,
    sin_power_integral,
    sphere_area,
)

# level of the Cantor construction used as quadrature atoms
ATOM_LEVEL = 14
_VALUE_TOL = 1e-9


# ---------------------------------------------------------------------------
# grids and intervals
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RadialGrid:
    """Uniform nodes ``r_min = r_0 < ... < r_{count-1} = r_max``.

    ``r_min = 0`` is allowed so that balls centred at the origin have no
    inner boundary.
    """

    r_min: float
    r_max: float
    count: int

    def __post_init__(self):
        if not (math.isfinite(self.r_min) and math.isfinite(self.r_max)):
            raise ValueError("grid bounds must be finite")
        if self.r_min < 0 or self.r_max <= self.r_min:
            raise ValueError(f"need 0 <= r_min < r_max, got ({self.r_min}, {self.r_max})")
        if int(self.count) != self.count or self.count < 2:
            raise ValueError(f"grid count must be an integer >= 2, got {self.count}")

    @cached_property
    def nodes(self) -> np.ndarray:
        return np.linspace(self.r_min, self.r_max, int(self.count))

    @property
    def h(self) -> float:
        return (self.r_max - self.r_min) / (self.count - 1)

    def contains(self, r, tol=1e-12) -> bool:
        r = np.asarray(r)
        return bool(np.all((r >= self.r_min - tol) & (r <= self.r_max + tol)))


@dataclass(frozen=True)
class Interval:
    """A real interval with explicit closedness at each end."""

    lo: float
    hi: float
    left_closed: bool = True
    right_closed: bool = True

    def __post_init__(self):
        if self.hi < self.lo:
            raise ValueError(f"empty interval ({self.lo}, {self.hi})")

    def contains(self, r):
        r = np.asarray(r, dtype=float)
        left = r >= self.lo if self.left_closed else r > self.lo
        right = r <= self.hi if self.right_closed else r < self.hi
        return left & right

    @classmethod
    def coerce(cls, obj, default: "Interval | None" = None) -> "Interval":
        if obj is None:
            if default is None:
                raise ValueError("an interval is required")
            return default
        if isinstance(obj, Interval):
            return obj
        lo, hi = obj
        return cls(float(lo), float(hi))


# ---------------------------------------------------------------------------
# Cantor staircase
# ---------------------------------------------------------------------------


def cantor_function(t):
    """The ternary Cantor function on [0, 1], clipped outside."""
    t = np.clip(np.asarray(t, dtype=float), 0.0, 1.0)
    out = np.zeros_like(t)
    x = t.copy()
    active = t < 1.0
    out = np.where(t >= 1.0, 1.0, out)
    weight = 0.5
    for _ in range(40):
        if not np.any(active):
            break
        x = x * 3.0
        d = np.floor(x)
        x = x - d
        hit_middle = active & (d == 1.0)
        out = np.where(hit_middle, out + weight, out)
        out = np.where(active & (d == 2.0), out + weight, out)
        active = active & ~hit_middle
        weight *= 0.5
    return out


@dataclass(frozen=True)
class CantorComponent:
    """``scale * C((r - a) / (b - a))`` with ``C`` the ternary Cantor function.

    The function is continuous, monotone, and has derivative zero almost
    everywhere, so its whole variation ``|scale|`` is Cantor-type. ``depth``
    is the default construction level for pure-jump step approximants.
    """

    support: tuple[float, float]
    scale: float
    depth: int = 8
    kind: str = "ternary_staircase"

    def __post_init__(self):
        a, b = self.support
        if not b > a:
            raise ValueError("Cantor support must satisfy a < b")
        if self.kind != "ternary_staircase":
            raise ValueError(f"unsupported Cantor kind {self.kind!r}")
        if int(self.depth) != self.depth or self.depth < 0:
            raise ValueError("depth must be a non-negative integer")
        object.__setattr__(self, "support", (float(a), float(b)))

    @property
    def length(self) -> float:
        return self.support[1] - self.support[0]

    def __call__(self, r):
        a, _ = self.support
        out = self.scale * cantor_function((np.asarray(r, dtype=float) - a) / self.length)
        return float(out) if np.ndim(out) == 0 else out

    def level_intervals(self, level: int):
        """Start points and common width of the 2^level intervals kept at ``level``."""
        starts = np.zeros(1)
        width = 1.0
        for _ in range(level):
            width /= 3.0
            starts = np.concatenate([starts, starts + 2.0 * width])
            starts.sort()
        a, _ = self.support
        return a + starts * self.length, width * self.length

    def gaps(self, level: int):
        """Removed middle thirds up to ``level`` as an (m, 2) array."""
        out = []
        for k in range(level):
            s, w = self.level_intervals(k)
            out.append(np.stack([s + w / 3.0, s + 2.0 * w / 3.0], axis=1))
        if not out:
            return np.zeros((0, 2))
        g = np.concatenate(out)
        return g[np.argsort(g[:, 0])]

    def variation(self, lo: float, hi: float) -> float:
        """Total variation on [lo, hi] (continuous, so closedness is irrelevant)."""
        if hi <= lo:
            return 0.0
        return abs(self(hi) - self(lo))

    def integrate(self, g: Callable, lo: float | None = None, hi: float | None = None) -> float:
        """Integral of ``g`` against the variation measure |D^c| on [lo, hi].

        Uses midpoints of level-``ATOM_LEVEL`` intervals, which is exact to
        second order because the Cantor measure is symmetric inside every
        construction interval. Intervals cut by ``lo`` or ``hi`` are refined
        further.
        """
        a, b = self.support
        lo = a if lo is None else max(lo, a)
        hi = b if hi is None else min(hi, b)
        if hi <= lo:
            return 0.0
        starts, width = self.level_intervals(ATOM_LEVEL)
        mass = abs(self.scale) / 2.0**ATOM_LEVEL
        ends = starts + width
        inside = (starts >= lo) & (ends <= hi)
        total = float(np.sum(g(starts[inside] + 0.5 * width))) * mass
        cut = ~inside & (ends > lo) & (starts < hi)
        for s in starts[cut]:
            total += self._integrate_partial(g, s, width, mass, lo, hi)
        return total

    def _integrate_partial(self, g, s, width, mass, lo, hi, depth=0):
        e = s + width
        if e <= lo or s >= hi:
            return 0.0
        if (s >= lo and e <= hi) or depth > 30:
            frac = 1.0
            if depth > 30:
                frac = min(1.0, max(0.0, (min(e, hi) - max(s, lo)) / width))
            return float(g(np.array([s + 0.5 * width]))[0]) * mass * frac
        w3 = width / 3.0
        return self._integrate_partial(g, s, w3, mass / 2, lo, hi, depth + 1) + self._integrate_partial(
            g, s + 2 * w3, w3, mass / 2, lo, hi, depth + 1
        )

    def step_points(self, level: int):
        """Jump radii and exact dyadic rises of the level-``level`` step approximant.

        The approximant equals the staircase at the partition points
        ``a, t_0, s_1, t_1, ...`` (left/right ends of the kept intervals) and
        is constant in between; it jumps by ``scale / 2^level`` at the right
        end ``t_j`` of every kept interval.
        """
        starts, width = self.level_intervals(level)
        radii = starts + width
        radii[-1] = self.support[1]
        rises = np.full(radii.shape, self.scale / 2.0**level)
        return radii, rises

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "depth": int(self.depth),
            "support": [self.support[0], self.support[1]],
            "scale": self.scale,
        }


# ---------------------------------------------------------------------------
# BV decomposition
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Jump:
    r: float
    left: float
    right: float

    @property
    def size(self) -> float:
        return self.right - self.left


def _make_ppoly(nodes, values, interp):
    if interp == "cubic":
        return interpolate.CubicSpline(nodes, values)
    if interp == "pchip":
        return interpolate.PchipInterpolator(nodes, values)
    if interp == "linear":
        return interpolate.PPoly.from_spline(interpolate.make_interp_spline(nodes, values, k=1))
    raise ValueError(f"unknown interpolation {interp!r}")


class BVDecomposition:
    """``f = f_ac + f_jump + f_cantor`` on a radial window.

    ``ac_values`` are node samples of the absolutely continuous part,
    interpolated with ``interp`` ("cubic", "pchip" or "linear"). Jumps are
    given by their radius and the one-sided limits of the *whole* function.
    """

    def __init__(
        self,
        grid: RadialGrid,
        ac_values,
        jumps: Iterable[Jump] = (),
        cantor: CantorComponent | None = None,
        interp: str = "cubic",
    ):
        self.grid = grid
        self.ac_values = np.array(ac_values, dtype=float)
        if self.ac_values.shape != (grid.count,):
            raise ValueError(f"expected {grid.count} AC samples, got {self.ac_values.shape}")
        if not np.all(np.isfinite(self.ac_values)):
            raise ValueError("AC samples must be finite")
        self.interp = interp
        self._ac = _make_ppoly(grid.nodes, self.ac_values, interp)
        self._dac = self._ac.derivative()
        if cantor is not None:
            a, b = cantor.support
            if a < grid.r_min - 1e-12 or b > grid.r_max + 1e-12:
                raise ValueError("Cantor support must lie inside the window")
        self.cantor = cantor
        js = sorted(jumps, key=lambda j: j.r)
        for j in js:
            if not grid.r_min < j.r < grid.r_max:
                raise ValueError(f"jump at r={j.r} is not interior to the window")
        if len({j.r for j in js}) != len(js):
            raise ValueError("at most one jump per radius")
        self._jump_r = np.array([j.r for j in js], dtype=float)
        self._jump_d = np.array([j.size for j in js], dtype=float)
        self.jumps = tuple(js)
        for j in js:
            left = float(self.left_limit(j.r))
            if abs(left - j.left) > _VALUE_TOL * max(1.0, abs(left)):
                raise ValueError(
                    f"jump at r={j.r}: declared left value {j.left} but the decomposition gives {left}"
                )

    # -- evaluation ---------------------------------------------------------

    def ac(self, r):
        return self._ac(np.asarray(r, dtype=float))

    def ac_derivative(self, r):
        return self._dac(np.asarray(r, dtype=float))

    def jump_part(self, r, inclusive: bool = False):
        r = np.asarray(r, dtype=float)
        if self._jump_r.size == 0:
            return np.zeros_like(r)
        if inclusive:
            mask = self._jump_r[None, :] <= r.reshape(-1, 1)
        else:
            mask = self._jump_r[None, :] < r.reshape(-1, 1)
        return (mask * self._jump_d[None, :]).sum(axis=1).reshape(r.shape)

    def cantor_part(self, r):
        r = np.asarray(r, dtype=float)
        if self.cantor is None:
            return np.zeros_like(r)
        return np.asarray(self.cantor(r))

    def left_limit(self, r):
        return self.ac(r) + self.jump_part(r, inclusive=False) + self.cantor_part(r)

    def right_limit(self, r):
        return self.ac(r) + self.jump_part(r, inclusive=True) + self.cantor_part(r)

    def __call__(self, r):
        return self.left_limit(r)

    @property
    def values(self) -> np.ndarray:
        return self(self.grid.nodes)

    @property
    def jump_radii(self) -> np.ndarray:
        return self._jump_r.copy()

    @property
    def has_singular_part(self) -> bool:
        has_jump = bool(np.any(self._jump_d != 0.0))
        has_cantor = self.cantor is not None and self.cantor.scale != 0.0
        return has_jump or has_cantor

    # -- variation ------------------------------------------------------------

    def ac_variation(self, lo: float, hi: float) -> float:
        if hi <= lo:
            return 0.0
        nodes = self.grid.nodes
        roots = self._dac.roots(discontinuity=False, extrapolate=False)
        roots = roots[np.isfinite(roots)]
        pts = np.concatenate([[lo, hi], nodes, roots])
        pts = np.unique(pts[(pts >= lo) & (pts <= hi)])
        return float(np.sum(np.abs(np.diff(self.ac(pts)))))

    def jumps_in(self, interval: Interval) -> list[Jump]:
        return [j for j in self.jumps if interval.contains(j.r)]

    def jump_variation(self, interval: Interval) -> float:
        return float(sum(abs(j.size) for j in self.jumps_in(interval)))

    def cantor_variation(self, interval: Interval) -> float:
        if self.cantor is None:
            return 0.0
        return self.cantor.variation(interval.lo, interval.hi)

    def total_variation(self, interval=None) -> float:
        iv = Interval.coerce(interval, Interval(self.grid.r_min, self.grid.r_max))
        return self.ac_variation(iv.lo, iv.hi) + self.jump_variation(iv) + self.cantor_variation(iv)

    def singular_integral(self, g: Callable, interval=None) -> float:
        """Integral of ``g`` against |D^s f| (jumps plus Cantor part)."""
        iv = Interval.coerce(interval, Interval(self.grid.r_min, self.grid.r_max))
        total = 0.0
        for j in self.jumps_in(iv):
            total += float(g(np.array([j.r]))[0]) * abs(j.size)
        if self.cantor is not None and self.cantor.scale != 0.0:
            total += self.cantor.integrate(g, iv.lo, iv.hi)
        return total

    def breakpoints(self, cantor_level: int = 10) -> np.ndarray:
        """Radii where the AC integrand may lose smoothness."""
        pts = [self.grid.nodes, self._jump_r]
        if self.cantor is not None:
            pts.append(self.cantor.gaps(cantor_level).ravel())
            pts.append(np.array(self.cantor.support))
        out = np.unique(np.concatenate(pts))
        return out[(out >= self.grid.r_min) & (out <= self.grid.r_max)]

    def is_purely_ac(self, interval=None) -> bool:
        """True when neither jumps nor Cantor mass meet the open interval."""
        iv = Interval.coerce(interval, Interval(self.grid.r_min, self.grid.r_max))
        open_iv = Interval(iv.lo, iv.hi, False, False)
        if any(j.size != 0.0 for j in self.jumps_in(open_iv)):
            return False
        return self.cantor_variation(open_iv) == 0.0


class ComposedDecomposition:
    """BV decomposition of ``F(f)`` for a smooth increasing ``F``.

    AC parts map by the chain rule, jumps map endpoint-wise and the Cantor
    part becomes ``F'(f) D^c f``.
    """

    def __init__(self, base: BVDecomposition, F: Callable, dF: Callable):
        self.base = base
        self.grid = base.grid
        self.F = F
        self.dF = dF
        self.jumps = tuple(Jump(j.r, float(F(j.left)), float(F(j.right))) for j in base.jumps)

    def __call__(self, r):
        return self.F(self.base(r))

    def left_limit(self, r):
        return self.F(self.base.left_limit(r))

    def right_limit(self, r):
        return self.F(self.base.right_limit(r))

    @property
    def values(self):
        return self(self.grid.nodes)

    def ac_derivative(self, r):
        r = np.asarray(r, dtype=float)
        return self.dF(self.base(r)) * self.base.ac_derivative(r)

    def jumps_in(self, interval: Interval) -> list[Jump]:
        return [j for j in self.jumps if interval.contains(j.r)]

    def _cantor_integral(self, g, interval: Interval) -> float:
        c = self.base.cantor
        if c is None or c.scale == 0.0:
            return 0.0
        return c.integrate(lambda r: g(r) * self.dF(self.base(r)), interval.lo, interval.hi)

    def ac_variation(self, lo: float, hi: float) -> float:
        if hi <= lo:
            return 0.0
        pts = self.base.breakpoints()
        pts = np.unique(np.concatenate([[lo, hi], pts[(pts > lo) & (pts < hi)]]))
        x, w = np.polynomial.legendre.leggauss(8)
        a, b = pts[:-1], pts[1:]
        rr = 0.5 * (b - a)[:, None] * x[None, :] + 0.5 * (a + b)[:, None]
        vals = np.abs(self.ac_derivative(rr))
        return float(np.sum(vals * w[None, :] * 0.5 * (b - a)[:, None]))

    def total_variation(self, interval=None) -> float:
        iv = Interval.coerce(interval, Interval(self.grid.r_min, self.grid.r_max))
        jumps = sum(abs(j.size) for j in self.jumps_in(iv))
        return self.ac_variation(iv.lo, iv.hi) + jumps + self.cantor_variation(iv)

    def cantor_variation(self, interval=None) -> float:
        iv = Interval.coerce(interval, Interval(self.grid.r_min, self.grid.r_max))
        return self._cantor_integral(lambda r: np.ones_like(r), iv)

    def singular_integral(self, g: Callable, interval=None) -> float:
        iv = Interval.coerce(interval, Interval(self.grid.r_min, self.grid.r_max))
        total = 0.0
        for j in self.jumps_in(iv):
            total += float(g(np.array([j.r]))[0]) * abs(j.size)
        return total + self._cantor_integral(g, iv)

    def is_purely_ac(self, interval=None) -> bool:
        return self.base.is_purely_ac(interval)


# ---------------------------------------------------------------------------
# profile
# ---------------------------------------------------------------------------


def cap_area_derivative(n: int, beta):
    """d/dbeta of cap_area(n, 1, beta); equals 2 for n = 2."""
    beta = np.asarray(beta, dtype=float)
    if n == 2:
        return np.full_like(beta, 2.0)
    return (n - 1) * omega(n - 1) * np.sin(np.clip(beta, 0.0, math.pi)) ** (n - 2)


def _cap_map(n):
    def F(a):
        a = np.clip(np.asarray(a, dtype=float), 0.0, math.pi)
        out = cap_area(n, 1.0, a)
        return np.asarray(out)

    return F


@dataclass(frozen=True, eq=False)
class Profile:
    """The triple (v, xi, alpha) of a spherically distributed set on a window."""

    n: int
    grid: RadialGrid
    alpha: BVDecomposition
    xi: ComposedDecomposition = field(init=False, repr=False)

    def __post_init__(self):
        check_dimension(self.n)
        object.__setattr__(
            self, "xi", ComposedDecomposition(self.alpha, _cap_map(self.n), lambda a: cap_area_derivative(self.n, a))
        )

    # convenience evaluators ------------------------------------------------

    def _inside(self, r):
        return (r >= self.grid.r_min) & (r <= self.grid.r_max)

    def alpha_at(self, r):
        """alpha with the zero extension outside the window."""
        r = np.asarray(r, dtype=float)
        return np.where(self._inside(r), self.alpha(r), 0.0)

    def xi_at(self, r):
        r = np.asarray(r, dtype=float)
        return np.where(self._inside(r), self.xi(r), 0.0)

    def v_at(self, r):
        r = np.asarray(r, dtype=float)
        return r ** (self.n - 1) * self.xi_at(r)

    @property
    def alpha_nodes(self) -> np.ndarray:
        return self.alpha.values

    @property
    def xi_nodes(self) -> np.ndarray:
        return self.xi.values

    @property
    def v_nodes(self) -> np.ndarray:
        return self.v_at(self.grid.nodes)

    @property
    def window(self) -> Interval:
        return Interval(self.grid.r_min, self.grid.r_max)

    def with_alpha(self, alpha: BVDecomposition) -> "Profile":
        return Profile(self.n, alpha.grid, alpha)


def _validate_alpha_range(dec: BVDecomposition):
    nodes = dec.grid.nodes
    fine = np.linspace(nodes[0], nodes[-1], 8 * (len(nodes) - 1) + 1)
    pts = np.concatenate([fine, dec.jump_radii])
    samples = [dec.left_limit(pts), dec.right_limit(pts)]
    if dec.cantor is not None:
        a, b = dec.cantor.support
        cs = np.linspace(a, b, 257)
        samples += [dec.left_limit(cs), dec.right_limit(cs)]
    vals = np.concatenate([np.ravel(s) for s in samples])
    lo, hi = float(vals.min()), float(vals.max())
    if lo < -1e-12 or hi > math.pi + 1e-12:
        raise ValueError(
            f"alpha leaves [0, pi] (range [{lo:.6g}, {hi:.6g}]); the profile would not be admissible"
        )


def _coerce_jump(obj, dec_partial: BVDecomposition | None = None) -> Jump:
    if isinstance(obj, Jump):
        return obj
    if isinstance(obj, dict):
        return Jump(float(obj["r"]), float(obj["left"]), float(obj["right"]))
    r, left, right = obj
    return Jump(float(r), float(left), float(right))


def _coerce_cantor(obj) -> CantorComponent | None:
    if obj is None or isinstance(obj, CantorComponent):
        return obj
    return CantorComponent(
        support=tuple(obj["support"]),
        scale=float(obj["scale"]),
        depth=int(obj.get("depth", 8)),
        kind=obj.get("kind", "ternary_staircase"),
    )


def make_profile(
    n: int,
    grid: RadialGrid,
    ac_samples,
    jumps: Sequence = (),
    cantor=None,
    interp: str = "cubic",
) -> Profile:
    """Build a profile from the BV decomposition of ``alpha``.

    Parameters
    ----------
    n : int
        Ambient dimension.
    grid : RadialGrid
        Radial window and nodes.
    ac_samples : array_like or callable
        Node samples (or a function of r) for the absolutely continuous part.
    jumps : sequence
        ``Jump`` objects, ``(r, left, right)`` tuples or dicts with those keys;
        ``left``/``right`` are the one-sided limits of alpha itself.
    cantor : CantorComponent or dict, optional
        Cantor staircase component.
    interp : str
        Interpolation of the AC samples.

    Raises
    ------
    ValueError
        If alpha leaves [0, pi] anywhere or the decomposition is inconsistent.
    """
    n = check_dimension(n)
    if callable(ac_samples):
        ac_samples = np.asarray(ac_samples(grid.nodes), dtype=float)
    dec = BVDecomposition(grid, ac_samples, [_coerce_jump(j) for j in jumps], _coerce_cantor(cantor), interp)
    _validate_alpha_range(dec)
    return Profile(n, grid, dec)


def jumps_from_sizes(grid: RadialGrid, ac_samples, sizes: Sequence[tuple[float, float]], cantor=None, interp="cubic"):
    """Jump list with consistent one-sided values from ``(r, size)`` pairs."""
    pairs = sorted((float(r), float(d)) for r, d in sizes)
    if not pairs:
        return []
    radii = np.array([r for r, _ in pairs])
    deltas = np.array([d for _, d in pairs])
    ac = _make_ppoly(grid.nodes, np.asarray(ac_samples, dtype=float), interp)
    before = np.concatenate([[0.0], np.cumsum(deltas)[:-1]])
    left = ac(radii) + before
    c = _coerce_cantor(cantor)
    if c is not None:
        left = left + np.asarray(c(radii))
    return [Jump(r, float(lv), float(lv + d)) for r, lv, d in zip(radii, left, deltas)]


def total_variation(f, interval=None) -> float:
    """|Df|(interval) for a BV decomposition (alpha or xi)."""
    return f.total_variation(interval)


def approx_limits(p: Profile, r: float) -> tuple[float, float]:
    """Approximate lower and upper limits of alpha at ``r``.

    For the piecewise representation these are the min and max of the two
    one-sided limits; at the window ends the inner one-sided limit is used.
    """
    g = p.grid
    if not g.contains(r):
        raise ValueError(f"r={r} is outside the window")
    left = float(p.alpha.left_limit(r))
    right = float(p.alpha.right_limit(r))
    if r <= g.r_min:
        left = right
    elif r >= g.r_max:
        right = left
    return min(left, right), max(left, right)


def rescaled_derivative(p: Profile, r):
    """``r^(n-1) xi'(r)`` from the absolutely continuous part only."""
    r = np.asarray(r, dtype=float)
    out = r ** (p.n - 1) * p.xi.ac_derivative(r)
    return float(out) if np.ndim(out) == 0 else out


def detect_jumps(grid: RadialGrid, values, factor: float = 10.0, atol: float = 1e-12) -> list[tuple[float, float]]:
    """Heuristic jump finder for sampled data.

    Flags node pairs whose increment exceeds ``factor * h * median|f'|``
    (or ``atol`` when the median slope vanishes) and returns
    ``(midpoint, increment)`` pairs. Intended for voxel-derived profiles.
    """
    values = np.asarray(values, dtype=float)
    diffs = np.diff(values)
    slope = np.median(np.abs(diffs)) / grid.h
    thresh = max(factor * grid.h * slope, atol)
    idx = np.nonzero(np.abs(diffs) > thresh)[0]
    mids = 0.5 * (grid.nodes[idx] + grid.nodes[idx + 1])
    return [(float(m), float(diffs[i])) for m, i in zip(mids, idx)]


def profile_from_v(n: int, grid: RadialGrid, v_samples, interp: str = "linear") -> Profile:
    """Profile whose alpha interpolates the caps matching sampled slice measures."""
    from .sphere_geometry import alpha_from_xi

    r = grid.nodes
    v = np.asarray(v_samples, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        xi = np.where(r > 0, v / np.maximum(r, 1e-300) ** (n - 1), 0.0)
    xi = np.clip(xi, 0.0, sphere_area(n))
    return make_profile(n, grid, alpha_from_xi(n, xi), interp=interp)


def step_approximant(p: Profile, level: int | None = None) -> Profile:
    """Replace the Cantor component by its pure-jump step approximant.

    The AC part and existing jumps are kept; the staircase is frozen at the
    partition points of the level-``level`` construction and jumps at the
    right end of every kept interval, so that all its variation becomes
    jump variation of the same total size.
    """
    c = p.alpha.cantor
    if c is None:
        raise ValueError("profile has no Cantor component")
    level = c.depth if level is None else level
    radii, rises = c.step_points(level)
    # staircase steps are carried by a jump list; AC samples are shifted by
    # nothing because the step function starts at the staircase value at a
    if c.support[1] >= p.grid.r_max:
        raise ValueError("the Cantor support must end strictly inside the window")
    grid = p.grid
    ac = p.alpha.ac_values
    merged: dict[float, float] = {j.r: j.size for j in p.alpha.jumps}
    for r, d in zip(radii, rises):
        merged[float(r)] = merged.get(float(r), 0.0) + float(d)
    sizes = sorted(merged.items())
    jumps = jumps_from_sizes(grid, ac, sizes, None, p.alpha.interp)
    return make_profile(p.n, grid, ac, jumps, None, p.alpha.interp)
