"""Average direction, barycentre, and the necessary conditions for equality.

For a slice ``E_r`` the barycentre function is
``b_E(r) = r^(1-n) int_{E_r} x/|x| dH^{n-1}`` and the average direction is
``d_E = b_E / (omega_{n-1} sin(alpha)^(n-1))``. For a cap-field set
``b_E = omega_{n-1} sin(alpha)^(n-1) d(r)`` in closed form. On extremals
with ``alpha`` absolutely continuous, ``b_E`` solves
``b_E' = (n-1) alpha' cot(alpha) b_E``, which forces ``d_E`` to be constant.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .profile import Interval
from .sets import CapFieldSet, MultiArcSet, VoxelSet, shell_directions
from .sphere_geometry import alpha_from_xi, omega, sphere_area, sphere_measure

DEGENERATE_SIN = 1e-6


@dataclass
class DirectionTrace:
    r: np.ndarray
    d: np.ndarray  # (m, n)
    b: np.ndarray  # (m, n)
    alpha: np.ndarray
    valid: np.ndarray  # shells with sin(alpha) >= DEGENERATE_SIN
    n: int
    d_derivative: np.ndarray | None = None

    @property
    def excluded(self) -> int:
        return int(np.count_nonzero(~self.valid))

    @property
    def geometric_barycentre(self) -> np.ndarray:
        """``(r / xi) b_E``: the centre of mass of the slice (read-only)."""
        from .sphere_geometry import cap_area

        xi = cap_area(self.n, 1.0, np.clip(self.alpha, 0, math.pi))
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.where((xi > 0)[:, None], (self.r / xi)[:, None] * self.b, 0.0)

    def oscillation(self) -> float:
        """``max_r |d_E(r) - d_E(r_0)|`` over valid shells."""
        d = self.d[self.valid]
        if len(d) == 0:
            return 0.0
        return float(np.max(np.linalg.norm(d - d[0], axis=-1)))


def _shell_radii(E, I, count):
    p = E.profile
    iv = Interval.coerce(I, p.window)
    if count is None:
        r = p.grid.nodes
        return r[iv.contains(r)]
    return np.linspace(iv.lo, iv.hi, count)


def direction_trace(E, I=None, count: int | None = None, m: int = 4096, r=None) -> DirectionTrace:
    """Sample ``d_E`` and ``b_E`` on shells of ``I``.

    Cap-field sets use the closed form; voxel sets use stratified shell means.
    Shells with ``sin(alpha) < 1e-6`` fall back to ``e1`` and are flagged.
    """
    if isinstance(E, VoxelSet):
        return _voxel_trace(E, I, count, m)
    if isinstance(E, MultiArcSet):
        raise ValueError("direction traces need a cap-field or voxel set")
    n = E.n
    rr = _shell_radii(E, I, count) if r is None else np.asarray(r, dtype=float)
    a = np.clip(E.profile.alpha(rr), 0.0, math.pi)
    s = np.sin(a)
    d = E.direction(rr)
    b = omega(n - 1) * (s ** (n - 1))[:, None] * d
    valid = s >= DEGENERATE_SIN
    e1 = np.zeros(n)
    e1[0] = 1.0
    d = np.where(valid[:, None], d, e1)
    return DirectionTrace(rr, d, b, a, valid, n, E.direction.derivative(rr))


def _voxel_trace(V: VoxelSet, I, count, m):
    n = V.n
    if I is None:
        lo, hi = V.h, V.extent
    else:
        lo, hi = Interval.coerce(I).lo, Interval.coerce(I).hi
    count = count or max(2, int((hi - lo) / (0.5 * V.h)))
    rr = np.linspace(lo, hi, count)
    dirs = shell_directions(n, m)
    b = np.zeros((count, n))
    a = np.zeros(count)
    for i, ri in enumerate(rr):
        occ = V.lookup(ri * dirs)
        frac = occ.mean()
        a[i] = alpha_from_xi(n, frac * sphere_area(n))
        b[i] = dirs[occ].sum(axis=0) / m * sphere_area(n)
    s = np.sin(a)
    valid = s >= DEGENERATE_SIN
    with np.errstate(divide="ignore", invalid="ignore"):
        d = b / (omega(n - 1) * s ** (n - 1))[:, None]
    e1 = np.zeros(n)
    e1[0] = 1.0
    d = np.where(valid[:, None], d, e1)
    return DirectionTrace(rr, d, b, a, valid, n)


@dataclass
class OdeReport:
    max_residual: float
    oscillation: float
    excluded: int
    extremal_consistent: bool
    residual: np.ndarray = field(repr=False)
    r: np.ndarray = field(repr=False)

    def to_dict(self):
        return {
            "max_residual": self.max_residual,
            "oscillation": self.oscillation,
            "excluded": self.excluded,
            "extremal_consistent": self.extremal_consistent,
        }


def verify_ode(E: CapFieldSet, I=None, count: int | None = None, tol: float = 1e-5) -> OdeReport:
    """Residual of ``b_E' = (n-1) alpha' cot(alpha) b_E`` with central differences.

    Shells whose stencil straddles a jump of ``alpha`` or of the direction,
    or with ``sin(alpha) < 1e-6``, are excluded and counted.
    """
    n = E.n
    p = E.profile
    iv = Interval.coerce(I, p.window)
    rr = _shell_radii(E, iv, count)
    h = float(np.min(np.diff(rr))) * 0.5 if len(rr) > 1 else 1e-4
    # truncation error is O(h^2 b''') and rounding O(eps / h); 1e-5 of the window balances them
    h = min(h, 1e-5 * (iv.hi - iv.lo))
    inner = (rr - h >= iv.lo) & (rr + h <= iv.hi)
    rr = rr[inner]
    sing = np.concatenate([p.alpha.jump_radii, E.direction.jump_radii()])
    near = np.zeros(rr.shape, dtype=bool)
    for s in sing:
        near |= np.abs(rr - s) <= h
    tp = direction_trace(E, r=rr + h)
    tm = direction_trace(E, r=rr - h)
    t0 = direction_trace(E, r=rr)
    db = (tp.b - tm.b) / (2 * h)
    a = t0.alpha
    da = p.alpha.ac_derivative(rr)
    ok = t0.valid & tp.valid & tm.valid & ~near
    with np.errstate(divide="ignore", invalid="ignore"):
        rhs = ((n - 1) * da * np.cos(a) / np.sin(a))[:, None] * t0.b
    res = np.linalg.norm(db - rhs, axis=-1)
    res = np.where(ok, res, 0.0)
    d = t0.d[ok]
    osc = float(np.max(np.linalg.norm(d - d[0], axis=-1))) if len(d) else 0.0
    mres = float(res.max()) if res.size else 0.0
    return OdeReport(mres, osc, int(np.count_nonzero(~ok)), bool(mres <= tol and osc <= tol), res, rr)


@dataclass
class EqualityScores:
    slices_are_caps: float
    normal_constancy: float
    excluded: int
    per_shell: dict = field(default_factory=dict, repr=False)

    def to_dict(self):
        return {"slices_are_caps": self.slices_are_caps, "normal_constancy": self.normal_constancy, "excluded": self.excluded}


def normal_components(E: CapFieldSet, r, nphi: int = 64):
    """Radial part ``nu . x/|x|`` and tangential length ``|nu_par|`` along slice boundaries.

    Uses the absolutely continuous parts of ``alpha`` and of the direction
    field. Returns arrays of shape ``(len(r), k)`` with ``k = 2`` boundary
    points for n = 2 and ``k = nphi`` points around the boundary circle for n = 3.
    """
    rr = np.atleast_1d(np.asarray(r, dtype=float))
    da = E.profile.alpha.ac_derivative(rr)
    if E.n == 2:
        dth = E.direction.angle_derivative(rr)
        s = np.stack([rr * (da + dth), rr * (da - dth)], axis=-1)
    else:
        phi = 2 * np.pi * np.arange(nphi) / nphi
        ddn = np.linalg.norm(E.direction.derivative(rr), axis=-1)
        s = rr[:, None] * (da[:, None] + ddn[:, None] * np.cos(phi)[None, :])
    root = np.sqrt(1 + s * s)
    return s / root, 1.0 / root


def _capfield_scores(E: CapFieldSet, I, count, nphi: int = 256):
    n = E.n
    p = E.profile
    iv = Interval.coerce(I, p.window)
    rr = _shell_radii(E, iv, count)
    sing = np.concatenate([p.alpha.jump_radii, E.direction.jump_radii()])
    rr = rr[~np.isin(rr, sing)]
    a = np.clip(p.alpha(rr), 0.0, math.pi)
    live = (np.sin(a) >= DEGENERATE_SIN)
    excluded = int(np.count_nonzero(~live))
    rr, a = rr[live], a[live]
    da = p.alpha.ac_derivative(rr)
    ref = sphere_measure(n, rr, np.full_like(rr, math.pi / 2))
    if n == 2:
        # slice boundary: two points, exactly what a cap has
        pe = np.full_like(rr, 2.0)
        dth = E.direction.angle_derivative(rr)
        s_up = rr * (da + dth)
        s_lo = rr * (da - dth)
        nu = np.stack([s_up / np.sqrt(1 + s_up**2), s_lo / np.sqrt(1 + s_lo**2)], axis=-1)
    else:
        # slice boundary is the circle of angular radius alpha
        phi = 2 * np.pi * np.arange(nphi) / nphi
        pe = 2 * np.pi * rr * np.sin(a)
        dd = E.direction.derivative(rr)
        ddn = np.linalg.norm(dd, axis=-1)
        s = rr[:, None] * (da[:, None] + ddn[:, None] * np.cos(phi)[None, :])
        nu = s / np.sqrt(1 + s * s)
    cap = sphere_measure(n, rr, a)
    caps_score = np.abs(pe - cap) / ref
    spread = nu.max(axis=1) - nu.min(axis=1)
    return EqualityScores(
        float(caps_score.max()) if caps_score.size else 0.0,
        float(spread.max()) if spread.size else 0.0,
        excluded,
        {"r": rr, "slice_boundary": pe, "cap_boundary": cap, "normal_spread": spread},
    )


def slice_boundary_measure_2d(V: VoxelSet, r: float, m: int = 4096) -> float:
    """Number of occupancy changes around the circle of radius ``r``."""
    dirs = shell_directions(2, m)
    occ = V.lookup(r * dirs)
    return float(np.count_nonzero(occ != np.roll(occ, 1)))


def spherical_slice_boundary(occ: np.ndarray, r: float = 1.0, sigma: float = 1.0):
    """Area and boundary length of a subset of the sphere of radius ``r`` given on a lat-long raster.

    ``occ[i, j]`` is the occupancy of the cell centred at polar angle
    ``(i + 1/2) pi / nt`` and azimuth ``(j + 1/2) 2 pi / np``. The boundary is
    the 1/2-level contour of the Gaussian-smoothed indicator (periodic in the
    azimuth), with every segment measured as a geodesic on the sphere.
    """
    from scipy import ndimage
    from skimage import measure

    nt, nph = occ.shape
    th = (np.arange(nt) + 0.5) * np.pi / nt
    dth, dph = np.pi / nt, 2 * np.pi / nph
    area = float(np.sum(occ * np.sin(th)[:, None]) * dth * dph) * r * r
    u = occ.astype(float)
    if sigma > 0:
        u = ndimage.gaussian_filter(u, sigma, mode=("nearest", "wrap"))
    pad = nph // 4
    uw = np.concatenate([u[:, -pad:], u, u[:, :pad]], axis=1)
    uw = np.pad(uw, ((1, 1), (0, 0)), mode="edge")
    length = 0.0
    for c in measure.find_contours(uw, 0.5):
        t = (c[:, 0] - 1 + 0.5) * dth
        p = (c[:, 1] - pad + 0.5) * dph
        xyz = np.stack([np.sin(t) * np.cos(p), np.sin(t) * np.sin(p), np.cos(t)], axis=-1)
        seg = np.arccos(np.clip(np.sum(xyz[1:] * xyz[:-1], axis=-1), -1, 1))
        # keep segments whose midpoint lies in the unwrapped central copy
        mid = 0.5 * (c[1:, 1] + c[:-1, 1]) - pad
        keep = (mid >= 0) & (mid < nph)
        length += float(np.sum(seg[keep]))
    return area, length * r


def _voxel_scores(V: VoxelSet, I, count, m: int = 4096):
    if V.n != 2:
        raise NotImplementedError("voxel equality scores are implemented for n = 2")
    if I is None:
        lo, hi = V.h, V.extent
    else:
        iv = Interval.coerce(I)
        lo, hi = iv.lo, iv.hi
    count = count or max(2, int((hi - lo) / (0.5 * V.h)))
    rr = np.linspace(lo, hi, count)
    dirs = shell_directions(2, m)
    pe = np.empty(count)
    cap = np.empty(count)
    for i, ri in enumerate(rr):
        occ = V.lookup(ri * dirs)
        pe[i] = float(np.count_nonzero(occ != np.roll(occ, 1)))
        frac = occ.mean()
        cap[i] = 2.0 if 0 < frac < 1 else 0.0
    score = np.abs(pe - cap) / 2.0
    return EqualityScores(float(score.max()), float("nan"), 0, {"r": rr, "slice_boundary": pe, "cap_boundary": cap})


def verify_equality_conditions(E, I=None, count: int | None = None) -> EqualityScores:
    """Scores for the two necessary conditions of equality.

    ``slices_are_caps``: max over shells of ``|p_E(r) - p_cap(r)|`` divided by
    the equator measure, where ``p_cap`` is the boundary measure of the cap
    with the same area; zero exactly when every slice is a cap.
    ``normal_constancy``: max over shells of the spread of ``nu . x/|x|``
    along the slice boundary, from the absolutely continuous parts of
    ``alpha`` and ``d`` (singular radii are excluded). Not computed for
    voxel sets (NaN).
    """
    if isinstance(E, VoxelSet):
        return _voxel_scores(E, I, count)
    return _capfield_scores(E, I, count)
