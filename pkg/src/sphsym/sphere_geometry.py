"""Geodesic balls and spheres on S^{n-1}.

Areas of caps, measures of their boundaries, the inversion of the
normalized cap area, and pairwise cap overlaps used by the jump terms of
the perimeter engines.
"""

from __future__ import annotations

import math

import numpy as np
from scipy import integrate, special

UNIT_TOL = 1e-9

# omega_k = volume of the unit ball in R^k
_OMEGA = {
    0: 1.0,
    1: 2.0,
    2: math.pi,
    3: 4.0 * math.pi / 3.0,
    4: math.pi**2 / 2.0,
    5: 8.0 * math.pi**2 / 15.0,
    6: math.pi**3 / 6.0,
    7: 16.0 * math.pi**3 / 105.0,
    8: math.pi**4 / 24.0,
}


def omega(k: int) -> float:
    """Volume of the unit ball of R^k."""
    if k < 0:
        raise ValueError(f"dimension must be >= 0, got {k}")
    if k in _OMEGA:
        return _OMEGA[k]
    return math.exp(0.5 * k * math.log(math.pi) - special.gammaln(0.5 * k + 1.0))


def sphere_area(n: int, r: float = 1.0) -> float:
    """H^{n-1} of the sphere of radius r in R^n, i.e. n * omega_n * r^(n-1)."""
    return n * omega(n) * r ** (n - 1)


def check_dimension(n: int) -> int:
    if int(n) != n or n < 2:
        raise ValueError(f"dimension n must be an integer >= 2, got {n!r}")
    return int(n)


def _check_angle(beta, name="beta"):
    b = np.asarray(beta, dtype=float)
    if np.any(~np.isfinite(b)) or np.any(b < 0.0) or np.any(b > math.pi):
        raise ValueError(f"{name} must lie in [0, pi]")
    return b


def _check_unit(x, name):
    x = np.asarray(x, dtype=float)
    nrm = np.linalg.norm(x, axis=-1)
    if np.any(np.abs(nrm - 1.0) > UNIT_TOL):
        raise ValueError(f"{name} is not a unit vector (|{name}| = {nrm})")
    return x


def geodesic_distance(x, y):
    """Angle between unit vectors ``x`` and ``y``, in [0, pi].

    Works on stacked vectors along the last axis.
    """
    x = _check_unit(x, "x")
    y = _check_unit(y, "y")
    dot = np.sum(x * y, axis=-1)
    out = np.arccos(np.clip(dot, -1.0, 1.0))
    return float(out) if np.ndim(out) == 0 else out


# ---------------------------------------------------------------------------
# caps
# ---------------------------------------------------------------------------


def _sin_power_integral_quad(m: int, beta: float) -> float:
    if beta == 0.0:
        return 0.0
    val, _ = integrate.quad(
        lambda t: math.sin(t) ** m, 0.0, beta, epsabs=0.0, epsrel=1e-12, limit=200
    )
    return val


def _sin_power_integral_beta(m: int, beta):
    # int_0^beta sin^m = 1/2 B((m+1)/2, 1/2) I_{sin^2 beta}((m+1)/2, 1/2) on [0, pi/2],
    # reflected about pi/2 otherwise.
    beta = np.asarray(beta, dtype=float)
    a = 0.5 * (m + 1)
    full_half = 0.5 * special.beta(a, 0.5)
    b = np.minimum(beta, math.pi - beta)
    part = full_half * special.betainc(a, 0.5, np.sin(b) ** 2)
    return np.where(beta <= 0.5 * math.pi, part, 2.0 * full_half - part)


def sin_power_integral(m: int, beta, method: str = "auto"):
    """Integral of sin(t)^m over [0, beta] for beta in [0, pi].

    ``method`` is ``"quad"`` (adaptive Gauss-Kronrod), ``"beta"`` (regularized
    incomplete beta function) or ``"auto"`` (closed forms for m <= 1, beta
    function otherwise).
    """
    beta = _check_angle(beta)
    if method == "quad":
        out = np.vectorize(lambda b: _sin_power_integral_quad(m, float(b)))(beta)
    elif m == 0 and method == "auto":
        out = beta.copy()
    elif m == 1 and method == "auto":
        out = 1.0 - np.cos(beta)
    elif method in ("auto", "beta"):
        out = _sin_power_integral_beta(m, beta)
    else:
        raise ValueError(f"unknown method {method!r}")
    return float(out) if np.ndim(out) == 0 else out


def cap_area(n: int, r, beta, method: str = "auto"):
    """H^{n-1} measure of the open geodesic ball of angle ``beta`` on the sphere of radius ``r``.

    Closed forms are used for n = 2 (``2 r beta``) and n = 3
    (``2 pi r^2 (1 - cos beta)``); other dimensions go through
    :func:`sin_power_integral`. Pass ``method="quad"`` to force adaptive
    quadrature in any dimension.
    """
    n = check_dimension(n)
    beta = _check_angle(beta)
    r = np.asarray(r, dtype=float)
    if np.any(r < 0):
        raise ValueError("radius must be non-negative")
    if method == "auto" and n == 2:
        out = 2.0 * r * beta
    elif method == "auto" and n == 3:
        out = 2.0 * math.pi * r**2 * (1.0 - np.cos(beta))
    else:
        out = (n - 1) * omega(n - 1) * r ** (n - 1) * sin_power_integral(n - 2, beta, method)
    return float(out) if np.ndim(out) == 0 else out


def sphere_measure(n: int, r, beta):
    """H^{n-2} measure of the geodesic sphere of angle ``beta`` on the sphere of radius ``r``.

    For n = 2 this counts the endpoints of the arc: 2 inside (0, pi), 0 at
    the extremes where the geodesic sphere is empty or a single point.
    """
    n = check_dimension(n)
    beta = _check_angle(beta)
    r = np.asarray(r, dtype=float)
    interior = (beta > 0.0) & (beta < math.pi)
    if n == 2:
        out = np.where(interior, 2.0, 0.0) * np.ones_like(r)
    else:
        out = (n - 1) * omega(n - 1) * r ** (n - 2) * np.sin(beta) ** (n - 2)
        out = np.where(interior, out, 0.0)
    return float(out) if np.ndim(out) == 0 else out


def _newton_invert(n, xi, tol=1e-12, maxiter=100):
    # safeguarded Newton on F(a) = cap_area(n, 1, a) - xi, bracket [lo, hi]
    xi = np.asarray(xi, dtype=float)
    lo = np.zeros_like(xi)
    hi = np.full_like(xi, math.pi)
    a = np.full_like(xi, 0.5 * math.pi)
    for _ in range(maxiter):
        f = cap_area(n, 1.0, a) - xi
        lo = np.where(f < 0, a, lo)
        hi = np.where(f > 0, a, hi)
        d = sphere_measure(n, 1.0, a)
        with np.errstate(divide="ignore", invalid="ignore"):
            step = np.where(d > 0, f / d, np.inf)
        cand = a - step
        bad = ~np.isfinite(cand) | (cand <= lo) | (cand >= hi)
        new = np.where(bad, 0.5 * (lo + hi), cand)
        done = np.abs(new - a) <= tol
        a = new
        if np.all(done | (hi - lo <= tol)):
            break
    return a


def alpha_from_xi(n: int, xi, tol: float = 1e-12):
    """Angle ``alpha`` with ``cap_area(n, 1, alpha) == xi``.

    ``xi`` must lie in ``[0, n omega_n]`` up to ``1e-12``; values within the
    tolerance are clamped.
    """
    n = check_dimension(n)
    xi = np.asarray(xi, dtype=float)
    total = sphere_area(n)
    slack = 1e-12 * max(1.0, total)
    if np.any(~np.isfinite(xi)) or np.any(xi < -slack) or np.any(xi > total + slack):
        raise ValueError(f"normalized slice measure must lie in [0, {total}]")
    xi = np.clip(xi, 0.0, total)
    if n == 2:
        out = xi / 2.0
    elif n == 3:
        out = np.arccos(np.clip(1.0 - xi / (2.0 * math.pi), -1.0, 1.0))
    else:
        out = _newton_invert(n, xi, tol=tol)
    out = np.where(xi <= 0.0, 0.0, np.where(xi >= total, math.pi, out))
    return float(out) if np.ndim(out) == 0 else out


def alpha_from_xi_newton(n: int, xi, tol: float = 1e-12):
    """Bracketed Newton inversion in any dimension (no closed-form shortcut)."""
    n = check_dimension(n)
    total = sphere_area(n)
    xi = np.clip(np.asarray(xi, dtype=float), 0.0, total)
    # the endpoints are double roots where Newton only converges linearly
    out = np.where(xi <= 0.0, 0.0, np.where(xi >= total, math.pi, _newton_invert(n, xi, tol=tol)))
    return float(out) if np.ndim(out) == 0 else out


# ---------------------------------------------------------------------------
# overlaps of two caps on the same sphere
# ---------------------------------------------------------------------------


def _arc_overlap(a1, a2, delta):
    # overlap (in angle) of arcs [-a1, a1] and [delta - a2, delta + a2] on the circle
    total = 0.0
    for k in (-1, 0, 1):
        lo = max(-a1, delta - a2 + 2 * math.pi * k)
        hi = min(a1, delta + a2 + 2 * math.pi * k)
        total += max(0.0, hi - lo)
    return min(total, 2.0 * min(a1, a2))


SMALL_CAP = 1e-3  # below this angle the spherical lens formula cancels badly
TINY_CAP = 1e-4  # a cap this small sees the other boundary as a straight line


def _planar_lens(R1, R2, d):
    """Intersection area of planar discs with radii R1, R2 and centre distance d."""
    R1, R2, d = np.broadcast_arrays(*(np.asarray(x, dtype=float) for x in (R1, R2, d)))
    small = np.pi * np.minimum(R1, R2) ** 2
    with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
        t1 = np.clip((d * d + R1 * R1 - R2 * R2) / (2 * d * R1), -1, 1)
        t2 = np.clip((d * d + R2 * R2 - R1 * R1) / (2 * d * R2), -1, 1)
        k = (-d + R1 + R2) * (d + R1 - R2) * (d - R1 + R2) * (d + R1 + R2)
        lens = R1 * R1 * np.arccos(t1) + R2 * R2 * np.arccos(t2) - 0.5 * np.sqrt(np.maximum(k, 0.0))
    out = np.where(d >= R1 + R2, 0.0, np.where(d <= np.abs(R1 - R2), small, lens))
    return np.nan_to_num(out, nan=0.0)


def _disc_behind_line(rho, t):
    """Area of a planar disc of radius ``rho`` on the side of a line at signed distance ``t`` from its centre."""
    u = np.clip(t / np.where(rho > 0, rho, 1.0), -1.0, 1.0)
    seg = rho * rho * (np.arccos(u) - u * np.sqrt(1 - u * u))
    return np.pi * rho * rho - seg


def _lens_closed_form(a1, a2, d):
    s1, s2, sd = np.sin(a1), np.sin(a2), np.sin(d)
    c1, c2, cd = np.cos(a1), np.cos(a2), np.cos(d)
    with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
        x = (cd - c1 * c2) / (s1 * s2)
        y1 = (c2 - cd * c1) / (sd * s1)
        y2 = (c1 - cd * c2) / (sd * s2)
        return 2.0 * (math.pi - _acos(x) - c1 * _acos(y1) - c2 * _acos(y2))


def _cap_area_unit(a):
    # 2 pi (1 - cos a) without cancellation for small a
    return 4.0 * math.pi * np.sin(0.5 * a) ** 2


def _intersection_s2(a1, a2, d, _depth=0):
    """Vectorized intersection area of two caps on the unit 2-sphere."""
    a1, a2, d = np.broadcast_arrays(*(np.asarray(x, dtype=float) for x in (a1, a2, d)))
    big, small = np.maximum(a1, a2), np.minimum(a1, a2)
    A_big, A_small = _cap_area_unit(big), _cap_area_unit(small)
    out = _lens_closed_form(big, small, d)
    out = np.where(small < TINY_CAP, _disc_behind_line(small, big - d), out)
    out = np.where(big < SMALL_CAP, _planar_lens(big, small, d), out)
    out = np.where(d <= big - small, A_small, out)
    out = np.where(d >= big + small, 0.0, out)
    out = np.where(small <= 0.0, 0.0, out)
    near_full = big > math.pi - SMALL_CAP
    if _depth == 0 and np.any(near_full):
        # the complement of the big cap is a small cap at the antipode
        comp = A_small - _intersection_s2(math.pi - big, small, math.pi - d, 1)
        out = np.where(near_full, comp, out)
    out = np.where(big + small + d >= 2 * math.pi, A_big + A_small - 4 * math.pi, out)
    return np.clip(np.nan_to_num(out, nan=0.0), 0.0, A_small)


def _lens_area_s2(a1, a2, delta):
    return float(_intersection_s2(a1, a2, delta))


def cap_intersection_area(n: int, r: float, a1: float, a2: float, delta: float) -> float:
    """Measure of the intersection of two caps of angles ``a1``, ``a2`` whose centres are ``delta`` apart.

    Supported for n = 2 (arc arithmetic) and n = 3 (closed-form lens area).
    """
    n = check_dimension(n)
    for name, v in (("a1", a1), ("a2", a2), ("delta", delta)):
        _check_angle(v, name)
    if n == 2:
        return r * _arc_overlap(a1, a2, delta)
    if n == 3:
        return r**2 * _lens_area_s2(a1, a2, delta)
    raise NotImplementedError("cap intersections are implemented for n in {2, 3}")


def cap_symmetric_difference(n: int, r: float, a1: float, a2: float, delta: float) -> float:
    """Measure of the symmetric difference of two caps on the sphere of radius ``r``."""
    inter = cap_intersection_area(n, r, a1, a2, delta)
    out = cap_area(n, r, a1) + cap_area(n, r, a2) - 2.0 * inter
    return max(out, 0.0)


def _acos(x):
    return np.arccos(np.clip(x, -1.0, 1.0))


def cap_symmetric_difference_array(n: int, a1, a2, delta):
    """Vectorized symmetric difference of two caps on the unit sphere (n in {2, 3}).

    Broadcasts over ``a1``, ``a2`` and ``delta``; no domain checks.
    """
    a1, a2, delta = np.broadcast_arrays(*(np.asarray(x, dtype=float) for x in (a1, a2, delta)))
    if n == 2:
        total = np.zeros(a1.shape)
        for k in (-1, 0, 1):
            lo = np.maximum(-a1, delta - a2 + 2 * math.pi * k)
            hi = np.minimum(a1, delta + a2 + 2 * math.pi * k)
            total = total + np.maximum(0.0, hi - lo)
        inter = np.minimum(total, 2.0 * np.minimum(a1, a2))
        return np.maximum(2.0 * (a1 + a2) - 2.0 * inter, 0.0)
    if n != 3:
        raise NotImplementedError("cap intersections are implemented for n in {2, 3}")
    inter = _intersection_s2(a1, a2, delta)
    return np.maximum(_cap_area_unit(a1) + _cap_area_unit(a2) - 2.0 * inter, 0.0)
