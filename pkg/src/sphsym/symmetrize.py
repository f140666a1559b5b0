"""Spherical and circular symmetrisation.

Spherical symmetrisation replaces each slice ``E cap dB(r)`` by the cap
centred at ``r e1`` with the same measure. Circular symmetrisation with
respect to ``(e1, e_j)`` does the same on the circles of radius ``rho``
around the line spanned by the remaining axes, inside the planes parallel
to ``(x1, x_j)``: each circular slice becomes an arc centred on the
positive ``x1`` direction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .profile import Profile, RadialGrid, profile_from_v
from .sets import CapFieldSet, VoxelSet, rasterize, slice_measure, symmetral_from_profile, shell_directions
from .sphere_geometry import sphere_area

CIRCLE_SAMPLES = 1024


@dataclass(frozen=True, eq=False)
class CircularProfile:
    """Circular distribution ``l(r, x')``.

    For n = 2 the circular and spherical profiles coincide and ``profile``
    holds the spherical one (``l = v``). For n = 3 ``ell[k, i]`` is the
    circle measure at radius ``r[i]`` in the plane ``x' = xprime[k]``.
    """

    n: int
    r: np.ndarray | None = None
    xprime: np.ndarray | None = None
    ell: np.ndarray | None = None
    profile: Profile | None = None
    axes: tuple[int, int] = (0, 1)

    def __post_init__(self):
        if self.n == 2:
            if self.profile is None:
                raise ValueError("an n = 2 circular profile wraps a spherical profile")
            return
        if self.n != 3:
            raise ValueError("circular profiles are implemented for n in {2, 3}")
        r = np.asarray(self.r, dtype=float)
        ell = np.asarray(self.ell, dtype=float)
        if ell.shape != (len(self.xprime), len(r)):
            raise ValueError("ell must have shape (len(xprime), len(r))")
        cap = 2 * np.pi * r[None, :]
        if np.any(ell < -1e-9) or np.any(ell > cap * (1 + 1e-9) + 1e-12):
            raise ValueError("circular distribution must satisfy 0 <= l <= 2 pi r")
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "xprime", np.asarray(self.xprime, dtype=float))
        object.__setattr__(self, "ell", np.clip(ell, 0.0, cap))

    @property
    def alpha(self) -> np.ndarray:
        """Arc half-angle ``l / (2 r)``."""
        if self.n == 2:
            return self.profile.alpha_nodes
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.where(self.r > 0, self.ell / (2 * self.r), 0.0)

    @property
    def xi(self) -> np.ndarray:
        if self.n == 2:
            return self.profile.xi_nodes
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.where(self.r > 0, self.ell / self.r, 0.0)

    @classmethod
    def from_callable(cls, ell_fn, r: np.ndarray, xprime: np.ndarray, supersample: int = 8, axes=(0, 1)):
        """Cell-averaged samples of an exact ``l(r, x')``.

        Averaging over an ``h x h`` cell around each node (``supersample``
        points per side) keeps the P1 perimeter of sharp profiles consistent.
        """
        r = np.asarray(r, dtype=float)
        xprime = np.asarray(xprime, dtype=float)
        hr = r[1] - r[0]
        hz = xprime[1] - xprime[0]
        off = (np.arange(supersample) + 0.5) / supersample - 0.5
        acc = np.zeros((len(xprime), len(r)))
        for dz in off * hz:
            for dr in off * hr:
                rr = np.clip(r + dr, 0.0, None)
                val = ell_fn(rr[None, :], (xprime + dz)[:, None])
                # rescale to the node radius so the cap 2 pi r is respected
                with np.errstate(divide="ignore", invalid="ignore"):
                    acc += np.where(rr[None, :] > 0, val / rr[None, :], 0.0) * r[None, :]
        return cls(3, r, xprime, acc / supersample**2, axes=tuple(axes))


def _shell_grid(V: VoxelSet, shells: int | None):
    r_max = V.extent
    if shells is None:
        shells = max(2, int(round(r_max / (0.5 * V.h))))
    return RadialGrid(0.5 * V.h, r_max, shells)


def spherical_symmetrize(V: VoxelSet, m: int = 4096, seed: int | None = None, shells: int | None = None):
    """Profile of slice measures of ``V`` and its symmetral ``F_v``.

    Shells are spaced ``h/2`` apart from ``h/2`` to the raster's inscribed
    radius; each slice is measured with ``m`` stratified shell samples.
    """
    grid = _shell_grid(V, shells)
    dirs = shell_directions(V.n, m, seed)
    r = grid.nodes
    v = np.empty_like(r)
    for i, ri in enumerate(r):
        v[i] = float(np.mean(V.lookup(ri * dirs))) * sphere_area(V.n, ri)
    p = profile_from_v(V.n, grid, v, interp="linear")
    return p, symmetral_from_profile(p)


def _circle_fractions(plane: np.ndarray, h: float, rho: np.ndarray, m: int) -> np.ndarray:
    # fraction of each circle |y| = rho (centred at the plane origin) inside the occupied pixels
    phi = 2 * np.pi * (np.arange(m) + 0.5) / m
    shape = np.array(plane.shape)
    x = rho[:, None] * np.cos(phi)[None, :]
    y = rho[:, None] * np.sin(phi)[None, :]
    ix = np.rint(x / h + 0.5 * (shape[0] - 1)).astype(np.int64)
    iy = np.rint(y / h + 0.5 * (shape[1] - 1)).astype(np.int64)
    ok = (ix >= 0) & (ix < shape[0]) & (iy >= 0) & (iy < shape[1])
    vals = plane[np.clip(ix, 0, shape[0] - 1), np.clip(iy, 0, shape[1] - 1)] & ok
    return vals.mean(axis=1)


def circular_symmetrize(V: VoxelSet, axes=(0, 1), m: int = CIRCLE_SAMPLES, seed: int | None = None):
    """Circular symmetrisation of a raster with respect to ``(e1, e_j)``.

    Returns the circular profile and the raster of ``F^l``. For n = 2 this
    is spherical symmetrisation.
    """
    axes = tuple(int(a) for a in axes)
    if axes[0] != 0 or axes[1] == 0 or axes[1] >= V.n:
        raise ValueError("axes must be (0, j) with 1 <= j < n")
    if V.n == 2:
        p, Fv = spherical_symmetrize(V, m=max(m, 4096), seed=seed)
        return CircularProfile(2, profile=p), rasterize(Fv, V.h, size=V.shape[0])
    j = axes[1]
    k = ({0, 1, 2} - {0, j}).pop()
    h = V.h
    occ = np.moveaxis(V.occupancy, (0, j, k), (0, 1, 2))
    nx, ny, nz = occ.shape
    c = (np.arange(nx) - 0.5 * (nx - 1)) * h
    rho_max = 0.5 * (min(nx, ny) - 1) * h
    rho = np.arange(1, int(rho_max / (0.5 * h)) + 1) * 0.5 * h
    zs = (np.arange(nz) - 0.5 * (nz - 1)) * h
    ell = np.zeros((nz, len(rho)))
    for kz in range(nz):
        plane = occ[:, :, kz]
        if plane.any():
            ell[kz] = _circle_fractions(plane, h, rho, m) * 2 * np.pi * rho
    cp = CircularProfile(3, rho, zs, ell, axes=axes)
    # rebuild: arcs centred on +x1 with half-angle l / (2 rho)
    X, Y = np.meshgrid(c, (np.arange(ny) - 0.5 * (ny - 1)) * h, indexing="ij")
    R = np.hypot(X, Y)
    ang = np.abs(np.arctan2(Y, X))
    half = cp.alpha  # (nz, len(rho))
    out = np.zeros_like(occ)
    t = R / (0.5 * h) - 1.0
    for kz in range(nz):
        if not ell[kz].any():
            continue
        a = np.interp(t, np.arange(len(rho)), half[kz], left=half[kz, 0], right=0.0)
        out[:, :, kz] = (ang < a) & (R <= rho[-1])
    out = np.moveaxis(out, (0, 1, 2), (0, j, k))
    return cp, VoxelSet(out, h)


def iterate_circular(E: CapFieldSet, h: float, m: int = CIRCLE_SAMPLES, size: int | None = None) -> VoxelSet:
    """Circular symmetrisation about (e1, e2) then (e1, e3) of the rasterized set (n = 3)."""
    if E.n != 3:
        raise ValueError("iterated circular symmetrisation is for n = 3")
    V = rasterize(E, h, size=size)
    _, V1 = circular_symmetrize(V, (0, 1), m)
    _, V2 = circular_symmetrize(V1, (0, 2), m)
    return V2
