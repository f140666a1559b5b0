import math

import numpy as np
import pytest

from sphsym.families import annular_sector, ball, jump_example, random_blobs
from sphsym.profile import RadialGrid, make_profile
from sphsym.sets import VoxelSet, planar_rotation, rasterize, rotate, symmetral_from_profile
from sphsym.symmetrize import CircularProfile, circular_symmetrize, iterate_circular, spherical_symmetrize


def _torus(h, R=0.7, a=0.25, extent=1.0):
    c = np.arange(-extent, extent + h / 2, h)
    X, Y, Z = np.meshgrid(c, c, c, indexing="ij")
    return VoxelSet((np.hypot(X, Y) - R) ** 2 + Z**2 < a * a, h)


class TestSpherical:
    H = 1 / 128

    def _interior(self, p, lo, hi):
        r = p.grid.nodes
        return (r > lo) & (r < hi)

    def test_recovers_sector_profile(self):
        V = rasterize(symmetral_from_profile(annular_sector(0.5, 1.2, 1.0, count=65)), self.H)
        p, _ = spherical_symmetrize(V, seed=0)
        mask = self._interior(p, 0.55, 1.15)
        r = p.grid.nodes[mask]
        err = np.abs(p.alpha_nodes[mask] - 1.0)
        assert np.all(err <= 3 * self.H / r)

    def test_rotation_invariance(self):
        F = symmetral_from_profile(jump_example(count=257))
        q = planar_rotation(2, 2.0)
        p0, _ = spherical_symmetrize(rasterize(F, self.H), seed=0)
        p1, _ = spherical_symmetrize(rasterize(rotate(F, q), self.H), seed=0)
        mask = self._interior(p0, 1.05, 2.95) & (np.abs(p0.grid.nodes - 2.0) > 0.02)
        assert np.max(np.abs(p0.alpha_nodes[mask] - p1.alpha_nodes[mask])) < 0.03

    @pytest.mark.parametrize("seed", range(3))
    def test_preserves_slice_measure(self, seed):
        V = random_blobs(2, np.random.default_rng(seed), 1 / 128)
        p, Fv = spherical_symmetrize(V, seed=1)
        W = rasterize(Fv, V.h, size=V.shape[0])
        q, _ = spherical_symmetrize(W, seed=1)
        r = p.grid.nodes
        mask = (r > 0.2) & (r < V.extent - 2 * V.h)
        # re-rasterising moves each arc end by about a cell, and each cell mixes radii within h
        slope = np.abs(np.gradient(p.xi_nodes, r))
        tol = 4 * V.h / r + 2 * V.h * slope + 0.01
        assert np.all((np.abs(p.xi_nodes - q.xi_nodes) <= tol)[mask])

    def test_ball_n3(self):
        V = rasterize(symmetral_from_profile(ball(0.8, count=33)), 1 / 32)
        p, _ = spherical_symmetrize(V, seed=0)
        r = p.grid.nodes
        assert np.all(p.alpha_nodes[r < 0.7] == pytest.approx(math.pi))
        assert np.all(p.alpha_nodes[r > 0.9] == 0.0)


class TestCircular:
    H = 1 / 48

    def test_torus_is_fixed(self):
        # every horizontal circle around the x3 axis is either inside or outside the torus
        V = _torus(self.H)
        cp, W = circular_symmetrize(V, (0, 1))
        rho, z = np.meshgrid(cp.r, cp.xprime)
        inside = (rho - 0.7) ** 2 + z**2 < 0.25**2
        d = np.abs(np.sqrt((rho - 0.7) ** 2 + z**2) - 0.25)
        far = d > 2 * self.H
        exact = np.where(inside, 2 * np.pi * rho, 0.0)
        assert np.max(np.abs(cp.ell - exact)[far] / (2 * np.pi * rho[far])) < 0.02
        assert np.count_nonzero(W.occupancy ^ V.occupancy) < 0.1 * np.count_nonzero(V.occupancy)

    def test_volume_preserved(self):
        V = _torus(self.H)
        # shift off axis so slices are genuine arcs
        occ = np.roll(V.occupancy, 8, axis=0)
        cp, W = circular_symmetrize(VoxelSet(occ, self.H), (0, 2))
        v0, v1 = occ.sum(), W.occupancy.sum()
        assert abs(v1 - v0) / v0 < 0.05

    def test_arcs_centred_on_e1(self):
        V = _torus(self.H)
        occ = np.roll(V.occupancy, 10, axis=1)
        _, W = circular_symmetrize(VoxelSet(occ, self.H), (0, 1))
        # the result is symmetric under x2 -> -x2
        assert np.array_equal(W.occupancy, W.occupancy[:, ::-1, :])

    def test_bad_axes(self):
        with pytest.raises(ValueError):
            circular_symmetrize(_torus(0.1), (1, 2))

    def test_n2_is_spherical(self):
        V = rasterize(symmetral_from_profile(annular_sector(0.3, 0.9, 0.7, count=33)), 1 / 64)
        cp, _ = circular_symmetrize(V)
        p, _ = spherical_symmetrize(V, seed=None)
        assert cp.n == 2
        assert np.allclose(cp.alpha, p.alpha_nodes, atol=0.02)

    def test_profile_validation(self):
        with pytest.raises(ValueError):
            CircularProfile(3, np.array([1.0, 2.0]), np.array([0.0]), np.array([[10.0, 1.0]]))
        with pytest.raises(ValueError):
            CircularProfile(2)


def test_iterate_circular_ball():
    h = 1 / 24
    E = rotate(symmetral_from_profile(ball(0.7, count=33)), planar_rotation(3, 0.4))
    V = iterate_circular(E, h)
    V0 = rasterize(E, h, size=V.shape[0])
    assert abs(int(V.occupancy.sum()) - int(V0.occupancy.sum())) < 0.05 * V0.occupancy.sum()


def test_iterate_circular_rejects_n2():
    with pytest.raises(ValueError):
        iterate_circular(symmetral_from_profile(annular_sector(0.5, 1.0, 1.0, count=9)), 0.1)
