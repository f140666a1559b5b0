import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from sphsym.families import jump_example, smooth_profile, staircase_profile
from sphsym.profile import RadialGrid, make_profile
from sphsym.sets import (
    CantorFlow,
    CapFieldSet,
    ConstantDirection,
    FourierRandom,
    MultiArcSet,
    PiecewiseRotation,
    VoxelSet,
    direction_from_dict,
    glue,
    minimal_rotation,
    planar_rotation,
    rasterize,
    rotate,
    shell_directions,
    slice_center,
    slice_measure,
    symmetral_from_profile,
)


class TestRotations:
    @given(st.floats(-7, 7))
    def test_planar_is_orthogonal(self, g):
        q = planar_rotation(3, g, (0, 2))
        assert np.allclose(q @ q.T, np.eye(3))
        assert np.linalg.det(q) == pytest.approx(1.0)

    def test_minimal_rotation_maps_a_to_b(self, rng):
        a = rng.normal(size=(20, 3))
        b = rng.normal(size=(20, 3))
        a /= np.linalg.norm(a, axis=1, keepdims=True)
        b /= np.linalg.norm(b, axis=1, keepdims=True)
        q = minimal_rotation(a, b)
        assert np.allclose(np.einsum("kij,kj->ki", q, a), b, atol=1e-12)
        assert np.allclose(np.einsum("kij,kj->ki", q, np.cross(a, b)), np.cross(a, b), atol=1e-12)


def _unit_rows(d):
    return np.allclose(np.linalg.norm(d, axis=-1), 1.0, atol=1e-12)


class TestDirectionFields:
    def test_constant(self):
        q = planar_rotation(2, 0.3)
        d = ConstantDirection(2, q)
        assert np.allclose(d(np.array([1.0, 2.0])), [math.cos(0.3), math.sin(0.3)])
        assert np.allclose(d.derivative(np.array([1.0])), 0.0)

    @pytest.mark.parametrize("n", [2, 3])
    def test_fourier_unit_and_derivative(self, n):
        d = FourierRandom.random(n, (1.0, 3.0), modes=3, amplitude=0.5, seed=4)
        r = np.linspace(1.0, 3.0, 41)
        assert _unit_rows(d(r))
        h = 1e-6
        fd = (d(r + h) - d(r - h)) / (2 * h)
        assert np.allclose(d.derivative(r), fd, atol=1e-6)

    def test_cantor_flow_angle(self):
        c = staircase_profile(count=257).alpha.cantor
        f = CantorFlow(2, 0.5, c)
        assert np.allclose(f(np.array([1.2])), [[1.0, 0.0]])
        end = f(np.array([2.9]))[0]
        assert math.atan2(end[1], end[0]) == pytest.approx(0.5 * c.scale)

    def test_cantor_flow_step_matches_flow_at_partition(self):
        c = staircase_profile(count=257).alpha.cantor
        f = CantorFlow(3, 0.5, c)
        s = f.step(4)
        starts, _ = c.level_intervals(4)
        assert np.allclose(s(starts), f(starts), atol=1e-12)

    def test_piecewise_break_belongs_to_inner_piece(self):
        q = planar_rotation(2, 0.4)
        f = PiecewiseRotation(ConstantDirection(2), [2.0], [np.eye(2), q])
        assert np.allclose(f(np.array([2.0])), [[1, 0]])
        assert np.allclose(f.right(np.array([2.0])), [q[:, 0]])
        assert list(f.jump_radii()) == [2.0]

    @pytest.mark.parametrize(
        "field",
        [
            ConstantDirection(3, planar_rotation(3, 0.2, (1, 2))),
            FourierRandom.random(3, (1.0, 2.0), seed=1),
            PiecewiseRotation(ConstantDirection(2), [1.5], [np.eye(2), planar_rotation(2, 1.0)]),
        ],
    )
    def test_dict_round_trip(self, field):
        back = direction_from_dict(field.to_dict())
        r = np.linspace(1.0, 2.0, 11)
        assert np.allclose(back(r), field(r))


class TestCapFieldSet:
    def test_membership(self):
        E = symmetral_from_profile(jump_example(count=257))
        pts = np.array([[1.5, 0.0], [1.5 * math.cos(1.0), 1.5 * math.sin(1.0)], [2.5 * math.cos(0.6), 2.5 * math.sin(0.6)], [0.5, 0.0]])
        assert list(E.contains(pts)) == [True, True, False, False]

    @pytest.mark.parametrize("n", [2, 3])
    def test_volume_vs_monte_carlo(self, n, rng):
        p = smooth_profile(n, rng, count=257, window=(0.5, 1.5))
        E = CapFieldSet(p, FourierRandom.random(n, (0.5, 1.5), seed=2))
        x = rng.uniform(-1.5, 1.5, size=(400_000, n))
        mc = E.contains(x).mean() * 3.0**n
        se = 3.0**n * math.sqrt(E.volume() / 3.0**n / 400_000)
        assert E.volume() == pytest.approx(mc, abs=5 * se)

    def test_volume_of_sector(self):
        g = RadialGrid(1.0, 2.0, 65)
        E = symmetral_from_profile(make_profile(2, g, np.full(65, 0.5), interp="linear"))
        assert E.volume() == pytest.approx(0.5 * (4 - 1) * 1.0)

    def test_rotate(self):
        E = symmetral_from_profile(jump_example(count=257))
        q = planar_rotation(2, math.pi / 2)
        R = rotate(E, q)
        x = np.array([[0.0, 1.5]])
        assert R.contains(x)[0] and not E.contains(x)[0]

    def test_glue(self):
        p = jump_example(count=257)
        Fv = symmetral_from_profile(p)
        E = glue(Fv, Fv, 2.0, planar_rotation(2, 0.2))
        assert np.allclose(E.direction(np.array([1.5])), [[1, 0]])
        assert np.allclose(E.direction(np.array([2.5])), [[math.cos(0.2), math.sin(0.2)]])
        with pytest.raises(ValueError):
            glue(Fv, Fv, 3.0, np.eye(2))
        with pytest.raises(ValueError):
            glue(Fv, Fv, 2.0, np.ones((2, 2)))

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            CapFieldSet(jump_example(count=33), ConstantDirection(3))

    def test_multiarc_total_profile(self):
        g = RadialGrid(1.0, 2.0, 33)
        a = CapFieldSet(make_profile(2, g, np.full(33, 0.3), interp="linear"), ConstantDirection(2))
        b = CapFieldSet(make_profile(2, g, np.full(33, 0.4), interp="linear"), ConstantDirection(2, planar_rotation(2, math.pi)))
        M = MultiArcSet((a, b))
        assert np.allclose(M.total_profile().alpha_nodes, 0.7)
        assert M.contains(np.array([[-1.5, 0.0]]))[0]


class TestVoxel:
    def test_lookup_and_volume(self):
        occ = np.zeros((5, 5), dtype=bool)
        occ[2, 2] = True
        V = VoxelSet(occ, 0.5)
        assert V.lookup(np.array([[0.0, 0.0], [0.5, 0.0], [10.0, 0.0]])).tolist() == [True, False, False]
        assert V.volume() == 0.25

    def test_invalid(self):
        with pytest.raises(ValueError):
            VoxelSet(np.zeros(4, dtype=bool), 1.0)
        with pytest.raises(ValueError):
            VoxelSet(np.zeros((3, 3), dtype=bool), 0.0)

    @pytest.mark.parametrize("n,h", [(2, 1 / 128), (3, 1 / 32)])
    def test_rasterize_volume(self, n, h):
        E = symmetral_from_profile(jump_example(n, count=257))
        V = rasterize(E, h)
        # boundary cells are the only error source
        assert V.volume() == pytest.approx(E.volume(), rel=20 * h)

    def test_slice_measure_and_centre(self):
        p = jump_example(2, count=257)
        E = CapFieldSet(p, ConstantDirection(2, planar_rotation(2, 0.7)))
        V = rasterize(E, 1 / 256)
        assert slice_measure(V, 1.5) == pytest.approx(2 * 1.5 * math.pi / 3, rel=0.01)
        c = slice_center(V, 1.5)
        assert math.atan2(c[1], c[0]) == pytest.approx(0.7, abs=0.01)

    def test_shell_directions_are_unit(self):
        assert _unit_rows(shell_directions(3, 1000, seed=3))
        assert _unit_rows(shell_directions(2, 100))
