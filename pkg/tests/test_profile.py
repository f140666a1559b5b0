import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from sphsym.profile import (
    CantorComponent,
    Interval,
    Jump,
    RadialGrid,
    approx_limits,
    cantor_function,
    detect_jumps,
    jumps_from_sizes,
    make_profile,
    profile_from_v,
    rescaled_derivative,
    step_approximant,
    total_variation,
)
from sphsym.sphere_geometry import cap_area


@pytest.fixture
def grid():
    return RadialGrid(1.0, 3.0, 257)


class TestGrid:
    def test_nodes(self, grid):
        assert grid.nodes[0] == 1.0 and grid.nodes[-1] == 3.0
        assert grid.h == pytest.approx(2.0 / 256)

    @pytest.mark.parametrize("args", [(-1.0, 1.0, 5), (2.0, 1.0, 5), (0.0, 1.0, 1), (0.0, 1.0, 2.5), (0.0, float("inf"), 4)])
    def test_invalid(self, args):
        with pytest.raises(ValueError):
            RadialGrid(*args)

    def test_zero_inner_radius_allowed(self):
        assert RadialGrid(0.0, 1.0, 3).nodes[0] == 0.0

    def test_interval_membership(self):
        iv = Interval(1.0, 2.0, left_closed=False)
        assert not iv.contains(1.0) and iv.contains(2.0)


# C is Hoelder with exponent log 2 / log 3, so an input rounding error of
# 1e-16 can move the value by 2 * (1e-16) ** 0.63, about 1e-10
HOELDER_TOL = 2 * (1e-16) ** (math.log(2) / math.log(3))


class TestCantorFunction:
    @pytest.mark.parametrize("t,val", [(0, 0), (1, 1), (1 / 3, 0.5), (2 / 3, 0.5), (0.25, 1 / 3), (0.75, 2 / 3), (1 / 9, 0.25), (0.5, 0.5)])
    def test_known_values(self, t, val):
        assert cantor_function(t) == pytest.approx(val, abs=1e-12)

    @given(st.floats(0, 1), st.floats(0, 1))
    def test_monotone(self, s, t):
        lo, hi = sorted((s, t))
        assert cantor_function(lo) <= cantor_function(hi) + 1e-15

    @given(st.floats(0, 1))
    def test_self_similarity(self, t):
        assert cantor_function(t / 3) == pytest.approx(cantor_function(t) / 2, abs=HOELDER_TOL)

    @given(st.floats(0, 1))
    def test_symmetry(self, t):
        assert cantor_function(1 - t) == pytest.approx(1 - cantor_function(t), abs=HOELDER_TOL)


class TestCantorComponent:
    def test_variation_is_scale(self):
        c = CantorComponent((1.5, 2.5), -0.4)
        assert c.variation(1.0, 3.0) == pytest.approx(0.4)

    def test_measure_moments(self):
        # standard Cantor measure: mean 1/2, variance 1/8
        c = CantorComponent((1.0, 4.0), 2.0)
        m0 = c.integrate(lambda r: np.ones_like(r))
        m1 = c.integrate(lambda r: r)
        m2 = c.integrate(lambda r: r**2)
        mean = 1.0 + 3.0 * 0.5
        assert m0 == pytest.approx(2.0, rel=1e-12)
        assert m1 / m0 == pytest.approx(mean, rel=1e-12)
        var = m2 / m0 - (m1 / m0) ** 2
        assert var == pytest.approx(9.0 / 8.0, rel=1e-6)

    def test_partial_integral_matches_function(self):
        c = CantorComponent((0.0, 1.0), 1.0)
        for lo, hi in [(0.1, 0.7), (0.25, 0.75), (0.0, 0.3)]:
            assert c.integrate(lambda r: np.ones_like(r), lo, hi) == pytest.approx(c(hi) - c(lo), abs=1e-6)

    def test_step_points(self):
        c = CantorComponent((1.0, 2.0), 0.5)
        radii, rises = c.step_points(3)
        assert len(radii) == 8 and radii[-1] == 2.0
        assert rises.sum() == pytest.approx(0.5)

    def test_gaps_count(self):
        assert len(CantorComponent((0.0, 1.0), 1.0).gaps(4)) == 1 + 2 + 4 + 8

    @pytest.mark.parametrize("kw", [dict(support=(2.0, 1.0), scale=1.0), dict(support=(0.0, 1.0), scale=1.0, kind="smith_volterra"), dict(support=(0.0, 1.0), scale=1.0, depth=-1)])
    def test_invalid(self, kw):
        with pytest.raises(ValueError):
            CantorComponent(**kw)


class TestDecomposition:
    def test_jump_limits(self, grid):
        p = make_profile(2, grid, np.full(grid.count, math.pi / 3), [(2.0, math.pi / 3, math.pi / 6)], interp="linear")
        assert approx_limits(p, 2.0) == pytest.approx((math.pi / 6, math.pi / 3))
        assert p.alpha.total_variation() == pytest.approx(math.pi / 6)
        assert p.alpha.left_limit(2.0) == pytest.approx(math.pi / 3)
        assert p.alpha.right_limit(2.0) == pytest.approx(math.pi / 6)

    def test_inconsistent_jump(self, grid):
        with pytest.raises(ValueError, match="declared left value"):
            make_profile(2, grid, np.full(grid.count, 1.0), [(2.0, 0.5, 0.8)])

    def test_jump_outside_window(self, grid):
        with pytest.raises(ValueError):
            make_profile(2, grid, np.full(grid.count, 1.0), [(3.0, 1.0, 0.5)])

    def test_alpha_out_of_range(self, grid):
        with pytest.raises(ValueError):
            make_profile(2, grid, np.full(grid.count, 3.2))
        with pytest.raises(ValueError):
            make_profile(2, grid, np.full(grid.count, 0.5), [(2.0, 0.5, -0.1)])

    def test_ac_variation_of_sine(self):
        g = RadialGrid(0.0, 2 * math.pi, 2001)
        p = make_profile(3, g, lambda r: 1.5 + 0.5 * np.sin(r))
        assert p.alpha.total_variation() == pytest.approx(2.0, rel=1e-9)
        assert total_variation(p.alpha, (0.0, math.pi / 2)) == pytest.approx(0.5, rel=1e-9)

    def test_cantor_variation_counts_in_total(self, grid):
        p = make_profile(2, grid, np.full(grid.count, 1.0), cantor={"support": [1.5, 2.5], "scale": 0.3})
        assert p.alpha.total_variation() == pytest.approx(0.3)
        assert not p.alpha.is_purely_ac()

    def test_jumps_from_sizes(self, grid):
        ac = 1.0 + 0.1 * grid.nodes
        jumps = jumps_from_sizes(grid, ac, [(2.5, -0.2), (1.5, 0.3)], interp="linear")
        p = make_profile(3, grid, ac, jumps, interp="linear")
        assert [j.r for j in p.alpha.jumps] == [1.5, 2.5]
        assert p.alpha.right_limit(2.6) - (1.0 + 0.26) == pytest.approx(0.1)


class TestProfile:
    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_xi_is_cap_area_of_alpha(self, grid, n):
        p = make_profile(n, grid, lambda r: 1.0 + 0.3 * np.cos(r))
        r = np.linspace(1.0, 3.0, 37)
        assert np.allclose(p.xi(r), cap_area(n, 1.0, p.alpha(r)), atol=1e-12)
        assert np.allclose(p.v_at(r), r ** (n - 1) * p.xi(r), atol=1e-12)

    def test_zero_outside_window(self, grid):
        p = make_profile(2, grid, np.full(grid.count, 1.0))
        assert p.alpha_at(0.5) == 0.0 and p.v_at(3.5) == 0.0

    @pytest.mark.parametrize("n", [2, 3])
    def test_rescaled_derivative_chain_rule(self, grid, n):
        p = make_profile(n, grid, lambda r: 1.0 + 0.3 * np.sin(r))
        r = np.linspace(1.1, 2.9, 9)
        h = 1e-5
        fd = r ** (n - 1) * (p.xi(r + h) - p.xi(r - h)) / (2 * h)
        assert np.allclose(rescaled_derivative(p, r), fd, rtol=1e-6)

    def test_profile_from_v_round_trip(self, grid):
        p = make_profile(3, grid, lambda r: 0.7 + 0.2 * r, interp="linear")
        q = profile_from_v(3, grid, p.v_nodes)
        assert np.allclose(q.alpha_nodes, p.alpha_nodes, atol=1e-10)

    def test_representative_independence(self, grid):
        # a jump placed exactly at a node or a hair away gives the same limits
        on = make_profile(2, grid, np.full(grid.count, 1.0), [(grid.nodes[128], 1.0, 0.6)], interp="linear")
        off = make_profile(2, grid, np.full(grid.count, 1.0), [(grid.nodes[128] + 1e-13, 1.0, 0.6)], interp="linear")
        assert approx_limits(on, grid.nodes[128]) == pytest.approx(approx_limits(off, grid.nodes[128] + 1e-13))


class TestStepApproximant:
    def test_variation_preserved(self, grid):
        p = make_profile(2, grid, np.full(grid.count, 1.0), cantor={"support": [1.5, 2.5], "scale": 0.5})
        q = step_approximant(p, 5)
        assert q.alpha.cantor is None
        assert len(q.alpha.jumps) == 32
        assert q.alpha.total_variation() == pytest.approx(0.5)

    @pytest.mark.parametrize("k", [2, 4, 6])
    def test_uniform_convergence(self, grid, k):
        p = make_profile(2, grid, np.full(grid.count, 1.0), cantor={"support": [1.5, 2.5], "scale": 0.5})
        q = step_approximant(p, k)
        r = np.linspace(1.0, 3.0, 1001)
        assert np.max(np.abs(q.alpha(r) - p.alpha(r))) <= 0.5 / 2**k + 1e-12

    def test_needs_cantor(self, grid):
        with pytest.raises(ValueError):
            step_approximant(make_profile(2, grid, np.full(grid.count, 1.0)), 3)

    def test_support_must_end_inside(self, grid):
        p = make_profile(2, grid, np.full(grid.count, 1.0), cantor={"support": [1.5, 3.0], "scale": 0.5})
        with pytest.raises(ValueError):
            step_approximant(p, 3)


def test_detect_jumps(grid):
    vals = np.where(grid.nodes < 2.0, 1.0, 0.4) + 0.01 * grid.nodes
    found = detect_jumps(grid, vals)
    assert len(found) == 1
    assert found[0][0] == pytest.approx(2.0, abs=grid.h)
    assert found[0][1] == pytest.approx(-0.6, abs=0.01)
