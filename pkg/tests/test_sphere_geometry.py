import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import integrate

from sphsym.sphere_geometry import (
    alpha_from_xi,
    alpha_from_xi_newton,
    cap_area,
    cap_intersection_area,
    cap_symmetric_difference,
    cap_symmetric_difference_array,
    geodesic_distance,
    omega,
    sin_power_integral,
    sphere_area,
    sphere_measure,
)

angles = st.floats(0.0, math.pi, allow_nan=False)


def lens_oracle(a1, a2, delta):
    # integrate, over polar angle t around the first centre, the azimuthal
    # length of the circle of radius t lying inside the second cap
    def arc(t):
        st_, sd = math.sin(t), math.sin(delta)
        if st_ == 0 or sd == 0:
            return 2 * math.pi if math.acos(max(-1, min(1, math.cos(t) * math.cos(delta)))) < a2 else 0.0
        c = (math.cos(a2) - math.cos(t) * math.cos(delta)) / (st_ * sd)
        if c >= 1:
            return 0.0
        if c <= -1:
            return 2 * math.pi
        return 2 * math.acos(c)

    val, _ = integrate.quad(lambda t: arc(t) * math.sin(t), 0.0, a1, limit=400, epsabs=1e-13, epsrel=1e-12)
    return val


class TestConstants:
    @pytest.mark.parametrize("k,val", [(1, 2.0), (2, math.pi), (3, 4 * math.pi / 3), (4, math.pi**2 / 2)])
    def test_omega_table(self, k, val):
        assert omega(k) == pytest.approx(val, rel=1e-15)

    @pytest.mark.parametrize("k", range(1, 12))
    def test_omega_gamma(self, k):
        assert omega(k) == pytest.approx(math.pi ** (k / 2) / math.gamma(k / 2 + 1), rel=1e-13)

    def test_sphere_area(self):
        assert sphere_area(3, 2.0) == pytest.approx(16 * math.pi)
        assert sphere_area(2, 1.5) == pytest.approx(3 * math.pi)

    def test_negative_dimension(self):
        with pytest.raises(ValueError):
            omega(-1)


class TestCapArea:
    @given(angles)
    def test_n3_closed_form(self, b):
        assert cap_area(3, 1.0, b) == pytest.approx(2 * math.pi * (1 - math.cos(b)), rel=1e-12, abs=1e-15)

    @given(angles, st.floats(0.0, 10.0))
    def test_n2_is_arc_length(self, b, r):
        assert cap_area(2, r, b) == pytest.approx(2 * r * b, rel=1e-14, abs=1e-15)

    @pytest.mark.parametrize("n", [3, 4, 5, 7])
    @pytest.mark.parametrize("b", [0.0, 0.1, 1.0, math.pi / 2, 2.5, math.pi])
    def test_beta_function_vs_quadrature(self, n, b):
        assert cap_area(n, 1.3, b, method="beta") == pytest.approx(cap_area(n, 1.3, b, method="quad"), rel=1e-10, abs=1e-14)

    @pytest.mark.parametrize("n", [2, 3, 4, 6])
    def test_full_cap_is_sphere(self, n):
        assert cap_area(n, 1.7, math.pi) == pytest.approx(sphere_area(n, 1.7), rel=1e-12)

    def test_vectorized(self):
        b = np.linspace(0, math.pi, 11)
        assert np.allclose(cap_area(3, 2.0, b), [cap_area(3, 2.0, x) for x in b])

    @pytest.mark.parametrize("bad", [-0.1, math.pi + 1e-6, float("nan")])
    def test_rejects_bad_angle(self, bad):
        with pytest.raises(ValueError):
            cap_area(3, 1.0, bad)

    def test_rejects_bad_dimension(self):
        with pytest.raises(ValueError):
            cap_area(1, 1.0, 0.5)
        with pytest.raises(ValueError):
            cap_area(2.5, 1.0, 0.5)

    def test_sin_power_closed_forms(self):
        assert sin_power_integral(0, 1.2) == pytest.approx(1.2)
        assert sin_power_integral(2, math.pi) == pytest.approx(math.pi / 2)


class TestSphereMeasure:
    @pytest.mark.parametrize("n", [3, 4, 5, 6])
    def test_is_derivative_of_cap_area(self, n):
        b = np.linspace(0.2, 2.9, 9)
        h = 1e-6
        fd = (cap_area(n, 1.4, b + h) - cap_area(n, 1.4, b - h)) / (2 * h * 1.4)
        assert np.allclose(sphere_measure(n, 1.4, b), fd, rtol=1e-7)

    def test_n2_counts_endpoints(self):
        assert sphere_measure(2, 3.0, 0.5) == 2.0
        assert sphere_measure(2, 3.0, 0.0) == 0.0
        assert sphere_measure(2, 3.0, math.pi) == 0.0

    def test_degenerate_caps(self):
        assert sphere_measure(3, 1.0, 0.0) == 0.0
        assert sphere_measure(3, 1.0, math.pi) == 0.0


class TestInversion:
    @pytest.mark.parametrize("n", [2, 3, 4, 5, 8])
    @given(t=st.floats(0.0, 1.0))
    def test_round_trip(self, n, t):
        xi = t * sphere_area(n)
        a = alpha_from_xi(n, xi)
        assert cap_area(n, 1.0, a) == pytest.approx(xi, abs=1e-11 * sphere_area(n))

    @pytest.mark.parametrize("n", [2, 3])
    def test_newton_matches_closed_form(self, n):
        xi = np.linspace(0, sphere_area(n), 101)
        assert np.allclose(alpha_from_xi_newton(n, xi), alpha_from_xi(n, xi), atol=1e-10)

    def test_endpoints(self):
        assert alpha_from_xi(3, 0.0) == 0.0
        assert alpha_from_xi(3, 4 * math.pi) == math.pi

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            alpha_from_xi(3, 4 * math.pi * 1.01)
        with pytest.raises(ValueError):
            alpha_from_xi(3, -1.0)


class TestGeodesicDistance:
    def test_orthogonal(self):
        assert geodesic_distance([1, 0, 0], [0, 1, 0]) == pytest.approx(math.pi / 2)

    def test_antipodal(self):
        assert geodesic_distance([0, 1], [0, -1]) == pytest.approx(math.pi)

    def test_non_unit(self):
        with pytest.raises(ValueError):
            geodesic_distance([1, 1], [1, 0])

    @given(st.floats(-3, 3), st.floats(-3, 3))
    def test_circle_angle(self, s, t):
        d = geodesic_distance([math.cos(s), math.sin(s)], [math.cos(t), math.sin(t)])
        w = abs(s - t) % (2 * math.pi)
        assert d == pytest.approx(min(w, 2 * math.pi - w), abs=1e-7)


class TestOverlaps:
    @pytest.mark.parametrize(
        "a1,a2,delta,expected",
        [
            (1.0, 0.5, 0.2, 1.0),  # nested: overlap = smaller arc
            (1.0, 0.5, 1.2, 0.3),  # partial
            (0.5, 0.5, 2.0, 0.0),  # disjoint
            (3.0, 3.0, math.pi, 2 * (6.0 - math.pi)),  # wraps around
        ],
    )
    def test_arcs(self, a1, a2, delta, expected):
        assert cap_intersection_area(2, 2.0, a1, a2, delta) == pytest.approx(2.0 * expected)

    @pytest.mark.parametrize(
        "a1,a2,delta", [(1.0, 0.6, 0.9), (0.4, 1.3, 1.0), (2.0, 1.9, 2.5), (0.3, 0.3, 0.59), (1.0, 0.2, 0.5), (2.8, 2.5, 3.0)]
    )
    def test_lens_vs_polar_quadrature(self, a1, a2, delta):
        assert cap_intersection_area(3, 1.0, a1, a2, delta) == pytest.approx(lens_oracle(a1, a2, delta), abs=1e-8)

    @given(angles, angles, angles)
    def test_array_matches_scalar(self, a1, a2, d):
        for n in (2, 3):
            assert cap_symmetric_difference_array(n, a1, a2, d) == pytest.approx(
                cap_symmetric_difference(n, 1.0, a1, a2, d), abs=1e-9
            )

    def test_symmetric_difference_nested(self):
        # rotated smaller cap inside the larger: difference of areas
        assert cap_symmetric_difference(3, 2.0, 1.0, 0.5, 0.3) == pytest.approx(cap_area(3, 2.0, 1.0) - cap_area(3, 2.0, 0.5))

    def test_unsupported_dimension(self):
        with pytest.raises(NotImplementedError):
            cap_intersection_area(4, 1.0, 0.5, 0.5, 0.1)
