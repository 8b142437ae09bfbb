import numpy as np
import pytest

from cdlab import measure
from cdlab.measure import (
    QuadratureMeasure,
    arcsine,
    circle_lebesgue,
    from_points,
    interval_lebesgue,
    scale_by,
)


class TestCircleLebesgue:
    def test_m4_nodes_are_fourth_roots(self):
        mu = circle_lebesgue(4)
        got = np.sort_complex(mu.nodes)
        want = np.sort_complex(np.array([1, 1j, -1, -1j], dtype=complex))
        np.testing.assert_allclose(got, want, atol=1e-15)
        np.testing.assert_allclose(mu.weights, 0.25)

    def test_cubic_moment_cancels(self):
        mu = circle_lebesgue(256)
        assert abs(mu.integrate(lambda z: z ** 3)) <= 1e-14

    def test_monomials_orthonormal_to_degree_seven(self):
        mu = circle_lebesgue(256)
        v = mu.nodes[:, None] ** np.arange(8)[None, :]
        gram = (v.conj().T * mu.weights) @ v
        np.testing.assert_allclose(gram, np.eye(8), atol=1e-13)

    @pytest.mark.parametrize("m", [1, 2, 7, 64, 257])
    def test_total_mass_one(self, m):
        assert abs(circle_lebesgue(m).total_mass - 1.0) <= 1e-14

    def test_moment_sweep_kronecker(self):
        m = 16
        mu = circle_lebesgue(m)
        for j in range(-(m - 1), m):
            want = 1.0 if j == 0 else 0.0
            assert abs(mu.integrate(lambda z, j=j: z ** j) - want) <= 1e-13

    def test_rejects_m_zero(self):
        with pytest.raises(ValueError):
            circle_lebesgue(0)


class TestIntervalLebesgue:
    def test_m1_is_midpoint(self):
        mu = interval_lebesgue(1)
        np.testing.assert_allclose(mu.nodes, [0.0], atol=1e-15)
        np.testing.assert_allclose(mu.weights, [2.0])

    def test_m2_matches_moment_equations(self):
        # frozen from solving sum w x^j = int x^j dx for j <= 3 by hand
        mu = interval_lebesgue(2)
        np.testing.assert_allclose(
            np.sort(mu.nodes.real), [-0.5773502691896257, 0.5773502691896257],
            atol=1e-15)
        np.testing.assert_allclose(mu.weights, [1.0, 1.0], atol=1e-15)

    def test_second_moment(self):
        mu = interval_lebesgue(16)
        assert abs(mu.integrate(lambda z: z.real ** 2) - 2.0 / 3.0) <= 1e-14

    @pytest.mark.parametrize("m", [3, 8, 33])
    def test_nodes_match_reference_rule(self, m):
        x_ref, w_ref = np.polynomial.legendre.leggauss(m)
        mu = interval_lebesgue(m)
        np.testing.assert_allclose(mu.nodes.real, x_ref, atol=1e-14)
        np.testing.assert_allclose(mu.weights, w_ref, atol=1e-14)

    @pytest.mark.parametrize("m", [4, 16])
    def test_analytic_moments(self, m):
        mu = interval_lebesgue(m)
        for j in range(2 * m):
            want = 2.0 / (j + 1) if j % 2 == 0 else 0.0
            got = mu.integrate(lambda z, j=j: z.real ** j)
            assert abs(got - want) <= 1e-12

    def test_total_mass_two(self):
        assert abs(interval_lebesgue(40).total_mass - 2.0) <= 1e-14

    def test_rejects_m_zero(self):
        with pytest.raises(ValueError):
            interval_lebesgue(0)


class TestArcsine:
    def test_mass_is_exactly_one(self):
        assert arcsine(8).total_mass == 1.0

    def test_first_moment_vanishes(self):
        assert abs(arcsine(8).integrate(lambda z: z.real)) <= 1e-15

    def test_second_moment_half(self):
        assert abs(arcsine(32).integrate(lambda z: z.real ** 2) - 0.5) <= 1e-14

    def test_nodes_are_chebyshev(self):
        mu = arcsine(5)
        want = np.sort(np.cos((2 * np.arange(1, 6) - 1) * np.pi / 10))
        np.testing.assert_allclose(mu.nodes.real, want, atol=1e-15)

    def test_rejects_m_zero(self):
        with pytest.raises(ValueError):
            arcsine(0)


class TestFromPoints:
    def test_single_atom(self):
        mu = from_points([1.0], [1.0])
        assert len(mu) == 1
        assert mu.support_tag == "custom"
        assert mu.exactness == 0

    def test_two_atoms(self):
        mu = from_points([1.0, -1.0], [0.5, 0.5])
        assert abs(mu.total_mass - 1.0) <= 1e-15

    def test_nonpositive_weight_rejected(self):
        with pytest.raises(ValueError, match="onpositive"):
            from_points([1.0], [-1.0])

    def test_length_mismatch_rejected(self):
        with pytest.raises(ValueError):
            from_points([1.0, 2.0], [1.0])

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            from_points([], [])


class TestScaleBy:
    def test_zero_tilt_is_identity(self):
        mu = circle_lebesgue(16)
        nu = scale_by(mu, lambda z: np.zeros(z.shape))
        np.testing.assert_array_equal(nu.nodes, mu.nodes)
        np.testing.assert_array_equal(nu.weights, mu.weights)
        assert nu.exactness == mu.exactness

    def test_constant_tilt_scales_weights(self):
        mu = interval_lebesgue(8)
        nu = scale_by(mu, lambda z: np.ones(z.shape))
        np.testing.assert_allclose(nu.weights, mu.weights * np.exp(-1.0), rtol=1e-15)
        assert nu.exactness == 0
        assert nu.support_tag == mu.support_tag

    def test_nan_tilt_rejected(self):
        mu = circle_lebesgue(4)
        with pytest.raises(ValueError):
            scale_by(mu, lambda z: np.where(z.real > 0, np.nan, 0.0))


class TestValidation:
    def test_circle_tag_requires_unit_modulus(self):
        with pytest.raises(ValueError):
            QuadratureMeasure(np.array([0.5 + 0j]), np.array([1.0]),
                              exactness=0, support_tag="circle")

    def test_interval_tag_requires_real_nodes(self):
        with pytest.raises(ValueError):
            QuadratureMeasure(np.array([0.1 + 0.1j]), np.array([1.0]),
                              exactness=0, support_tag="interval")

    def test_interval_tag_requires_unit_box(self):
        with pytest.raises(ValueError):
            QuadratureMeasure(np.array([1.5 + 0j]), np.array([1.0]),
                              exactness=0, support_tag="interval")

    def test_nodes_are_immutable(self):
        mu = circle_lebesgue(4)
        with pytest.raises(ValueError):
            mu.nodes[0] = 0.0


class TestJson:
    @pytest.mark.parametrize("mk", [lambda: circle_lebesgue(6),
                                    lambda: interval_lebesgue(5),
                                    lambda: from_points([1j, -1j], [1.0, 2.0])])
    def test_round_trip(self, mk):
        mu = mk()
        back = QuadratureMeasure.from_json(mu.to_json())
        np.testing.assert_allclose(back.nodes, mu.nodes, atol=1e-16)
        np.testing.assert_allclose(back.weights, mu.weights, rtol=1e-16)
        assert back.support_tag == mu.support_tag
        assert back.exactness == mu.exactness


def test_newton_rule_agrees_with_reference_at_high_order():
    x_ref, w_ref = np.polynomial.legendre.leggauss(200)
    x, w = measure._gauss_legendre(200)
    np.testing.assert_allclose(x, x_ref, atol=1e-14)
    np.testing.assert_allclose(w, w_ref, atol=1e-14)
