import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from renmoment import closed_form as cf
from renmoment import distributions as D
from renmoment.errors import AtPoleError, NotASingularityError, UnsupportedError, ValidationError
from helpers import SEVEN

GAMMA_E = 0.57721566490153286061


def direct_moment(spec, n):
    p = D.pdf_function(spec)
    sup = D.support(spec)
    f = lambda x: p(x) * x**n
    edges = sorted({sup.lower, sup.upper, 0.0, 1.0, -1.0, *D.kink_points(spec)})
    edges = [x for x in edges if sup.lower <= x <= sup.upper]
    return sum(quad(f, a, b, limit=400, epsabs=1e-13, epsrel=1e-12)[0] for a, b in zip(edges, edges[1:]))


class TestRenormalizedMoment:
    @pytest.mark.parametrize("spec,z,expected", [
        (D.cauchy(), 1, 1j),
        (D.levy(), 2, 1 / 3),
        (D.qexponential(1.25), 1, 2.0),
        (D.normal(), 4, 3.0),
        (D.laplace(2.0), 2, 0.5),
        (D.student_t(5.0), 2, 5 / 3),
    ])
    def test_examples(self, spec, z, expected):
        np.testing.assert_allclose(cf.renormalized_moment(spec, z).value, expected, rtol=1e-13, atol=1e-15)

    @pytest.mark.parametrize("name", list(SEVEN))
    def test_normalization(self, name):
        m0 = cf.renormalized_moment(SEVEN[name], 0)
        np.testing.assert_allclose(m0.value, 1.0, rtol=1e-14)
        assert m0.classification == cf.REGULAR

    @pytest.mark.parametrize("spec,n", [
        (D.qexponential(1.25), 1), (D.qexponential(1.1), 2), (D.qgaussian(1.2), 2), (D.qgaussian(1.2), 4),
        (D.normal(), 2), (D.normal(), 3), (D.student_t(5.0), 2), (D.student_t(5.0), 4),
        (D.laplace(1.0, 0.7), 1), (D.laplace(1.0, 0.7), 3), (D.laplace(2.0, -0.4), 2),
        (D.qexponential(0.5, 2.0), 3),
    ])
    def test_matches_convergent_integral(self, spec, n):
        assert D.classical_moment_exists(spec, n)
        value = cf.renormalized_moment(spec, n).value
        assert abs(value - direct_moment(spec, n)) / (1 + abs(value)) < 1e-7

    def test_cauchy_parity(self):
        for k in range(1, 5):
            assert cf.renormalized_moment(D.cauchy(), 2 * k).value == (-1) ** k
            assert cf.renormalized_moment(D.cauchy(), 2 * k - 1).value.real == 0.0

    @pytest.mark.parametrize("spec", [D.normal(), D.qgaussian(1.2), D.qgaussian(2.2), D.qgaussian(1.7, 2.0)])
    def test_odd_moments_exactly_zero(self, spec):
        for n in (1, 3, 5):
            assert cf.renormalized_moment(spec, n).value == 0

    @settings(max_examples=50)
    @given(st.sampled_from(list(SEVEN)), st.floats(-0.9, 3.0), st.floats(-1.0, 1.0))
    def test_continuity(self, name, x, y):
        spec = SEVEN[name]
        z = complex(x, y)
        try:
            a = cf.renormalized_moment(spec, z).value
            b = cf.renormalized_moment(spec, z + 1e-3).value
        except (AtPoleError, UnsupportedError):
            return
        if cf.distance_to_singularity(spec, z) < 0.05:
            return
        assert abs(a - b) < 1e-2 * (1 + abs(a))

    def test_at_pole_error(self):
        with pytest.raises(AtPoleError) as info:
            cf.renormalized_moment(D.levy(), 0.5)
        assert info.value.order == 1

    def test_removable_point_classified(self):
        # Gamma((z+1)/2) pole at z=-1 cancelled by the parity zero
        m = cf.renormalized_moment(D.normal(), -1)
        assert m.classification == cf.REMOVABLE
        np.testing.assert_allclose(m.value, -1j * math.sqrt(math.pi / 2), rtol=1e-9)


class TestFinitePart:
    @pytest.mark.parametrize("spec,z0,expected,classification", [
        (D.normal(), -1, -1j * math.sqrt(math.pi / 2), cf.REMOVABLE),
        (D.laplace(1.0, 0.0), -2, GAMMA_E - 1 - 0.5j * math.pi, cf.FINITE_PART),
        (D.student_t(5.0), -2, -1.0, cf.REGULAR),
    ])
    def test_examples(self, spec, z0, expected, classification):
        m = cf.finite_part_at_pole(spec, z0)
        np.testing.assert_allclose(m.value, expected, rtol=1e-9)
        assert m.classification == classification

    def test_regular_point_rejected(self):
        with pytest.raises(NotASingularityError):
            cf.finite_part_at_pole(D.normal(), 0.5)
        # the Levy density vanishes faster than any power at the origin
        with pytest.raises(NotASingularityError):
            cf.finite_part_at_pole(D.levy(), -1)

    def test_origin_divergent_regular_point_accepted(self):
        m = cf.finite_part_at_pole(D.cauchy(), -1)
        np.testing.assert_allclose(m.value, -1j, atol=1e-15)
        assert m.classification == cf.REGULAR

    def test_richardson_pairs_agree(self):
        f = lambda w: cf.raw_moment(D.normal(), w)
        emitted = cf.finite_part_at_pole(D.normal(), -3).value
        for eps in (1e-2, 5e-3):
            coarse = cf.symmetric_average(f, -3, eps)
            fine = cf.symmetric_average(f, -3, eps / 2)
            np.testing.assert_allclose((4 * fine - coarse) / 3, emitted, atol=1e-8)

    def test_symmetric_average_converges_quadratically(self):
        f = lambda w: cf.raw_moment(D.student_t(5.0), w)
        exact = -1.0
        e1 = abs(cf.symmetric_average(f, -2, 1e-2, levels=0) - exact)
        e2 = abs(cf.symmetric_average(f, -2, 5e-3, levels=0) - exact)
        np.testing.assert_allclose(e1 / e2, 4.0, rtol=0.05)


class TestPoles:
    def test_cauchy_entire(self):
        assert cf.pole_locations(D.cauchy(), 10) == []

    def test_levy_none_near_two(self):
        assert cf.pole_locations(D.levy(), 0.4, center=2.0) == []

    def test_normal_residue_probe(self):
        poles = [p.real for p, _ in cf.pole_locations(D.normal(), 4)]
        for z0 in (-1, -2, -3, -4):
            f = lambda w: cf.raw_moment(D.normal(), w)
            r = [abs(f(z0 + e) * e) for e in (1e-2, 1e-3, 1e-4)]
            is_pole = r[-1] > 1e-3 and abs(r[-1] - r[-2]) < 1e-2 * r[-1]
            assert is_pole == (z0 in poles)

    def test_laplace_poles_at_even_negative_integers(self):
        # Gamma(1+z) poles survive where the parity factor 1+e^{i pi z} is 2
        poles = cf.pole_locations(D.laplace(), 4.5)
        assert [(p.real, order) for p, order in poles] == [(-4.0, 1), (-2.0, 1)]

    def test_radius_limit(self):
        with pytest.raises(ValidationError):
            cf.pole_locations(D.normal(), 60)


class TestQSingularities:
    def test_qexp_first_order_vanishes(self):
        m = cf.q_singularity_finite_part(D.qexponential(1.5), 1)
        np.testing.assert_allclose(m.value, 0.0, atol=1e-6)
        assert m.classification == cf.FINITE_PART

    @pytest.mark.parametrize("n,expected", [(2, -12.0), (3, -192.0)])
    def test_qexp_higher_orders(self, n, expected):
        spec = D.qexponential((n + 2) / (n + 1))
        value = cf.q_singularity_finite_part(spec, n).value
        np.testing.assert_allclose(value, expected, rtol=1e-7)
        np.testing.assert_allclose(value, cf.qexp_singular_finite_part_formula(n), rtol=1e-7)

    @pytest.mark.parametrize("n", [2, 4])
    def test_qgauss_even_order_matches_digamma_form(self, n):
        spec = D.qgaussian((n + 3) / (n + 1))
        np.testing.assert_allclose(cf.q_singularity_finite_part(spec, n).value,
                                   cf.qgauss_singular_finite_part_formula(n), rtol=1e-7, atol=1e-8)

    def test_qgauss_odd_order_zero(self):
        assert cf.q_singularity_finite_part(D.qgaussian(2.0), 3).value == 0

    def test_not_singular(self):
        with pytest.raises(NotASingularityError):
            cf.q_singularity_finite_part(D.qexponential(1.4), 1)

    @pytest.mark.parametrize("spec,n,expected", [
        (D.qexponential(1.0, 2.0), 3, 0.75),
        (D.qgaussian(1.0), 2, 1.0),
        (D.qgaussian(1.0), 1, 0.0),
    ])
    def test_q_to_one(self, spec, n, expected):
        np.testing.assert_allclose(cf.q_to_one_limit(spec, n).value, expected, atol=1e-14)

    @pytest.mark.parametrize("q", [1 - 1e-6, 1 + 1e-6])
    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_q_limit_continuity(self, q, n):
        limit = cf.q_to_one_limit(D.qexponential(1.0, 1.5), n).value
        near = cf.renormalized_moment(D.qexponential(q, 1.5), n).value
        assert abs(near - limit) < 1e-4 * (1 + abs(limit))
