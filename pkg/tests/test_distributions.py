import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from renmoment import distributions as D
from renmoment.errors import ExpansionUnavailableError, UnsupportedError, ValidationError
from helpers import SEVEN


def fourier_by_quadrature(spec, k):
    p = D.pdf_function(spec)
    sup = D.support(spec)
    re = quad(p, 0, np.inf, weight="cos", wvar=k, limlst=200)[0]
    im = quad(p, 0, np.inf, weight="sin", wvar=k, limlst=200)[0]
    if sup.lower < 0:
        re += quad(lambda x: p(-x), 0, np.inf, weight="cos", wvar=k, limlst=200)[0]
        im -= quad(lambda x: p(-x), 0, np.inf, weight="sin", wvar=k, limlst=200)[0]
    return complex(re, im)


class TestSpec:
    def test_aliases_and_defaults(self):
        spec = D.DistributionSpec("qexp", {"q": 1.5})
        assert spec.kind == "QExponential"
        assert spec["lambda"] == 1.0
        assert D.DistributionSpec("t", {"ν": 3}).params == {"nu": 3.0}

    def test_json_round_trip(self):
        spec = D.laplace(2.0, -0.5)
        assert D.DistributionSpec.from_json(spec.to_json()) == spec

    @pytest.mark.parametrize("kind,params", [
        ("QExponential", {"q": 2.0}),
        ("QExponential", {"q": 1.5, "lambda": -1.0}),
        ("QGaussian", {"q": 3.0}),
        ("QGaussian", {"q": 1.5, "beta": 0.0}),
        ("StudentT", {"nu": 0.0}),
        ("Laplace", {"lambda": math.inf}),
    ])
    def test_invalid_parameters(self, kind, params):
        with pytest.raises(ValidationError):
            D.validate(D.DistributionSpec(kind, params))

    def test_unknown_parameter(self):
        with pytest.raises(ValidationError):
            D.DistributionSpec("Cauchy", {"q": 1.0})

    def test_missing_parameter(self):
        with pytest.raises(ValidationError):
            D.DistributionSpec("StudentT", {})

    def test_bad_json(self):
        with pytest.raises(ValidationError):
            D.DistributionSpec.from_json("{not json")


class TestDensity:
    def test_cauchy_at_zero(self):
        np.testing.assert_allclose(D.pdf_function(D.cauchy())(0.0), 1 / math.pi, rtol=1e-15)

    def test_levy_zero_outside_support(self):
        assert D.pdf_function(D.levy())(-1.0) == 0.0

    def test_compact_qexponential_support(self):
        spec = D.qexponential(0.5, 2.0)
        assert D.support(spec).upper == pytest.approx(1.0)
        assert D.pdf_function(spec)(1.5) == 0.0

    @pytest.mark.parametrize("name", list(SEVEN))
    def test_normalized(self, name):
        spec = SEVEN[name]
        p = D.pdf_function(spec)
        sup = D.support(spec)
        pts = sorted({0.0, *D.kink_points(spec)})
        total = 0.0
        edges = [sup.lower, *[x for x in pts if sup.lower < x < sup.upper], sup.upper]
        if sup.lower == 0.0:
            edges = [0.0, *[x for x in pts if x > 0.0], sup.upper]
        for a, b in zip(edges, edges[1:]):
            total += quad(p, a, b, limit=200, epsabs=1e-13)[0]
        np.testing.assert_allclose(total, 1.0, rtol=1e-9)

    def test_qgaussian_q2_is_cauchy(self):
        qg = D.pdf_function(D.qgaussian(2.0, 2**-0.5))
        c = D.pdf_function(D.cauchy())
        x = np.linspace(-20, 20, 41)
        np.testing.assert_allclose(qg(x), c(x), rtol=1e-13)


class TestCharacteristicFunction:
    def test_cauchy_closed_form(self):
        np.testing.assert_allclose(D.characteristic_function(D.cauchy(), 2.0), math.exp(-2.0), rtol=1e-14)

    @pytest.mark.parametrize("name", ["cauchy", "levy"])
    @pytest.mark.parametrize("k", [0.5, 1.0, 2.0])
    def test_matches_fourier_quadrature(self, name, k):
        spec = SEVEN[name]
        np.testing.assert_allclose(D.characteristic_function(spec, k), fourier_by_quadrature(spec, k),
                                   rtol=1e-6, atol=1e-8)

    def test_levy_closed_form(self):
        k = 1.3
        np.testing.assert_allclose(D.characteristic_function(D.levy(), k), cmath.exp(-cmath.sqrt(-2j * k)),
                                   rtol=1e-13)

    @pytest.mark.parametrize("name", list(SEVEN))
    def test_unit_at_origin_and_hermitian(self, name):
        spec = SEVEN[name]
        np.testing.assert_allclose(D.characteristic_function(spec, 0.0), 1.0, atol=1e-10)
        np.testing.assert_allclose(D.characteristic_function(spec, -0.7),
                                   np.conj(D.characteristic_function(spec, 0.7)), atol=1e-10)

    @pytest.mark.parametrize("spec", [D.qexponential(1.5), D.laplace(1.5, 0.3), D.student_t(3.0)])
    def test_other_kinds_match_quadrature(self, spec):
        np.testing.assert_allclose(D.characteristic_function(spec, 1.1), fourier_by_quadrature(spec, 1.1),
                                   rtol=1e-6, atol=1e-8)


class TestMomentExistence:
    def test_heavy_tails(self):
        assert not D.classical_moment_exists(D.cauchy(), 1)
        assert not D.classical_moment_exists(D.levy(), 1)
        assert D.classical_moment_exists(D.normal(), 7)

    def test_qexponential_threshold(self):
        # m_n exists iff q < (n+2)/(n+1)
        assert D.classical_moment_exists(D.qexponential(1.25), 1)
        assert not D.classical_moment_exists(D.qexponential(1.5), 1)
        assert not D.classical_moment_exists(D.qexponential(1.75), 1)

    def test_qgaussian_threshold(self):
        # m_n fails iff q > (n+3)/(n+1)
        assert D.classical_moment_exists(D.qgaussian(1.6), 2)
        assert not D.classical_moment_exists(D.qgaussian(1.7), 2)

    def test_strips(self):
        assert D.mellin_strip(D.cauchy()) == (-1.0, 1.0)
        assert D.mellin_strip(D.levy()) == (-math.inf, 0.5)
        assert D.mellin_strip(D.normal()) == (-1.0, math.inf)
        lo, hi = D.mellin_strip(D.student_t(5.0))
        assert hi == pytest.approx(5.0)


class TestAsymptoticExpansion:
    def test_cauchy_terms(self):
        exp = D.asymptotic_expansion(D.cauchy(), 1, "+inf")
        assert exp.n_divergent == 1
        (e0, c0), (e1, c1) = exp.terms[:2]
        assert (e0, e1) == (1.0, 3.0)
        np.testing.assert_allclose([c0, c1], [1 / math.pi, -1 / math.pi], rtol=1e-15)

    def test_light_tail_is_empty(self):
        assert D.asymptotic_expansion(D.normal(), 2, "+inf").terms == ()

    def test_missing_endpoint(self):
        with pytest.raises(ExpansionUnavailableError):
            D.asymptotic_expansion(D.levy(), 1, "-inf")
        with pytest.raises(ExpansionUnavailableError):
            D.asymptotic_expansion(D.cauchy(), 1, "middle")

    def test_shifted_qgaussian_unsupported(self):
        with pytest.raises(UnsupportedError):
            D.asymptotic_expansion(D.qgaussian(2.2, 1.0, 0.5), 1, "+inf")

    @settings(max_examples=40)
    @given(st.sampled_from(["cauchy", "levy", "qexp", "qgauss", "student"]),
           st.integers(1, 4), st.floats(30.0, 1e4))
    def test_series_reproduces_density_at_infinity(self, name, n, x):
        spec = SEVEN[name]
        exp = D.asymptotic_expansion(spec, n, "+inf", n_guard=8)
        series = sum(complex(c) * x ** (-e) for e, c in exp.extended(30))
        exact = D.pdf_function(spec)(x) * x**n
        np.testing.assert_allclose(series, exact, rtol=1e-8)

    @settings(max_examples=30)
    @given(st.sampled_from(["normal", "student", "laplace", "cauchy"]), st.floats(1e-3, 0.3))
    def test_series_reproduces_density_at_origin(self, name, x):
        spec = SEVEN[name]
        exp = D.asymptotic_expansion(spec, -2, "zero", n_guard=8)
        series = sum(complex(c) * x**e for e, c in exp.extended(30))
        np.testing.assert_allclose(series, D.pdf_function(spec)(x) * x**-2, rtol=1e-8)
