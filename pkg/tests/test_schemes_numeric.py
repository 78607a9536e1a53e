import cmath
import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from renmoment import closed_form as cf
from renmoment import distributions as D
from renmoment import schemes_numeric as sn
from renmoment.errors import GridTooSmallError, IllConditionedFitError, OutsideStripError, ValidationError
from helpers import SEVEN, scheme_result

GAMMA_E = 0.57721566490153286061
INDEPENDENCE_SPECS = ["cauchy", "levy", "qexp", "qgauss"]

EXP_OVER_X = sn.SyntheticIntegrand(
    name="exp(-x)/x",
    func=lambda t: math.exp(-t) / t,
    origin_terms=lambda count: [(k - 1.0, (-1.0) ** k / math.factorial(k)) for k in range(count)],
    mp_func=lambda t: mp.exp(-t) / t,
)


def closed(spec, z):
    return complex(cf.renormalized_moment(spec, z).value)


class TestConfigs:
    def test_quadrature_defaults(self):
        cfg = sn.QuadratureConfig()
        assert (cfg.rel_tol, cfg.abs_tol) == (1e-10, 1e-12)

    @pytest.mark.parametrize("kwargs", [
        {"rel_tol": 0.0}, {"rel_tol": 1e-17}, {"max_subdivisions": 0}, {"semi_infinite_transform": "tanh"},
    ])
    def test_quadrature_invalid(self, kwargs):
        with pytest.raises(ValidationError):
            sn.QuadratureConfig(**kwargs)

    def test_ladder_must_ascend(self):
        with pytest.raises(ValidationError):
            sn.ExponentLadder(powers=(1.0, 0.5))
        with pytest.raises(ValidationError):
            sn.ExponentLadder(powers=(0.5, 0.5))

    def test_result_rejects_negative_error(self):
        with pytest.raises(ValidationError):
            sn.SchemeResult(1.0, "subtraction", -1.0)


class TestSubtraction:
    @pytest.mark.parametrize("spec,n,expected", [(D.cauchy(), 1, 1j), (D.levy(), 1, -1.0)])
    def test_examples(self, spec, n, expected):
        np.testing.assert_allclose(complex(sn.subtraction_scheme(spec, n).value), expected, atol=1e-12)

    def test_synthetic_origin_divergence(self):
        res = sn.subtraction_scheme(EXP_OVER_X)
        np.testing.assert_allclose(complex(res.value), -GAMMA_E, atol=1e-12)

    @pytest.mark.parametrize("name", INDEPENDENCE_SPECS)
    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_guard_terms_stable(self, name, n):
        spec = SEVEN[name]
        base = complex(sn.subtraction_scheme(spec, n, n_guard=4).value)
        doubled = complex(sn.subtraction_scheme(spec, n, n_guard=8).value)
        assert abs(base - doubled) < 1e-8

    @pytest.mark.parametrize("spec,n", [(D.normal(), -1), (D.student_t(5.0), -2), (D.laplace(), -3)])
    def test_two_sided_origin_divergence(self, spec, n):
        res = sn.subtraction_scheme(spec, n)
        np.testing.assert_allclose(complex(res.value), complex(cf.finite_part_at_pole(spec, n).value),
                                   atol=1e-8)


class TestSchemeIndependence:
    @pytest.mark.parametrize("name", INDEPENDENCE_SPECS)
    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_subtraction(self, name, n):
        res = scheme_result(SEVEN[name], "subtraction", n)
        assert abs(complex(res.value) - closed(SEVEN[name], n)) <= max(1e-6, 5 * res.err_estimate)

    @pytest.mark.parametrize("scheme", ["cutoff", "weighted"])
    @pytest.mark.parametrize("name", INDEPENDENCE_SPECS)
    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_fitted(self, scheme, name, n):
        res = scheme_result(SEVEN[name], scheme, n)
        gap = abs(complex(res.value) - closed(SEVEN[name], n))
        assert gap <= 1e-4
        assert gap <= max(res.err_estimate, 1e-13)


class TestCutoff:
    def test_levy_half_power_ladder(self):
        res = sn.cutoff_scheme(D.levy(), 1, sn.ExponentLadder(powers=(0.5,)), [1e2, 1e3, 1e4, 1e5, 1e6])
        np.testing.assert_allclose(complex(res.value), -1.0, atol=1e-5)

    def test_cauchy_symmetric(self):
        grid = [10.0 * 2**k for k in range(8)]
        res = sn.cutoff_scheme(D.cauchy(), 2, sn.ExponentLadder(powers=(1.0,)), grid, symmetric=True)
        np.testing.assert_allclose(complex(res.value), -1.0, atol=1e-5)

    def test_normal_convergent(self):
        # the Lambda=5 sample misses a 1.5e-5 Gaussian tail, which the constant fit averages in
        res = sn.cutoff_scheme(D.normal(), 2, sn.ExponentLadder(), [5.0, 10.0, 20.0])
        np.testing.assert_allclose(complex(res.value), 1.0, atol=1e-5)
        assert abs(complex(res.value) - 1.0) <= res.err_estimate

    def test_grid_too_small(self):
        with pytest.raises(GridTooSmallError):
            sn.cutoff_scheme(D.levy(), 1, sn.ExponentLadder(powers=(0.5,)), [1e2, 1e3])
        with pytest.raises(GridTooSmallError):
            sn.cutoff_scheme(D.levy(), 1, sn.ExponentLadder(powers=(0.5,)), [10.0, 12.0, 14.0, 16.0, 18.0])

    def test_grid_doubling_stability(self):
        ladder = sn.ExponentLadder(powers=(0.5,))
        grid = [1e2, 1e3, 1e4, 1e5, 1e6]
        a = sn.cutoff_scheme(D.levy(), 1, ladder, grid)
        b = sn.cutoff_scheme(D.levy(), 1, ladder, [2 * g for g in grid])
        residual = max(a.metadata.get("residual", 0.0), b.metadata.get("residual", 0.0), 1e-14)
        assert abs(complex(a.value) - complex(b.value)) < max(10 * residual, 1e-10)


class TestWeighted:
    def test_levy_grid(self):
        res = sn.weighted_scheme(D.levy(), 1, [1e-4 * 10 ** (k / 4) for k in range(9)])
        np.testing.assert_allclose(complex(res.value), -1.0, atol=1e-4)

    def test_qexp_first_moment(self):
        res = sn.weighted_scheme(D.qexponential(1.75), 1)
        np.testing.assert_allclose(complex(res.value), -2.0, atol=1e-4)

    def test_normal_analytic(self):
        res = sn.weighted_scheme(D.normal(), 2, [1e-3 * 2**k for k in range(8)], sn.ExponentLadder())
        np.testing.assert_allclose(complex(res.value), 1.0, atol=1e-8)


class TestFit:
    def test_linear(self):
        a0, _, residual = sn.fit_finite_part([(t, 3 + 2 * t) for t in (1, 2, 3, 4)], sn.ExponentLadder((1.0,)))
        np.testing.assert_allclose(complex(a0), 3.0, atol=1e-12)
        assert residual < 1e-10

    def test_inverse_sqrt(self):
        a0, _, _ = sn.fit_finite_part([(t, 5 + t**-0.5) for t in (4, 16, 64, 256)],
                                      sn.ExponentLadder((-0.5,)))
        np.testing.assert_allclose(complex(a0), 5.0, atol=1e-12)

    def test_log(self):
        a0, _, _ = sn.fit_finite_part([(t, 1 + math.log(t)) for t in (2, 4, 8, 16)],
                                      sn.ExponentLadder(has_log_term=True))
        np.testing.assert_allclose(complex(a0), 1.0, atol=1e-12)

    @settings(max_examples=50)
    @given(st.lists(st.floats(-3, 3), min_size=4, max_size=4),
           st.sampled_from([(-1.0, -0.5, 0.5), (-0.5, 1.0, 1.5), (-2.0, -1.0, 0.25)]))
    def test_exact_models(self, coeffs, powers):
        a0_true, *rest = coeffs
        grid = [1.5**k for k in range(10)]
        samples = [(t, a0_true + sum(c * t**p for c, p in zip(rest, powers))) for t in grid]
        a0, _, residual = sn.fit_finite_part(samples, sn.ExponentLadder(powers))
        assert residual < 1e-10
        np.testing.assert_allclose(complex(a0), a0_true, atol=1e-10)

    def test_ill_conditioned(self):
        with pytest.raises(IllConditionedFitError):
            sn.fit_finite_part([(1 + 1e-9 * k, 1.0) for k in range(6)], sn.ExponentLadder((1.0, 2.0)))

    def test_too_few_samples(self):
        with pytest.raises(GridTooSmallError):
            sn.fit_finite_part([(1.0, 1.0), (2.0, 2.0), (3.0, 3.0)], sn.ExponentLadder((1.0,)))


class TestMellin:
    def test_levy_quarter(self):
        expected = 1.7200799746490390708  # mpmath quadrature, 30 digits
        np.testing.assert_allclose(complex(sn.mellin_density_numeric(D.levy(), 0.25).value), expected,
                                   rtol=1e-10)

    def test_normalization(self):
        np.testing.assert_allclose(complex(sn.mellin_density_numeric(D.levy(), 0.0).value), 1.0, rtol=1e-10)

    def test_cauchy_half(self):
        np.testing.assert_allclose(complex(sn.mellin_density_numeric(D.cauchy(), 0.5).value),
                                   cmath.exp(0.25j * math.pi), rtol=1e-9)

    def test_normal_negative_half(self):
        expected = 0.86003998732451952974 - 0.86003998732451952974j  # mpmath quadrature
        np.testing.assert_allclose(complex(sn.mellin_density_numeric(D.normal(), -0.5).value), expected,
                                   rtol=1e-9)

    def test_outside_strip(self):
        with pytest.raises(OutsideStripError):
            sn.mellin_density_numeric(D.levy(), 0.75)
        with pytest.raises(OutsideStripError):
            sn.mellin_cf_numeric(D.cauchy(), 0.5)

    @pytest.mark.parametrize("name", list(SEVEN))
    def test_random_points_in_strip(self, name):
        spec = SEVEN[name]
        lo, hi = D.mellin_strip(spec)
        lo, hi = max(lo, -0.9), min(hi, 3.0)
        rng = np.random.default_rng(7)
        for x, y in zip(rng.uniform(lo + 0.05, hi - 0.05, 10), rng.uniform(-1, 1, 10)):
            z = complex(x, y)
            try:
                exact = closed(spec, z)
            except Exception:
                continue
            got = complex(sn.mellin_density_numeric(spec, z).value)
            assert abs(got - exact) <= 1e-7 * max(1.0, abs(exact))

    @pytest.mark.parametrize("spec,z,expected", [
        (D.cauchy(), -0.5, cmath.exp(-0.25j * math.pi)),
        (D.levy(), -0.5, math.sqrt(2 / math.pi)),
    ])
    def test_characteristic_function_route(self, spec, z, expected):
        np.testing.assert_allclose(complex(sn.mellin_cf_numeric(spec, z).value), expected, rtol=1e-7)

    @pytest.mark.parametrize("name", list(SEVEN))
    def test_characteristic_function_route_all(self, name):
        spec = SEVEN[name]
        z = -0.4 + 0.2j
        np.testing.assert_allclose(complex(sn.mellin_cf_numeric(spec, z).value), closed(spec, z), rtol=1e-7)

    def test_cauchy_cf_extrapolates_to_one(self):
        zs = [-0.1, -0.05, -0.025]
        vals = [complex(sn.mellin_cf_numeric(D.cauchy(), z).value) for z in zs]
        # quadratic extrapolation to z = 0
        coef = np.polyfit(zs, np.array(vals).real, 2)
        np.testing.assert_allclose(coef[-1], 1.0, atol=1e-4)
