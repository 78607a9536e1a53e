import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from renmoment import specfun as sf
from renmoment.errors import DomainError, NonFiniteError, PoleError, UnsupportedError

# Frozen mpmath values at 30 digits (scripts/generate_oracles.py).
GAMMA_ORACLE = {
    0.3 + 0.7j: (0.30968625674374915557 - 0.85678775293927057254j,
                 -0.093170312498134180893 - 1.22395736571368873j,
                 -0.44720792029956117395 + 1.8918108552185266687j,
                 -0.45926685395208053199 - 1.809695401592478408j),
    -2.5 + 0.1j: (-0.89650770119975877642 - 0.099318350500568559142j,
                  -0.10314924404281920289 - 9.314444268359838115j,
                  1.1036973777788084095 + 0.92269929145859890393j,
                  8.6261906773959991592 - 0.010809084016005464029j),
    7.25 - 3j: (543.32807551791771095 + 268.42399878597702941j,
                6.4069083604374594512 - 5.8243197242100499458j,
                2.0001853721896921111 - 0.41765991886158009434j,
                0.12364641913235495011 + 0.054787444829563070121j),
    0.5: (1.7724538509055160273, None, -1.9635100260214234794, 4.9348022005446793094),
    -3.5: (0.27008820585226910892, -1.3090066849930420464 - 12.566370614359172954j,
           1.3888709263595289015, 9.6208792980503482437),
}

INCOMPLETE_ORACLE = [
    (0.5, 2.0, 0.080647117960317690789),
    (-1.5 + 0.5j, 0.7, 0.32947354409848933083 - 0.0021347212955137618346j),
    (-2.0, 3.0, 0.00099229406178030281966),
    (2.5, 0.1, 1.3281624080976364977),
]

complex_points = st.builds(
    complex,
    st.floats(-12.0, 12.0, allow_nan=False),
    st.floats(-6.0, 6.0, allow_nan=False),
).filter(lambda z: min(abs(z - round(z.real)), abs(z)) > 1e-3)


class TestGammaOracle:
    @pytest.mark.parametrize("z", list(GAMMA_ORACLE))
    def test_gamma(self, z):
        np.testing.assert_allclose(sf.gamma(z), GAMMA_ORACLE[z][0], rtol=1e-13)

    @pytest.mark.parametrize("z", [z for z in GAMMA_ORACLE if GAMMA_ORACLE[z][1] is not None])
    def test_log_gamma_principal_branch(self, z):
        np.testing.assert_allclose(sf.log_gamma(z), GAMMA_ORACLE[z][1], rtol=1e-13)

    @pytest.mark.parametrize("z", list(GAMMA_ORACLE))
    def test_digamma(self, z):
        np.testing.assert_allclose(sf.digamma(z), GAMMA_ORACLE[z][2], rtol=1e-12)

    @pytest.mark.parametrize("z", list(GAMMA_ORACLE))
    def test_trigamma(self, z):
        np.testing.assert_allclose(sf.polygamma(1, z), GAMMA_ORACLE[z][3], rtol=1e-12)

    def test_positive_integers_exact(self):
        for k in range(1, 15):
            assert sf.gamma(k) == math.factorial(k - 1)

    @pytest.mark.parametrize("k", [0, -1, -7])
    def test_poles_raise(self, k):
        with pytest.raises(PoleError):
            sf.gamma(k)
        with pytest.raises(PoleError):
            sf.digamma(k)

    def test_reciprocal_gamma_vanishes_at_poles(self):
        assert sf.rgamma(-3) == 0

    def test_non_finite_input(self):
        with pytest.raises(NonFiniteError):
            sf.gamma(complex(math.nan, 0.0))


class TestGammaProperties:
    @settings(max_examples=1000)
    @given(complex_points)
    def test_recurrence(self, z):
        np.testing.assert_allclose(sf.gamma(z + 1), z * sf.gamma(z), rtol=1e-10)

    @settings(max_examples=1000)
    @given(complex_points)
    def test_reflection(self, z):
        lhs = sf.gamma(z) * sf.gamma(1 - z) * sf.sinpi(z)
        np.testing.assert_allclose(lhs, math.pi, rtol=1e-10)

    @settings(max_examples=200)
    @given(complex_points)
    def test_log_gamma_exponentiates_to_gamma(self, z):
        np.testing.assert_allclose(cmath.exp(sf.log_gamma(z)), sf.gamma(z), rtol=1e-10)

    @settings(max_examples=200)
    @given(complex_points)
    def test_digamma_recurrence(self, z):
        np.testing.assert_allclose(sf.digamma(z + 1), sf.digamma(z) + 1 / z, rtol=1e-10, atol=1e-10)

    @settings(max_examples=200)
    @given(complex_points)
    def test_trigamma_recurrence(self, z):
        np.testing.assert_allclose(sf.polygamma(1, z), sf.polygamma(1, z + 1) + 1 / z**2,
                                   rtol=1e-9, atol=1e-10)


class TestIncompleteGamma:
    @pytest.mark.parametrize("a,x,expected", INCOMPLETE_ORACLE)
    def test_oracle(self, a, x, expected):
        np.testing.assert_allclose(sf.upper_incomplete_gamma(a, x), expected, rtol=1e-11)

    def test_exponential_integral(self):
        # Gamma(1, x) = e^-x
        np.testing.assert_allclose(sf.upper_incomplete_gamma(1.0, 2.3), math.exp(-2.3), rtol=1e-13)

    def test_domain(self):
        with pytest.raises(DomainError):
            sf.upper_incomplete_gamma(0.5, -1.0)
        with pytest.raises(DomainError):
            sf.upper_incomplete_gamma(-0.5, 0.0)


class TestSmallFunctions:
    def test_zeta(self):
        np.testing.assert_allclose(sf.riemann_zeta(3), 1.2020569031595942854, rtol=1e-15)
        assert sf.riemann_zeta(2) == math.pi**2 / 6
        with pytest.raises(UnsupportedError):
            sf.riemann_zeta(5)

    def test_harmonic(self):
        np.testing.assert_allclose(sf.harmonic(2.5), 1.6803723055467760478, rtol=1e-13)
        assert sf.harmonic(3) == 1 + 1 / 2 + 1 / 3
        with pytest.raises(PoleError):
            sf.harmonic(-2)

    def test_expipi_exact_on_half_integers(self):
        assert sf.expipi(1) == -1
        assert sf.expipi(0.5) == 1j
        assert sf.expipi(-0.5) == -1j

    def test_erf(self):
        np.testing.assert_allclose(sf.erf(0.5) + sf.erfc(0.5), 1.0, rtol=1e-15)

    def test_complex_value_rejects_non_finite(self):
        with pytest.raises(NonFiniteError):
            sf.ComplexValue(math.inf, 0.0)
        assert sf.ComplexValue.from_complex(1 + 2j).to_dict() == {"re": 1.0, "im": 2.0}
