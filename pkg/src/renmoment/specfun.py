"""Complex special functions: gamma family, incomplete gamma, erf, zeta constants.

Everything works on Python ``complex`` internally.  ``ComplexValue`` is the
serializable form used at API boundaries.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .errors import DomainError, NonFiniteError, PoleError, UnsupportedError

EULER_GAMMA = 0.57721566490153286061
LOG_2PI = math.log(2.0 * math.pi)

# Lanczos approximation, g = 7, 9 terms
_LANCZOS_G = 7.0
_LANCZOS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)

# B_2, B_4, ..., B_20
_BERNOULLI = (
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
)

_ASYMPTOTIC_SHIFT = 15.0


@dataclass(frozen=True)
class ComplexValue:
    """Finite complex number with explicit real and imaginary parts."""

    re: float
    im: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.re) and math.isfinite(self.im)):
            raise NonFiniteError(f"non-finite complex value ({self.re}, {self.im})")

    @classmethod
    def from_complex(cls, z) -> "ComplexValue":
        z = as_complex(z)
        return cls(z.real, z.imag)

    def __complex__(self):
        return complex(self.re, self.im)

    def to_dict(self):
        return {"re": self.re, "im": self.im}


def as_complex(z) -> complex:
    """Convert numbers, ``ComplexValue`` or mpmath scalars to a finite ``complex``."""
    if isinstance(z, ComplexValue):
        return complex(z.re, z.im)
    try:
        c = complex(z)
    except TypeError as exc:
        raise NonFiniteError(f"cannot interpret {z!r} as a complex number") from exc
    if not (math.isfinite(c.real) and math.isfinite(c.imag)):
        raise NonFiniteError(f"non-finite value {c!r}")
    return c


def nonpositive_integer(z: complex):
    """Return the integer if ``z`` is exactly 0, -1, -2, ..., else None."""
    if z.imag == 0.0 and z.real <= 0.0 and z.real == math.floor(z.real):
        return int(z.real)
    return None


def _cispi_real(x: float):
    # (cos(pi x), sin(pi x)) with exact values on the half-integer lattice
    r = x - 2.0 * round(x / 2.0)
    if r == 0.0:
        return 1.0, 0.0
    if r == 0.5:
        return 0.0, 1.0
    if r == -0.5:
        return 0.0, -1.0
    if abs(r) == 1.0:
        return -1.0, 0.0
    return math.cos(math.pi * r), math.sin(math.pi * r)


def expipi(w) -> complex:
    """e^{i pi w} with exact argument reduction; equals (-1)^w on the principal branch."""
    w = as_complex(w)
    c, s = _cispi_real(w.real)
    scale = math.exp(-math.pi * w.imag) if w.imag else 1.0
    return complex(scale * c, scale * s)


def sinpi(z) -> complex:
    """sin(pi z) with exact reduction of the real part, accurate near integers."""
    z = as_complex(z)
    n = round(z.real)
    r = z.real - n
    y = math.pi * z.imag
    if z.imag == 0.0:
        val = complex(math.sin(math.pi * r), 0.0)
    else:
        val = complex(math.sin(math.pi * r) * math.cosh(y), math.cos(math.pi * r) * math.sinh(y))
    return -val if n % 2 else val


def _lanczos_sum(z):
    x = _LANCZOS[0]
    for i in range(1, len(_LANCZOS)):
        x += _LANCZOS[i] / (z + i)
    return x


def gamma(z) -> complex:
    """Gamma function on the complex plane.

    Parameters
    ----------
    z : complex-like
        Argument; must not be a non-positive integer.

    Returns
    -------
    complex

    Raises
    ------
    PoleError
        At z = 0, -1, -2, ...; ``pole`` carries the integer.
    """
    z = as_complex(z)
    k = nonpositive_integer(z)
    if k is not None:
        raise PoleError(f"gamma has a pole at {k}", k)
    if z.imag == 0.0 and z.real == math.floor(z.real) and z.real <= 171.0:
        return complex(float(math.factorial(int(z.real) - 1)), 0.0)
    if z.real < 0.5:
        return math.pi / (sinpi(z) * gamma(1.0 - z))
    if z.imag == 0.0:
        x = z.real - 1.0
        t = x + _LANCZOS_G + 0.5
        val = math.sqrt(2.0 * math.pi) * _lanczos_sum(x)
        # split the power to avoid overflow for x near the top of the range
        half = t ** ((x + 0.5) / 2.0)
        return complex(val * half * math.exp(-t) * half, 0.0)
    w = z - 1.0
    t = w + _LANCZOS_G + 0.5
    return cmath.sqrt(2.0 * math.pi) * _lanczos_sum(w) * cmath.exp((w + 0.5) * cmath.log(t) - t)


def rgamma(z) -> complex:
    """Reciprocal gamma 1/Gamma(z), entire; zero at non-positive integers."""
    z = as_complex(z)
    if nonpositive_integer(z) is not None:
        return 0j
    return 1.0 / gamma(z)


def _stirling_log(w: complex) -> complex:
    acc = (w - 0.5) * cmath.log(w) - w + 0.5 * LOG_2PI
    inv = 1.0 / w
    inv2 = inv * inv
    term = inv
    for k, b in enumerate(_BERNOULLI, start=1):
        acc += b / (2 * k * (2 * k - 1)) * term
        term *= inv2
    return acc


def _shift_count(z: complex) -> int:
    return max(0, int(math.ceil(_ASYMPTOTIC_SHIFT - z.real)))


def log_gamma(z) -> complex:
    """Principal log-gamma, analytic off the non-positive real axis.

    Satisfies log_gamma(z + 1) = log_gamma(z) + log(z) with the principal log.
    """
    z = as_complex(z)
    k = nonpositive_integer(z)
    if k is not None:
        raise PoleError(f"log_gamma has a pole at {k}", k)
    n = _shift_count(z)
    acc = _stirling_log(z + n)
    for j in range(n):
        acc -= cmath.log(z + j)
    return acc


def digamma(z) -> complex:
    """Digamma psi(z) = Gamma'(z)/Gamma(z)."""
    return polygamma(0, z)


def polygamma(m: int, z) -> complex:
    """Polygamma psi^(m)(z) for small non-negative integer m.

    Shifts the argument to Re z >= 15 with the recurrence, then sums the
    asymptotic series.
    """
    if int(m) != m or m < 0 or m > 8:
        raise UnsupportedError(f"polygamma order must be an integer in 0..8, got {m}")
    m = int(m)
    z = as_complex(z)
    k = nonpositive_integer(z)
    if k is not None:
        raise PoleError(f"polygamma({m}, z) has a pole at {k}", k)
    n = _shift_count(z)
    w = z + n
    inv = 1.0 / w
    inv2 = inv * inv
    if m == 0:
        acc = cmath.log(w) - 0.5 * inv
        term = inv2
        for j, b in enumerate(_BERNOULLI, start=1):
            acc -= b / (2 * j) * term
            term *= inv2
        for j in range(n):
            acc -= 1.0 / (z + j)
        return acc
    fm = math.factorial(m)
    acc = math.factorial(m - 1) * inv**m + 0.5 * fm * inv ** (m + 1)
    term = inv ** (m + 2)
    for j, b in enumerate(_BERNOULLI, start=1):
        acc += b * math.factorial(2 * j + m - 1) / math.factorial(2 * j) * term
        term *= inv2
    sign = -1.0 if m % 2 == 0 else 1.0
    acc *= sign
    for j in range(n):
        acc += sign * fm / (z + j) ** (m + 1)
    return acc


def _e1(x: float) -> float:
    # exponential integral E1 for x > 0
    if x <= 1.5:
        acc = -EULER_GAMMA - math.log(x)
        term = 1.0
        k = 1
        while True:
            term *= -x / k
            inc = term / k
            acc -= inc
            if abs(inc) < 1e-17 * abs(acc):
                break
            k += 1
        return acc
    return _upper_gamma_cf(0j, x).real


def _upper_gamma_cf(a: complex, x: float) -> complex:
    # modified Lentz evaluation of the Legendre continued fraction
    tiny = 1e-300
    b = x + 1.0 - a
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    for i in range(1, 2000):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < tiny:
            d = tiny
        c = b + an / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < 1e-16:
            break
    return cmath.exp(-x + a * math.log(x)) * h


def _lower_gamma_series(a: complex, x: float) -> complex:
    term = 1.0 / a
    acc = term
    n = 1
    while n < 5000:
        term *= x / (a + n)
        acc += term
        if abs(term) < 1e-17 * abs(acc):
            break
        n += 1
    return cmath.exp(-x + a * math.log(x)) * acc


def upper_incomplete_gamma(a, x: float) -> complex:
    """Upper incomplete gamma Gamma(a, x) for complex a and real x >= 0.

    Raises
    ------
    DomainError
        If x < 0, or x == 0 with Re a <= 0.
    """
    a = as_complex(a)
    x = float(x)
    if not math.isfinite(x) or x < 0.0:
        raise DomainError(f"upper_incomplete_gamma needs x >= 0, got {x}")
    if x == 0.0:
        if a.real <= 0.0:
            raise DomainError("Gamma(a, 0) diverges for Re a <= 0")
        return gamma(a)
    k = nonpositive_integer(a)
    if k is not None:
        val = _e1(x)
        ex = math.exp(-x)
        for j in range(1, -k + 1):
            val = (val - x ** (-j) * ex) / (-j)
        return complex(val, 0.0)
    if x > 1.5 and x > a.real - 1.0:
        return _upper_gamma_cf(a, x)
    return gamma(a) - _lower_gamma_series(a, x)


def erf(x: float) -> float:
    """Error function (real argument)."""
    return math.erf(x)


def erfc(x: float) -> float:
    """Complementary error function (real argument)."""
    return math.erfc(x)


def harmonic(nu: float) -> float:
    """Harmonic number H_nu = psi(nu + 1) + gamma_E, continued to real nu."""
    nu = float(nu)
    if nu < 0 and nu == math.floor(nu):
        raise PoleError(f"harmonic number has a pole at {int(nu)}", int(nu))
    if nu >= 0 and nu == math.floor(nu) and nu <= 64:
        return math.fsum(1.0 / k for k in range(1, int(nu) + 1))
    return (digamma(nu + 1.0) + EULER_GAMMA).real


def _zeta3() -> float:
    # zeta(3) = 5/2 sum (-1)^(k+1) / (k^3 binom(2k, k))
    terms = [(-1) ** (k + 1) / (k**3 * math.comb(2 * k, k)) for k in range(1, 40)]
    return 2.5 * math.fsum(terms)


def riemann_zeta(k: int) -> float:
    """Riemann zeta at k = 2, 3, 4."""
    if k == 2:
        return math.pi**2 / 6.0
    if k == 3:
        return _zeta3()
    if k == 4:
        return math.pi**4 / 90.0
    raise UnsupportedError(f"riemann_zeta only supports k in (2, 3, 4), got {k}")
