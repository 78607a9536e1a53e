"""Exact renormalized moment functions m_z, their poles, and finite parts.

m_z is the analytic continuation in the order z of the integral of
p(x) x^z, with (-1)^w = e^{i pi w} for the negative half line.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from . import specfun as sf
from .distributions import DistributionSpec, validate
from .errors import (AtPoleError, HigherOrderPoleError, NotASingularityError, PoleError,
                     UnsupportedError, ValidationError)
from .specfun import EULER_GAMMA, as_complex, expipi, gamma, upper_incomplete_gamma

REGULAR = "regular"
REMOVABLE = "removable-singularity-limit"
FINITE_PART = "finite-part-at-pole"
CLASSIFICATIONS = (REGULAR, REMOVABLE, FINITE_PART)

# step of the symmetric average; a power of two keeps z0 +- h exact
FINITE_PART_STEP = 2.0**-10
_POLE_TOL = 1e-9


@dataclass(frozen=True)
class MomentValue:
    value: complex
    classification: str = REGULAR

    def __post_init__(self):
        if self.classification not in CLASSIFICATIONS:
            raise ValueError(f"unknown classification {self.classification!r}")
        object.__setattr__(self, "value", as_complex(self.value))

    def __complex__(self):
        return self.value


# ---------------------------------------------------------------------------
# raw closed forms

def _gamma_ratio(a: complex, b: complex) -> complex:
    """Gamma(a)/Gamma(b), through log-gamma when both arguments are large."""
    if a.real > 20.0 and b.real > 20.0:
        return cmath.exp(sf.log_gamma(a) - sf.log_gamma(b))
    return gamma(a) * sf.rgamma(b)


def _pow(base: float, w: complex) -> complex:
    """base**w for positive real base."""
    if w.imag == 0.0:
        return complex(base**w.real, 0.0)
    return cmath.exp(w * math.log(base))


def _parity(z: complex) -> complex:
    return 1.0 + expipi(z)


def _laplace_shifted(lam: float, mu: float, z: complex) -> complex:
    a = lam * abs(mu)
    far = math.exp(-a) * gamma(z + 1.0)
    # S(z) = a^{z+1} sum_k a^k / (k! (z + k + 1))
    acc = 0j
    term = 1.0
    k = 0
    while True:
        den = z + k + 1.0
        if den == 0:
            raise PoleError(f"Laplace moment series has a pole at {-(k + 1)}", -(k + 1))
        inc = term / den
        acc += inc
        if k > a and abs(inc) < 1e-17 * abs(acc):
            break
        k += 1
        term *= a / k
    near = math.exp(a) * upper_incomplete_gamma(z + 1.0, a) + math.exp(-a) * _pow(a, z + 1.0) * acc
    if mu > 0:
        total = near + expipi(z) * far
    else:
        total = far + expipi(z) * near
    return total / (2.0 * _pow(lam, z))


def raw_moment(spec: DistributionSpec, z) -> complex:
    """Closed-form m_z evaluated literally; raises PoleError on any Gamma pole."""
    validate(spec)
    z = as_complex(z)
    kind, p = spec.kind, spec.params
    if kind == "Cauchy":
        return expipi(z / 2.0)
    if kind == "Levy":
        return gamma(0.5 - z) * _pow(2.0, -z) / math.sqrt(math.pi)
    if kind == "QExponential":
        lam, q = p["lambda"], p["q"]
        if q == 1.0:
            return gamma(z + 1.0) / _pow(lam, z)
        if q > 1.0:
            P = 1.0 / (q - 1.0)
            return gamma(z + 1.0) * _gamma_ratio(P - 1.0 - z, complex(P - 1.0)) / _pow(lam * (q - 1.0), z)
        pw = 1.0 / (1.0 - q)
        ratio = _gamma_ratio(complex(pw + 1.0), z + pw + 2.0)
        return (2.0 - q) * gamma(z + 1.0) * ratio / ((1.0 - q) * _pow(lam * (1.0 - q), z))
    if kind == "QGaussian":
        q, beta, mu = p["q"], p["beta"], p["mu"]
        if mu != 0.0:
            raise UnsupportedError("closed-form q-Gaussian moments are implemented for mu = 0 only")
        par = _parity(z)
        if par == 0:
            return 0j
        base = _pow(2.0, z / 2.0 - 1.0) * par * gamma((z + 1.0) / 2.0) * _pow(beta, z) / math.sqrt(math.pi)
        if q == 1.0:
            return base
        P = 1.0 / (q - 1.0)
        return base * _gamma_ratio(P - (1.0 + z) / 2.0, complex(P - 0.5)) / _pow(q - 1.0, z / 2.0)
    if kind == "Normal":
        par = _parity(z)
        if par == 0:
            return 0j
        return _pow(2.0, z / 2.0 - 1.0) * par * gamma((z + 1.0) / 2.0) / math.sqrt(math.pi)
    if kind == "StudentT":
        nu = p["nu"]
        par = _parity(z)
        if par == 0:
            return 0j
        num = par * _pow(nu, z / 2.0) * gamma((1.0 + z) / 2.0)
        return num * _gamma_ratio((nu - z) / 2.0, complex(nu / 2.0)) / (2.0 * math.sqrt(math.pi))
    if kind == "Laplace":
        lam, mu = p["lambda"], p["mu"]
        if mu == 0.0:
            par = _parity(z)
            if par == 0:
                return 0j
            return par * gamma(1.0 + z) / (2.0 * _pow(lam, z))
        return _laplace_shifted(lam, mu, z)
    raise UnsupportedError(kind)


# ---------------------------------------------------------------------------
# singularity structure

def _structure(spec: DistributionSpec):
    """(numerator Gamma args, denominator Gamma args, parity factor present).

    Each Gamma argument is an affine map (a0, a1) : z -> a0 + a1 z.
    Returns None for the shifted Laplace, handled separately.
    """
    kind, p = spec.kind, spec.params
    if kind == "Cauchy":
        return [], [], False
    if kind == "Levy":
        return [(0.5, -1.0)], [], False
    if kind == "QExponential":
        q = p["q"]
        if q > 1.0:
            P = 1.0 / (q - 1.0)
            return [(1.0, 1.0), (P - 1.0, -1.0)], [], False
        if q == 1.0:
            return [(1.0, 1.0)], [], False
        return [(1.0, 1.0)], [(1.0 / (1.0 - q) + 2.0, 1.0)], False
    if kind == "QGaussian":
        if p["mu"] != 0.0:
            raise UnsupportedError("closed-form q-Gaussian moments are implemented for mu = 0 only")
        if p["q"] == 1.0:
            return [(0.5, 0.5)], [], True
        P = 1.0 / (p["q"] - 1.0)
        return [(0.5, 0.5), (P - 0.5, -0.5)], [], True
    if kind == "Normal":
        return [(0.5, 0.5)], [], True
    if kind == "StudentT":
        return [(0.5, 0.5), (p["nu"] / 2.0, -0.5)], [], True
    if kind == "Laplace":
        if p["mu"] == 0.0:
            return [(1.0, 1.0)], [], True
        return None
    raise UnsupportedError(kind)


def _hits_pole(arg: float) -> bool:
    k = round(arg)
    return k <= 0 and abs(arg - k) <= _POLE_TOL * max(1.0, abs(arg))


def _near_integer(x: float) -> bool:
    return abs(x - round(x)) <= _POLE_TOL * max(1.0, abs(x))


def singularity_order(spec: DistributionSpec, z0) -> tuple:
    """(raw_singular, order) of the closed form at z0.

    ``raw_singular`` is True when a Gamma factor of the literal formula has a
    pole there; ``order`` is the net pole order after zeros of the other
    factors (<= 0 means removable).
    """
    z0 = as_complex(z0)
    if abs(z0.imag) > 0.0:
        return False, 0
    x = z0.real
    st = _structure(spec)
    if st is None:
        # shifted Laplace: every negative integer is a removable singularity
        hit = _near_integer(x) and round(x) <= -1
        return hit, 0
    num, den, parity = st
    n_num = sum(_hits_pole(a0 + a1 * x) for a0, a1 in num)
    if n_num == 0:
        return False, 0
    n_den = sum(_hits_pole(a0 + a1 * x) for a0, a1 in den)
    n_par = 1 if parity and _near_integer(x) and round(x) % 2 == 1 else 0
    return True, n_num - n_den - n_par


def pole_locations(spec: DistributionSpec, radius: float = 10.0, center=0.0):
    """True poles (net order >= 1) of m_z inside |z - center| <= radius.

    Returns a list of ``(pole, order)`` sorted by real part.
    """
    validate(spec)
    if radius > 50.0:
        raise ValidationError("pole search radius must be <= 50")
    center = as_complex(center)
    st = _structure(spec)
    if st is None:
        return []
    num, _, _ = st
    found = {}
    for a0, a1 in num:
        for k in range(0, int(2 * (radius + abs(center)) / abs(a1)) + 4):
            z = (-k - a0) / a1
            if abs(complex(z) - center) > radius + 1e-12:
                continue
            key = round(z, 9)
            if key in found:
                continue
            raw, order = singularity_order(spec, z)
            if raw and order >= 1:
                found[key] = (complex(z, 0.0), order)
    return sorted(found.values(), key=lambda t: t[0].real)


def _all_raw_singularities(spec: DistributionSpec, radius: float, center: complex):
    st = _structure(spec)
    if st is None:
        return [complex(-k, 0.0) for k in range(1, int(radius + abs(center)) + 2)]
    out = []
    for a0, a1 in st[0]:
        for k in range(0, int(2 * (radius + abs(center)) / abs(a1)) + 4):
            out.append(complex((-k - a0) / a1, 0.0))
    return out


def distance_to_singularity(spec: DistributionSpec, z0, skip_center: bool = False) -> float:
    """Distance from z0 to the nearest raw singularity of the closed form (inf if none).

    With ``skip_center`` a singularity located at z0 itself is ignored.
    """
    z0 = as_complex(z0)
    pts = _all_raw_singularities(spec, 50.0, z0)
    dists = [abs(p - z0) for p in pts]
    if skip_center:
        dists = [d for d in dists if d > _POLE_TOL * max(1.0, abs(z0))]
    return min(dists) if dists else math.inf


# ---------------------------------------------------------------------------
# finite parts

def symmetric_average(func, z0, h: float = FINITE_PART_STEP, levels: int = 1) -> complex:
    """Laurent zero-power coefficient of ``func`` at a simple pole or removable point.

    Averages func(z0 + h) and func(z0 - h), which cancels the 1/(z - z0) term
    exactly, then applies ``levels`` Richardson steps on the halved steps to
    remove the h^2, h^4, ... terms.
    """
    z0 = as_complex(z0)

    def s(step):
        return 0.5 * (func(z0 + step) + func(z0 - step))

    table = [s(h / 2.0**k) for k in range(levels + 1)]
    for level in range(1, levels + 1):
        factor = 4.0**level
        table = [(factor * table[k + 1] - table[k]) / (factor - 1.0) for k in range(len(table) - 1)]
    return table[0]


def renormalized_moment(spec: DistributionSpec, z) -> MomentValue:
    """Renormalized moment m_z from the closed form.

    Returns the literal value at regular orders and the limit at removable
    singularities of the formula.

    Raises
    ------
    AtPoleError
        If z is a true pole of m_z (see ``finite_part_at_pole``).
    """
    validate(spec)
    z = as_complex(z)
    raw, order = singularity_order(spec, z)
    if raw:
        if order >= 1:
            raise AtPoleError(f"{spec.kind} moment has a pole of order {order} at z = {z.real:g}",
                              z, order)
        if order < 0:
            return MomentValue(0j, REMOVABLE)
        zr = complex(round(z.real), 0.0) if _near_integer(z.real) else z
        return MomentValue(symmetric_average(lambda w: raw_moment(spec, w), zr), REMOVABLE)
    return MomentValue(raw_moment(spec, z), REGULAR)


def _origin_divergent(spec: DistributionSpec, z0: complex) -> bool:
    from .distributions import _origin_series, is_two_sided
    for mirrored in (False, True):
        if mirrored and not is_two_sided(spec):
            continue
        series = _origin_series(spec, mirrored)
        if series is None:
            continue
        terms = series[0](1)
        if terms and terms[0][1] != 0.0 and terms[0][0] + z0.real <= -1.0:
            return True
    return False


def finite_part_at_pole(spec: DistributionSpec, z0) -> MomentValue:
    """Minimal-subtraction value of m_z at a singular order z0.

    z0 must be a point where the closed form is singular, or a negative
    integer where the defining integral diverges at the origin.  True simple
    poles give the Laurent a0 coefficient (``finite-part-at-pole``); removable
    points give the limit; negative integers at which the continuation is
    already regular give its value with classification ``regular``.

    Raises
    ------
    NotASingularityError
        Nothing to remove at z0 (use ``renormalized_moment``).
    HigherOrderPoleError
        Net pole order above one.
    """
    validate(spec)
    z0 = as_complex(z0)
    raw, order = singularity_order(spec, z0)
    if raw:
        if order >= 2:
            raise HigherOrderPoleError(f"pole of order {order} at z = {z0.real:g}")
        zr = complex(round(z0.real), 0.0) if _near_integer(z0.real) else z0
        value = symmetric_average(lambda w: raw_moment(spec, w), zr)
        if order == 1:
            return MomentValue(value, FINITE_PART)
        return MomentValue(0j if order < 0 else value, REMOVABLE)
    negative_integer = z0.imag == 0.0 and z0.real < 0 and z0.real == math.floor(z0.real)
    if negative_integer and _origin_divergent(spec, z0):
        return MomentValue(raw_moment(spec, z0), REGULAR)
    raise NotASingularityError(f"{spec.kind} moment function is regular at z = {complex(z0)}; "
                               "use renormalized_moment")


def _with_q(spec: DistributionSpec, q: float) -> DistributionSpec:
    params = dict(spec.params)
    params["q"] = q
    return DistributionSpec(spec.kind, params)


def q_singular_points(spec: DistributionSpec, n: int):
    """Values of q at which the integer moment m_n, as a function of q, has a pole."""
    if spec.kind == "QExponential":
        return [(l + 2.0) / (l + 1.0) for l in range(1, n + 1)]
    if spec.kind == "QGaussian":
        out = []
        k = 0
        while (n + 1) / 2.0 - k > 0.5:
            out.append(1.0 + 1.0 / ((n + 1) / 2.0 - k))
            k += 1
        return out
    raise ValidationError("q-singularities exist only for QExponential and QGaussian")


def q_singularity_finite_part(spec: DistributionSpec, n: int) -> MomentValue:
    """Finite part in q of m_n at a q where m_n(q) has a pole.

    The primary point is q = (n+2)/(n+1) for the q-exponential and
    q = (n+3)/(n+1) for the q-Gaussian; the other poles of m_n(q) are accepted too.
    """
    validate(spec)
    if int(n) != n or n < 1:
        raise ValidationError("n must be a positive integer")
    n = int(n)
    q0 = spec["q"]
    points = q_singular_points(spec, n)
    match = [qs for qs in points if abs(qs - q0) <= 1e-12]
    if not match:
        raise NotASingularityError(f"q = {q0} is not a singular point of m_{n}; singular q: {points}")
    qs = match[0]
    if spec.kind == "QGaussian" and n % 2 == 1:
        return MomentValue(0j, FINITE_PART)
    others = [abs(x - qs) for x in points + [1.0] if x != qs]
    h = min([FINITE_PART_STEP] + [2.0 ** math.floor(math.log2(d / 8.0)) for d in others])
    # higher Laurent terms in q grow like 1/distance-to-next-pole, so two
    # Richardson levels are used here
    value = symmetric_average(lambda q: raw_moment(_with_q(spec, q.real), n), qs, h, levels=2)
    return MomentValue(value, FINITE_PART)


def q_to_one_limit(spec: DistributionSpec, n) -> MomentValue:
    """Limit q -> 1 of m_n (exponential / Gaussian moments)."""
    validate(spec)
    if spec.kind not in ("QExponential", "QGaussian"):
        raise ValidationError("q -> 1 limit applies to QExponential and QGaussian")
    return MomentValue(raw_moment(_with_q(spec, 1.0), n), REMOVABLE)


# ---------------------------------------------------------------------------
# reference expressions (closed forms written independently of raw_moment)

def qexp_singular_finite_part_formula(n: int, lam: float = 1.0) -> float:
    """Finite part of the q-exponential m_n at q = (n+2)/(n+1), from its digamma form."""
    psi = sf.digamma(n).real
    return -(n / lam**n) * (n + 1.0) ** (n - 1) * ((n + 1) * (psi + EULER_GAMMA) + 1 - n)


def qgauss_singular_finite_part_formula(n: int, beta: float = 1.0) -> float:
    """Finite part of the q-Gaussian m_n at q = (n+3)/(n+1), from its digamma form."""
    if n % 2 == 1:
        return 0.0
    psi = sf.digamma(n / 2.0).real
    pref = -2.0 * (1.0 / (n + 1.0)) ** (1.0 - n / 2.0) * beta**n * gamma((n + 1) / 2.0).real
    return pref * ((n + 1) * (psi + EULER_GAMMA) + 2 - n) / (2.0 * math.sqrt(math.pi) * gamma(n / 2.0).real)


def reference_negative_moment(spec: DistributionSpec, n: int) -> complex:
    """Closed values of m_{-n}, n = 1..4, for Normal, Student-t and Laplace (mu = 0)."""
    kind, p = spec.kind, spec.params
    rt = math.sqrt(math.pi / 2.0)
    if kind == "Normal":
        return {1: -1j * rt, 2: -1 + 0j, 3: 0.5j * rt, 4: 1.0 / 3.0 + 0j}[n]
    if kind == "StudentT":
        nu = p["nu"]
        beta_fn = math.exp((sf.log_gamma(nu / 2.0) + sf.log_gamma(0.5) - sf.log_gamma((nu + 1) / 2.0)).real)
        if n == 1:
            return -1j * math.pi / (math.sqrt(nu) * beta_fn)
        if n == 2:
            return -1 + 0j
        if n == 3:
            return 1j * math.sqrt(math.pi) * gamma((nu + 3) / 2.0).real / (nu**1.5 * gamma(nu / 2.0).real)
        if n == 4:
            return complex((2 + nu) / (3 * nu), 0.0)
    if kind == "Laplace" and p["mu"] == 0.0:
        lam = p["lambda"]
        if n == 1:
            return -0.5j * math.pi * lam
        if n == 2:
            return lam**2 * (math.log(lam) - 0.5j * math.pi + EULER_GAMMA - 1.0)
        if n == 3:
            return -0.25j * math.pi * lam**3
        if n == 4:
            return lam**4 / 6.0 * (math.log(lam) - 0.5j * math.pi + EULER_GAMMA - 11.0 / 6.0)
    raise UnsupportedError(f"no reference negative moment for {kind} at order -{n}")
