"""The seven supported distributions: densities, supports, characteristic
functions, classical-moment tests and asymptotic expansions of p(x) x^n."""
from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass, field
from typing import Callable, Mapping

import mpmath as mp
import numpy as np
from scipy import integrate, special

from . import specfun as sf
from .errors import ExpansionUnavailableError, UnsupportedError, ValidationError

KINDS = ("Cauchy", "Levy", "QExponential", "QGaussian", "Normal", "StudentT", "Laplace")

_ALIASES = {
    "cauchy": "Cauchy",
    "levy": "Levy",
    "lévy": "Levy",
    "qexponential": "QExponential",
    "qexp": "QExponential",
    "q-exponential": "QExponential",
    "qgaussian": "QGaussian",
    "qgauss": "QGaussian",
    "q-gaussian": "QGaussian",
    "normal": "Normal",
    "gaussian": "Normal",
    "studentt": "StudentT",
    "student-t": "StudentT",
    "student_t": "StudentT",
    "student": "StudentT",
    "t": "StudentT",
    "laplace": "Laplace",
}

_PARAM_NAMES = {
    "Cauchy": (),
    "Levy": (),
    "QExponential": ("lambda", "q"),
    "QGaussian": ("q", "beta", "mu"),
    "Normal": (),
    "StudentT": ("nu",),
    "Laplace": ("lambda", "mu"),
}

_DEFAULTS = {
    "QExponential": {"lambda": 1.0},
    "QGaussian": {"beta": 1.0, "mu": 0.0},
    "Laplace": {"lambda": 1.0, "mu": 0.0},
}

_PARAM_ALIASES = {"lam": "lambda", "λ": "lambda", "β": "beta", "μ": "mu", "ν": "nu"}

ENDPOINTS = ("zero", "zero-", "+inf", "-inf")


def canonical_kind(kind: str) -> str:
    if kind in KINDS:
        return kind
    key = str(kind).strip().lower()
    if key not in _ALIASES:
        raise ValidationError(f"unknown distribution kind {kind!r}; expected one of {KINDS}")
    return _ALIASES[key]


@dataclass(frozen=True)
class DistributionSpec:
    """Tagged distribution descriptor.

    ``params`` uses the names ``lambda`` (rate), ``q`` (entropic index),
    ``beta`` (scale), ``mu`` (location) and ``nu`` (degrees of freedom).
    Missing optional parameters take their defaults.
    """

    kind: str
    params: Mapping[str, float] = field(default_factory=dict)

    def __post_init__(self):
        kind = canonical_kind(self.kind)
        allowed = _PARAM_NAMES[kind]
        merged = dict(_DEFAULTS.get(kind, {}))
        for name, value in dict(self.params).items():
            name = _PARAM_ALIASES.get(name, name)
            if name not in allowed:
                raise ValidationError(f"{kind} has no parameter {name!r}; allowed: {allowed}")
            try:
                merged[name] = float(value)
            except (TypeError, ValueError) as exc:
                raise ValidationError(f"parameter {name!r} must be a real number") from exc
        missing = [p for p in allowed if p not in merged]
        if missing:
            raise ValidationError(f"{kind} requires parameters {missing}")
        ordered = {p: merged[p] for p in allowed}
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "params", ordered)

    def __getitem__(self, name):
        return self.params[name]

    def to_dict(self):
        return {"kind": self.kind, "params": dict(self.params)}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data) -> "DistributionSpec":
        if not isinstance(data, Mapping) or "kind" not in data:
            raise ValidationError("distribution JSON must be an object with a 'kind' field")
        spec = cls(data["kind"], data.get("params", {}) or {})
        validate(spec)
        return spec

    @classmethod
    def from_json(cls, text: str) -> "DistributionSpec":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"invalid distribution JSON: {exc}") from exc
        return cls.from_dict(data)


def cauchy() -> DistributionSpec:
    return DistributionSpec("Cauchy")


def levy() -> DistributionSpec:
    return DistributionSpec("Levy")


def qexponential(q: float, lam: float = 1.0) -> DistributionSpec:
    return _checked(DistributionSpec("QExponential", {"lambda": lam, "q": q}))


def qgaussian(q: float, beta: float = 1.0, mu: float = 0.0) -> DistributionSpec:
    return _checked(DistributionSpec("QGaussian", {"q": q, "beta": beta, "mu": mu}))


def normal() -> DistributionSpec:
    return DistributionSpec("Normal")


def student_t(nu: float) -> DistributionSpec:
    return _checked(DistributionSpec("StudentT", {"nu": nu}))


def laplace(lam: float = 1.0, mu: float = 0.0) -> DistributionSpec:
    return _checked(DistributionSpec("Laplace", {"lambda": lam, "mu": mu}))


def validate(spec: DistributionSpec) -> bool:
    """Check parameter domains; returns True or raises ``ValidationError``."""
    p = spec.params
    for name, value in p.items():
        if not math.isfinite(value):
            raise ValidationError(f"parameter {name} must be finite, got {value}")
    kind = spec.kind
    if kind in ("QExponential", "Laplace") and not p["lambda"] > 0:
        raise ValidationError(f"{kind} rate lambda must be positive, got {p['lambda']}")
    if kind == "QExponential" and not p["q"] < 2.0:
        raise ValidationError(f"q-exponential needs q < 2 to be normalizable, got {p['q']}")
    if kind == "QGaussian":
        if not 1.0 <= p["q"] < 3.0:
            raise ValidationError(f"q-Gaussian needs 1 <= q < 3, got {p['q']}")
        if not p["beta"] > 0:
            raise ValidationError(f"q-Gaussian scale beta must be positive, got {p['beta']}")
    if kind == "StudentT" and not p["nu"] > 0:
        raise ValidationError(f"Student-t degrees of freedom must be positive, got {p['nu']}")
    return True


def _checked(spec: DistributionSpec) -> DistributionSpec:
    validate(spec)
    return spec


@dataclass(frozen=True)
class SupportInterval:
    lower: float
    upper: float

    def __post_init__(self):
        if not self.lower < self.upper:
            raise ValidationError(f"empty support [{self.lower}, {self.upper}]")

    def contains(self, x: float) -> bool:
        return self.lower <= x <= self.upper


def support(spec: DistributionSpec) -> SupportInterval:
    validate(spec)
    if spec.kind == "Levy":
        return SupportInterval(0.0, math.inf)
    if spec.kind == "QExponential":
        lam, q = spec["lambda"], spec["q"]
        if q < 1.0:
            return SupportInterval(0.0, 1.0 / (lam * (1.0 - q)))
        return SupportInterval(0.0, math.inf)
    return SupportInterval(-math.inf, math.inf)


def is_two_sided(spec: DistributionSpec) -> bool:
    return support(spec).lower < 0.0


def _log_gamma_ratio(a: float, b: float) -> float:
    # log Gamma(a) - log Gamma(b) for positive real a, b
    return (sf.log_gamma(a) - sf.log_gamma(b)).real


def _qgauss_norm(q: float, beta: float) -> float:
    if q == 1.0:
        return 1.0 / (math.sqrt(2.0 * math.pi) * beta)
    P = 1.0 / (q - 1.0)
    return math.sqrt(q - 1.0) * math.exp(_log_gamma_ratio(P, P - 0.5)) / (math.sqrt(2.0 * math.pi) * beta)


def _student_norm(nu: float) -> float:
    # 1 / (sqrt(nu) B(nu/2, 1/2))
    return math.exp(_log_gamma_ratio((nu + 1.0) / 2.0, nu / 2.0)) / math.sqrt(nu * math.pi)


def pdf_function(spec: DistributionSpec) -> Callable:
    """Vectorized density ``x -> p(x)`` (zero outside the support)."""
    validate(spec)
    kind, p = spec.kind, spec.params
    if kind == "Cauchy":
        return lambda x: 1.0 / (math.pi * (1.0 + np.square(x)))
    if kind == "Levy":
        c = 1.0 / math.sqrt(2.0 * math.pi)

        def levy_pdf(x):
            x = np.asarray(x, dtype=float)
            with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
                val = c * np.power(x, -1.5) * np.exp(-0.5 / x)
            return np.where(x > 0, val, 0.0)[()]
        return levy_pdf
    if kind == "QExponential":
        lam, q = p["lambda"], p["q"]
        if q == 1.0:
            return lambda x: np.where(np.asarray(x) >= 0, lam * np.exp(-lam * np.asarray(x, float)), 0.0)[()]
        c = lam * (q - 1.0)
        expo = 1.0 / (1.0 - q)
        upper = math.inf if q > 1.0 else 1.0 / (lam * (1.0 - q))

        def qexp_pdf(x):
            x = np.asarray(x, dtype=float)
            inside = (x >= 0) & (x <= upper)
            base = np.where(inside, 1.0 + c * x, 1.0)
            return np.where(inside, lam * (2.0 - q) * np.power(np.maximum(base, 0.0), expo), 0.0)[()]
        return qexp_pdf
    if kind == "QGaussian":
        q, beta, mu = p["q"], p["beta"], p["mu"]
        norm = _qgauss_norm(q, beta)
        if q == 1.0:
            return lambda x: norm * np.exp(-np.square(np.asarray(x, float) - mu) / (2.0 * beta**2))
        w = 2.0 * beta**2 / (q - 1.0)
        P = 1.0 / (q - 1.0)
        return lambda x: norm * np.power(1.0 + np.square(np.asarray(x, float) - mu) / w, -P)
    if kind == "Normal":
        c = 1.0 / math.sqrt(2.0 * math.pi)
        return lambda x: c * np.exp(-0.5 * np.square(x))
    if kind == "StudentT":
        nu = p["nu"]
        c = _student_norm(nu)
        return lambda x: c * np.power(1.0 + np.square(x) / nu, -(nu + 1.0) / 2.0)
    if kind == "Laplace":
        lam, mu = p["lambda"], p["mu"]
        return lambda x: 0.5 * lam * np.exp(-lam * np.abs(np.asarray(x, float) - mu))
    raise UnsupportedError(kind)


def density(spec: DistributionSpec, x: float) -> float:
    """Probability density at a point of the support."""
    sup = support(spec)
    if not sup.contains(x):
        raise ValidationError(f"x = {x} lies outside the support [{sup.lower}, {sup.upper}]")
    return float(pdf_function(spec)(x))


def pdf_mp(spec: DistributionSpec) -> Callable:
    """Density as an mpmath function (current working precision)."""
    validate(spec)
    kind, p = spec.kind, spec.params
    if kind == "Cauchy":
        return lambda x: 1 / (mp.pi * (1 + x * x))
    if kind == "Levy":
        def levy_pdf(x):
            if x <= 0:
                return mp.mpf(0)
            return x ** mp.mpf(-1.5) * mp.exp(-1 / (2 * x)) / mp.sqrt(2 * mp.pi)
        return levy_pdf
    if kind == "QExponential":
        lam, q = mp.mpf(p["lambda"]), mp.mpf(p["q"])
        if q == 1:
            return lambda x: lam * mp.exp(-lam * x) if x >= 0 else mp.mpf(0)
        c = lam * (q - 1)
        expo = 1 / (1 - q)
        upper = mp.inf if q > 1 else 1 / (lam * (1 - q))

        def qexp_pdf(x):
            if x < 0 or x > upper:
                return mp.mpf(0)
            return lam * (2 - q) * (1 + c * x) ** expo
        return qexp_pdf
    if kind == "QGaussian":
        q, beta, mu = mp.mpf(p["q"]), mp.mpf(p["beta"]), mp.mpf(p["mu"])
        if q == 1:
            norm = 1 / (mp.sqrt(2 * mp.pi) * beta)
            return lambda x: norm * mp.exp(-((x - mu) ** 2) / (2 * beta**2))
        P = 1 / (q - 1)
        norm = mp.sqrt(q - 1) * mp.gamma(P) / (mp.sqrt(2 * mp.pi) * beta * mp.gamma(P - mp.mpf(1) / 2))
        w = 2 * beta**2 / (q - 1)
        return lambda x: norm * (1 + (x - mu) ** 2 / w) ** (-P)
    if kind == "Normal":
        return lambda x: mp.exp(-x * x / 2) / mp.sqrt(2 * mp.pi)
    if kind == "StudentT":
        nu = mp.mpf(p["nu"])
        c = mp.gamma((nu + 1) / 2) / (mp.sqrt(nu * mp.pi) * mp.gamma(nu / 2))
        return lambda x: c * (1 + x * x / nu) ** (-(nu + 1) / 2)
    if kind == "Laplace":
        lam, mu = mp.mpf(p["lambda"]), mp.mpf(p["mu"])
        return lambda x: lam / 2 * mp.exp(-lam * abs(x - mu))
    raise UnsupportedError(kind)


def kink_points(spec: DistributionSpec):
    """Points where the density is not smooth (quadrature breakpoints)."""
    if spec.kind == "Laplace":
        return [spec["mu"]]
    return []


def is_symmetric(spec: DistributionSpec) -> bool:
    """True when p(-x) = p(x)."""
    if spec.kind in ("Cauchy", "Normal", "StudentT"):
        return True
    if spec.kind in ("QGaussian", "Laplace"):
        return spec["mu"] == 0.0
    return False


# ---------------------------------------------------------------------------
# characteristic functions

def characteristic_function(spec: DistributionSpec, k: float) -> complex:
    """E[exp(i k X)]."""
    validate(spec)
    k = float(k)
    if k == 0.0:
        return 1 + 0j
    kind, p = spec.kind, spec.params
    if kind == "Cauchy":
        return complex(math.exp(-abs(k)), 0.0)
    if kind == "Levy":
        r = math.sqrt(abs(k))
        return math.exp(-r) * complex(math.cos(r), math.sin(r) if k > 0 else -math.sin(r))
    if kind == "Normal":
        return complex(math.exp(-0.5 * k * k), 0.0)
    if kind == "Laplace":
        lam, mu = p["lambda"], p["mu"]
        return cmath.exp(1j * k * mu) * lam**2 / (lam**2 + k * k)
    if kind == "StudentT":
        nu = p["nu"]
        u = math.sqrt(nu) * abs(k)
        log_val = (nu / 2.0) * math.log(u) + math.log(special.kve(nu / 2.0, u)) - u
        log_val -= sf.log_gamma(nu / 2.0).real + (nu / 2.0 - 1.0) * math.log(2.0)
        return complex(math.exp(log_val), 0.0)
    if kind == "QExponential":
        return _qexp_cf(p["lambda"], p["q"], k)
    if kind == "QGaussian":
        return _qgauss_cf(p["q"], p["beta"], p["mu"], k)
    raise UnsupportedError(kind)


def _qexp_cf(lam, q, k):
    if q == 1.0:
        return lam / complex(lam, -k)
    if q < 1.0:
        pdf = pdf_function(DistributionSpec("QExponential", {"lambda": lam, "q": q}))
        upper = 1.0 / (lam * (1.0 - q))
        re = integrate.quad(lambda x: float(pdf(x)), 0.0, upper, weight="cos", wvar=k, epsabs=1e-13, limit=400)[0]
        im = integrate.quad(lambda x: float(pdf(x)), 0.0, upper, weight="sin", wvar=k, epsabs=1e-13, limit=400)[0]
        return complex(re, im)
    # substituting u = 1 + c x gives (P - 1) e^{-i kappa} E_P(-i kappa), kappa = k / c
    P = 1.0 / (q - 1.0)
    kappa = k / (lam * (q - 1.0))
    return complex((P - 1.0) * mp.expj(-kappa) * mp.expint(P, mp.mpc(0.0, -kappa)))


def _qgauss_cf(q, beta, mu, k):
    if q == 1.0:
        return cmath.exp(1j * k * mu) * math.exp(-0.5 * (beta * k) ** 2)
    # a q > 1 Gaussian is a Student-t with nu = (3-q)/(q-1) scaled by beta sqrt(2/(3-q))
    nu = (3.0 - q) / (q - 1.0)
    scale = beta * math.sqrt(2.0 / (3.0 - q))
    return cmath.exp(1j * k * mu) * characteristic_function(DistributionSpec("StudentT", {"nu": nu}), scale * k)


# ---------------------------------------------------------------------------
# classical moments

def tail_decay_exponent(spec: DistributionSpec, mirrored: bool = False):
    """Leading power e with p(+-t) ~ C t^(-e) as t -> inf, or None for lighter tails."""
    if spec.kind == "QGaussian" and spec["mu"] != 0.0:
        # the location shift only changes subleading tail terms
        spec = DistributionSpec("QGaussian", {**spec.params, "mu": 0.0})
    series = _tail_series(spec, mirrored)
    if series is None:
        return None
    return series[0](1)[0][0]


def classical_moment_exists(spec: DistributionSpec, n) -> bool:
    """True iff the integral of p(x)|x|^n over the support is finite."""
    validate(spec)
    n = float(n)
    for mirrored in (False, True):
        if mirrored and not is_two_sided(spec):
            continue
        e = tail_decay_exponent(spec, mirrored)
        if e is not None and not e - n > 1.0:
            return False
    if n <= -1.0:
        for mirrored in (False, True):
            if mirrored and not is_two_sided(spec):
                continue
            series = _origin_series(spec, mirrored)
            terms = series[0](1)
            if terms and terms[0][1] != 0.0 and terms[0][0] + n <= -1.0:
                return False
    return True


def mellin_strip(spec: DistributionSpec):
    """Open interval (lo, hi) of Re z where the integral of p(x)|x|^z converges."""
    validate(spec)
    lo = -math.inf if spec.kind == "Levy" else -1.0
    hi = math.inf
    for mirrored in (False, True):
        if mirrored and not is_two_sided(spec):
            continue
        e = tail_decay_exponent(spec, mirrored)
        if e is not None:
            hi = min(hi, e - 1.0)
    return lo, hi


# ---------------------------------------------------------------------------
# series of the density at the ends of the support

def _exp_terms(a: float, count: int):
    # a^k / k! for k < count, by recurrence (underflows to 0 instead of overflowing)
    out = [1.0]
    for k in range(1, count):
        out.append(out[-1] * a / k)
    return out[:count]


def _binomial_neg(P: float, count: int):
    # binom(-P, j) for j < count
    out = [1.0]
    for j in range(1, count):
        out.append(out[-1] * (-P - (j - 1)) / j)
    return out[:count]


def _tail_series(spec: DistributionSpec, mirrored: bool):
    """Density tail p(+-t) = sum_j C_j t^(-e_j) for t > radius.

    Returns ``(terms, radius)`` with ``terms(count) -> [(e_j, C_j), ...]``
    or None when the tail is lighter than any power.
    """
    kind, p = spec.kind, spec.params
    if mirrored and kind in ("Levy", "QExponential"):
        return None
    if kind == "Cauchy":
        return (lambda count: [(2.0 + 2.0 * j, (-1.0) ** j / math.pi) for j in range(count)]), 1.0
    if kind == "Levy":
        c = 1.0 / math.sqrt(2.0 * math.pi)
        return (lambda count: [(1.5 + j, c * t) for j, t in enumerate(_exp_terms(-0.5, count))]), 0.0
    if kind == "QExponential":
        lam, q = p["lambda"], p["q"]
        if q <= 1.0:
            return None
        P = 1.0 / (q - 1.0)
        c = lam * (q - 1.0)
        amp = lam * (2.0 - q) * c ** (-P)

        def terms(count):
            b = _binomial_neg(P, count)
            return [(P + j, amp * b[j] * c ** (-j)) for j in range(count)]
        return terms, 1.0 / c
    if kind == "QGaussian":
        q, beta, mu = p["q"], p["beta"], p["mu"]
        if q == 1.0:
            return None
        if mu != 0.0:
            raise UnsupportedError("power-tail series of the q-Gaussian are implemented for mu = 0 only")
        P = 1.0 / (q - 1.0)
        w = 2.0 * beta**2 / (q - 1.0)
        amp = _qgauss_norm(q, beta) * w**P

        def terms(count):
            b = _binomial_neg(P, count)
            return [(2.0 * P + 2.0 * j, amp * b[j] * w**j) for j in range(count)]
        return terms, math.sqrt(w)
    if kind == "StudentT":
        nu = p["nu"]
        h = (nu + 1.0) / 2.0
        amp = _student_norm(nu) * nu**h

        def terms(count):
            b = _binomial_neg(h, count)
            return [(nu + 1.0 + 2.0 * j, amp * b[j] * nu**j) for j in range(count)]
        return terms, math.sqrt(nu)
    return None


def _tail_lattice_mp(spec: DistributionSpec, mirrored: bool):
    """Tail exponents e_j = first + j * step of ``_tail_series`` at mpmath precision."""
    if _tail_series(spec, mirrored) is None:
        return None
    kind, p = spec.kind, spec.params
    if kind == "Cauchy":
        return mp.mpf(2), mp.mpf(2)
    if kind == "Levy":
        return mp.mpf(3) / 2, mp.mpf(1)
    if kind == "QExponential":
        return 1 / (mp.mpf(p["q"]) - 1), mp.mpf(1)
    if kind == "QGaussian":
        return 2 / (mp.mpf(p["q"]) - 1), mp.mpf(2)
    if kind == "StudentT":
        return mp.mpf(p["nu"]) + 1, mp.mpf(2)
    raise UnsupportedError(kind)


def _origin_series(spec: DistributionSpec, mirrored: bool):
    """Density near zero, p(+-t) = sum_k C_k t^(d_k) for 0 < t < radius.

    Returns ``(terms, radius)`` or None if that side is outside the support.
    """
    kind, p = spec.kind, spec.params
    if mirrored and kind in ("Levy", "QExponential"):
        return None
    if kind == "Levy":
        # every derivative of the density vanishes at 0+
        return (lambda count: []), math.inf
    if kind == "Cauchy":
        return (lambda count: [(2.0 * k, (-1.0) ** k / math.pi) for k in range(count)]), 1.0
    if kind == "Normal":
        c = 1.0 / math.sqrt(2.0 * math.pi)
        return (lambda count: [(2.0 * k, c * t) for k, t in enumerate(_exp_terms(-0.5, count))]), math.inf
    if kind == "StudentT":
        nu = p["nu"]
        c = _student_norm(nu)
        h = (nu + 1.0) / 2.0

        def terms(count):
            b = _binomial_neg(h, count)
            return [(2.0 * k, c * b[k] * nu ** (-k)) for k in range(count)]
        return terms, math.sqrt(nu)
    if kind == "QGaussian":
        q, beta, mu = p["q"], p["beta"], p["mu"]
        if mu != 0.0:
            raise UnsupportedError("origin series of the q-Gaussian are implemented for mu = 0 only")
        norm = _qgauss_norm(q, beta)
        if q == 1.0:
            s = -1.0 / (2.0 * beta**2)
            return (lambda count: [(2.0 * k, norm * t) for k, t in enumerate(_exp_terms(s, count))]), math.inf
        P = 1.0 / (q - 1.0)
        w = 2.0 * beta**2 / (q - 1.0)

        def terms(count):
            b = _binomial_neg(P, count)
            return [(2.0 * k, norm * b[k] * w ** (-k)) for k in range(count)]
        return terms, math.sqrt(w)
    if kind == "QExponential":
        lam, q = p["lambda"], p["q"]
        if q == 1.0:
            return (lambda count: [(float(k), lam * t) for k, t in enumerate(_exp_terms(-lam, count))]), math.inf
        amp = lam * (2.0 - q)
        if q > 1.0:
            P = 1.0 / (q - 1.0)
            c = lam * (q - 1.0)

            def terms(count):
                b = _binomial_neg(P, count)
                return [(float(k), amp * b[k] * c**k) for k in range(count)]
            return terms, 1.0 / c
        pw = 1.0 / (1.0 - q)
        c = lam * (1.0 - q)

        def terms(count):
            b = _binomial_neg(-pw, count)
            return [(float(k), amp * b[k] * (-c) ** k) for k in range(count)]
        return terms, 1.0 / c
    if kind == "Laplace":
        lam, mu = p["lambda"], p["mu"]
        # on the side facing mu the density grows towards the kink
        toward = (mu > 0 and not mirrored) or (mu < 0 and mirrored)
        amp = 0.5 * lam * math.exp(-lam * abs(mu))
        rate = lam if toward else -lam
        radius = abs(mu) if toward else math.inf
        return (lambda count: [(float(k), amp * t) for k, t in enumerate(_exp_terms(rate, count))]), radius
    raise UnsupportedError(kind)


# ---------------------------------------------------------------------------
# asymptotic expansions of p(x) x^n

@dataclass(frozen=True)
class AsymptoticExpansion:
    """Truncated expansion of p(x) x^n at one endpoint.

    Near 0 each term reads ``coeff * x**exponent``; near +-inf it reads
    ``coeff * (1/x)**exponent``.  At ``-inf`` and ``zero-`` powers of the
    negative variable x are principal-branch, x^w = |x|^w e^{i pi w}.
    ``n_divergent`` leading terms make the integral diverge; the remaining
    ones are convergent guard terms.  ``radius`` bounds the region where the
    full series converges (|x| > radius at infinity, |x| < radius at zero).
    """

    endpoint: str
    terms: tuple
    n_divergent: int
    radius: float
    _source: Callable = field(default=None, repr=False, compare=False)

    def extended(self, count: int):
        """Return ``count`` terms of the underlying series (same convention)."""
        if self._source is None:
            return list(self.terms[:count])
        return self._source(count)

    @property
    def divergent_terms(self):
        return self.terms[: self.n_divergent]


def _is_divergent(endpoint, exponent):
    if endpoint in ("+inf", "-inf"):
        return exponent.real <= 1.0 + 1e-12
    return exponent.real <= -1.0 + 1e-12


def asymptotic_expansion(spec: DistributionSpec, n, endpoint: str, n_guard: int = 4) -> AsymptoticExpansion:
    """Expansion of p(x) x^n at ``endpoint`` in {'zero', 'zero-', '+inf', '-inf'}.

    Contains every divergent term plus ``n_guard`` convergent ones.  An
    exponentially decaying tail yields an empty expansion.
    """
    validate(spec)
    if endpoint not in ENDPOINTS:
        raise ExpansionUnavailableError(f"unknown endpoint {endpoint!r}; expected one of {ENDPOINTS}")
    n = sf.as_complex(n)
    mirrored = endpoint in ("-inf", "zero-")
    at_inf = endpoint in ("+inf", "-inf")
    sup = support(spec)
    if mirrored and sup.lower >= 0.0:
        raise ExpansionUnavailableError(f"{spec.kind} has no {endpoint} endpoint")
    if endpoint == "+inf" and math.isfinite(sup.upper):
        raise ExpansionUnavailableError(f"{spec.kind} support is bounded above")
    series = _tail_series(spec, mirrored) if at_inf else _origin_series(spec, mirrored)
    if series is None:
        return AsymptoticExpansion(endpoint, (), 0, math.inf if at_inf else 0.0, None)
    density_terms, radius = series
    phase = sf.expipi(n) if mirrored else 1.0

    def source(count):
        out = []
        for e, c in density_terms(count):
            if at_inf:
                expo = e - n
                coeff = c * phase * (sf.expipi(expo) if mirrored else 1.0)
            else:
                expo = e + n
                coeff = c * phase * (sf.expipi(-expo) if mirrored else 1.0)
            out.append((_real_if_exact(expo), _real_if_exact(coeff)))
        return out

    probe = source(256)
    n_div = sum(1 for expo, _ in probe if _is_divergent(endpoint, sf.as_complex(expo)))
    terms = tuple(probe[: n_div + n_guard])
    return AsymptoticExpansion(endpoint, terms, n_div, radius, source)


def _real_if_exact(v):
    v = complex(v)
    return v.real if v.imag == 0.0 else v
