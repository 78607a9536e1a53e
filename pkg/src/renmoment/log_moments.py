"""Logarithmic moments: derivatives of m_z in the order and direct log-weighted integrals.

The n-th logarithmic moment is the integral of p(x) ln^n x with
ln x = ln|x| + i pi for x < 0.  It equals the n-th derivative of the
moment function z -> m_z at z = 0, evaluated here by the trapezoidal
rule on a circle (Cauchy's integral formula).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import mpmath as mp

from . import specfun as sf
from ._quad import integrate_complex
from .closed_form import distance_to_singularity, raw_moment, singularity_order
from .distributions import (DistributionSpec, _tail_series, classical_moment_exists, is_two_sided,
                            kink_points, pdf_function, support, validate)
from .errors import ContourPoleError, UnsupportedError, ValidationError
from .schemes_numeric import QuadratureConfig, subtraction_scheme
from .specfun import EULER_GAMMA, ComplexValue, as_complex

ROUTES = ("derivative-of-power", "direct-integral")
POWER_LOG_ROUTES = ("auto", "quadrature", "derivative", "subtraction")
CONTOUR_NODES = 64
MAX_CONTOUR_RADIUS = 0.25
MAX_LOG_ORDER = 4

# |ln t| beyond which t^2 is close to overflowing
_LOG_CUTOFF = 300.0


@dataclass(frozen=True)
class LogMomentValue:
    """Logarithmic moment of a given order and the route that produced it."""

    order: int
    value: ComplexValue
    route: str
    err_estimate: float = 0.0
    metadata: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if int(self.order) != self.order or self.order < 1:
            raise ValidationError(f"log-moment order must be a positive integer, got {self.order}")
        if self.route not in ROUTES:
            raise ValidationError(f"route must be one of {ROUTES}, got {self.route!r}")
        if not isinstance(self.value, ComplexValue):
            object.__setattr__(self, "value", ComplexValue.from_complex(self.value))

    def __complex__(self):
        return complex(self.value)

    def to_dict(self):
        return {"order": self.order, "value": self.value.to_dict(), "route": self.route,
                "err_estimate": self.err_estimate}


@dataclass(frozen=True)
class GoldenLogMoment:
    """Closed-form logarithmic moment with the formula it was evaluated from."""

    order: int
    value: complex
    formula: str


def _check_order(n) -> int:
    if isinstance(n, bool) or int(n) != n or not 1 <= n <= MAX_LOG_ORDER:
        raise ValidationError(f"log-moment order must be an integer in 1..{MAX_LOG_ORDER}, got {n}")
    return int(n)


# ---------------------------------------------------------------------------
# contour derivatives

def contour_derivative(func, z0, order: int, radius: float, nodes: int = CONTOUR_NODES,
                       singularity_distance: float = math.inf):
    """order-th derivative of an analytic ``func`` at z0 by the trapezoidal Cauchy integral.

    Returns ``(value, err_estimate)``.  The estimate adds the rounding bound
    to the geometric aliasing bound (radius / singularity_distance)^nodes.
    """
    z0 = as_complex(z0)
    if not radius > 0.0:
        raise ValidationError(f"contour radius must be positive, got {radius}")
    acc = 0j
    peak = 0.0
    for k in range(nodes):
        w = sf.expipi(2.0 * k / nodes)
        f = as_complex(func(z0 + radius * w))
        peak = max(peak, abs(f))
        # w^-order is the conjugate power on the unit circle
        acc += f * sf.expipi(-2.0 * k * order / nodes)
    scale = math.factorial(order) / radius**order
    value = scale * acc / nodes
    rho = radius / singularity_distance
    alias = rho**nodes / (1.0 - rho**nodes) if rho < 1.0 else math.inf
    err = scale * peak * (16.0 * 2.2e-16 + alias)
    return value, err


def _contour_setup(spec: DistributionSpec, z0: complex, radius):
    raw, pole_order = singularity_order(spec, z0)
    if raw and pole_order >= 1:
        raise ContourPoleError(f"m_z has a pole of order {pole_order} at the contour centre {z0}", z0)
    dist = distance_to_singularity(spec, z0, skip_center=True)
    if radius is None:
        radius = min(MAX_CONTOUR_RADIUS, 0.5 * dist)
    elif not radius < dist:
        raise ContourPoleError(
            f"contour of radius {radius} around {z0} reaches a singularity at distance {dist:.6g}", z0)
    return radius, dist


def moment_derivative(spec: DistributionSpec, z0, order: int = 1, radius=None,
                      nodes: int = CONTOUR_NODES):
    """d^order m_z / dz^order at z0 from the closed form.

    Returns ``(value, err_estimate)``.

    Raises
    ------
    ContourPoleError
        If z0 is a pole of m_z or a given radius reaches a singularity.
    """
    validate(spec)
    z0 = as_complex(z0)
    radius, dist = _contour_setup(spec, z0, radius)
    return contour_derivative(lambda z: raw_moment(spec, z), z0, order, radius, nodes, dist)


def log_moment_from_power(spec: DistributionSpec, n: int, radius=None,
                          nodes: int = CONTOUR_NODES) -> LogMomentValue:
    """n-th logarithmic moment as the n-th derivative of m_z at z = 0.

    Parameters
    ----------
    spec : DistributionSpec
    n : int
        Order, 1..4.
    radius : float, optional
        Contour radius; defaults to min(0.25, half the distance to the
        nearest singularity of the closed form).

    Raises
    ------
    ContourPoleError
        If a singularity lies on or inside the contour.
    """
    n = _check_order(n)
    validate(spec)
    radius, dist = _contour_setup(spec, 0j, radius)
    value, err = contour_derivative(lambda z: raw_moment(spec, z), 0j, n, radius, nodes, dist)
    return LogMomentValue(n, ComplexValue.from_complex(value), "derivative-of-power", err,
                          {"radius": radius, "nodes": nodes})


# ---------------------------------------------------------------------------
# log-weighted quadrature

def _far_tail(spec, mirrored):
    # (e, C) with p(+-t) ~ C t^-e; the location shift of a q-Gaussian only
    # changes subleading terms
    if spec.kind == "QGaussian" and spec["mu"] != 0.0:
        spec = DistributionSpec("QGaussian", {**spec.params, "mu": 0.0})
    series = _tail_series(spec, mirrored)
    return None if series is None else series[0](1)[0]


def _side_integral(spec, pdf, power, m, mirrored, cfg):
    # integral over t > 0 of p(+-t) t^power (ln t + i pi sigma)^m, in s = ln t
    sigma = 1.0 if mirrored else 0.0
    phase = sf.expipi(power) if mirrored else 1.0
    sup = support(spec)
    upper = -sup.lower if mirrored else sup.upper
    s_hi = math.log(upper) if math.isfinite(upper) else math.inf
    branch = complex(0.0, math.pi * sigma)

    far = _far_tail(spec, mirrored)

    def h(s):
        if s < -_LOG_CUTOFF:
            return 0j
        if s > _LOG_CUTOFF:
            # leading tail term in log space; the density itself would overflow
            if far is None:
                return 0j
            e, c = far
            return phase * c * math.exp(s * (power + 1.0 - e)) * (s + branch) ** m
        t = math.exp(s)
        p = float(pdf(-t if mirrored else t))
        if p == 0.0 or not math.isfinite(p):
            return 0j
        return phase * p * math.exp(s * (power + 1.0)) * (s + branch) ** m

    cuts = {0.0}
    for k in kink_points(spec):
        if (k < 0.0) == mirrored and k != 0.0:
            cuts.add(math.log(abs(k)))
    cuts = sorted(c for c in cuts if c < s_hi)
    opts = {"rel_tol": cfg.rel_tol, "abs_tol": cfg.abs_tol, "limit": cfg.max_subdivisions}
    total, err = integrate_complex(lambda u: h(-u), -cuts[0], math.inf,
                                   transform=cfg.semi_infinite_transform, **opts)
    for a, b in zip(cuts, cuts[1:] + [s_hi]):
        if math.isinf(b):
            val, e = integrate_complex(h, a, b, transform=cfg.semi_infinite_transform, **opts)
        else:
            val, e = integrate_complex(h, a, b, **opts)
        total += val
        err += e
    return total, err


def _log_weighted_integral(spec: DistributionSpec, power: float, m: int, cfg: QuadratureConfig):
    pdf = pdf_function(spec)
    value, err = _side_integral(spec, pdf, power, m, False, cfg)
    if is_two_sided(spec):
        v, e = _side_integral(spec, pdf, power, m, True, cfg)
        value += v
        err += e
    return value, err


def log_moment_direct(spec: DistributionSpec, n: int, cfg: QuadratureConfig | None = None) -> LogMomentValue:
    """n-th logarithmic moment by quadrature of p(x) ln^n x, with ln x = ln|x| + i pi for x < 0.

    Raises
    ------
    QuadratureError
        If the integral does not converge to tolerance.
    """
    validate(spec)
    n = _check_order(n)
    cfg = cfg or QuadratureConfig()
    value, err = _log_weighted_integral(spec, 0.0, n, cfg)
    return LogMomentValue(n, ComplexValue.from_complex(value), "direct-integral", err)


# ---------------------------------------------------------------------------
# power-log moments

def power_log_moment(spec: DistributionSpec, n, m: int = 1, route: str = "auto",
                     cfg: QuadratureConfig | None = None) -> ComplexValue:
    """Power-log moment M_{n,1}: the integral of p(x) x^n ln x, renormalized when divergent.

    ``route="auto"`` integrates directly when the integral converges and
    otherwise differentiates the closed-form m_z at z = n.  ``"subtraction"``
    renormalizes the integral numerically instead.

    Raises
    ------
    UnsupportedError
        For m != 1, or when the integral diverges and no closed form exists.
    """
    validate(spec)
    if m != 1:
        raise UnsupportedError("only the first power of the logarithm is supported (m = 1)")
    if route not in POWER_LOG_ROUTES:
        raise ValidationError(f"route must be one of {POWER_LOG_ROUTES}, got {route!r}")
    n = float(n)
    if not math.isfinite(n):
        raise ValidationError("n must be a finite real order")
    cfg = cfg or QuadratureConfig()
    convergent = classical_moment_exists(spec, n)
    if route == "quadrature" or (route == "auto" and convergent):
        if not convergent:
            raise ValidationError(f"the integral of p(x) x^{n:g} ln x diverges for {spec.kind}")
        value, _ = _log_weighted_integral(spec, n, 1, cfg)
        return ComplexValue.from_complex(value)
    if route == "subtraction":
        return subtraction_scheme(spec, n, cfg, log_power=1).value
    try:
        value, _ = moment_derivative(spec, n, 1)
    except UnsupportedError as exc:
        raise UnsupportedError(
            f"the integral of p(x) x^{n:g} ln x diverges and {spec.kind} has no closed form here") from exc
    return ComplexValue.from_complex(value)


def verify_power_log_relation(spec: DistributionSpec, n, cfg: QuadratureConfig | None = None) -> float:
    """Residual |dm_z/dz at z = n - M_{n,1}|.

    The derivative comes from the contour integral of the closed form; the
    power-log moment from direct quadrature when it converges and from the
    subtraction scheme otherwise, so the two sides are independent.
    """
    n = float(n)
    lhs, _ = moment_derivative(spec, n, 1)
    route = "quadrature" if classical_moment_exists(spec, n) else "subtraction"
    rhs = complex(power_log_moment(spec, n, 1, route=route, cfg=cfg))
    return abs(lhs - rhs)


# ---------------------------------------------------------------------------
# closed forms

LN2 = math.log(2.0)


def _zeta3():
    return sf.riemann_zeta(3)


def _levy_golden():
    c = EULER_GAMMA + LN2
    z3 = _zeta3()
    pi2 = math.pi**2
    return [
        GoldenLogMoment(1, complex(c), "gamma_E + ln 2"),
        GoldenLogMoment(2, complex(pi2 / 2 + LN2**2 + EULER_GAMMA * (EULER_GAMMA + 2 * LN2)),
                        "pi^2/2 + ln^2 2 + gamma_E (gamma_E + 2 ln 2)"),
        GoldenLogMoment(3, complex(14 * z3 + c**3 + 1.5 * pi2 * c),
                        "14 zeta(3) + (gamma_E + ln 2)^3 + (3/2) pi^2 (gamma_E + ln 2)"),
        GoldenLogMoment(4, complex(c**4 + 3 * pi2 * c**2 + 56 * z3 * c + 7 * pi2**2 / 4),
                        "(gamma_E + ln 2)^4 + 3 pi^2 (gamma_E + ln 2)^2 + 56 zeta(3) (gamma_E + ln 2)"
                        " + 7 pi^4/4"),
    ]


def _qexp_golden(lam, q):
    if q > 1.0:
        P = 1.0 / (q - 1.0)
        L = math.log(lam * (q - 1.0))
        H = sf.harmonic(P - 2.0)
        psi1 = sf.polygamma(1, P - 1.0).real
        return [
            GoldenLogMoment(1, complex(-H - L), "-H_{1/(q-1)-2} - ln(lambda (q-1))"),
            GoldenLogMoment(2, complex((H + L) ** 2 + psi1 + math.pi**2 / 6),
                            "[H_{1/(q-1)-2} + ln(lambda (q-1))]^2 + psi1(1/(q-1)-1) + pi^2/6"),
        ]
    # cumulants of ln m_z = ln Gamma(1+z) + ... for the exponential and compact cases
    if q == 1.0:
        k1 = -EULER_GAMMA - math.log(lam)
        k2 = math.pi**2 / 6
        f1, f2 = "-gamma_E - ln lambda", "(gamma_E + ln lambda)^2 + pi^2/6"
    else:
        a = 1.0 / (1.0 - q) + 2.0
        k1 = -EULER_GAMMA - sf.digamma(a).real - math.log(lam * (1.0 - q))
        k2 = math.pi**2 / 6 - sf.polygamma(1, a).real
        f1 = "-gamma_E - psi(1/(1-q)+2) - ln(lambda (1-q))"
        f2 = "m1^2 + pi^2/6 - psi1(1/(1-q)+2)"
    return [GoldenLogMoment(1, complex(k1), f1), GoldenLogMoment(2, complex(k2 + k1 * k1), f2)]


def _normal_golden(beta=1.0):
    a = complex(LN2 + EULER_GAMMA, -math.pi)
    m1 = -0.5 * a
    m2 = 0.25 * a * a - math.pi**2 / 8
    if beta == 1.0:
        return [GoldenLogMoment(1, m1, "-(ln 2 + gamma_E - i pi)/2"),
                GoldenLogMoment(2, m2, "(ln 2 + gamma_E - i pi)^2/4 - pi^2/8")]
    lb = math.log(beta)
    return [GoldenLogMoment(1, m1 + lb, "-(ln 2 + gamma_E - i pi)/2 + ln beta"),
            GoldenLogMoment(2, m2 + 2 * lb * m1 + lb * lb,
                            "(ln 2 + gamma_E - i pi)^2/4 - pi^2/8 + 2 ln(beta) m1 + ln^2 beta")]


def _qgauss_golden(q, beta):
    if q == 1.0:
        return _normal_golden(beta)
    P = 1.0 / (q - 1.0)
    H = sf.harmonic(P - 1.5)
    psi0 = sf.digamma(P - 0.5).real
    psi1 = sf.polygamma(1, P - 0.5).real
    g = EULER_GAMMA
    l1 = math.log(2.0 * (q - 1.0) / beta**2)
    l2 = math.log((q - 1.0) / beta**2)
    l3 = math.log(4.0 * (q - 1.0) / beta**2)
    ipi = complex(0.0, math.pi)
    m1 = -0.5 * (H + l1 - ipi)
    m2 = (0.25 * psi0 * (H + 2 * l2 - 2 * ipi + g + 2 * LN2)
          + 0.5 * (g - ipi) * l1 + 0.25 * l2 * l3
          + 0.25 * psi1 - 3 * math.pi**2 / 8 - 0.5 * ipi * g + 0.25 * g * g + 0.25 * LN2**2)
    return [
        GoldenLogMoment(1, m1, "-[H_{1/(q-1)-3/2} + ln(2(q-1)/beta^2) - i pi]/2"),
        GoldenLogMoment(2, m2, "psi(P-1/2)(H_{P-3/2} + 2 ln((q-1)/beta^2) - 2 i pi + gamma_E + ln 4)/4"
                               " + (gamma_E - i pi) ln(2(q-1)/beta^2)/2"
                               " + ln((q-1)/beta^2) ln(4(q-1)/beta^2)/4 + psi1(P-1/2)/4"
                               " - 3 pi^2/8 - i gamma_E pi/2 + gamma_E^2/4 + ln^2 2/4, P = 1/(q-1)"),
    ]


def _student_golden(nu):
    ipi = complex(0.0, math.pi)
    psi0 = sf.digamma(nu / 2).real
    psi1 = sf.polygamma(1, nu / 2).real
    ln_nu = math.log(nu)
    m1 = 0.5 * (math.log(nu / 4) + ipi - sf.harmonic(nu / 2 - 1))
    m2 = (2 * ln_nu**2 + 2 * ipi * 2 * ln_nu + 2 * psi1 - 3 * math.pi**2
          + 2 * (psi0 + EULER_GAMMA + 2 * LN2) * (2 * LN2 - 2 * ln_nu + psi0 - 2 * ipi + EULER_GAMMA)) / 8
    return [
        GoldenLogMoment(1, m1, "(ln(nu/4) + i pi - H_{nu/2-1})/2"),
        GoldenLogMoment(2, m2, "[2 ln^2 nu + 4 i pi ln nu + 2 psi1(nu/2) - 3 pi^2 + 2 (psi(nu/2) + gamma_E"
                               " + 2 ln 2)(2 ln 2 - 2 ln nu + psi(nu/2) - 2 i pi + gamma_E)]/8"),
    ]


def _laplace_golden(lam, mu):
    if mu == 0.0:
        c = EULER_GAMMA + math.log(lam)
        ipi = complex(0.0, math.pi)
        return [
            GoldenLogMoment(1, -c + 0.5 * ipi, "-gamma_E - ln lambda + i pi/2"),
            GoldenLogMoment(2, c * c + math.pi**2 / 6 - ipi * c - math.pi**2 / 2,
                            "(gamma_E + ln lambda)^2 + pi^2/6 - i pi (gamma_E + ln lambda) - pi^2/2"),
        ]
    a = lam * abs(mu)
    # Re[e^{-a} Gamma(0, -a)] = -e^{-a} Ei(a); Gamma(0, a) = E1(a)
    re = 0.5 * (-math.exp(-a) * float(mp.ei(a)) + math.exp(a) * float(mp.e1(a))) + math.log(abs(mu))
    neg_mass = 0.5 * math.exp(-a) if mu > 0 else 1.0 - 0.5 * math.exp(-a)
    return [GoldenLogMoment(1, complex(re, math.pi * neg_mass),
                            "Re{[e^{-lambda mu} Gamma(0, -lambda mu) + e^{lambda mu} Gamma(0, lambda mu)]/2}"
                            " + ln|mu| + i pi P(x < 0)")]


def golden_log_moments(spec: DistributionSpec) -> list:
    """Closed-form logarithmic moments of ``spec``.

    Orders 1..4 for Cauchy and Levy, 1..2 otherwise; only order 1 for the
    shifted Laplace, whose second moment needs a Meijer-G function.

    Returns
    -------
    list of GoldenLogMoment
    """
    validate(spec)
    kind, p = spec.kind, spec.params
    if kind == "Cauchy":
        return [GoldenLogMoment(n, (0.5j * math.pi) ** n, "(i pi/2)^n") for n in range(1, 5)]
    if kind == "Levy":
        return _levy_golden()
    if kind == "QExponential":
        return _qexp_golden(p["lambda"], p["q"])
    if kind == "QGaussian":
        if p["mu"] != 0.0:
            raise UnsupportedError("closed-form q-Gaussian log moments are implemented for mu = 0 only")
        return _qgauss_golden(p["q"], p["beta"])
    if kind == "Normal":
        return _normal_golden()
    if kind == "StudentT":
        return _student_golden(p["nu"])
    if kind == "Laplace":
        return _laplace_golden(p["lambda"], p["mu"])
    raise UnsupportedError(kind)
