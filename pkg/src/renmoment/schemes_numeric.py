"""Numerical renormalization: subtraction, cut-off, weighted and Mellin routes.

Every scheme works side by side.  The positive half line is integrated in
the variable t = x and the negative one in t = -x, where the integrand
p(-t) t^n carries the phase e^{i pi n} of the principal branch.
Expansions of each side's integrand, in t, come from the density series in
``distributions``.

The subtraction scheme runs in double precision.  The cut-off and weighted
schemes fit divergent samples, which needs more digits than float64 offers,
so they sample and solve in mpmath.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Callable

import mpmath as mp
import numpy as np

from . import specfun as sf
from ._quad import integrate_complex, integrate_fourier
from .distributions import (
    DistributionSpec,
    _origin_series,
    _tail_lattice_mp,
    _tail_series,
    characteristic_function,
    is_symmetric,
    kink_points,
    mellin_strip,
    pdf_function,
    pdf_mp,
    support,
    validate,
)
from .errors import (
    GridTooSmallError,
    IllConditionedFitError,
    OutsideStripError,
    UnsupportedError,
    ValidationError,
)
from .specfun import ComplexValue

SCHEMES = ("subtraction", "cutoff", "weighted", "mellin-cf", "mellin-density", "closed-form")
TRANSFORMS = ("exp-map", "rational-map")

_EXPONENT_TOL = 1e-12
_SERIES_TERMS = 120


@dataclass(frozen=True)
class QuadratureConfig:
    """Tolerances for the double-precision integrals."""

    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    max_subdivisions: int = 200
    semi_infinite_transform: str = "rational-map"

    def __post_init__(self):
        if not (self.rel_tol > 0 and self.abs_tol > 0):
            raise ValidationError("quadrature tolerances must be positive")
        if self.rel_tol < 100 * np.finfo(float).eps:
            raise ValidationError(f"rel_tol must be at least 100 machine epsilon, got {self.rel_tol}")
        if int(self.max_subdivisions) != self.max_subdivisions or self.max_subdivisions < 1:
            raise ValidationError("max_subdivisions must be a positive integer")
        if self.semi_infinite_transform not in TRANSFORMS:
            raise ValidationError(f"semi_infinite_transform must be one of {TRANSFORMS}")


@dataclass(frozen=True)
class FitConfig:
    """Precision and basis sizes for the cut-off and weighted fits.

    ``n_corrections`` counts the convergent expansion terms added after the
    divergent ones on each side; ``n_analytic`` the integer powers s^k of the
    weighted scheme.
    """

    dps: int = 30
    max_condition: float = 1e10
    n_corrections: int = 6
    n_analytic: int = 4

    def __post_init__(self):
        if self.dps < 15:
            raise ValidationError("dps must be at least 15")
        if not self.max_condition > 1:
            raise ValidationError("max_condition must exceed 1")
        if self.n_corrections < 0 or self.n_analytic < 0:
            raise ValidationError("basis sizes must be non-negative")


@dataclass(frozen=True)
class ExponentLadder:
    """Powers of the regulator expected in a divergent sample.

    Parameters
    ----------
    powers : tuple of float
        Exponents p with a column param**p; ascending, no duplicates, no 0
        (the constant is always part of the basis).
    has_log_term : bool
        Adds a ln(param) column.
    log_powers : tuple of int
        Exponents k >= 1 with a param**k * ln(param) column.
    """

    powers: tuple = ()
    has_log_term: bool = False
    log_powers: tuple = ()

    def __post_init__(self):
        powers = tuple(float(p) for p in self.powers)
        if any(not math.isfinite(p) for p in powers):
            raise ValidationError("ladder powers must be finite")
        if any(b <= a for a, b in zip(powers, powers[1:])):
            raise ValidationError(f"ladder powers must be strictly ascending, got {powers}")
        if any(p == 0.0 for p in powers):
            raise ValidationError("power 0 duplicates the constant term")
        logs = tuple(int(k) for k in self.log_powers)
        if any(k < 1 for k in logs) or len(set(logs)) != len(logs):
            raise ValidationError("log_powers must be distinct integers >= 1")
        object.__setattr__(self, "powers", powers)
        object.__setattr__(self, "has_log_term", bool(self.has_log_term))
        object.__setattr__(self, "log_powers", tuple(sorted(logs)))

    def __len__(self):
        return len(self.powers) + int(self.has_log_term) + len(self.log_powers)

    def to_dict(self):
        return {"powers": list(self.powers), "has_log_term": self.has_log_term,
                "log_powers": list(self.log_powers)}


@dataclass(frozen=True)
class SchemeResult:
    """Renormalized value from one numerical route."""

    value: ComplexValue
    scheme: str
    err_estimate: float
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.scheme not in SCHEMES:
            raise ValidationError(f"unknown scheme {self.scheme!r}")
        if not self.err_estimate >= 0:
            raise ValidationError("err_estimate must be non-negative")
        if not isinstance(self.value, ComplexValue):
            object.__setattr__(self, "value", ComplexValue.from_complex(self.value))

    def __complex__(self):
        return complex(self.value)

    def to_dict(self):
        return {"value": self.value.to_dict(), "scheme": self.scheme,
                "err_estimate": self.err_estimate, "metadata": self.metadata}


@dataclass(frozen=True)
class SyntheticIntegrand:
    """One-sided integrand f(t) on (0, upper) with known endpoint series.

    ``origin_terms(count)`` returns [(alpha, a), ...] with f ~ sum a t^alpha
    for t < ``origin_radius``; ``tail_terms(count)`` returns [(beta, b), ...]
    with f ~ sum b t^(-beta) for t > ``tail_radius``.  Either may be None.
    ``mp_func`` is the same function at mpmath precision (needed by the
    cut-off and weighted schemes).
    """

    name: str
    func: Callable
    origin_terms: Callable | None = None
    origin_radius: float = math.inf
    tail_terms: Callable | None = None
    tail_radius: float = 0.0
    mp_func: Callable | None = None
    upper: float = math.inf
    points: tuple = ()


@dataclass(frozen=True)
class _Side:
    mirrored: bool
    phase: complex
    func: Callable
    mp_func: Callable | None
    upper: float
    origin: tuple | None
    tail: tuple | None
    points: tuple
    order: float = 0.0
    tail_exact: Callable | None = None

    def phase_mp(self):
        return mp.expjpi(mp.mpf(self.order)) if self.mirrored else mp.mpf(1)


# ---------------------------------------------------------------------------
# side decomposition

def _shifted(series, shift, phase, sign):
    # density series -> integrand series: exponent e -> e + sign * shift
    if series is None:
        return None
    terms, radius = series

    def out(count):
        return [(complex(e) + sign * shift, complex(c) * phase) for e, c in terms(count)]
    return out, radius


def _sides(target, n) -> list:
    if isinstance(target, SyntheticIntegrand):
        func = target.func
        origin = None
        if target.origin_terms is not None:
            origin = (lambda c: [(complex(a), complex(b)) for a, b in target.origin_terms(c)],
                      target.origin_radius)
        tail = None
        if target.tail_terms is not None:
            tail = (lambda c: [(complex(a), complex(b)) for a, b in target.tail_terms(c)],
                    target.tail_radius)
        return [_Side(False, 1.0 + 0j, func, target.mp_func, target.upper, origin, tail,
                      tuple(target.points))]
    if not isinstance(target, DistributionSpec):
        raise ValidationError("target must be a DistributionSpec or SyntheticIntegrand")
    validate(target)
    n = float(n)
    sup = support(target)
    pdf = pdf_function(target)
    pdf_hi = pdf_mp(target)
    kinks = kink_points(target)
    out = []
    for mirrored in (False, True):
        if (sup.lower >= 0.0) if mirrored else (sup.upper <= 0.0):
            continue
        sign = -1.0 if mirrored else 1.0
        phase = sf.expipi(n) if mirrored else 1.0 + 0j

        def func(t, sign=sign, phase=phase):
            return phase * float(pdf(sign * t)) * t**n

        def mp_func(t, sign=sign):
            return pdf_hi(sign * t) * t**n

        upper = -sup.lower if mirrored else sup.upper
        points = tuple(sorted(sign * k for k in kinks if sign * k > 0))
        origin = _shifted(_origin_series(target, mirrored), n, phase, +1.0)
        tail = _shifted(_tail_series(target, mirrored), n, phase, -1.0)
        lattice = _tail_lattice_mp(target, mirrored)
        exact = None
        if lattice is not None:
            first, step = lattice
            exact = (lambda count, first=first, step=step:
                     [first + j * step - mp.mpf(n) for j in range(count)])
        out.append(_Side(mirrored, phase, func, mp_func, upper, origin, tail, points, n, exact))
    return out


def _count_divergent(exponents, limit):
    return sum(1 for e in exponents if e.real <= limit + _EXPONENT_TOL)


def _is_one(x: complex) -> bool:
    return abs(x - 1.0) < _EXPONENT_TOL


# ---------------------------------------------------------------------------
# subtraction scheme

def _log_factor(t, sigma, m):
    if m == 0:
        return 1.0
    return complex(math.log(t), math.pi * sigma) ** m


def _power(t, w):
    return cmath.exp(w * math.log(t))


def _partial_sum(terms, t, sign):
    # sum c t^(sign * e) with separate compensated real and imaginary parts
    vals = [c * _power(t, sign * e) for e, c in terms]
    return complex(math.fsum(v.real for v in vals), math.fsum(v.imag for v in vals))


def _tail_boundary(beta, sigma, m):
    # finite part of the integral of t^-beta L^m over [1, inf), beta != 1
    d = 1.0 - beta
    if m == 0:
        return -1.0 / d
    return 1.0 / d**2 - 1j * math.pi * sigma / d


def _tail_remainder(beta, x, sigma, m):
    # integral of t^-beta L^m over [x, inf), Re beta > 1
    d = beta - 1.0
    xp = _power(x, -d)
    if m == 0:
        return xp / d
    return xp * (math.log(x) / d + 1.0 / d**2) + 1j * math.pi * sigma * xp / d


def _origin_boundary(alpha, sigma, m):
    # finite part of the integral of t^alpha L^m over (0, 1], alpha != -1
    d = alpha + 1.0
    if m == 0:
        return 1.0 / d
    return -1.0 / d**2 + 1j * math.pi * sigma / d


def _origin_remainder(alpha, x, sigma, m):
    # integral of t^alpha L^m over (0, x], Re alpha > -1
    d = alpha + 1.0
    xp = _power(x, d)
    if m == 0:
        return xp / d
    return xp * (math.log(x) / d - 1.0 / d**2) + 1j * math.pi * sigma * xp / d


def _log_term_boundary(coeff, sigma, m, at_origin):
    # t^-1 term: its finite part only survives on the mirrored side, where the
    # logarithm of the negative endpoint contributes (i pi)^(m+1)/(m+1)
    if not sigma:
        return 0j
    val = coeff * (1j * math.pi) ** (m + 1) / (m + 1)
    return val if at_origin else -val


def _series_tail_sum(terms, piece):
    acc = 0j
    last = 0.0
    for e, c in terms:
        v = c * piece(e)
        acc += v
        last = abs(v)
    return acc, last


class _Accumulator:
    def __init__(self):
        self.value = 0j
        self.err = 0.0
        self.scale = 0.0

    def add(self, value, err=0.0):
        self.value += value
        self.err += err
        self.scale += abs(value)


def _integrate(g, a, b, cfg, points=()):
    return integrate_complex(g, a, b, rel_tol=cfg.rel_tol, abs_tol=cfg.abs_tol,
                             limit=cfg.max_subdivisions, transform=cfg.semi_infinite_transform,
                             points=list(points) or None)


def _side_subtraction(side, cfg, n_guard, m, acc, meta):
    sigma = 1 if side.mirrored else 0
    tag = "-" if side.mirrored else "+"
    top = min(1.0, side.upper)

    def integrand(t):
        return side.func(t) * _log_factor(t, sigma, m)

    # (0, 1]
    origin_terms = side.origin[0](_SERIES_TERMS) if side.origin else []
    n_div = _count_divergent([e for e, _ in origin_terms], -1.0)
    if n_div and side.upper < 1.0:
        raise UnsupportedError("origin divergence on a support shorter than the unit split")
    if origin_terms and n_div:
        radius = side.origin[1]
        J = n_div + n_guard
        head, rest = origin_terms[:J], origin_terms[J:]
        x_s = min(0.125, radius / 4.0)

        def body(t):
            return (side.func(t) - _partial_sum(head, t, +1.0)) * _log_factor(t, sigma, m)

        val, err = _integrate(body, x_s, 1.0, cfg, side.points)
        acc.add(val, err)
        near, last = _series_tail_sum(rest, lambda a: _origin_remainder(a, x_s, sigma, m))
        acc.add(near, 10.0 * last)
        for a, c in head:
            if abs(a + 1.0) < _EXPONENT_TOL:
                acc.add(_log_term_boundary(c, sigma, m, at_origin=True))
            else:
                acc.add(c * _origin_boundary(a, sigma, m))
        meta[f"zero{tag}"] = {"divergent": n_div, "subtracted": J, "switch": x_s}
    else:
        val, err = _integrate(integrand, 0.0, top, cfg, side.points)
        acc.add(val, err)
    if side.upper <= 1.0:
        return

    # [1, upper)
    tail_terms = side.tail[0](_SERIES_TERMS) if (side.tail and math.isinf(side.upper)) else []
    n_div = _count_divergent([e for e, _ in tail_terms], 1.0)
    if tail_terms and n_div:
        radius = side.tail[1]
        J = n_div + n_guard
        head, rest = tail_terms[:J], tail_terms[J:]
        x_s = max(8.0, 4.0 * radius)

        def body(t):
            return (side.func(t) - _partial_sum(head, t, -1.0)) * _log_factor(t, sigma, m)

        val, err = _integrate(body, 1.0, x_s, cfg, side.points)
        acc.add(val, err)
        far, last = _series_tail_sum(rest, lambda b: _tail_remainder(b, x_s, sigma, m))
        acc.add(far, 10.0 * last)
        for b, c in head:
            if _is_one(b):
                acc.add(_log_term_boundary(c, sigma, m, at_origin=False))
            else:
                acc.add(c * _tail_boundary(b, sigma, m))
        meta[f"inf{tag}"] = {"divergent": n_div, "subtracted": J, "switch": x_s}
    else:
        val, err = _integrate(integrand, 1.0, side.upper, cfg, side.points)
        acc.add(val, err)


def subtraction_scheme(target, n=None, cfg: QuadratureConfig | None = None,
                       n_guard: int = 4, log_power: int = 0) -> SchemeResult:
    """Renormalize the integral of p(x) x^n by subtracting its divergent expansion terms.

    Each half line is split at t = 1.  Near a divergent endpoint the leading
    expansion terms plus ``n_guard`` convergent ones are subtracted under the
    integral and their finite parts added back; beyond a switch point inside
    the series' convergence region the remainder is summed term by term.

    Parameters
    ----------
    target : DistributionSpec or SyntheticIntegrand
        For a synthetic integrand ``n`` is ignored.
    n : real
        Moment order.
    log_power : {0, 1}
        1 renormalizes p(x) x^n ln x instead (the power-log moment).
    """
    cfg = cfg or QuadratureConfig()
    if log_power not in (0, 1):
        raise UnsupportedError("log_power must be 0 or 1")
    if int(n_guard) != n_guard or n_guard < 0:
        raise ValidationError("n_guard must be a non-negative integer")
    if isinstance(target, DistributionSpec):
        if n is None or isinstance(n, complex) or not math.isfinite(float(n)):
            raise ValidationError("n must be a finite real order")
    acc = _Accumulator()
    meta = {"n_guard": n_guard, "log_power": log_power}
    for side in _sides(target, n):
        _side_subtraction(side, cfg, n_guard, log_power, acc, meta)
    err = acc.err + 1e-15 * acc.scale
    return SchemeResult(ComplexValue.from_complex(acc.value), "subtraction", err, meta)


# ---------------------------------------------------------------------------
# least-squares fits in extended precision

def _exact_power(p, exact):
    # float exponents lose digits that matter once multiplied by ln of a large
    # regulator, so use the extended-precision value when one is known
    for e in exact:
        if abs(float(e) - p) < 1e-10:
            return e
    return mp.mpf(p)


def _column_functions(ladder: ExponentLadder, log_shift=0, exact=()):
    # log_shift adds i*pi to the plain log column (lower side of a two-sided fit)
    cols = [(f"^{p:g}", lambda x, p=_exact_power(p, exact): mp.power(x, p)) for p in ladder.powers]
    if ladder.has_log_term:
        cols.append(("log", lambda x: mp.log(x) + log_shift))
    cols += [(f"^{k}log", lambda x, k=k: mp.power(x, k) * mp.log(x)) for k in ladder.log_powers]
    return cols


def _lstsq(rows, rhs, max_condition):
    """Least squares with unit-norm columns; returns (coeffs, residual, condition)."""
    nrow, ncol = len(rows), len(rows[0])
    if nrow < ncol + 1:
        raise GridTooSmallError(f"{nrow} samples cannot fit {ncol} basis functions")
    scale = []
    for j in range(ncol):
        norm = mp.sqrt(mp.fsum(abs(r[j]) ** 2 for r in rows))
        scale.append(norm if norm != 0 else mp.mpf(1))
    A = mp.matrix([[r[j] / scale[j] for j in range(ncol)] for r in rows])
    cond = float(np.linalg.cond(np.array([[complex(v) for v in r] for r in A.tolist()])))
    if not math.isfinite(cond) or cond > max_condition:
        raise IllConditionedFitError(f"fit condition number {cond:.3g} exceeds {max_condition:.3g}", cond)
    sol, res = mp.qr_solve(A, mp.matrix(list(rhs)))
    coeffs = [sol[j] / scale[j] for j in range(ncol)]
    return coeffs, float(abs(res)), cond


def fit_finite_part(samples, ladder: ExponentLadder, dps: int = 30, max_condition: float = 1e10):
    """Constant term of a least-squares fit in the ladder basis.

    Parameters
    ----------
    samples : sequence of (parameter, value)
        Positive parameters with real or complex values.
    ladder : ExponentLadder

    Returns
    -------
    a0 : ComplexValue
    coeffs : dict
        Column label -> complex coefficient.
    residual : float
        Euclidean norm of the fit residual.
    """
    samples = list(samples)
    if len(samples) < len(ladder) + 3:
        raise GridTooSmallError(f"need at least {len(ladder) + 3} samples, got {len(samples)}")
    with mp.workdps(dps):
        params = [mp.mpf(p) for p, _ in samples]
        if any(p <= 0 for p in params):
            raise ValidationError("fit parameters must be positive")
        values = [mp.mpc(complex(v)) for _, v in samples]
        cols = _column_functions(ladder)
        rows = [[f(p) for _, f in cols] + [mp.mpf(1)] for p in params]
        coeffs, residual, _ = _lstsq(rows, values, max_condition)
    labels = [name for name, _ in cols]
    a0 = ComplexValue.from_complex(complex(coeffs[-1]))
    return a0, {label: complex(c) for label, c in zip(labels, coeffs)}, residual


def _check_grid(grid, ladder, what):
    grid = [float(g) for g in grid]
    if any(not (g > 0 and math.isfinite(g)) for g in grid):
        raise ValidationError(f"{what} values must be positive and finite")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValidationError(f"{what} must be strictly ascending")
    need = (len(ladder) if ladder is not None else 1) + 3
    if len(grid) < need:
        raise GridTooSmallError(f"{what} needs at least {need} points, got {len(grid)}")
    if ladder is not None and len(ladder) and grid[-1] / grid[0] < 10.0:
        raise GridTooSmallError(f"{what} must span at least a factor 10")
    return grid


def _two_sided_samples(sides, values, grid, symmetric):
    # values[i][k]: side i sample at grid[k]; returns [(point tuple, total)]
    if len(sides) == 1:
        return [((g,), values[0][k]) for k, g in enumerate(grid)]
    if symmetric:
        return [((g, g), values[0][k] + values[1][k]) for k, g in enumerate(grid)]
    return [((g1, g2), values[0][i] + values[1][j])
            for i, g1 in enumerate(grid) for j, g2 in enumerate(grid)]


def _joint_fit(sides, ladders, samples, symmetric, log_shifts, max_condition, extra_cols=None,
               exact=None):
    """Fit sum over sides of ladder columns in each side's regulator plus a constant."""
    cols = []
    exact = exact or [()] * len(sides)
    if len(sides) == 1 or symmetric:
        merged = _merge_ladders(ladders)
        if symmetric and len(sides) == 2 and merged.has_log_term:
            raise UnsupportedError("a logarithmic divergence needs independent cut-offs on the two sides")
        for name, f in _column_functions(merged, 0, [e for ex in exact for e in ex]):
            cols.append((name, lambda pt, f=f: f(pt[0])))
        for name, f in (extra_cols or [[]])[0]:
            cols.append((name, lambda pt, f=f: f(pt[0])))
    else:
        for i, ladder in enumerate(ladders):
            for name, f in _column_functions(ladder, log_shifts[i], exact[i]):
                cols.append((f"{name}[{i}]", lambda pt, f=f, i=i: f(pt[i])))
            for name, f in (extra_cols or [[], []])[i]:
                cols.append((f"{name}[{i}]", lambda pt, f=f, i=i: f(pt[i])))
    rows = [[f(pt) for _, f in cols] + [mp.mpf(1)] for pt, _ in samples]
    coeffs, residual, cond = _lstsq(rows, [v for _, v in samples], max_condition)
    return coeffs[-1], residual, cond, [name for name, _ in cols]


def _merge_ladders(ladders):
    powers = sorted({p for lad in ladders for p in lad.powers})
    logs = sorted({k for lad in ladders for k in lad.log_powers})
    return ExponentLadder(tuple(powers), any(lad.has_log_term for lad in ladders), tuple(logs))


def _truncate(ladder, keep_corrections, corrections):
    # drop the last correction powers (used for the error estimate)
    drop = set(corrections[keep_corrections:])
    return ExponentLadder(tuple(p for p in ladder.powers if p not in drop), ladder.has_log_term,
                          ladder.log_powers)


def _tail_exponents(side, count):
    if side.tail is None or math.isfinite(side.upper):
        return []
    return [e for e, _ in side.tail[0](count)]


def _tail_exponents_mp(side, count):
    if side.tail is None or math.isfinite(side.upper):
        return []
    if side.tail_exact is not None:
        return side.tail_exact(count)
    return [mp.mpf(_as_real_exponent(e)) for e in _tail_exponents(side, count)]


def _as_real_exponent(e: complex) -> float:
    if abs(e.imag) > _EXPONENT_TOL:
        raise UnsupportedError("regulator fits need real exponents")
    return e.real


def _cutoff_ladder(side, n_corrections, user):
    """Divergent powers 1 - beta (or a log) plus the leading convergent ones."""
    betas = [_as_real_exponent(e) for e in _tail_exponents(side, _SERIES_TERMS)]
    n_div = sum(1 for b in betas if b <= 1.0 + _EXPONENT_TOL)
    has_log = any(abs(b - 1.0) < _EXPONENT_TOL for b in betas[: n_div + n_corrections])
    divergent = [1.0 - b for b in betas[:n_div] if abs(b - 1.0) >= _EXPONENT_TOL]
    corrections = [1.0 - b for b in betas[n_div:n_div + n_corrections] if abs(b - 1.0) >= _EXPONENT_TOL]
    corrections = [p for p in corrections if p not in (user.powers if user else ())]
    base = set(divergent) | set(user.powers if user else ())
    powers = tuple(sorted(base | set(corrections)))
    ladder = ExponentLadder(powers, has_log or bool(user and user.has_log_term))
    return ladder, corrections, [1 - b for b in _tail_exponents_mp(side, len(betas))]


def _weighted_ladder(side, n_corrections, user):
    """Singular s-powers beta - 1 (s^k ln s at integer collisions)."""
    betas = [_as_real_exponent(e) for e in _tail_exponents(side, _SERIES_TERMS)]
    n_div = sum(1 for b in betas if b <= 1.0 + _EXPONENT_TOL)
    powers, logs, has_log, corrections = set(), set(), False, []
    for j, b in enumerate(betas[: n_div + n_corrections]):
        e = b - 1.0
        k = round(e)
        if abs(e - k) < _EXPONENT_TOL and k >= 0:
            if k == 0:
                has_log = True
            else:
                logs.add(int(k))
            continue
        powers.add(e)
        if j >= n_div:
            corrections.append(e)
    if user is not None:
        powers |= set(user.powers)
        has_log = has_log or user.has_log_term
        logs |= set(user.log_powers)
    corrections = [p for p in corrections if p not in (user.powers if user else ())]
    ladder = ExponentLadder(tuple(sorted(powers)), has_log, tuple(sorted(logs)))
    return ladder, corrections, [b - 1 for b in _tail_exponents_mp(side, len(betas))]


def _fit_with_estimate(sides, ladders, corrections, samples, symmetric, log_shifts, cfg, extra=None,
                       exact=None):
    a0, residual, cond, labels = _joint_fit(sides, ladders, samples, symmetric, log_shifts,
                                            cfg.max_condition, extra, exact)
    # error estimate: refit without the last correction column on each side
    reduced = [_truncate(lad, max(len(c) - 1, 0), c) if c else lad for lad, c in zip(ladders, corrections)]
    if any(c for c in corrections):
        a0_red, _, _, _ = _joint_fit(sides, reduced, samples, symmetric, log_shifts,
                                     cfg.max_condition, extra, exact)
        err = float(abs(a0 - a0_red))
    else:
        err = residual
    return complex(a0), err, residual, cond, labels


def _cumulative_cutoff(side, grid):
    """Integral of the side integrand over [0, L] for every L in the ascending grid."""
    f = side.mp_func
    if f is None:
        raise UnsupportedError("cut-off fits need an mpmath integrand")
    upper = mp.mpf(side.upper) if math.isfinite(side.upper) else mp.inf
    pts = sorted({mp.mpf(0), mp.mpf(1), *[mp.mpf(p) for p in side.points]})
    out = []
    start = mp.mpf(0)
    total = mp.mpf(0)
    for L in grid:
        L = mp.mpf(L)
        stop = min(L, upper)
        if stop > start:
            nodes = [start] + [p for p in pts if start < p < stop]
            # geometric breakpoints keep tanh-sinh panels within a factor 4
            x = max(nodes[-1], mp.mpf(1))
            while x * 4 < stop:
                x *= 4
                if x > nodes[-1]:
                    nodes.append(x)
            nodes.append(stop)
            total += mp.quad(f, nodes)
            start = stop
        out.append(total)
    return out


def _default_cutoff_grid(sides, n_points):
    radius = max([s.tail[1] for s in sides if s.tail is not None] + [1.0])
    start = 10.0 * max(radius, 1.0)
    return [start * 10.0 ** (k / 4.0) for k in range(n_points)]


def _growth_digits(ladders, grid, inverse):
    """Decimal digits the largest divergent sample adds on top of O(1) values."""
    top = 1.0 / grid[0] if inverse else grid[-1]
    worst = 0.0
    for lad in ladders:
        for p in lad.powers:
            worst = max(worst, (-p if inverse else p) * math.log10(top))
    return int(math.ceil(worst)) + 2


def _finish(a0, err, scheme, meta):
    # the value leaves in float64, so the estimate never claims less than its rounding
    err = max(err, 8.0 * np.finfo(float).eps * abs(a0))
    return SchemeResult(ComplexValue.from_complex(a0), scheme, err, meta)


def cutoff_scheme(target, n=None, ladder: ExponentLadder | None = None, grid=None,
                  cfg: FitConfig | None = None, symmetric: bool = False) -> SchemeResult:
    """Constant term of the cut-off integral over [-L2, L1] fitted in L.

    Parameters
    ----------
    ladder : ExponentLadder, optional
        Leading L-powers; the powers derived from the tail expansion (and the
        first ``cfg.n_corrections`` convergent ones) are always added, as far
        as the number of samples allows.
    grid : sequence of float, optional
        Ascending cut-offs spanning at least a factor 10.  Two-sided integrals
        use the tensor grid (L1, L2) unless ``symmetric`` is set.
    """
    cfg = cfg or FitConfig()
    if grid is not None:
        grid = _check_grid(grid, ladder, "cut-off grid")
    sides = _sides(target, n)
    if symmetric and len(sides) == 2 and not _symmetric_target(target):
        raise ValidationError("symmetric cut-offs require a symmetric density")
    with mp.workdps(cfg.dps):
        ladders = [_cutoff_ladder(s, cfg.n_corrections, ladder)[0] for s in sides]
    if grid is None:
        grid = _default_cutoff_grid(sides, max(len(lad) for lad in ladders) + 4)
    dps = cfg.dps + _growth_digits(ladders, grid, inverse=False)
    with mp.workdps(dps):
        built = [_cutoff_ladder(s, cfg.n_corrections, ladder) for s in sides]
        ladders = [b[0] for b in built]
        corrections = [b[1] for b in built]
        exact = [b[2] for b in built]
        n_cols = sum(len(lad) for lad in ladders) + 1
        n_rows = len(grid) if (len(sides) == 1 or symmetric) else len(grid) ** 2
        ladders, corrections, _ = _fit_budget(ladders, corrections, n_rows, n_cols, symmetric)
        values = []
        for s in sides:
            raw = _cumulative_cutoff(s, grid)
            values.append([v * s.phase_mp() for v in raw])
        samples = _two_sided_samples(sides, values, grid, symmetric)
        shifts = [mp.mpc(0, mp.pi) if s.mirrored else 0 for s in sides]
        a0, err, residual, cond, labels = _fit_with_estimate(
            sides, ladders, corrections, samples, symmetric, shifts, cfg, exact=exact)
    meta = {"ladders": [lad.to_dict() for lad in ladders], "grid": list(grid), "columns": labels,
            "residual": residual, "condition": cond, "symmetric": symmetric, "dps": dps}
    return _finish(a0, err, "cutoff", meta)


def _symmetric_target(target):
    return isinstance(target, DistributionSpec) and is_symmetric(target)


def _fit_budget(ladders, corrections, n_rows, n_cols, symmetric, analytic=None):
    """Drop optional columns until at least two degrees of freedom remain.

    Corrections are ordered from most to least important, so the last one
    goes first; analytic powers s^k compete with them by exponent.
    """
    ladders, corrections = list(ladders), [list(c) for c in corrections]
    analytic = [list(a) for a in analytic] if analytic is not None else [[] for _ in ladders]

    def count():
        if symmetric or len(ladders) == 1:
            return len(_merge_ladders(ladders)) + len(analytic[0]) + 1
        return sum(len(lad) + len(a) for lad, a in zip(ladders, analytic)) + 1

    while n_rows < count() + 2:
        options = []
        for i in range(len(ladders)):
            if corrections[i]:
                options.append((abs(corrections[i][-1]), 0, i))
            if analytic[i]:
                options.append((analytic[i][-1][2], 1, i))
        if not options:
            raise GridTooSmallError(f"{n_rows} samples are too few for the divergent basis")
        _, which, i = max(options)
        if which == 1:
            analytic[i].pop()
            continue
        drop = corrections[i].pop()
        ladders[i] = ExponentLadder(tuple(p for p in ladders[i].powers if p != drop),
                                    ladders[i].has_log_term, ladders[i].log_powers)
    return ladders, corrections, analytic


def _weighted_sample(side, s):
    f = side.mp_func
    if f is None:
        raise UnsupportedError("weighted fits need an mpmath integrand")
    upper = mp.mpf(side.upper) if math.isfinite(side.upper) else mp.inf
    nodes = sorted({mp.mpf(0), mp.mpf(1), *[mp.mpf(p) for p in side.points]})
    x = mp.mpf(1)
    reach = 40 / s
    while x < reach and x < upper:
        x *= 8
        nodes.append(x)
    nodes = sorted(p for p in set(nodes) if p < upper) + [upper]
    return mp.quad(lambda t: mp.exp(-s * t) * f(t), nodes)


WEIGHTED_FIT = FitConfig(n_corrections=3, n_analytic=4)


def _default_s_grid(n_points):
    return [1e-2 * 2.0 ** (-k) for k in range(n_points)][::-1]


def _analytic_columns(ladders, count):
    return [[(f"^{k}", lambda x, k=k: mp.power(x, k), k) for k in range(1, count + 1)
             if not any(abs(p - k) < _EXPONENT_TOL for p in lad.powers)]
            for lad in ladders]


def weighted_scheme(target, n=None, s_grid=None, ladder: ExponentLadder | None = None,
                    cfg: FitConfig | None = None, symmetric: bool = False) -> SchemeResult:
    """Constant term a0 of the exponentially weighted integral fitted in s.

    The weight is e^{-s|x|}, with independent s1 and s2 on the two half
    lines.  The singular s-powers come from the tail expansion (a term
    t^-beta gives s^(beta-1), or s^k ln s when beta - 1 = k is a
    non-negative integer); ``cfg.n_analytic`` integer powers s^k absorb the
    regular part.  The default configuration is ``WEIGHTED_FIT``.
    """
    cfg = cfg or WEIGHTED_FIT
    if s_grid is not None:
        s_grid = _check_grid(s_grid, ladder, "s grid")
    sides = _sides(target, n)
    if symmetric and len(sides) == 2 and not _symmetric_target(target):
        raise ValidationError("a shared s requires a symmetric density")
    with mp.workdps(cfg.dps):
        ladders = [_weighted_ladder(s, cfg.n_corrections, ladder)[0] for s in sides]
        analytic = _analytic_columns(ladders, cfg.n_analytic)
    if s_grid is None:
        width = max(len(lad) + len(a) for lad, a in zip(ladders, analytic)) + 1
        one_axis = len(sides) == 1 or symmetric
        s_grid = _default_s_grid(max(12, width + 5) if one_axis else 12)
    dps = cfg.dps + _growth_digits(ladders, s_grid, inverse=True)
    with mp.workdps(dps):
        built = [_weighted_ladder(s, cfg.n_corrections, ladder) for s in sides]
        ladders = [b[0] for b in built]
        corrections = [b[1] for b in built]
        exact = [b[2] for b in built]
        analytic = _analytic_columns(ladders, cfg.n_analytic)
        n_cols = sum(len(lad) + len(a) for lad, a in zip(ladders, analytic)) + 1
        n_rows = len(s_grid) if (len(sides) == 1 or symmetric) else len(s_grid) ** 2
        ladders, corrections, analytic = _fit_budget(ladders, corrections, n_rows, n_cols, symmetric,
                                                     analytic)
        analytic = [[(name, f) for name, f, _ in a] for a in analytic]
        values = []
        for side in sides:
            values.append([_weighted_sample(side, mp.mpf(s)) * side.phase_mp() for s in s_grid])
        samples = _two_sided_samples(sides, values, s_grid, symmetric)
        # ln(1/s) plays the role of ln L, so the lower side log column is -ln s2 + i pi;
        # the sign of the log column itself is absorbed by its coefficient
        shifts = [mp.mpc(0, -mp.pi) if s.mirrored else 0 for s in sides]
        extra = analytic if not symmetric else [analytic[0]]
        a0, err, residual, cond, labels = _fit_with_estimate(
            sides, ladders, corrections, samples, symmetric, shifts, cfg, extra, exact)
    meta = {"ladders": [lad.to_dict() for lad in ladders], "grid": list(s_grid), "columns": labels,
            "residual": residual, "condition": cond, "symmetric": symmetric, "dps": dps}
    return _finish(a0, err, "weighted", meta)


# ---------------------------------------------------------------------------
# Mellin routes

_MELLIN_LOG_SPLIT = 40.0


def _mellin_log_tail(spec, mirrored, z):
    """Integral of p(+-t) t^z over t > e^40 from the tail series, or None without one."""
    try:
        series = _tail_series(spec, mirrored)
    except UnsupportedError:
        return None
    if series is None or series[1] >= math.exp(_MELLIN_LOG_SPLIT):
        return None
    out = 0j
    for beta, c in series[0](8):
        d = complex(beta) - z - 1.0
        out += complex(c) * cmath.exp(-d * _MELLIN_LOG_SPLIT) / d
    return out


def mellin_density_numeric(spec: DistributionSpec, z, cfg: QuadratureConfig | None = None) -> SchemeResult:
    """Mellin integral of the density, both half lines, inside its strip.

    Returns the integral of p(t) t^z over t > 0 plus e^{i pi z} times the
    integral of p(-t) t^z over t > 0.
    """
    cfg = cfg or QuadratureConfig()
    validate(spec)
    z = sf.as_complex(z)
    lo, hi = mellin_strip(spec)
    if not lo < z.real < hi:
        raise OutsideStripError(f"Re z = {z.real} lies outside the Mellin strip ({lo}, {hi})", (lo, hi))
    sup = support(spec)
    pdf = pdf_function(spec)
    total, err = 0j, 0.0
    for sign in (1.0, -1.0):
        upper = sup.upper if sign > 0 else -sup.lower
        if upper <= 0.0:
            continue
        phase = 1.0 if sign > 0 else sf.expipi(z)
        pts = [sign * k for k in kink_points(spec) if sign * k > 0]

        def g(t, sign=sign):
            return float(pdf(sign * t)) * _power(t, z)

        def g_log(s, sign=sign):
            # t = e^s turns a power tail into an exponential decay in s
            return float(pdf(sign * math.exp(s))) * cmath.exp(s * (z + 1.0))

        tail = _mellin_log_tail(spec, sign < 0, z) if math.isinf(upper) else None
        for a, b in ((0.0, min(1.0, upper)), (1.0, upper)):
            if b <= a:
                continue
            if tail is not None and b == upper:
                val, e = _integrate(g_log, 0.0, _MELLIN_LOG_SPLIT, cfg,
                                    [math.log(k) for k in pts if k > 1.0])
                val += tail
            else:
                val, e = _integrate(g, a, b, cfg, pts)
            total += phase * val
            err += abs(phase) * e
    return SchemeResult(ComplexValue.from_complex(total), "mellin-density", err,
                        {"strip": [lo, hi]})


def _location(spec):
    return spec.params.get("mu", 0.0) if spec.kind in ("Laplace", "QGaussian") else 0.0


def mellin_cf_numeric(spec: DistributionSpec, z, cfg: QuadratureConfig | None = None) -> SchemeResult:
    """Moment from the Mellin transform of the characteristic function.

    Valid for -1 < Re z < 0:
    i^z / Gamma(-z) times the integral of s^(-z-1) f(s) over s > 0.
    """
    cfg = cfg or QuadratureConfig()
    validate(spec)
    z = sf.as_complex(z)
    if not -1.0 < z.real < 0.0:
        raise OutsideStripError(f"Re z = {z.real} lies outside the strip (-1, 0)", (-1.0, 0.0))

    def g(s):
        return _power(s, -z - 1.0) * characteristic_function(spec, s)

    def g_near(s):
        # f(0) = 1 is subtracted on (0, 1] and integrated exactly (-1/z)
        return _power(s, -z - 1.0) * (characteristic_function(spec, s) - 1.0)

    v1, e1 = _integrate(g_near, 0.0, 1.0, cfg)
    shift = _location(spec)
    if shift:
        # e^{i mu k} times the centred cf: Fourier-weighted rule on the tail
        centred = DistributionSpec(spec.kind, {**spec.params, "mu": 0.0})
        v2, e2 = integrate_fourier(lambda s: _power(s, -z - 1.0) * characteristic_function(centred, s),
                                   1.0, shift, cfg.rel_tol, cfg.abs_tol, cfg.max_subdivisions)
    else:
        v2, e2 = _integrate(g, 1.0, math.inf, cfg)
    prefactor = sf.expipi(z / 2.0) * sf.rgamma(-z)
    value = prefactor * (v1 - 1.0 / z + v2)
    return SchemeResult(ComplexValue.from_complex(value), "mellin-cf", abs(prefactor) * (e1 + e2),
                        {"strip": [-1.0, 0.0]})
