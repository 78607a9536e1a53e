"""Shared specs and cached scheme evaluations (the fitted schemes take ~1 s each)."""
from functools import lru_cache

from renmoment import distributions as D
from renmoment import schemes_numeric as sn

SEVEN = {
    "cauchy": D.cauchy(),
    "levy": D.levy(),
    "qexp": D.qexponential(1.75),
    "qgauss": D.qgaussian(2.2),
    "normal": D.normal(),
    "student": D.student_t(5.0),
    "laplace": D.laplace(1.0, 0.7),
}

_SCHEMES = {
    "subtraction": lambda spec, n: sn.subtraction_scheme(spec, n),
    "cutoff": lambda spec, n: sn.cutoff_scheme(spec, n),
    "weighted": lambda spec, n: sn.weighted_scheme(spec, n),
}


@lru_cache(maxsize=None)
def _scheme_result(kind, params, scheme, n):
    return _SCHEMES[scheme](D.DistributionSpec(kind, dict(params)), n)


def scheme_result(spec, scheme, n) -> sn.SchemeResult:
    """Default-configuration scheme result, memoized across the test session."""
    return _scheme_result(spec.kind, tuple(spec.params.items()), scheme, int(n))


def scheme_value(spec, scheme, n) -> complex:
    return complex(scheme_result(spec, scheme, n).value)
