"""Renormalized power and logarithmic moments of heavy-tailed distributions."""
from .closed_form import (MomentValue, finite_part_at_pole, pole_locations, q_singularity_finite_part,
                          q_to_one_limit, raw_moment, renormalized_moment, symmetric_average)
from .distributions import (DistributionSpec, asymptotic_expansion, cauchy, characteristic_function,
                            laplace, levy, mellin_strip, normal, pdf_function, qexponential, qgaussian,
                            student_t, support)
from .errors import RenMomentError
from .log_moments import (LogMomentValue, golden_log_moments, log_moment_direct, log_moment_from_power,
                          power_log_moment, verify_power_log_relation)
from .schemes_numeric import (ExponentLadder, FitConfig, QuadratureConfig, SchemeResult, cutoff_scheme,
                              fit_finite_part, mellin_cf_numeric, mellin_density_numeric,
                              subtraction_scheme, weighted_scheme)
from .specfun import ComplexValue

__version__ = "0.1.0"

__all__ = [
    "ComplexValue", "DistributionSpec", "ExponentLadder", "FitConfig", "LogMomentValue", "MomentValue",
    "QuadratureConfig", "RenMomentError", "SchemeResult", "asymptotic_expansion", "cauchy",
    "characteristic_function", "cutoff_scheme", "finite_part_at_pole", "fit_finite_part",
    "golden_log_moments", "laplace", "levy", "log_moment_direct", "log_moment_from_power",
    "mellin_cf_numeric", "mellin_density_numeric", "mellin_strip", "normal", "pdf_function",
    "pole_locations", "power_log_moment", "q_singularity_finite_part", "q_to_one_limit", "qexponential",
    "qgaussian", "raw_moment", "renormalized_moment", "student_t", "subtraction_scheme", "support",
    "symmetric_average", "verify_power_log_relation", "weighted_scheme",
]
