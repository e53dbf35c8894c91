"""Significand distribution of Weibull random variables and its distance from Benford's law."""

from .core_math import (
    benford_cdf,
    benford_digit_probability,
    complex_gamma,
    gamma_modulus_one_plus_ix,
    leading_digit,
    significand,
)
from .errors import ConvergenceError, DomainError, PreconditionError
from .metrics import (
    ConformanceReport,
    conformance_report,
    digit_probabilities,
    digit_probability,
    ks_statistic,
    l1_deviation,
    l2_deviation,
    l2_rms_deviation,
    l2_spectral,
)
from .montecarlo import EmpiricalDigits, empirical_digit_frequencies, empirical_log_mod1_cdf
from .series import (
    DensityTrace,
    TruncationPlan,
    cdf_direct,
    cdf_series,
    density_trace,
    f_prime_direct,
    f_prime_series,
    terms_for_epsilon,
    truncation_bound,
)
from .weibull import WeibullParams

__version__ = "0.1.0"
