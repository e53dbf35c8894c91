"""Distribution of ``log_B X mod 1`` for a Weibull variable X.

Two independent evaluation routes are provided:

* the Fourier series obtained by Poisson summation, whose m-th harmonic has
  coefficient ``Gamma(1 + 2*pi*i*m / (gamma * ln B))``;
* the direct sums over integer scales ``B**k``, which converge slowly in k
  but need nothing beyond ``exp``.

``log B`` is the natural logarithm throughout; base-B logarithms appear only
as ``ln(.)/ln(B)``.
"""

from dataclasses import dataclass, field
from functools import lru_cache
import math

import numpy as np

from .core_math import complex_gamma
from .errors import ConvergenceError, DomainError, PreconditionError
from .weibull import WeibullParams

DIRECT_K_CAP = 20_000
DEFAULT_TAIL_TOL = 1e-16
DEFAULT_EPSILON = 1e-10


def _log_base(base):
    base = float(base)
    if not base > 1.0:
        raise DomainError(f"base must exceed 1, got {base}")
    return math.log(base)


def _check_terms(M):
    if int(M) != M or M < 1:
        raise DomainError(f"number of terms must be a positive integer, got {M}")
    return int(M)


def _as_z(z):
    z = np.asarray(z, dtype=float)
    if np.any(~((z >= 0) & (z <= 1))):
        raise DomainError("z must lie in [0, 1]")
    return z


def _ret(arr):
    return float(arr) if arr.ndim == 0 else arr


def alpha_phase(alpha, base):
    """Fractional part of log_B(alpha); the only way alpha enters the series."""
    return (math.log(alpha) / _log_base(base)) % 1.0


@lru_cache(maxsize=256)
def _gamma_coefficients(gamma, log_base, M):
    c = np.array(
        [complex_gamma(complex(1.0, 2.0 * math.pi * m / (gamma * log_base))) for m in range(1, M + 1)]
    )
    c.setflags(write=False)
    return c


def fourier_coefficients(gamma, base, M):
    """``Gamma(1 + 2*pi*i*m/(gamma*ln B))`` for m = 1..M."""
    return _gamma_coefficients(float(gamma), _log_base(base), _check_terms(M))


def shifted_coefficients(p, base, M):
    """Harmonic weights ``c_m * exp(2*pi*i*m*log_B alpha)`` for m = 1..M."""
    c = fourier_coefficients(p.gamma, base, M)
    m = np.arange(1, c.size + 1)
    shift = np.mod(m * alpha_phase(p.alpha, base), 1.0)
    return c * np.exp(2j * np.pi * shift)


def _harmonic_angles(z, m):
    # reduce m*z mod 1 before scaling so z = 1 lands exactly on angle 0
    return 2.0 * np.pi * np.mod(np.multiply.outer(z, m), 1.0)


def density_from_coefficients(z, w):
    """``1 + 2 * sum_m Re(w_m * exp(-2*pi*i*m*z))`` for weights ``w`` indexed from m = 1."""
    z = _as_z(z)
    w = np.asarray(w, dtype=complex)
    phi = _harmonic_angles(z, np.arange(1, w.size + 1))
    return _ret(np.asarray(1.0 + 2.0 * (np.cos(phi) @ w.real + np.sin(phi) @ w.imag)))


def cdf_from_coefficients(z, w):
    """Exact integral over [0, z] of :func:`density_from_coefficients`."""
    z = _as_z(z)
    w = np.asarray(w, dtype=complex)
    m = np.arange(1, w.size + 1)
    phi = _harmonic_angles(z, m)
    harm = (w.imag - np.cos(phi) * w.imag + np.sin(phi) * w.real) / (np.pi * m)
    return _ret(np.asarray(z + harm.sum(axis=-1)))


def f_prime_series(z, p, base, M):
    """Density of ``log_B X mod 1`` from the first M Fourier harmonics.

    ``1 + 2 * sum_{m=1}^{M} Re(exp(-2*pi*i*m*(z - log_B alpha)) * c_m)``.
    ``z`` may be a scalar or an array in [0, 1].
    """
    return density_from_coefficients(z, shifted_coefficients(p, base, M))


def cdf_series(z, p, base, M):
    """Term-wise antiderivative of :func:`f_prime_series` from 0 to z."""
    return cdf_from_coefficients(z, shifted_coefficients(p, base, M))


def series_tail(z, p, base, M, reference_terms=200):
    """``f_prime_series(.., reference_terms) - f_prime_series(.., M)``, summed directly.

    Only harmonics M+1..reference_terms are added, so the result keeps full
    relative precision even when it is far below 1e-16.
    """
    z = _as_z(z)
    M = _check_terms(M)
    w = shifted_coefficients(p, base, max(_check_terms(reference_terms), M))[M:]
    phi = _harmonic_angles(z, np.arange(M + 1, M + 1 + w.size))
    return _ret(np.asarray(2.0 * (np.cos(phi) @ w.real + np.sin(phi) @ w.imag)))


def _adaptive_sum(term, k0, tail_tol, cap=DIRECT_K_CAP):
    """Sum ``term(k)`` over integers outward from ``k0`` until both tails decay.

    A side stops at the first k whose term is below ``tail_tol`` everywhere
    and no larger than the previous term; that term is not included.
    """
    first = term(k0)
    total = np.array(first, dtype=float, copy=True)
    start_mag = float(np.max(np.abs(first)))
    for step in (1, -1):
        prev = start_mag
        k = k0 + step
        while True:
            if abs(k - k0) > cap:
                raise ConvergenceError(
                    f"direct sum did not decay within |k - {k0}| <= {cap}; parameters are pathological"
                )
            t = term(k)
            mag = float(np.max(np.abs(t)))
            if mag < tail_tol and mag <= prev:
                break
            total += t
            prev = mag
            k += step
    return total


def _check_tol(tail_tol):
    if not tail_tol > 0:
        raise DomainError(f"tail_tol must be positive, got {tail_tol}")


def _mass_center(p, log_base):
    return int(round(math.log(p.alpha) / log_base))


def f_prime_direct(z, p, base, tail_tol=DEFAULT_TAIL_TOL):
    """Density of ``log_B X mod 1`` as the direct sum ``sum_k H(k)``.

    With ``u = (B**(z+k) / alpha)**gamma`` each summand is
    ``gamma * ln B * u * exp(-u)``.
    """
    _check_tol(tail_tol)
    z = _as_z(z)
    lb = _log_base(base)
    la = math.log(p.alpha)
    g = p.gamma

    def term(k):
        log_u = g * (lb * (z + k) - la)
        with np.errstate(over="ignore"):
            return g * lb * np.exp(log_u - np.exp(log_u))

    return _ret(_adaptive_sum(term, _mass_center(p, lb), tail_tol))


def cdf_direct(z, p, base, tail_tol=DEFAULT_TAIL_TOL):
    """``F_B(z) = sum_k exp(-(B**k/alpha)**gamma) - exp(-(B**(z+k)/alpha)**gamma)``."""
    _check_tol(tail_tol)
    z = _as_z(z)
    lb = _log_base(base)
    la = math.log(p.alpha)
    g = p.gamma
    growth = np.expm1(g * lb * z)

    def term(k):
        with np.errstate(over="ignore", invalid="ignore"):
            u0 = math.exp(min(g * (lb * k - la), 700.0))
            # e^{-u0} - e^{-u1} with u1 - u0 = u0 * (B^{gamma z} - 1)
            t = -math.exp(-u0) * np.expm1(-u0 * growth)
        return np.where(np.isfinite(t), t, 0.0)

    return _ret(_adaptive_sum(term, _mass_center(p, lb), tail_tol))


def truncation_constants(gamma, base):
    """Decay rate ``a`` and prefactor ``C`` of the tail bound ``C*M*exp(-a*M)``."""
    gl = gamma * _log_base(base)
    a = math.pi**2 / gl
    c = 2.0 * math.sqrt(2.0) * (math.pi**2 + gl) * math.sqrt(gl) / math.pi**3
    return a, c


def min_terms_for_bound(gamma, base):
    """Smallest M for which the tail bound is valid: gamma*ln B*ln 2 / (4*pi^2)."""
    return gamma * _log_base(base) * math.log(2.0) / (4.0 * math.pi**2)


def truncation_bound(M, gamma, base):
    """Upper bound on the error of keeping fewer than M Fourier harmonics."""
    M = _check_terms(M)
    floor = min_terms_for_bound(gamma, base)
    if M < floor:
        raise PreconditionError(f"tail bound needs M >= {floor:.6g}, got {M}")
    a, c = truncation_constants(gamma, base)
    return c * M * math.exp(-a * M)


@dataclass(frozen=True)
class TruncationPlan:
    terms: int
    error_bound: float
    a_const: float
    c_const: float
    derivation: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.terms < 1 or self.error_bound < 0 or self.a_const <= 0 or self.c_const <= 0:
            raise DomainError(f"inconsistent truncation plan: {self}")

    def as_dict(self):
        return {
            "terms": self.terms,
            "error_bound": self.error_bound,
            "a": self.a_const,
            "C": self.c_const,
            **self.derivation,
        }


def terms_for_epsilon(epsilon, gamma, base):
    """Number of harmonics that keeps the truncation error below ``epsilon``.

    Starts from the closed form ``M = (k + ln k + 1/2) / a`` with
    ``k = max(6, -ln(a*epsilon/C))``, rounds up, then increments until the
    tail bound itself is at most ``epsilon``.
    """
    if not epsilon > 0:
        raise DomainError(f"epsilon must be positive, got {epsilon}")
    a, c = truncation_constants(gamma, base)
    k_raw = -math.log(a * epsilon / c)
    k = max(6.0, k_raw)
    m_real = (k + math.log(k) + 0.5) / a
    floor = min_terms_for_bound(gamma, base)
    terms = max(1, math.ceil(m_real), math.ceil(floor))
    bound = truncation_bound(terms, gamma, base)
    while bound > epsilon:
        terms += 1
        bound = truncation_bound(terms, gamma, base)
    return TruncationPlan(
        terms=terms,
        error_bound=bound,
        a_const=a,
        c_const=c,
        derivation={"k": k, "k_clamped": k_raw < 6.0, "m_real": m_real, "epsilon": epsilon},
    )


@dataclass
class DensityTrace:
    z_grid: np.ndarray
    values: np.ndarray
    method: str
    plan: TruncationPlan | None = None

    def __post_init__(self):
        self.z_grid = np.asarray(self.z_grid, dtype=float)
        self.values = np.asarray(self.values, dtype=float)
        if self.method not in ("series", "direct"):
            raise DomainError(f"unknown method {self.method!r}")
        if self.z_grid.shape != self.values.shape:
            raise DomainError("z_grid and values differ in length")
        if np.any(np.diff(self.z_grid) <= 0) or np.any((self.z_grid < 0) | (self.z_grid > 1)):
            raise DomainError("z_grid must be strictly increasing within [0, 1]")
        if not np.all(np.isfinite(self.values)):
            raise DomainError("density values must be finite")


def z_grid(grid_size):
    """``grid_size`` equispaced points covering [0, 1] inclusive (a lone point is 0)."""
    if grid_size < 1:
        raise DomainError(f"grid_size must be >= 1, got {grid_size}")
    return np.linspace(0.0, 1.0, int(grid_size))


def density_trace(p, base, epsilon=DEFAULT_EPSILON, grid_size=1024, method="series", tail_tol=DEFAULT_TAIL_TOL):
    z = z_grid(grid_size)
    if method == "series":
        plan = terms_for_epsilon(epsilon, p.gamma, base)
        return DensityTrace(z, f_prime_series(z, p, base, plan.terms), "series", plan)
    if method == "direct":
        return DensityTrace(z, f_prime_direct(z, p, base, tail_tol), "direct")
    raise DomainError(f"unknown method {method!r}")


__all__ = [
    "DensityTrace",
    "TruncationPlan",
    "WeibullParams",
    "alpha_phase",
    "cdf_direct",
    "cdf_from_coefficients",
    "cdf_series",
    "density_from_coefficients",
    "density_trace",
    "f_prime_direct",
    "f_prime_series",
    "fourier_coefficients",
    "min_terms_for_bound",
    "series_tail",
    "shifted_coefficients",
    "terms_for_epsilon",
    "truncation_bound",
    "truncation_constants",
    "z_grid",
]
