"""Distances between the significand law of a Weibull and Benford's law.

All three statistics compare ``log_B X mod 1`` with the uniform law on
[0, 1]: the sup distance of the cdfs (KS), and the L1 and squared-L2 size of
``F_B' - 1``. L1 and L2 do not depend on alpha, which only rotates the
density around the circle.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
import math

import numpy as np
from scipy.integrate import simpson
from scipy.optimize import brentq

from .core_math import benford_digit_probabilities, check_digit_base, gamma_modulus_one_plus_ix
from .errors import DomainError
from .series import (
    DEFAULT_EPSILON,
    cdf_direct,
    cdf_from_coefficients,
    cdf_series,
    density_from_coefficients,
    shifted_coefficients,
    terms_for_epsilon,
    z_grid,
)
from .weibull import WeibullParams

DEFAULT_GRID = 4096
MIN_GRID = 64
METRICS = ("ks", "l1", "l2")


def _check_grid(grid_size):
    if int(grid_size) != grid_size or grid_size < MIN_GRID:
        raise DomainError(f"grid_size must be an integer >= {MIN_GRID}, got {grid_size}")
    return int(grid_size)


def _weights(p, base, epsilon):
    return shifted_coefficients(p, base, terms_for_epsilon(epsilon, p.gamma, base).terms)


def ks_statistic(p, base, grid_size=DEFAULT_GRID, epsilon=DEFAULT_EPSILON, method="series"):
    """``max |F_B(z) - z|`` over ``grid_size`` equispaced z in [0, 1].

    ``method="direct"`` evaluates F_B by the direct sum instead of the series.
    """
    z = z_grid(_check_grid(grid_size))
    if method == "series":
        F = cdf_series(z, p, base, terms_for_epsilon(epsilon, p.gamma, base).terms)
    elif method == "direct":
        F = cdf_direct(z, p, base)
    else:
        raise DomainError(f"unknown method {method!r}")
    return float(np.max(np.abs(F - z)))


def l1_of_coefficients(w, grid_size=DEFAULT_GRID):
    """``int_0^1 |f(z) - 1| dz`` for the harmonic density with weights ``w``.

    The grid only brackets the sign changes of ``f - 1``; each root is refined
    with Brent's method and the integral between consecutive roots is taken
    exactly from the closed-form antiderivative ``F(z) - z``. Near a simple
    root that antiderivative is flat, so root error enters only quadratically.
    """
    w = np.asarray(w, dtype=complex)
    z = np.linspace(0.0, 1.0, _check_grid(grid_size) + 1)

    def dev(t):
        return density_from_coefficients(t, w) - 1.0

    s = np.sign(dev(z))
    breaks = [0.0, 1.0]
    breaks.extend(z[s == 0])
    for i in np.flatnonzero(s[:-1] * s[1:] < 0):
        breaks.append(brentq(dev, z[i], z[i + 1], xtol=1e-15, rtol=4 * np.finfo(float).eps))
    b = np.unique(breaks)
    G = cdf_from_coefficients(b, w) - b
    return float(np.sum(np.abs(np.diff(G))))


def l2_of_coefficients(w, grid_size=DEFAULT_GRID):
    """``int_0^1 (f(z) - 1)**2 dz`` by composite Simpson on ``grid_size`` intervals."""
    z = np.linspace(0.0, 1.0, _check_grid(grid_size) + 1)
    d = density_from_coefficients(z, w) - 1.0
    return float(simpson(d * d, x=z))


def l1_deviation(gamma, base, grid_size=DEFAULT_GRID, alpha=1.0, epsilon=DEFAULT_EPSILON):
    return l1_of_coefficients(_weights(WeibullParams(alpha, gamma), base, epsilon), grid_size)


def l2_deviation(gamma, base, grid_size=DEFAULT_GRID, alpha=1.0, epsilon=DEFAULT_EPSILON):
    """Integral of the squared deviation, without a square root."""
    return l2_of_coefficients(_weights(WeibullParams(alpha, gamma), base, epsilon), grid_size)


def l2_rms_deviation(gamma, base, grid_size=DEFAULT_GRID, alpha=1.0, epsilon=DEFAULT_EPSILON):
    """Root of :func:`l2_deviation`, i.e. the conventional L2 norm."""
    return math.sqrt(l2_deviation(gamma, base, grid_size, alpha, epsilon))


def l2_spectral(gamma, base, epsilon=DEFAULT_EPSILON):
    """Parseval form of :func:`l2_deviation`: ``2 * sum_m pi*x_m / sinh(pi*x_m)``.

    Uses only the closed form for ``|Gamma(1 + ix)|``, never the quadrature
    or the complex Gamma routine.
    """
    M = terms_for_epsilon(epsilon, gamma, base).terms
    lb = math.log(float(base))
    return 2.0 * math.fsum(
        gamma_modulus_one_plus_ix(2.0 * math.pi * m / (gamma * lb)) ** 2 for m in range(1, M + 1)
    )


def _digit_edges(b):
    # log_B(B) is exactly 1, so the last edge needs no clamping
    return np.array([math.log(d) / math.log(b) for d in range(1, b + 1)])


def digit_probabilities(p, base, epsilon=DEFAULT_EPSILON):
    """First-digit law of a Weibull variable, ``{d: F_B(log_B(d+1)) - F_B(log_B d)}``."""
    b = check_digit_base(base)
    F = np.atleast_1d(cdf_series(_digit_edges(b), p, b, terms_for_epsilon(epsilon, p.gamma, b).terms))
    return {d: float(F[d] - F[d - 1]) for d in range(1, b)}


def digit_probability(d, p, base, epsilon=DEFAULT_EPSILON):
    b = check_digit_base(base)
    if int(d) != d or not 1 <= d <= b - 1:
        raise DomainError(f"digit must be an integer in 1..{b - 1}, got {d}")
    return digit_probabilities(p, b, epsilon)[int(d)]


@dataclass(frozen=True)
class ConformanceReport:
    ks: float
    l1: float
    l2: float
    digit_probs: dict
    benford_probs: dict
    params: WeibullParams
    base: int

    def __post_init__(self):
        if not 0.0 <= self.ks <= 1.0 or self.l1 < 0 or self.l2 < 0:
            raise DomainError(f"statistics out of range: ks={self.ks}, l1={self.l1}, l2={self.l2}")
        for name in ("digit_probs", "benford_probs"):
            total = math.fsum(getattr(self, name).values())
            if abs(total - 1.0) > 1e-9:
                raise DomainError(f"{name} sums to {total!r}, not 1")

    @property
    def max_digit_deviation(self):
        return max(abs(self.digit_probs[d] - self.benford_probs[d]) for d in self.digit_probs)


def conformance_report(p, base, grid_size=DEFAULT_GRID, epsilon=DEFAULT_EPSILON):
    b = check_digit_base(base)
    w = _weights(p, b, epsilon)
    return ConformanceReport(
        ks=ks_statistic(p, b, grid_size, epsilon),
        l1=l1_of_coefficients(w, grid_size),
        l2=l2_of_coefficients(w, grid_size),
        digit_probs=digit_probabilities(p, b, epsilon),
        benford_probs=benford_digit_probabilities(b),
        params=p,
        base=b,
    )


def cell_metrics(gamma, alpha, base, metrics=METRICS, grid_size=DEFAULT_GRID, epsilon=DEFAULT_EPSILON):
    """Selected statistics for one (gamma, alpha) cell, each from its public function."""
    out = {}
    for name in metrics:
        if name == "ks":
            out[name] = ks_statistic(WeibullParams(alpha, gamma), base, grid_size, epsilon)
        elif name == "l1":
            out[name] = l1_deviation(gamma, base, grid_size, alpha, epsilon)
        elif name == "l2":
            out[name] = l2_deviation(gamma, base, grid_size, alpha, epsilon)
        else:
            raise DomainError(f"unknown metric {name!r}; choose from {METRICS}")
    return out


def sweep(gammas, alphas, base, metrics=METRICS, grid_size=DEFAULT_GRID, epsilon=DEFAULT_EPSILON, workers=1):
    """Metrics over the grid ``gammas x alphas`` in gamma-major order.

    Cells run on ``workers`` threads; results are assembled in grid order, so
    the output does not depend on ``workers``.
    """
    cells = [(float(g), float(a)) for g in gammas for a in alphas]

    def run(cell):
        g, a = cell
        return {"gamma": g, "alpha": a, **cell_metrics(g, a, base, metrics, grid_size, epsilon)}

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            return list(ex.map(run, cells))
    return [run(c) for c in cells]
