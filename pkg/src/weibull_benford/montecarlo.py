"""Sampling oracle: empirical digit and log-mod-1 laws of simulated Weibulls."""

from dataclasses import dataclass
import math

import numpy as np

from .core_math import check_digit_base, leading_digit
from .errors import DomainError
from .weibull import sample


@dataclass(frozen=True)
class EmpiricalDigits:
    counts: dict
    n: int
    base: int
    seed: int

    def __post_init__(self):
        if sum(self.counts.values()) != self.n:
            raise DomainError("digit counts do not add up to n")
        if any(not 1 <= d < self.base for d in self.counts):
            raise DomainError(f"digits must lie in 1..{self.base - 1}")

    @property
    def frequencies(self):
        return {d: c / self.n for d, c in self.counts.items()}

    def tolerance(self, k=5.0):
        """Sampling tolerance ``k / sqrt(n)``."""
        return k / math.sqrt(self.n)


def empirical_digit_frequencies(p, base, n, seed, workers=1):
    b = check_digit_base(base)
    x = sample(p, n, seed, workers=workers)
    tally = np.bincount(leading_digit(x, b), minlength=b)
    return EmpiricalDigits(
        counts={d: int(tally[d]) for d in range(1, b)},
        n=int(n),
        base=b,
        seed=seed,
    )


def log_mod1(x, base):
    """Fractional part of log_B(x), in [0, 1)."""
    r = np.mod(np.log(x) / math.log(float(base)), 1.0)
    # mod can round a tiny negative up to exactly 1.0
    return np.where(r >= 1.0, 0.0, r)


def empirical_log_mod1_cdf(p, base, n, seed, z, workers=1):
    """Fraction of ``n`` draws whose ``log_B`` fractional part is at most ``z``.

    ``z`` may be a scalar or an array; all values share one sample.
    """
    z = np.asarray(z, dtype=float)
    if np.any(~((z >= 0) & (z <= 1))):
        raise DomainError("z must lie in [0, 1]")
    fr = np.sort(log_mod1(sample(p, n, seed, workers=workers), base))
    out = np.searchsorted(fr, z, side="right") / fr.size
    return float(out) if out.ndim == 0 else out
