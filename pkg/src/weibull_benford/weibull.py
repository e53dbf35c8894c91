"""Two-parameter Weibull distribution (location fixed at zero).

Sampling is by inverse transform on uniforms from numpy's PCG64 bit
generator; each uniform is ``(2k + 1) / 2**53`` for a 52-bit integer ``k``,
so it lies strictly inside (0, 1) and every draw is positive. A draw of
size n is split into fixed blocks of ``BLOCK_SIZE`` values; block ``i`` is
driven by ``SeedSequence(seed, spawn_key=(i,))``.
The output therefore depends only on ``(seed, n)``, never on how many
worker threads produced the blocks. Changing the bit generator, the block
size or the spawn-key scheme changes every sequence and must bump
``SAMPLER_VERSION``.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
import math

import numpy as np

from .errors import DomainError

SAMPLER_VERSION = "pcg64-block65536-v1"
BLOCK_SIZE = 1 << 16


@dataclass(frozen=True)
class WeibullParams:
    """Scale ``alpha`` and shape ``gamma``, both strictly positive."""

    alpha: float
    gamma: float

    def __post_init__(self):
        for name in ("alpha", "gamma"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise DomainError(f"{name} must be a positive finite number, got {v}")

    def rescaled(self, factor):
        return WeibullParams(self.alpha * factor, self.gamma)


def _ret(arr):
    return float(arr) if arr.ndim == 0 else arr


def pdf(x, p):
    x = np.asarray(x, dtype=float)
    pos = x >= 0
    xs = np.where(pos, x, 1.0) / p.alpha
    with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
        val = (p.gamma / p.alpha) * xs ** (p.gamma - 1.0) * np.exp(-(xs**p.gamma))
    return _ret(np.where(pos, val, 0.0))


def cdf(x, p):
    x = np.asarray(x, dtype=float)
    xs = np.where(x > 0, x, 0.0) / p.alpha
    return _ret(-np.expm1(-(xs**p.gamma)))


def quantile(u, p):
    """Inverse cdf, alpha * (-ln(1 - u))**(1/gamma), for 0 <= u < 1."""
    u = np.asarray(u, dtype=float)
    if np.any(~((u >= 0) & (u < 1))):
        raise DomainError("quantile needs 0 <= u < 1")
    return _ret(p.alpha * (-np.log1p(-u)) ** (1.0 / p.gamma))


def _block_uniforms(seed, index, size):
    ss = np.random.SeedSequence(seed, spawn_key=(index,))
    k = np.random.Generator(np.random.PCG64(ss)).integers(0, 1 << 52, size, dtype=np.uint64)
    return (2.0 * k + 1.0) * 2.0**-53


def sample_uniforms(n, seed, workers=1):
    """The uniform stream underlying :func:`sample`, identical for any ``workers``."""
    n = int(n)
    if n < 1:
        raise DomainError(f"sample size must be >= 1, got {n}")
    nblocks = -(-n // BLOCK_SIZE)
    sizes = [min(BLOCK_SIZE, n - i * BLOCK_SIZE) for i in range(nblocks)]
    out = np.empty(n)

    def fill(i):
        out[i * BLOCK_SIZE : i * BLOCK_SIZE + sizes[i]] = _block_uniforms(seed, i, sizes[i])

    if workers > 1 and nblocks > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            list(ex.map(fill, range(nblocks)))
    else:
        for i in range(nblocks):
            fill(i)
    return out


def sample(p, n, seed, workers=1):
    """Draw ``n`` Weibull variates deterministically from ``seed``.

    The uniforms do not depend on ``p``, so samples for ``(alpha * c, gamma)``
    equal ``c`` times those for ``(alpha, gamma)`` up to one rounding.
    """
    return quantile(sample_uniforms(n, seed, workers=workers), p)
