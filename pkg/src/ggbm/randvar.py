"""Exact samplers: one-sided stable variables and the scale variable Y_beta.

Streams are counter-based (Philox) and derived from a (master_seed,
stream_index) pair, so any number of streams can be used in parallel with
results independent of scheduling.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import DomainError
from .specfun import kanter_a

__all__ = ["SeedSpec", "YBetaSample", "make_stream", "sample_one_sided_stable",
           "sample_y_beta", "sample_y_beta_array"]


@dataclass(frozen=True)
class SeedSpec:
    """Master seed plus a stream index.

    Distinct stream indices under one master seed give statistically
    independent Philox streams; the derivation is platform independent.
    """

    master_seed: int
    stream_index: int = 0

    def __post_init__(self):
        if not 0 <= self.master_seed < 2 ** 64:
            raise DomainError("master_seed must fit in 64 unsigned bits")
        if not 0 <= self.stream_index < 2 ** 64:
            raise DomainError("stream_index must be a nonnegative 64-bit integer")

    def substream(self, index: int) -> "SeedSpec":
        return SeedSpec(self.master_seed, self.stream_index + index)


@dataclass(frozen=True)
class YBetaSample:
    value: float
    beta: float


def make_stream(seed: SeedSpec) -> np.random.Generator:
    """Philox generator keyed by (master_seed, stream_index)."""
    key = (seed.stream_index << 64) | seed.master_seed
    return np.random.Generator(np.random.Philox(key=key))


def sample_one_sided_stable(beta: float, rng: np.random.Generator, size=None):
    """One-sided beta-stable draw(s) S > 0 with E[exp(-s*S)] = exp(-s^beta).

    Kanter's representation: S = (a(pi*U)/W)^((1-beta)/beta) with U uniform
    on (0,1) and W standard exponential.
    """
    if not 0.0 < beta < 1.0:
        raise DomainError(f"requires 0 < beta < 1, got beta = {beta:g}")
    u = rng.random(size)
    w = rng.standard_exponential(size)
    # keep u strictly inside (0,1); rng.random can return exactly 0.0
    u = np.maximum(u, 1e-300)
    a = kanter_a(beta, math.pi * u)
    return (a / w) ** ((1.0 - beta) / beta)


def sample_y_beta_array(beta: float, rng: np.random.Generator, n: int) -> np.ndarray:
    """n draws of Y_beta (density M_beta), via Y = S^(-beta).

    For beta = 1 the law is the point mass at 1.  The random stream is
    advanced by the same amount (2n variates) in both branches so that
    downstream draws do not depend on beta.
    """
    if beta == 1.0:
        rng.random(n)
        rng.standard_exponential(n)
        return np.ones(n)
    s = sample_one_sided_stable(beta, rng, n)
    return s ** (-beta)


def sample_y_beta(beta: float, rng: np.random.Generator) -> YBetaSample:
    """Single draw of Y_beta with its parameter attached."""
    value = float(sample_y_beta_array(beta, rng, 1)[0])
    return YBetaSample(value=value, beta=beta)
