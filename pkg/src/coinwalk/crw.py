"""Classical random walk: binomial position law and its first two moments."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray
from scipy.special import gammaln, xlogy

from .walktypes import PROB_TOL, CoinValidationError, Distribution1D

__all__ = ["CrwParams", "crw_distribution", "crw_moments", "lattice_binomial"]


@dataclass(frozen=True)
class CrwParams:
    """Step probabilities of a classical coin and the number of steps."""

    p1: float
    pm1: float
    n: int

    def __post_init__(self) -> None:
        if int(self.n) != self.n or self.n < 0:
            raise CoinValidationError("n >= 0 integer", float(self.n))
        object.__setattr__(self, "n", int(self.n))
        for name in ("p1", "pm1"):
            v = float(getattr(self, name))
            if not 0.0 <= v <= 1.0:
                raise CoinValidationError(f"{name} in [0, 1]", v)
            object.__setattr__(self, name, v)
        dev = abs(self.p1 + self.pm1 - 1.0)
        if dev > PROB_TOL:
            raise CoinValidationError("p1 + pm1 = 1", dev)

    @classmethod
    def symmetric(cls, n: int) -> CrwParams:
        return cls(0.5, 0.5, n)


def lattice_binomial(n: int, p_right: float, p_left: float) -> NDArray[np.float64]:
    """Binomial law of the endpoint of ``n`` independent +-1 steps.

    Returns an array of length ``2n + 1`` indexed by ``x + n``. Odd-parity
    sites are exactly zero. Each mass is ``exp`` of a log-gamma sum, so the
    result neither overflows nor underflows prematurely for n up to 1e5 and
    beyond. ``0**0`` is taken as 1, which keeps boundary cases (a probability
    of exactly 0 or 1) well defined.
    """
    j = np.arange(n + 1)  # number of right steps
    # paired sums are commutative, so p_right == p_left gives bitwise mirror symmetry
    logc = gammaln(n + 1) - (gammaln(j + 1) + gammaln(n - j + 1))
    logp = logc + (xlogy(j, p_right) + xlogy(n - j, p_left))
    out = np.zeros(2 * n + 1)
    out[2 * j] = np.exp(logp)  # x = 2j - n  ->  index 2j
    return out


def crw_distribution(params: CrwParams) -> Distribution1D:
    return Distribution1D(params.n, lattice_binomial(params.n, params.p1, params.pm1))


def crw_moments(params: CrwParams) -> tuple[float, float]:
    """Return ``(mean, variance)`` of the walker position: ``n(p1 - pm1)`` and ``4 n p1 pm1``."""
    n = params.n
    return n * (params.p1 - params.pm1), 4.0 * n * params.p1 * params.pm1
