"""
Quantum random walk with one fresh coin per step.

Each coin starts in the same (possibly coherent) state and is flipped once
by a unitary before the walker moves. Because the coins are independent, the
walker's position law is binomial in 1D and quadrinomial on the square
lattice; the step probabilities are the diagonal of the flipped coin state.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from numpy.typing import NDArray
from scipy.special import gammaln, xlogy

from .crw import lattice_binomial
from .walktypes import (
    PROB_TOL,
    CoinOperator,
    CoinState2,
    CoinState4,
    CoinValidationError,
    Distribution1D,
    Distribution2D,
    EffectiveCoherence,
    effective_coherence,
    ensure_valid,
    hadamard2,
)

__all__ = [
    "FlippedCoin2",
    "GroverProbabilities",
    "Moments2D",
    "flip_coin2",
    "qrw1d_distribution",
    "qrw1d_moments",
    "grover_probabilities",
    "grover_probabilities_from_zeta",
    "feasibility_region_check",
    "qrw2d_distribution",
    "quadrinomial_distribution",
    "qrw2d_moments",
    "ZETA_TO_PROBS",
]

# rows: R, L, U, D; columns: 1, zeta1, zeta2, zeta3 (scaled by 1/4)
ZETA_TO_PROBS = np.array(
    [
        [1.0, -2.0, -2.0, -2.0],
        [1.0, -2.0, 2.0, 2.0],
        [1.0, 2.0, -2.0, 2.0],
        [1.0, 2.0, 2.0, -2.0],
    ]
)

CLAMP_TOL = 1e-12


def _clamp(p: float, name: str) -> float:
    if p < -CLAMP_TOL:
        raise CoinValidationError(f"{name} >= 0", p, "step probability is negative")
    if p > 1.0 + CLAMP_TOL:
        raise CoinValidationError(f"{name} <= 1", p - 1.0, "step probability exceeds 1")
    return min(max(p, 0.0), 1.0)


@dataclass(frozen=True)
class FlippedCoin2:
    """Coin state after the flip: ``C rho C^dagger``.

    ``rho11`` and ``rho_m1m1`` are the right/left step probabilities.
    """

    rho11: float
    rho_m1m1: float
    rho1m1: complex

    def __post_init__(self) -> None:
        dev = abs(self.rho11 + self.rho_m1m1 - 1.0)
        if dev > PROB_TOL:
            raise CoinValidationError("rho11 + rho_m1m1 = 1", dev)

    @property
    def rhom11(self) -> complex:
        return self.rho1m1.conjugate()

    def matrix(self) -> NDArray[np.complex128]:
        return np.array([[self.rho11, self.rho1m1], [self.rhom11, self.rho_m1m1]])


class GroverProbabilities(NamedTuple):
    """Step probabilities right, left, up, down."""

    rhoRR: float
    rhoLL: float
    rhoUU: float
    rhoDD: float


class Moments2D(NamedTuple):
    mean: tuple[float, float]
    var_x: float
    var_y: float
    var_total: float


def flip_coin2(state: CoinState2, coin: CoinOperator | None = None) -> FlippedCoin2:
    """Flip a two-level coin and return the transition probabilities.

    Hermiticity of the result is enforced: the lower off-diagonal is always
    reported as the conjugate of the upper one.
    """
    coin = hadamard2() if coin is None else coin
    if coin.dim != 2:
        raise ValueError(f"dimension mismatch: {coin.dim}x{coin.dim} coin on a two-level state")
    ensure_valid(state)
    rho = coin.conjugate(state.matrix())
    r11 = _clamp(float(rho[0, 0].real), "rho11")
    rm = _clamp(float(rho[1, 1].real), "rho_m1m1")
    # conjugation preserves the trace; remove the rounding so p_R + p_L == 1
    tr = r11 + rm
    r11, rm = r11 / tr, rm / tr
    off = complex(0.5 * (rho[0, 1] + np.conj(rho[1, 0])))
    return FlippedCoin2(r11, rm, off)


def qrw1d_distribution(
    state: CoinState2, coin: CoinOperator | None = None, n: int = 0
) -> Distribution1D:
    """Position law after ``n`` steps, each using a freshly flipped coin.

    Parameters
    ----------
    state : CoinState2
        Initial state shared by every coin.
    coin : CoinOperator, optional
        Flip applied to each coin; Hadamard when omitted.
    n : int
        Number of steps.

    Returns
    -------
    Distribution1D
        Binomial law with right-step probability ``rho11`` of the flipped coin.
    """
    if n < 0:
        raise ValueError("step count must be non-negative")
    flipped = flip_coin2(state, coin)
    return Distribution1D(n, lattice_binomial(n, flipped.rho11, flipped.rho_m1m1))


def qrw1d_moments(state: CoinState2, n: int) -> tuple[float, float]:
    """Closed-form ``(mean, variance)`` for the Hadamard-flipped walk.

    Only the real part of the coherence enters: the walker drifts by
    ``2 Re(eta)`` per step and the per-step variance shrinks to
    ``1 - (2 Re(eta))^2``.
    """
    ensure_valid(state)
    r = state.eta.real
    return 2.0 * n * r, n * (1.0 - (2.0 * r) ** 2)


def grover_probabilities_from_zeta(zeta: EffectiveCoherence) -> GroverProbabilities:
    """Raw (unclamped) step probabilities for a given effective coherence."""
    vec = np.array([1.0, zeta.zeta1, zeta.zeta2, zeta.zeta3])
    return GroverProbabilities(*(float(v) for v in 0.25 * ZETA_TO_PROBS @ vec))


def grover_probabilities(state: CoinState4) -> GroverProbabilities:
    """Diagonal of the Grover-flipped coin, via the effective coherence.

    The population terms enter only through their sum, which is 1 for a
    valid state.
    """
    zeta = effective_coherence(state)
    raw = grover_probabilities_from_zeta(zeta)
    return GroverProbabilities(*(_clamp(p, name) for p, name in zip(raw, raw._fields)))


def feasibility_region_check(zeta: EffectiveCoherence) -> bool:
    """True when every Grover step probability is non-negative.

    The feasible set is a regular tetrahedron in zeta space. Points within
    ``1e-12`` of a face count as feasible.
    """
    return all(p >= -CLAMP_TOL for p in grover_probabilities_from_zeta(zeta))


def quadrinomial_distribution(probs: GroverProbabilities, n: int) -> Distribution2D:
    """Endpoint law of ``n`` i.i.d. steps R/L/U/D on the square lattice.

    The sum over ``l`` (number of horizontal steps) of

        C(n,l) C(l,j) C(n-l,m) RR^j LL^(l-j) UU^m DD^(n-l-m)

    with ``x = 2j - l`` and ``y = 2m - (n - l)`` is evaluated as a product
    of three log-space factors: the binomial weight of ``l`` horizontal
    steps, then the horizontal and vertical binomials conditioned on it.
    All terms are non-negative, so the accumulation over ``l`` is a plain
    matrix product with no cancellation.
    """
    if n < 0:
        raise ValueError("step count must be non-negative")
    rr, ll, uu, dd = (_clamp(float(p), name) for p, name in zip(probs, GroverProbabilities._fields))
    total = rr + ll + uu + dd
    if abs(total - 1.0) > PROB_TOL:
        raise CoinValidationError("sum of step probabilities = 1", total - 1.0)
    h = rr + ll
    v = uu + dd

    l = np.arange(n + 1)
    w = np.exp(
        gammaln(n + 1) - gammaln(l + 1) - gammaln(n - l + 1) + xlogy(l, h) + xlogy(n - l, v)
    )
    # conditional direction probabilities; 0/0 only arises for rows whose weight is 0
    hr, hl = (rr / h, ll / h) if h > 0 else (0.0, 0.0)
    vu, vd = (uu / v, dd / v) if v > 0 else (0.0, 0.0)

    side = 2 * n + 1
    # bx[l, x+n]: law of x given l horizontal steps; by[l, y+n]: law of y given n-l vertical steps
    bx = np.zeros((n + 1, side))
    by = np.zeros((n + 1, side))
    for k in range(n + 1):
        bx[k, n - k : n + k + 1] = lattice_binomial(k, hr, hl)
        r = n - k
        by[k, n - r : n + r + 1] = lattice_binomial(r, vu, vd)
    grid = (bx * w[:, None]).T @ by
    return Distribution2D(n, grid)


def qrw2d_distribution(state: CoinState4, n: int) -> Distribution2D:
    ensure_valid(state)
    zeta = effective_coherence(state)
    if not feasibility_region_check(zeta):
        raw = grover_probabilities_from_zeta(zeta)
        raise CoinValidationError("Grover step probabilities >= 0", min(raw))
    return quadrinomial_distribution(grover_probabilities(state), n)


def qrw2d_moments(state: CoinState4, n: int) -> Moments2D:
    """Closed-form mean and variances of the 2D walk in terms of zeta."""
    z = effective_coherence(state)
    z1, z2, z3 = z.zeta1, z.zeta2, z.zeta3
    if not feasibility_region_check(z):
        raise CoinValidationError("Grover step probabilities >= 0", min(grover_probabilities_from_zeta(z)))
    # "+ 0.0" turns a signed zero into 0.0
    mean = (n * (-z2 - z3) + 0.0, n * (-z2 + z3) + 0.0)
    var_x = n * (0.5 - z1 - (z2 + z3) ** 2)
    var_y = n * (0.5 + z1 - (z2 - z3) ** 2)
    var_total = n * (1.0 - 2.0 * z2**2 - 2.0 * z3**2)
    return Moments2D(mean, var_x, var_y, var_total)
