"""
Conventional (single-coin) Hadamard quantum walk.

The walker and one coin evolve unitarily: Hadamard on the coin, then the +1
component shifts right and the -1 component left. Besides the ballistic
position law this module computes the coin's reduced density matrix and the
covariance between sigma_z measured before the walk and after ``n`` steps,
both by direct evolution and from the momentum-space integrals.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Literal, NamedTuple

import numpy as np
from numpy.typing import NDArray
from scipy.integrate import simpson

from .walktypes import (
    PROB_TOL,
    CoinState2,
    CoinValidationError,
    ConvergenceError,
    Distribution1D,
    ensure_valid,
)

__all__ = [
    "QWState",
    "ReducedCoinMatrix",
    "CovarianceEntry",
    "CovarianceSeries",
    "COVARIANCE_LIMIT",
    "qw_initial",
    "qw_step",
    "qw_evolve",
    "qw_distribution",
    "coin_reduced_direct",
    "coin_reduced_integral",
    "reduced_limit",
    "covariance_direct",
    "covariance_integral",
    "covariance_series",
    "independent_flip_covariance",
    "momentum_integrals",
]

SQRT2 = np.sqrt(2.0)
COVARIANCE_LIMIT = 1.0 - SQRT2 / 2.0
# 1/sqrt(2) rounds down; its upper neighbour rounds up and 2 * lo * hi == 1 exactly.
# Alternating the two per step stops the norm drifting over long walks.
_INV_SQRT2 = (1.0 / SQRT2, SQRT2 / 2.0)

Basis = Literal[1, -1]
Method = Literal["direct", "integral"]


@dataclass(frozen=True)
class QWState:
    """Walker-coin pure state on sites ``-n_max..n_max``.

    ``amplitudes[x + n_max, c]`` holds the amplitude of ``|x> (x) |c>`` with
    ``c = 0`` for coin ``+1`` and ``c = 1`` for coin ``-1``. ``step`` counts
    the steps already taken; support never exceeds ``[-step, step]``.
    """

    n_max: int
    amplitudes: NDArray[np.complex128] = field(repr=False)
    step: int = 0

    def __post_init__(self) -> None:
        a = np.array(self.amplitudes, dtype=np.complex128)
        if a.shape != (2 * self.n_max + 1, 2):
            raise ValueError(f"amplitudes must have shape {(2 * self.n_max + 1, 2)}, got {a.shape}")
        a.setflags(write=False)
        object.__setattr__(self, "amplitudes", a)

    def norm(self) -> float:
        return float(np.sum(np.abs(self.amplitudes) ** 2))

    def position_probs(self) -> NDArray[np.float64]:
        return np.sum(np.abs(self.amplitudes) ** 2, axis=1)

    def reduced_coin(self) -> NDArray[np.complex128]:
        """Trace out the walker: ``sum_x a_x a_x^dagger`` with ``a_x`` the 2-vector at site x."""
        a = self.amplitudes
        return a.T @ a.conj()


def qw_initial(coin_vector, n_max: int) -> QWState:
    """Walker at the origin with the given (normalised) coin vector."""
    c = np.asarray(coin_vector, dtype=np.complex128)
    if c.shape != (2,):
        raise ValueError("coin vector must have two components")
    dev = abs(float(np.vdot(c, c).real) - 1.0)
    if dev > PROB_TOL:
        raise CoinValidationError("coin vector normalised", dev)
    a = np.zeros((2 * n_max + 1, 2), dtype=np.complex128)
    a[n_max] = c
    return QWState(n_max, a, 0)


def _step_inplace(a: NDArray[np.complex128], buf: NDArray[np.complex128], t: int) -> None:
    """Hadamard on every site then the conditional shift; ``t`` is the step index."""
    c = _INV_SQRT2[t % 2]
    np.add(a[:, 0], a[:, 1], out=buf[:, 0])
    np.subtract(a[:, 0], a[:, 1], out=buf[:, 1])
    buf *= c
    a[:] = 0.0
    a[1:, 0] = buf[:-1, 0]
    a[:-1, 1] = buf[1:, 1]


def qw_step(state: QWState) -> QWState:
    """One Hadamard-coin step followed by the conditional shift."""
    if state.step + 1 > state.n_max:
        raise ValueError(
            f"step {state.step + 1} would leave the lattice (n_max={state.n_max})"
        )
    a = np.array(state.amplitudes)
    _step_inplace(a, np.empty_like(a), state.step)
    return QWState(state.n_max, a, state.step + 1)


def qw_evolve(coin_vector, n: int, *, record_every_step: bool = False):
    """Evolve ``|0> (x) coin_vector`` for ``n`` steps.

    With ``record_every_step`` the function yields ``(t, amplitudes)`` for
    ``t = 0..n`` (the array is reused between yields; copy it if needed).
    Otherwise the final :class:`QWState` is returned.
    """
    state = qw_initial(coin_vector, n)
    a = np.array(state.amplitudes)
    buf = np.empty_like(a)
    if record_every_step:
        def gen():
            yield 0, a
            for t in range(1, n + 1):
                _step_inplace(a, buf, t - 1)
                yield t, a
        return gen()
    for t in range(n):
        _step_inplace(a, buf, t)
    return QWState(n, a, n)


def qw_distribution(initial_coin: CoinState2, n: int) -> Distribution1D:
    """Ballistic position law for a possibly mixed initial coin.

    The coin density matrix is split into at most two orthogonal pure
    states; each is evolved separately and the position laws are mixed
    with the eigenvalue weights.
    """
    ensure_valid(initial_coin)
    weights, vectors = np.linalg.eigh(initial_coin.matrix())
    probs = np.zeros(2 * n + 1)
    for w, v in zip(weights, vectors.T):
        if w <= 0.0:
            continue
        probs += w * qw_evolve(v, n).position_probs()
    return Distribution1D(n, probs / weights.clip(min=0.0).sum())


@dataclass(frozen=True)
class ReducedCoinMatrix:
    """Coin state after tracing out the walker."""

    rho11: complex
    rho1m1: complex
    rhom11: complex
    rhom1m1: complex
    method: Method

    @classmethod
    def from_matrix(cls, rho: NDArray, method: Method) -> ReducedCoinMatrix:
        return cls(complex(rho[0, 0]), complex(rho[0, 1]), complex(rho[1, 0]), complex(rho[1, 1]), method)

    def matrix(self) -> NDArray[np.complex128]:
        return np.array([[self.rho11, self.rho1m1], [self.rhom11, self.rhom1m1]])

    def trace(self) -> complex:
        return self.rho11 + self.rhom1m1

    def hermiticity_residual(self) -> float:
        m = self.matrix()
        return float(np.max(np.abs(m - m.conj().T)))

    def sigma_z(self) -> float:
        return float((self.rho11 - self.rhom1m1).real)


def _basis_vector(basis: int) -> NDArray[np.complex128]:
    if basis == 1:
        return np.array([1.0, 0.0], dtype=np.complex128)
    if basis == -1:
        return np.array([0.0, 1.0], dtype=np.complex128)
    raise ValueError(f"coin basis must be +1 or -1, got {basis!r}")


def coin_reduced_direct(initial_coin_basis: Basis, n: int) -> ReducedCoinMatrix:
    rho = qw_evolve(_basis_vector(initial_coin_basis), n).reduced_coin()
    return ReducedCoinMatrix.from_matrix(rho, "direct")


def _reduced_direct_series(basis: int, n_max: int) -> list[NDArray[np.complex128]]:
    out = []
    for _, a in qw_evolve(_basis_vector(basis), n_max, record_every_step=True):
        out.append(a.T @ a.conj())
    return out


class MomentumIntegrals(NamedTuple):
    """Integrals over ``k in [-pi, pi]`` entering the reduced coin matrix.

    ``cos_term``  : int cos(2 n w) / (1 + cos^2 k)
    ``off_plus``  : int e^{-ik} (i sin(2 n w)/sqrt(1+cos^2 k) - cos k cos(2 n w)/(1+cos^2 k))
    ``off_minus`` : int e^{+ik} (-i sin(2 n w)/sqrt(1+cos^2 k) - cos k cos(2 n w)/(1+cos^2 k))
    ``nodes``     : grid intervals used by the accepted estimate
    ``residual``  : difference to the previous (half-resolution) estimate
    """

    cos_term: float
    off_plus: complex
    off_minus: complex
    nodes: int
    residual: float


def _integrands(k: NDArray[np.float64], n: int) -> NDArray[np.complex128]:
    w = np.arcsin(np.sin(k) / SQRT2)
    c = np.cos(2.0 * n * w)
    s = np.sin(2.0 * n * w)
    d = 1.0 + np.cos(k) ** 2
    ck = np.cos(k) * c / d
    sk = 1j * s / np.sqrt(d)
    return np.stack(
        [
            (c / d).astype(np.complex128),
            np.exp(-1j * k) * (sk - ck),
            np.exp(1j * k) * (-sk - ck),
        ]
    )


def momentum_integrals(
    n: int, *, tol: float = 1e-11, max_nodes: int = 1 << 22
) -> MomentumIntegrals:
    """Composite Simpson quadrature on a uniform k grid, refined by doubling.

    The integrands oscillate with frequency proportional to ``n``, so the
    starting grid has ``max(1024, 64 n)`` intervals. Refinement stops when
    two successive estimates agree to ``tol`` in every component.
    """
    if n < 0:
        raise ValueError("step count must be non-negative")
    nodes = max(1024, 64 * n)
    prev = None
    residual = np.inf
    while nodes <= max_nodes:
        k = np.linspace(-np.pi, np.pi, nodes + 1)
        est = simpson(_integrands(k, n), x=k, axis=-1)
        if prev is not None:
            residual = float(np.max(np.abs(est - prev)))
            if residual < tol:
                return MomentumIntegrals(float(est[0].real), complex(est[1]), complex(est[2]), nodes, residual)
        prev = est
        nodes *= 2
    raise ConvergenceError(f"momentum integrals for n={n} did not converge within {max_nodes} nodes", residual)


def coin_reduced_integral(initial_coin_basis: Basis, n: int) -> ReducedCoinMatrix:
    """Reduced coin matrix from the closed-form momentum integrals.

    Each element is a constant (its large-``n`` limit) plus an oscillating
    integral weighted by ``(-1)^n / (4 pi)``.
    """
    _basis_vector(initial_coin_basis)
    mi = momentum_integrals(n)
    s = (-1) ** n / (4.0 * np.pi)
    off = (2.0 - SQRT2) / 4.0
    if initial_coin_basis == 1:
        r11 = 1.0 - SQRT2 / 4.0 + s * mi.cos_term
        rmm = SQRT2 / 4.0 - s * mi.cos_term
        r1m = off + s * mi.off_plus
        rm1 = off + s * mi.off_minus
    else:
        r11 = SQRT2 / 4.0 - s * mi.cos_term
        rmm = 1.0 - SQRT2 / 4.0 + s * mi.cos_term
        # the -1 elements carry the opposite sign inside the integral
        r1m = -off - s * mi.off_plus
        rm1 = -off - s * mi.off_minus
    return ReducedCoinMatrix(complex(r11), complex(r1m), complex(rm1), complex(rmm), "integral")


def reduced_limit(initial_coin_basis: Basis) -> NDArray[np.float64]:
    """Large-``n`` limit of the reduced coin matrix."""
    if initial_coin_basis == 1:
        return 0.25 * np.array([[4.0 - SQRT2, 2.0 - SQRT2], [2.0 - SQRT2, SQRT2]])
    if initial_coin_basis == -1:
        return 0.25 * np.array([[SQRT2, -2.0 + SQRT2], [-2.0 + SQRT2, 4.0 - SQRT2]])
    raise ValueError(f"coin basis must be +1 or -1, got {initial_coin_basis!r}")


def _diagonal_populations(initial: CoinState2) -> tuple[float, float]:
    ensure_valid(initial)
    if not initial.is_diagonal:
        raise CoinValidationError(
            "diagonal initial coin",
            abs(initial.eta),
            "the initial sigma_z measurement removes coherence; pass the diagonal part",
        )
    return initial.p1, initial.pm1


def _covariance_from_reduced(p1: float, pm1: float, plus: float, minus: float) -> float:
    """``plus``/``minus``: <sigma_z(n)> for the walks started in |+1> / |-1>."""
    joint = p1 * plus - pm1 * minus
    mean_n = p1 * plus + pm1 * minus
    return joint - (p1 - pm1) * mean_n


def covariance_direct(initial: CoinState2, n: int) -> float:
    """Covariance of sigma_z at step 0 and step n from exact evolution."""
    p1, pm1 = _diagonal_populations(initial)
    plus = coin_reduced_direct(1, n).sigma_z()
    minus = coin_reduced_direct(-1, n).sigma_z()
    return _covariance_from_reduced(p1, pm1, plus, minus)


def covariance_integral(initial: CoinState2, n: int) -> float:
    p1, pm1 = _diagonal_populations(initial)
    mi = momentum_integrals(n)
    core = COVARIANCE_LIMIT + (-1) ** n / (2.0 * np.pi) * mi.cos_term
    return core * (1.0 - (p1 - pm1) ** 2)


def independent_flip_covariance(first: CoinState2, later: CoinState2) -> float:
    """Covariance of sigma_z outcomes of two independently flipped coins.

    This is the classical and coin-per-step reference: the joint law of two
    independent outcomes factorises, so the result is zero.
    """
    pa = np.array([first.p1, first.pm1])
    pb = np.array([later.p1, later.pm1])
    nu = np.array([1.0, -1.0])
    joint_law = np.outer(pa, pb)
    joint = float(nu @ joint_law @ nu)
    return joint - float(nu @ pa) * float(nu @ pb)


@dataclass(frozen=True)
class CovarianceEntry:
    n: int
    value: float
    method: Method


@dataclass(frozen=True)
class CovarianceSeries:
    entries: tuple[CovarianceEntry, ...]

    def values(self, method: Method) -> NDArray[np.float64]:
        return np.array([e.value for e in self.entries if e.method == method])

    def steps(self, method: Method = "direct") -> NDArray[np.int64]:
        return np.array([e.n for e in self.entries if e.method == method], dtype=np.int64)

    def paired(self) -> list[tuple[int, float | None, float | None]]:
        """Rows ``(n, direct, integral)``; a missing method is ``None``."""
        rows: dict[int, list] = {}
        for e in self.entries:
            rows.setdefault(e.n, [None, None])[0 if e.method == "direct" else 1] = e.value
        return [(n, d, i) for n, (d, i) in sorted(rows.items())]


def covariance_series(
    initial: CoinState2,
    n_max: int,
    methods: tuple[Method, ...] = ("direct", "integral"),
) -> CovarianceSeries:
    """Covariance for ``n = 1..n_max`` with each requested method.

    The direct method evolves both basis states once and reads off every
    intermediate step. Entries are ordered by ``n``, then method.
    """
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    p1, pm1 = _diagonal_populations(initial)
    values: dict[Method, list[float]] = {}
    if "direct" in methods:
        plus = _reduced_direct_series(1, n_max)
        minus = _reduced_direct_series(-1, n_max)
        values["direct"] = [
            _covariance_from_reduced(
                p1, pm1, float((plus[t][0, 0] - plus[t][1, 1]).real), float((minus[t][0, 0] - minus[t][1, 1]).real)
            )
            for t in range(1, n_max + 1)
        ]
    if "integral" in methods:
        values["integral"] = [covariance_integral(initial, t) for t in range(1, n_max + 1)]
    unknown = set(methods) - {"direct", "integral"}
    if unknown:
        raise ValueError(f"unknown covariance method(s): {sorted(unknown)}")
    entries = [
        CovarianceEntry(t, values[m][t - 1], m)
        for t in range(1, n_max + 1)
        for m in ("direct", "integral")
        if m in values
    ]
    return CovarianceSeries(tuple(entries))
