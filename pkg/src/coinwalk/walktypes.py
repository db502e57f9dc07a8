"""
Coin states, coin operators and lattice distributions.

Every engine in the package consumes these value objects. They are frozen
after construction; array fields are marked read-only so instances can be
shared freely between threads.

Validation is report-style (:func:`validate_coin2`, :func:`validate_coin4`):
constructing an unphysical state is allowed, and engines call
:func:`ensure_valid` before doing any work.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Mapping, Union

import numpy as np
from numpy.typing import NDArray

__all__ = [
    "CoinValidationError",
    "ConvergenceError",
    "Check",
    "ValidationReport",
    "CoinState2",
    "CoinState4",
    "CoinOperator",
    "Distribution1D",
    "Distribution2D",
    "EffectiveCoherence",
    "ETA_PAIRS",
    "validate_coin2",
    "validate_coin4",
    "ensure_valid",
    "hadamard2",
    "grover4",
    "su2",
    "effective_coherence",
]

PROB_TOL = 1e-12
PSD_TOL = 1e-10
UNITARY_TOL = 1e-12
DIST_TOL = 1e-10

# upper-triangle ordering of the 4x4 coherences, 1-based labels
ETA_PAIRS: tuple[tuple[int, int], ...] = ((1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4))


class CoinValidationError(ValueError):
    """A coin state, operator or parameter set violates an invariant."""

    def __init__(self, invariant: str, residual: float, detail: str = ""):
        self.invariant = invariant
        self.residual = float(residual)
        msg = f"invariant '{invariant}' violated (residual {self.residual:.3e})"
        if detail:
            msg = f"{msg}: {detail}"
        super().__init__(msg)


class ConvergenceError(RuntimeError):
    """Numerical quadrature did not reach the requested tolerance."""

    def __init__(self, message: str, residual: float):
        self.residual = float(residual)
        super().__init__(f"{message} (achieved residual {self.residual:.3e})")


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    residual: float


@dataclass(frozen=True)
class ValidationReport:
    """Pass/fail per invariant together with the measured residual.

    Residuals are signed so that a negative value means "violated by this
    much" for inequality invariants, and an absolute deviation for equality
    invariants.
    """

    checks: tuple[Check, ...]

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def raise_if_invalid(self) -> None:
        bad = self.failures()
        if bad:
            first = bad[0]
            others = ", ".join(c.name for c in bad[1:])
            raise CoinValidationError(
                first.name, first.residual, f"also failing: {others}" if others else ""
            )

    def __iter__(self) -> Iterator[Check]:
        return iter(self.checks)

    def __str__(self) -> str:
        rows = [f"{'ok ' if c.passed else 'BAD'} {c.name}: {c.residual:.3e}" for c in self.checks]
        return "\n".join(rows)


def _freeze(arr: NDArray) -> NDArray:
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class CoinState2:
    """Two-level coin density matrix ``[[p1, eta], [conj(eta), pm1]]``.

    Parameters
    ----------
    p1, pm1 : float
        Populations of the heads (+1) and tails (-1) basis states.
    eta : complex
        Off-diagonal coherence. The lower entry is stored implicitly as its
        conjugate, so the matrix is Hermitian by construction.
    """

    p1: float
    pm1: float
    eta: complex = 0j

    def __post_init__(self) -> None:
        object.__setattr__(self, "p1", float(self.p1))
        object.__setattr__(self, "pm1", float(self.pm1))
        object.__setattr__(self, "eta", complex(self.eta))

    @classmethod
    def from_matrix(cls, rho: NDArray) -> CoinState2:
        rho = np.asarray(rho, dtype=np.complex128)
        if rho.shape != (2, 2):
            raise ValueError(f"expected a 2x2 matrix, got shape {rho.shape}")
        # symmetrise the off-diagonal so round-off never breaks Hermiticity
        eta = 0.5 * (rho[0, 1] + np.conj(rho[1, 0]))
        return cls(rho[0, 0].real, rho[1, 1].real, complex(eta))

    @classmethod
    def maximally_mixed(cls) -> CoinState2:
        return cls(0.5, 0.5, 0j)

    def matrix(self) -> NDArray[np.complex128]:
        return np.array(
            [[self.p1, self.eta], [self.eta.conjugate(), self.pm1]], dtype=np.complex128
        )

    @property
    def is_diagonal(self) -> bool:
        return abs(self.eta) <= PROB_TOL


@dataclass(frozen=True)
class CoinState4:
    """Four-level coin density matrix for the 2D lattice walk.

    Only the diagonal ``q`` and the six upper-triangle coherences are stored
    (``eta`` follows the order of :data:`ETA_PAIRS`: 12, 13, 14, 23, 24, 34).
    The full Hermitian matrix is assembled on demand.
    """

    q: tuple[float, float, float, float]
    eta: tuple[complex, complex, complex, complex, complex, complex] = (0j,) * 6

    def __post_init__(self) -> None:
        q = tuple(float(v) for v in self.q)
        eta = tuple(complex(v) for v in self.eta)
        if len(q) != 4:
            raise ValueError(f"q needs 4 entries, got {len(q)}")
        if len(eta) != 6:
            raise ValueError(f"eta needs 6 upper-triangle entries, got {len(eta)}")
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "eta", eta)

    @classmethod
    def from_pairs(
        cls,
        q,
        pairs: Mapping[Union[str, tuple[int, int]], complex] | None = None,
    ) -> CoinState4:
        """Build a state from a sparse mapping like ``{"12": 0.25, (3, 4): -0.25}``.

        Keys name 1-based (row, column) with row < column; unlisted
        coherences are zero.
        """
        values = dict.fromkeys(ETA_PAIRS, 0j)
        for key, val in (pairs or {}).items():
            if isinstance(key, str):
                if len(key) != 2 or not key.isdigit():
                    raise ValueError(f"bad coherence label {key!r}; expected e.g. '12'")
                key = (int(key[0]), int(key[1]))
            i, j = key
            if (i, j) not in values:
                raise ValueError(f"coherence ({i},{j}) is not an upper-triangle entry of a 4x4 matrix")
            values[(i, j)] = complex(val)
        return cls(tuple(q), tuple(values[p] for p in ETA_PAIRS))

    @classmethod
    def from_matrix(cls, rho: NDArray) -> CoinState4:
        rho = np.asarray(rho, dtype=np.complex128)
        if rho.shape != (4, 4):
            raise ValueError(f"expected a 4x4 matrix, got shape {rho.shape}")
        eta = tuple(
            complex(0.5 * (rho[i - 1, j - 1] + np.conj(rho[j - 1, i - 1]))) for i, j in ETA_PAIRS
        )
        return cls(tuple(float(rho[i, i].real) for i in range(4)), eta)

    @classmethod
    def maximally_mixed(cls) -> CoinState4:
        return cls((0.25, 0.25, 0.25, 0.25))

    def coherence(self, i: int, j: int) -> complex:
        """Matrix element ``rho[i, j]`` (1-based, any ordering)."""
        if i == j:
            return complex(self.q[i - 1])
        if i < j:
            return self.eta[ETA_PAIRS.index((i, j))]
        return self.eta[ETA_PAIRS.index((j, i))].conjugate()

    def matrix(self) -> NDArray[np.complex128]:
        rho = np.diag(np.asarray(self.q, dtype=np.complex128))
        for (i, j), v in zip(ETA_PAIRS, self.eta):
            rho[i - 1, j - 1] = v
            rho[j - 1, i - 1] = v.conjugate()
        return rho

    def pairs(self) -> dict[str, complex]:
        return {f"{i}{j}": v for (i, j), v in zip(ETA_PAIRS, self.eta)}


@dataclass(frozen=True)
class CoinOperator:
    """Unitary coin flip acting on a 2- or 4-level coin."""

    matrix: NDArray[np.complex128]
    name: str = "custom"

    def __post_init__(self) -> None:
        m = np.array(self.matrix, dtype=np.complex128)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] not in (2, 4):
            raise ValueError(f"coin operator must be 2x2 or 4x4, got shape {m.shape}")
        object.__setattr__(self, "matrix", _freeze(m))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def unitarity_residual(self) -> float:
        u = self.matrix
        return float(np.max(np.abs(u.conj().T @ u - np.eye(self.dim))))

    def is_unitary(self, tol: float = UNITARY_TOL) -> bool:
        return self.unitarity_residual() <= tol

    def conjugate(self, rho: NDArray) -> NDArray[np.complex128]:
        """Return ``U rho U^dagger``."""
        rho = np.asarray(rho, dtype=np.complex128)
        if rho.shape != self.matrix.shape:
            raise ValueError(
                f"dimension mismatch: {self.dim}x{self.dim} coin on a {rho.shape} state"
            )
        return self.matrix @ rho @ self.matrix.conj().T

    def apply(self, state: CoinState2 | CoinState4) -> CoinState2 | CoinState4:
        """Flip a coin state, returning a state of the same type."""
        return type(state).from_matrix(self.conjugate(state.matrix()))


def hadamard2() -> CoinOperator:
    return CoinOperator(np.array([[1.0, 1.0], [1.0, -1.0]]) / np.sqrt(2.0), name="hadamard")


def grover4() -> CoinOperator:
    """Grover coin: ``-1/2`` on the diagonal and ``+1/2`` everywhere else."""
    return CoinOperator(0.5 * (np.ones((4, 4)) - 2.0 * np.eye(4)), name="grover")


def su2(a: complex, b: complex) -> CoinOperator:
    """General SU(2) coin ``[[a, b], [-conj(b), conj(a)]]`` with ``|a|^2 + |b|^2 = 1``."""
    a, b = complex(a), complex(b)
    norm = abs(a) ** 2 + abs(b) ** 2
    if abs(norm - 1.0) > UNITARY_TOL:
        raise CoinValidationError("su2 normalisation |a|^2+|b|^2=1", norm - 1.0)
    return CoinOperator(np.array([[a, b], [-b.conjugate(), a.conjugate()]]), name="su2")


def validate_coin2(state: CoinState2) -> ValidationReport:
    """Check populations, normalisation and positivity of a two-level coin.

    Positivity uses the determinant ``p1*pm1 - |eta|^2``, which for a 2x2
    Hermitian matrix with non-negative diagonal is equivalent to PSD.
    """
    det = state.p1 * state.pm1 - abs(state.eta) ** 2
    trace_dev = abs(state.p1 + state.pm1 - 1.0)
    return ValidationReport(
        (
            Check("p1 >= 0", state.p1 >= 0.0, state.p1),
            Check("pm1 >= 0", state.pm1 >= 0.0, state.pm1),
            Check("p1 + pm1 = 1", trace_dev <= PROB_TOL, trace_dev),
            Check("positive semidefinite", det >= -PSD_TOL, det),
        )
    )


def validate_coin4(state: CoinState4) -> ValidationReport:
    q = np.asarray(state.q)
    trace_dev = abs(float(q.sum()) - 1.0)
    min_eig = float(np.linalg.eigvalsh(state.matrix()).min())
    return ValidationReport(
        (
            Check("q_i >= 0", bool(q.min() >= 0.0), float(q.min())),
            Check("sum q_i = 1", trace_dev <= PROB_TOL, trace_dev),
            Check("positive semidefinite", min_eig >= -PSD_TOL, min_eig),
        )
    )


def ensure_valid(state: CoinState2 | CoinState4) -> None:
    """Raise :class:`CoinValidationError` for the first violated invariant."""
    if isinstance(state, CoinState2):
        validate_coin2(state).raise_if_invalid()
    elif isinstance(state, CoinState4):
        validate_coin4(state).raise_if_invalid()
    else:
        raise TypeError(f"not a coin state: {type(state).__name__}")


@dataclass(frozen=True)
class EffectiveCoherence:
    """Differences of real coherences that fix the Grover-flipped step law."""

    zeta1: float
    zeta2: float
    zeta3: float

    def as_array(self) -> NDArray[np.float64]:
        return np.array([self.zeta1, self.zeta2, self.zeta3])


def effective_coherence(state: CoinState4) -> EffectiveCoherence:
    ensure_valid(state)
    re = {p: v.real for p, v in zip(ETA_PAIRS, state.eta)}
    return EffectiveCoherence(
        re[(1, 2)] - re[(3, 4)],
        re[(1, 3)] - re[(2, 4)],
        re[(1, 4)] - re[(2, 3)],
    )


@dataclass(frozen=True)
class Distribution1D:
    """Probability mass on sites ``x = -n..n`` after ``n`` steps.

    ``probs[i]`` is the mass at ``x = i - n``.
    """

    n: int
    probs: NDArray[np.float64] = field(repr=False)

    def __post_init__(self) -> None:
        n = int(self.n)
        if n < 0:
            raise ValueError("step count must be non-negative")
        p = np.array(self.probs, dtype=np.float64)
        if p.shape != (2 * n + 1,):
            raise ValueError(f"expected {2 * n + 1} sites for n={n}, got shape {p.shape}")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "probs", _freeze(p))

    @property
    def sites(self) -> NDArray[np.int64]:
        return np.arange(-self.n, self.n + 1)

    def __getitem__(self, x: int) -> float:
        if abs(x) > self.n:
            return 0.0
        return float(self.probs[x + self.n])

    def total(self) -> float:
        return float(self.probs.sum())

    def mean(self) -> float:
        return float(np.dot(self.sites, self.probs))

    def variance(self) -> float:
        x = self.sites
        mu = self.mean()
        return float(np.dot((x - mu) ** 2, self.probs))

    def parity_residual(self) -> float:
        """Largest mass sitting on a site with ``n + x`` odd."""
        odd = (self.sites + self.n) % 2 == 1
        return float(np.abs(self.probs[odd]).max()) if odd.any() else 0.0

    def is_valid(self, tol: float = DIST_TOL) -> bool:
        return abs(self.total() - 1.0) <= tol and self.parity_residual() == 0.0

    def even_sites(self) -> tuple[NDArray[np.int64], NDArray[np.float64]]:
        """Sites with ``n + x`` even and their mass (the only reachable ones)."""
        sel = (self.sites + self.n) % 2 == 0
        return self.sites[sel], self.probs[sel]

    def as_dict(self, *, include_zero: bool = False) -> dict[int, float]:
        return {
            int(x): float(p)
            for x, p in zip(self.sites, self.probs)
            if include_zero or p != 0.0
        }

    def reflected(self) -> Distribution1D:
        return Distribution1D(self.n, self.probs[::-1])


@dataclass(frozen=True)
class Distribution2D:
    """Probability mass on the square lattice; ``probs[x + n, y + n]``."""

    n: int
    probs: NDArray[np.float64] = field(repr=False)

    def __post_init__(self) -> None:
        n = int(self.n)
        if n < 0:
            raise ValueError("step count must be non-negative")
        p = np.array(self.probs, dtype=np.float64)
        side = 2 * n + 1
        if p.shape != (side, side):
            raise ValueError(f"expected a {side}x{side} grid for n={n}, got shape {p.shape}")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "probs", _freeze(p))

    @property
    def sites(self) -> NDArray[np.int64]:
        return np.arange(-self.n, self.n + 1)

    def __getitem__(self, xy: tuple[int, int]) -> float:
        x, y = xy
        if abs(x) > self.n or abs(y) > self.n:
            return 0.0
        return float(self.probs[x + self.n, y + self.n])

    def total(self) -> float:
        return float(self.probs.sum())

    def marginal_x(self) -> Distribution1D:
        return Distribution1D(self.n, self.probs.sum(axis=1))

    def marginal_y(self) -> Distribution1D:
        return Distribution1D(self.n, self.probs.sum(axis=0))

    def mean(self) -> tuple[float, float]:
        return self.marginal_x().mean(), self.marginal_y().mean()

    def variances(self) -> tuple[float, float, float]:
        """``(var_x, var_y, var_total)`` with ``var_total = <|r - <r>|^2>``."""
        vx = self.marginal_x().variance()
        vy = self.marginal_y().variance()
        mx, my = self.mean()
        x = self.sites[:, None]
        y = self.sites[None, :]
        vt = float(np.sum(((x - mx) ** 2 + (y - my) ** 2) * self.probs))
        return vx, vy, vt

    def parity_residual(self) -> float:
        """Largest mass on a site where ``x`` and ``n + y`` differ in parity."""
        x = self.sites[:, None]
        y = self.sites[None, :]
        bad = (x - (self.n + y)) % 2 != 0
        return float(np.abs(self.probs[bad]).max()) if bad.any() else 0.0

    def is_valid(self, tol: float = DIST_TOL) -> bool:
        return abs(self.total() - 1.0) <= tol and self.parity_residual() == 0.0

    def nonzero(self) -> tuple[NDArray[np.int64], NDArray[np.int64], NDArray[np.float64]]:
        ix, iy = np.nonzero(self.probs)
        return ix - self.n, iy - self.n, self.probs[ix, iy]

    def as_dict(self) -> dict[tuple[int, int], float]:
        xs, ys, ps = self.nonzero()
        return {(int(x), int(y)): float(p) for x, y, p in zip(xs, ys, ps)}
