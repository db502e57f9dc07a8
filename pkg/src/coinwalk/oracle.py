"""
Independent checks on the engines: path enumeration, Monte Carlo, comparison.

Enumeration sums the product of step probabilities over every direction
sequence, never touching a binomial coefficient. The sampler draws each step
of each walker separately from per-chunk random streams, so results depend
only on ``(seed, chunk_count)`` and not on how many threads ran the chunks.
"""

from __future__ import annotations

import math
import os
from collections import defaultdict
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Literal, NamedTuple, Union

import numpy as np
from numpy.typing import NDArray
from scipy import stats

from .crw import CrwParams
from .qrw import GroverProbabilities, flip_coin2, grover_probabilities
from .walktypes import CoinState2, CoinState4, Distribution1D, Distribution2D

__all__ = [
    "MAX_ENUM_1D",
    "MAX_ENUM_2D",
    "SampleReport",
    "Comparison",
    "enumerate_paths_1d",
    "enumerate_paths_2d",
    "step_probabilities",
    "sample_walk",
    "compare_distributions",
    "expected_tv_bound",
    "thread_cap",
]

MAX_ENUM_1D = 20
MAX_ENUM_2D = 10
_CHUNK_PATHS = 1 << 15

Model = Literal["crw", "qrw1d", "qrw2d"]
Distribution = Union[Distribution1D, Distribution2D]

# R, L, U, D
_MOVES_2D = np.array([[1, 0], [-1, 0], [0, 1], [0, -1]])


def _fsum_by_key(keys: NDArray, weights: NDArray, acc: dict) -> None:
    order = np.argsort(keys, kind="stable")
    keys, weights = keys[order], weights[order]
    bounds = np.flatnonzero(np.diff(keys)) + 1
    for kk, ww in zip(np.split(keys, bounds), np.split(weights, bounds)):
        if len(kk):
            acc[int(kk[0])].append(math.fsum(ww))


def _enumerate(step_probs: NDArray, moves: NDArray, n: int, side: int) -> dict[int, float]:
    """Sum of path weights keyed by flattened endpoint index.

    Paths are numbered ``0..d**n - 1``; digit ``l`` in base ``d`` selects the
    direction of step ``l``.
    """
    d = len(step_probs)
    total = d**n
    acc: dict[int, list[float]] = defaultdict(list)
    for start in range(0, total, _CHUNK_PATHS):
        idx = np.arange(start, min(start + _CHUNK_PATHS, total), dtype=np.int64)
        weight = np.ones(idx.shape)
        pos = np.zeros((idx.size, moves.shape[1]), dtype=np.int64)
        rest = idx.copy()
        for _ in range(n):
            digit = rest % d
            rest //= d
            weight *= step_probs[digit]
            pos += moves[digit]
        flat = pos[:, 0] + n
        if moves.shape[1] == 2:
            flat = flat * side + (pos[:, 1] + n)
        _fsum_by_key(flat, weight, acc)
    return {k: math.fsum(v) for k, v in acc.items()}


def enumerate_paths_1d(step_probs: tuple[float, float], n: int) -> Distribution1D:
    """Exact endpoint law by summing ``prod p_{u_l}`` over all ``2**n`` paths."""
    if n > MAX_ENUM_1D:
        raise ValueError(f"n={n} too large for enumeration (limit {MAX_ENUM_1D})")
    if n < 0:
        raise ValueError("step count must be non-negative")
    p = np.asarray(step_probs, dtype=np.float64)
    side = 2 * n + 1
    sums = _enumerate(p, np.array([[1], [-1]]), n, side)
    probs = np.zeros(side)
    for k, v in sums.items():
        probs[k] = v
    return Distribution1D(n, probs)


def enumerate_paths_2d(probs: GroverProbabilities, n: int) -> Distribution2D:
    """Exact endpoint law on the square lattice from all ``4**n`` direction sequences."""
    if n > MAX_ENUM_2D:
        raise ValueError(f"n={n} too large for enumeration (limit {MAX_ENUM_2D})")
    if n < 0:
        raise ValueError("step count must be non-negative")
    p = np.asarray(probs, dtype=np.float64)
    side = 2 * n + 1
    sums = _enumerate(p, _MOVES_2D, n, side)
    grid = np.zeros(side * side)
    for k, v in sums.items():
        grid[k] = v
    return Distribution2D(n, grid.reshape(side, side))


def step_probabilities(model: Model, params) -> NDArray[np.float64]:
    """Single-step direction law for a model.

    ``params`` is a :class:`CrwParams` (``crw``), a :class:`CoinState2`
    (``qrw1d``, Hadamard flip) or a :class:`CoinState4` (``qrw2d``).
    """
    if model == "crw":
        if not isinstance(params, CrwParams):
            raise TypeError("crw sampling needs CrwParams")
        return np.array([params.p1, params.pm1])
    if model == "qrw1d":
        if not isinstance(params, CoinState2):
            raise TypeError("qrw1d sampling needs a CoinState2")
        f = flip_coin2(params)
        return np.array([f.rho11, f.rho_m1m1])
    if model == "qrw2d":
        if not isinstance(params, CoinState4):
            raise TypeError("qrw2d sampling needs a CoinState4")
        return np.array(grover_probabilities(params))
    raise ValueError(f"unknown model {model!r}")


@dataclass(frozen=True)
class SampleReport:
    n_samples: int
    empirical: Distribution
    seed: int
    chunk_count: int
    counts: NDArray[np.int64] = field(repr=False)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SampleReport):
            return NotImplemented
        return (
            self.n_samples == other.n_samples
            and self.seed == other.seed
            and self.chunk_count == other.chunk_count
            and np.array_equal(self.counts, other.counts)
        )

    def empirical_moments(self) -> tuple:
        if isinstance(self.empirical, Distribution1D):
            return self.empirical.mean(), self.empirical.variance()
        return self.empirical.mean(), self.empirical.variances()


def thread_cap() -> int:
    """Worker threads for sampling; ``COINWALK_THREADS`` caps the default."""
    default = os.cpu_count() or 1
    env = os.environ.get("COINWALK_THREADS")
    if env:
        try:
            return max(1, min(default, int(env)))
        except ValueError:
            pass
    return default


def _sample_chunk(seq: np.random.SeedSequence, p: NDArray, n: int, size: int, side: int) -> NDArray:
    rng = np.random.Generator(np.random.Philox(seq))
    cum = np.cumsum(p)
    cum[-1] = 1.0
    dims = 1 if len(p) == 2 else 2
    moves = np.array([[1], [-1]]) if dims == 1 else _MOVES_2D
    pos = np.zeros((size, dims), dtype=np.int64)
    for _ in range(n):
        u = rng.random(size)
        digit = np.searchsorted(cum, u, side="right")
        pos += moves[digit]
    flat = pos[:, 0] + n
    if dims == 2:
        flat = flat * side + (pos[:, 1] + n)
    return np.bincount(flat, minlength=side**dims)


def sample_walk(
    model: Model,
    params,
    n: int,
    n_samples: int,
    seed: int,
    chunk_count: int = 8,
    threads: int | None = None,
) -> SampleReport:
    """Monte Carlo endpoint histogram from i.i.d. per-step directions.

    Each chunk owns an independent Philox stream spawned from
    ``SeedSequence(seed)``; chunk sizes are fixed by ``(n_samples,
    chunk_count)``. Counts are merged in chunk order, so the output is
    identical for any thread count.
    """
    if n_samples < 1:
        raise ValueError("n_samples must be at least 1")
    if chunk_count < 1:
        raise ValueError("chunk_count must be at least 1")
    if n < 0:
        raise ValueError("step count must be non-negative")
    p = step_probabilities(model, params)
    side = 2 * n + 1
    base, extra = divmod(n_samples, chunk_count)
    sizes = [base + (1 if i < extra else 0) for i in range(chunk_count)]
    seqs = np.random.SeedSequence(seed).spawn(chunk_count)
    workers = min(threads or thread_cap(), chunk_count)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda a: _sample_chunk(a[0], p, n, a[1], side), zip(seqs, sizes)))
    else:
        parts = [_sample_chunk(s, p, n, m, side) for s, m in zip(seqs, sizes)]
    counts = np.zeros(side ** (1 if len(p) == 2 else 2), dtype=np.int64)
    for part in parts:
        counts += part
    if len(p) == 2:
        emp: Distribution = Distribution1D(n, counts / n_samples)
    else:
        emp = Distribution2D(n, (counts / n_samples).reshape(side, side))
    return SampleReport(n_samples, emp, seed, chunk_count, counts)


class Comparison(NamedTuple):
    total_variation: float
    chi_square_p: float | None


def compare_distributions(a: Distribution, b: Distribution, n_samples: int | None = None) -> Comparison:
    """Total variation between ``a`` and ``b``; chi-square p-value when sampled.

    With ``n_samples`` given, ``a`` is the reference law and ``b`` the
    empirical one. Bins whose expected count is below 5 are pooled into a
    single tail bin before the chi-square test.
    """
    if type(a) is not type(b):
        raise ValueError("cannot compare a 1D distribution with a 2D one")
    if a.n != b.n:
        raise ValueError(f"step counts differ: {a.n} vs {b.n}")
    pa = a.probs.ravel()
    pb = b.probs.ravel()
    tv = 0.5 * float(np.abs(pa - pb).sum())
    if n_samples is None:
        return Comparison(tv, None)
    expected = pa * n_samples
    observed = pb * n_samples
    big = expected >= 5.0
    exp_bins = list(expected[big])
    obs_bins = list(observed[big])
    tail_e = float(expected[~big].sum())
    tail_o = float(observed[~big].sum())
    if tail_e > 0.0 or tail_o > 0.0:
        if tail_e >= 5.0 or not exp_bins:
            exp_bins.append(tail_e)
            obs_bins.append(tail_o)
        else:
            i = int(np.argmin(exp_bins))
            exp_bins[i] += tail_e
            obs_bins[i] += tail_o
    if len(exp_bins) < 2:
        return Comparison(tv, 1.0)
    e = np.asarray(exp_bins)
    o = np.asarray(obs_bins)
    # rescale so both sides carry exactly the same total, as chisquare requires
    e *= o.sum() / e.sum()
    return Comparison(tv, float(stats.chisquare(o, e).pvalue))


def expected_tv_bound(reference: Distribution, n_samples: int) -> float:
    """Upper bound on E[TV] between ``reference`` and an N-sample histogram.

    Uses ``E|p_hat - p| <= sqrt(p (1 - p) / N)`` per site.
    """
    p = reference.probs.ravel()
    return 0.5 * float(np.sum(np.sqrt(p * (1.0 - p) / n_samples)))
