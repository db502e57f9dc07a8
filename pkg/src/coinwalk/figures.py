"""
Plot-ready tables for the standard figure set.

Each figure id maps to a fixed parameter set and a table builder; nothing
here draws anything. Tables come back as ``(header, rows, meta)`` so the CLI
can render CSV or JSON.
"""

from __future__ import annotations

import os
from typing import Any, Callable

import numpy as np

from .crw import CrwParams, crw_distribution
from .io import render_csv, render_json, write_atomic
from .qrw import (
    ZETA_TO_PROBS,
    grover_probabilities,
    qrw1d_distribution,
    qrw2d_distribution,
    qrw2d_moments,
)
from .qw import COVARIANCE_LIMIT, covariance_series, independent_flip_covariance, qw_distribution
from .walktypes import CoinState2, CoinState4, effective_coherence

__all__ = ["FIGURES", "FIG4_PATTERNS", "figure_table", "emit_figure_data"]

FIG2_STEPS = 100
FIG4_STEPS = 40
FIG_COV_STEPS = 200
FIG_LOGLOG_STEPS = 1000

# off-diagonal patterns of the eight 2D panels; diagonal is 0.25 throughout
FIG4_PATTERNS: dict[str, dict[str, float]] = {
    "fig4a": {},
    "fig4b": {k: 0.25 for k in ("12", "13", "14", "23", "24", "34")},
    "fig4c": {"12": -0.25, "34": 0.25},
    "fig4d": {"12": 0.25, "34": -0.25},
    "fig4e": {"12": -0.2, "34": 0.2},
    "fig4f": {"12": 0.2, "34": -0.2},
    "fig4g": {"14": -0.1, "23": 0.1},
    "fig4h": {"12": -0.1, "34": 0.1, "23": 0.2},
}

Table = tuple[list[str], list[list[Any]], dict[str, Any]]


def fig4_state(figure: str) -> CoinState4:
    return CoinState4.from_pairs([0.25] * 4, FIG4_PATTERNS[figure])


def _fig2(eta: float) -> Table:
    n = FIG2_STEPS
    coin = CoinState2(0.5, 0.5, eta)
    crw = crw_distribution(CrwParams.symmetric(n))
    qrw = qrw1d_distribution(coin, n=n)
    # the ballistic curve uses the same initial coin
    qw = qw_distribution(coin, n)
    x, _ = crw.even_sites()
    rows = [[int(xi), crw[xi], qrw[xi], qw[xi]] for xi in x]
    meta = {"n": n, "p1": 0.5, "pm1": 0.5, "eta": eta}
    return ["x", "p_crw", "p_qrw", "p_qw"], rows, meta


def _fig4(figure: str) -> Table:
    state = fig4_state(figure)
    dist = qrw2d_distribution(state, FIG4_STEPS)
    xs, ys, ps = dist.nonzero()
    rows = [[int(x), int(y), float(p)] for x, y, p in zip(xs, ys, ps)]
    z = effective_coherence(state)
    mom = qrw2d_moments(state, FIG4_STEPS)
    meta = {
        "n": FIG4_STEPS,
        "q": [0.25] * 4,
        "eta": FIG4_PATTERNS[figure],
        "zeta": [z.zeta1, z.zeta2, z.zeta3],
        "step_probabilities": list(grover_probabilities(state)),
        "mean": list(mom.mean),
        "var_x": mom.var_x,
        "var_y": mom.var_y,
        "var_total": mom.var_total,
    }
    return ["x", "y", "p"], rows, meta


def _fig_cov() -> Table:
    coin = CoinState2.maximally_mixed()
    series = covariance_series(coin, FIG_COV_STEPS)
    ref = independent_flip_covariance(coin, coin)
    rows = [[n, d, i, ref, COVARIANCE_LIMIT] for n, d, i in series.paired()]
    meta = {"p1": 0.5, "pm1": 0.5, "n_max": FIG_COV_STEPS, "limit": COVARIANCE_LIMIT}
    return ["n", "cov_direct", "cov_integral", "cov_crw_qrw", "limit"], rows, meta


def _fig_loglog() -> Table:
    coin = CoinState2.maximally_mixed()
    series = covariance_series(coin, FIG_LOGLOG_STEPS, methods=("direct",))
    n = series.steps("direct")
    diff = np.abs(series.values("direct") - COVARIANCE_LIMIT)
    fit = 2.0 / (5.0 * np.sqrt(n))
    rows = [[int(a), float(b), float(c)] for a, b, c in zip(n, diff, fit)]
    meta = {"p1": 0.5, "pm1": 0.5, "n_max": FIG_LOGLOG_STEPS, "limit": COVARIANCE_LIMIT, "fit": "2/(5 sqrt(n))"}
    return ["n", "abs_diff", "fit"], rows, meta


def _fig3() -> Table:
    """Vertices of the feasible zeta tetrahedron: one step probability equal to 1."""
    inv = np.linalg.inv(0.25 * ZETA_TO_PROBS)
    rows = []
    for name, e in zip("RLUD", np.eye(4)):
        z = inv @ e
        rows.append([name, float(z[1]), float(z[2]), float(z[3])])
    return ["vertex", "zeta1", "zeta2", "zeta3"], rows, {"region": "rho_uu >= 0 for u in R, L, U, D"}


FIGURES: dict[str, Callable[[], Table]] = {
    "fig2a": lambda: _fig2(0.0),
    "fig2b": lambda: _fig2(0.1),
    "fig3": _fig3,
    **{fid: (lambda fid=fid: _fig4(fid)) for fid in FIG4_PATTERNS},
    "fig_cov": _fig_cov,
    "fig_loglog": _fig_loglog,
}


def figure_table(figure: str) -> Table:
    try:
        builder = FIGURES[figure]
    except KeyError:
        raise ValueError(f"unknown figure id {figure!r}; choose from {', '.join(FIGURES)}") from None
    return builder()


def emit_figure_data(figure: str, path: str | os.PathLike | None = None, fmt: str = "csv") -> str:
    """Build the table for ``figure`` and write it to ``path`` (if given).

    Returns the rendered text.
    """
    header, rows, meta = figure_table(figure)
    if fmt == "csv":
        text = render_csv(header, rows)
    elif fmt == "json":
        text = render_json({"figure": figure, "meta": meta, "columns": header, "rows": rows})
    else:
        raise ValueError(f"unknown format {fmt!r}")
    if path is not None:
        write_atomic(path, text)
    return text
