import csv
import io
import json
import math

import numpy as np
import pytest

from coinwalk import COVARIANCE_LIMIT, grover_probabilities, validate_coin4
from coinwalk.figures import FIG4_PATTERNS, FIGURES, emit_figure_data, fig4_state, figure_table
from coinwalk.qrw import grover_probabilities_from_zeta
from coinwalk.walktypes import EffectiveCoherence


def test_every_figure_has_data():
    for fid in FIGURES:
        if fid in ("fig_cov", "fig_loglog"):
            continue
        header, rows, _ = figure_table(fid)
        assert rows and all(len(r) == len(header) for r in rows)


def test_unknown_figure():
    with pytest.raises(ValueError, match="unknown figure"):
        figure_table("fig9")


def test_fig2a_qrw_is_classical():
    header, rows, meta = figure_table("fig2a")
    assert header == ["x", "p_crw", "p_qrw", "p_qw"] and meta["n"] == 100
    assert max(abs(r[1] - r[2]) for r in rows) <= 1e-12
    assert math.fsum(r[3] for r in rows) == pytest.approx(1.0, abs=1e-10)


def test_fig2b_bias():
    _, rows, meta = figure_table("fig2b")
    assert meta["eta"] == 0.1
    peak = max(rows, key=lambda r: r[2])
    assert peak[0] == 20


@pytest.mark.parametrize("fid", sorted(FIG4_PATTERNS))
def test_fig4_states_valid_and_normalised(fid):
    assert validate_coin4(fig4_state(fid)).ok
    _, rows, meta = figure_table(fid)
    assert meta["n"] == 40 and meta["q"] == [0.25] * 4
    assert math.fsum(r[2] for r in rows) == pytest.approx(1.0, abs=1e-10)


def test_fig4b_no_drift():
    _, rows, meta = figure_table("fig4b")
    assert meta["mean"] == [0.0, 0.0]
    assert meta["zeta"] == [0.0, 0.0, 0.0]


def test_fig4h_drift():
    _, _, meta = figure_table("fig4h")
    assert meta["mean"] == [8.0, -8.0]
    assert meta["step_probabilities"] == pytest.approx([0.45, 0.25, 0.05, 0.25], abs=1e-15)


@pytest.mark.parametrize("fid, axis", [("fig4c", "x"), ("fig4d", "y")])
def test_fig4_one_axis_panels(fid, axis):
    _, rows, _ = figure_table(fid)
    other = 1 if axis == "x" else 0
    assert all(r[other] == 0 for r in rows)


def test_fig3_vertices_are_deterministic_walks():
    header, rows, _ = figure_table("fig3")
    assert header == ["vertex", "zeta1", "zeta2", "zeta3"]
    for i, (_, z1, z2, z3) in enumerate(rows):
        assert all(abs(abs(v) - 0.5) <= 1e-15 for v in (z1, z2, z3))
        probs = grover_probabilities_from_zeta(EffectiveCoherence(z1, z2, z3))
        np.testing.assert_allclose(probs, np.eye(4)[i], atol=1e-15)


def test_fig_cov():
    header, rows, meta = figure_table("fig_cov")
    assert header == ["n", "cov_direct", "cov_integral", "cov_crw_qrw", "limit"]
    assert len(rows) == 200
    assert all(abs(r[1] - r[2]) <= 1e-8 for r in rows)
    assert all(r[3] == 0.0 and r[4] == COVARIANCE_LIMIT for r in rows)
    assert abs(rows[0][1]) <= 1e-10


def test_fig_loglog_envelope():
    header, rows, meta = figure_table("fig_loglog")
    assert header == ["n", "abs_diff", "fit"]
    for n, diff, fit in rows:
        assert fit == pytest.approx(2 / (5 * math.sqrt(n)))
        if n >= 100:
            assert diff <= 0.5 / math.sqrt(n), n


def test_emit_csv_and_json(tmp_path):
    p = tmp_path / "fig.csv"
    text = emit_figure_data("fig4h", p)
    assert p.read_text() == text
    rows = list(csv.reader(io.StringIO(text)))
    assert rows[0] == ["x", "y", "p"]
    obj = json.loads(emit_figure_data("fig4h", fmt="json"))
    assert obj["figure"] == "fig4h" and obj["meta"]["mean"] == [8.0, -8.0]
    assert len(obj["rows"]) == len(rows) - 1


def test_fig4_probabilities_from_state_and_zeta_agree():
    for fid in FIG4_PATTERNS:
        s = fig4_state(fid)
        _, _, meta = figure_table(fid)
        z = EffectiveCoherence(*meta["zeta"])
        np.testing.assert_allclose(grover_probabilities_from_zeta(z), grover_probabilities(s), atol=1e-15)
