import csv
import io
import json
import math
import subprocess
import sys

import numpy as np
import pytest

from coinwalk import CoinState2, CoinState4, CoinValidationError, validate_coin2
from coinwalk.cli import EXIT_CONVERGENCE, EXIT_INVALID, EXIT_OK, EXIT_USAGE, run
from coinwalk.io import coin_to_json, dump_coin_json, load_coin_json, write_atomic

GOLDEN_HEADERS = {
    ("crw", "--n", "4"): "x,p",
    ("qrw1d", "--n", "4"): "x,p",
    ("qw", "--n", "4"): "x,p",
    ("qrw2d", "--n", "3"): "x,y,p",
    ("covariance", "--n-max", "3"): "n,cov_direct,cov_integral",
    ("sample", "--model", "crw", "--n", "4", "--samples", "100"): "x,p",
    ("feasibility", "--zeta", "0", "0", "0"): "zeta1,zeta2,zeta3,rho_RR,rho_LL,rho_UU,rho_DD,status",
    ("coin-analytics",): "quantity,value",
}


def invoke(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def parse(text):
    return list(csv.reader(io.StringIO(text)))


@pytest.mark.parametrize("argv, header", list(GOLDEN_HEADERS.items()), ids=lambda v: v[0] if isinstance(v, tuple) else None)
def test_golden_headers(capsys, argv, header):
    code, out, _ = invoke(capsys, *argv)
    assert code == EXIT_OK
    assert out.splitlines()[0] == header


def test_qrw1d_reference_run(capsys):
    code, out, _ = invoke(capsys, "qrw1d", "--n", "100", "--p1", "0.5", "--eta", "0.1", "--format", "csv")
    assert code == EXIT_OK
    rows = parse(out)[1:]
    # the even-parity lattice -100, -98, ..., 100
    assert len(rows) == 101
    xs = [int(r[0]) for r in rows]
    ps = [float(r[1]) for r in rows]
    assert all(x % 2 == 0 for x in xs)
    assert abs(math.fsum(ps) - 1.0) <= 1e-10
    assert xs[int(np.argmax(ps))] == 20


def test_seventeen_significant_digits(capsys):
    _, out, _ = invoke(capsys, "crw", "--n", "3", "--p1", "0.3")
    # 0.3**3 is not exactly representable, so all 17 digits appear
    x, value = parse(out)[-1]
    assert x == "3"
    assert value == format(float(value), ".17g")
    assert len(value.split("e")[0].replace(".", "").lstrip("0")) == 17
    assert float(value) == pytest.approx(0.3**3, rel=1e-14)


def test_covariance_both_methods_agree(capsys):
    code, out, _ = invoke(capsys, "covariance", "--n-max", "100", "--method", "both")
    assert code == EXIT_OK
    rows = parse(out)[1:]
    assert [int(r[0]) for r in rows] == list(range(1, 101))
    assert max(abs(float(r[1]) - float(r[2])) for r in rows) <= 1e-8


def test_covariance_single_method_leaves_column_empty(capsys):
    _, out, _ = invoke(capsys, "covariance", "--n-max", "2", "--method", "direct")
    rows = parse(out)[1:]
    assert all(r[2] == "" for r in rows)


def test_feasibility_boundary(capsys):
    code, out, _ = invoke(capsys, "feasibility", "--zeta", "-0.5", "0", "0")
    assert code == EXIT_OK
    row = parse(out)[1]
    assert row[-1] == "feasible"
    assert [float(v) for v in row[3:7]] == pytest.approx([0.5, 0.5, 0, 0], abs=1e-15)


def test_feasibility_outside(capsys):
    _, out, _ = invoke(capsys, "feasibility", "--zeta", "0.5", "0.5", "0.5")
    assert parse(out)[1][-1] == "infeasible"


def test_qrw2d_json_output(capsys):
    code, out, _ = invoke(
        capsys, "qrw2d", "--n", "40", "--eta-entry", "14", "-0.1", "--eta-entry", "23", "0.1", "--format", "json"
    )
    assert code == EXIT_OK
    obj = json.loads(out)
    assert obj["columns"] == ["x", "y", "p"]
    assert math.fsum(r[2] for r in obj["rows"]) == pytest.approx(1.0, abs=1e-10)
    assert obj["mean"] == pytest.approx([8.0, -8.0])


class TestCoinJson:
    def test_two_level(self, tmp_path):
        p = tmp_path / "c.json"
        p.write_text('{"dim":2,"p":[0.5,0.5],"eta":[0.1,0]}')
        s = load_coin_json(p)
        assert s == CoinState2(0.5, 0.5, 0.1)

    def test_four_level_defaults(self, tmp_path):
        p = tmp_path / "c.json"
        p.write_text('{"dim":4,"q":[0.25,0.25,0.25,0.25],"eta":{}}')
        s = load_coin_json(p)
        np.testing.assert_array_equal(s.matrix(), np.eye(4) / 4)

    def test_psd_violation_named(self, tmp_path):
        p = tmp_path / "c.json"
        p.write_text('{"dim":2,"p":[0.5,0.5],"eta":[0.6,0]}')
        with pytest.raises(CoinValidationError, match="positive semidefinite"):
            load_coin_json(p)

    def test_psd_violation_exit_code(self, tmp_path, capsys):
        p = tmp_path / "c.json"
        p.write_text('{"dim":2,"p":[0.5,0.5],"eta":[0.6,0]}')
        code, _, err = invoke(capsys, "qrw1d", "--n", "3", "--coin", str(p))
        assert code == EXIT_INVALID
        assert "positive semidefinite" in err

    def test_parse_failure(self, tmp_path):
        p = tmp_path / "c.json"
        p.write_text("{not json")
        with pytest.raises(ValueError):
            load_coin_json(p)

    @pytest.mark.parametrize(
        "state",
        [CoinState2(0.3, 0.7, 0.1 - 0.2j), CoinState4.from_pairs([0.4, 0.3, 0.2, 0.1], {"12": 0.05j, "34": -0.1})],
    )
    def test_round_trip(self, tmp_path, state):
        p = tmp_path / "c.json"
        dump_coin_json(state, p)
        assert load_coin_json(p) == state

    def test_dump_coin_flag(self, tmp_path, capsys):
        p = tmp_path / "dumped.json"
        code, _, _ = invoke(capsys, "qrw1d", "--n", "2", "--p1", "0.3", "--eta", "0.1-0.2i", "--dump-coin", str(p))
        assert code == EXIT_OK
        s = load_coin_json(p)
        assert validate_coin2(s).ok
        assert (s.p1, s.pm1, s.eta) == (0.3, 1.0 - 0.3, 0.1 - 0.2j)


def test_inline_flag_overrides_file(tmp_path, capsys, caplog):
    p = tmp_path / "c.json"
    p.write_text(json.dumps(coin_to_json(CoinState2(0.5, 0.5, 0.1))))
    code, out, _ = invoke(capsys, "coin-analytics", "--coin", str(p), "--eta", "0.2")
    assert code == EXIT_OK
    table = dict(parse(out)[1:])
    assert float(table["rho11"]) == pytest.approx(0.7)
    assert any("overrides" in r.getMessage() for r in caplog.records)


def test_override_warning_on_stderr(tmp_path):
    p = tmp_path / "c.json"
    p.write_text(json.dumps(coin_to_json(CoinState2(0.5, 0.5, 0.1))))
    res = subprocess.run(
        [sys.executable, "-m", "coinwalk", "qrw1d", "--n", "2", "--coin", str(p), "--p1", "0.6", "--eta", "0"],
        capture_output=True,
        text=True,
    )
    assert res.returncode == 0
    assert "overrides" in res.stderr
    assert "overrides" not in res.stdout


@pytest.mark.parametrize(
    "argv",
    [("bogus",), ("crw",), ("crw", "--n", "3", "--unknown"), ("figure", "fig9"), ("compare", "--a", "x.csv")],
)
def test_usage_errors(capsys, argv):
    code, _, err = invoke(capsys, *argv)
    assert code == EXIT_USAGE
    assert "usage" in err.lower()


def test_validation_exit_code(capsys):
    assert invoke(capsys, "qrw1d", "--n", "3", "--eta", "0.6")[0] == EXIT_INVALID
    assert invoke(capsys, "crw", "--n", "3", "--p1", "1.5")[0] == EXIT_INVALID
    assert invoke(capsys, "qrw2d", "--n", "3", "--eta-entry", "12", "0.3")[0] == EXIT_INVALID


def test_convergence_exit_code(capsys, monkeypatch):
    import coinwalk.qw as qw

    real = qw.momentum_integrals
    monkeypatch.setattr(qw, "momentum_integrals", lambda n, **kw: real(n, tol=1e-30, max_nodes=1 << 11))
    code, _, err = invoke(capsys, "covariance", "--n-max", "2", "--method", "integral")
    assert code == EXIT_CONVERGENCE
    assert "converge" in err


class TestFiles:
    def test_output_written_atomically(self, tmp_path, capsys):
        out = tmp_path / "qrw.csv"
        code, stdout, _ = invoke(capsys, "qrw1d", "--n", "10", "--eta", "0.1", "-o", str(out))
        assert code == EXIT_OK and stdout == ""
        assert list(tmp_path.iterdir()) == [out]
        rows = parse(out.read_text())[1:]
        assert math.fsum(float(r[1]) for r in rows) == pytest.approx(1.0, abs=1e-10)

    def test_write_atomic_leaves_no_temp_on_failure(self, tmp_path, monkeypatch):
        target = tmp_path / "f.csv"
        target.write_text("old")

        def boom(src, dst):
            raise OSError("rename failed")

        monkeypatch.setattr("coinwalk.io.os.replace", boom)
        with pytest.raises(OSError):
            write_atomic(target, "new")
        assert list(tmp_path.iterdir()) == [target]
        assert target.read_text() == "old"

    def test_write_atomic_creates_parent(self, tmp_path):
        target = tmp_path / "sub" / "f.csv"
        write_atomic(target, "x")
        assert target.read_text() == "x"

    def test_write_atomic_replaces(self, tmp_path):
        target = tmp_path / "f.csv"
        target.write_text("old")
        write_atomic(target, "new")
        assert target.read_text() == "new"

    @pytest.mark.parametrize(
        "argv",
        [("crw", "--n", "31", "--p1", "0.2"), ("qw", "--n", "60"), ("qrw2d", "--n", "12", "--q", "0.4", "0.3", "0.2", "0.1")],
    )
    def test_emitted_files_resum_to_one(self, tmp_path, capsys, argv):
        out = tmp_path / "d.csv"
        assert invoke(capsys, *argv, "-o", str(out))[0] == EXIT_OK
        rows = parse(out.read_text())[1:]
        assert math.fsum(float(r[-1]) for r in rows) == pytest.approx(1.0, abs=1e-10)


class TestSampleAndCompare:
    def test_sample_deterministic(self, capsys):
        argv = ("sample", "--model", "qrw1d", "--n", "20", "--eta", "0.1", "--samples", "5000", "--seed", "3")
        a = invoke(capsys, *argv)[1]
        b = invoke(capsys, *argv)[1]
        assert a == b

    def test_compare_model_mode(self, capsys):
        code, out, _ = invoke(
            capsys, "compare", "--model", "qrw1d", "--n", "100", "--eta", "0.1", "--samples", "200000", "--seed", "42"
        )
        assert code == EXIT_OK
        tv, p = map(float, parse(out)[1])
        assert tv < 0.02 and p > 0.001

    def test_compare_files(self, tmp_path, capsys):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        invoke(capsys, "crw", "--n", "10", "-o", str(a))
        invoke(capsys, "qrw1d", "--n", "10", "--eta", "0", "-o", str(b))
        code, out, _ = invoke(capsys, "compare", "--a", str(a), "--b", str(b), "--n", "10")
        assert code == EXIT_OK
        assert float(parse(out)[1][0]) <= 1e-12

    def test_compare_mismatched_n(self, tmp_path, capsys):
        a = tmp_path / "a.csv"
        invoke(capsys, "crw", "--n", "10", "-o", str(a))
        code, _, _ = invoke(capsys, "compare", "--a", str(a), "--b", str(a), "--n", "4")
        assert code == EXIT_INVALID


def test_reduced_matrix_table(capsys):
    code, out, _ = invoke(capsys, "coin-analytics", "--reduced", "1", "--n-max", "20")
    assert code == EXIT_OK
    rows = parse(out)[1:]
    assert len(rows) == 2 * 21
    for direct, integral in zip(rows[::2], rows[1::2]):
        assert (direct[1], integral[1]) == ("direct", "integral")
        assert max(abs(float(u) - float(v)) for u, v in zip(direct[2:], integral[2:])) <= 1e-8


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "coinwalk", "--version"], capture_output=True, text=True)
    assert res.returncode == 0 and "coinwalk" in res.stdout
