"""Coin-state JSON, CSV/JSON tables and atomic file output."""

from __future__ import annotations

import csv
import io
import json
import os
import tempfile
from pathlib import Path
from typing import Any, Iterable, Sequence

import numpy as np

from .walktypes import CoinState2, CoinState4, ETA_PAIRS, ensure_valid

__all__ = [
    "fmt_float",
    "coin_to_json",
    "coin_from_json",
    "load_coin_json",
    "dump_coin_json",
    "render_csv",
    "render_json",
    "write_atomic",
    "read_csv_table",
]


def fmt_float(v: float) -> str:
    """Round-trip-safe decimal with 17 significant digits."""
    return format(float(v), ".17g")


def _cell(v: Any) -> str:
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return fmt_float(v)
    return str(v)


def coin_to_json(state: CoinState2 | CoinState4) -> dict:
    if isinstance(state, CoinState2):
        return {"dim": 2, "p": [state.p1, state.pm1], "eta": [state.eta.real, state.eta.imag]}
    return {
        "dim": 4,
        "q": list(state.q),
        "eta": {f"{i}{j}": [v.real, v.imag] for (i, j), v in zip(ETA_PAIRS, state.eta) if v != 0},
    }


def _complex_pair(v, where: str) -> complex:
    if isinstance(v, (int, float)):
        return complex(v)
    if isinstance(v, (list, tuple)) and len(v) == 2:
        return complex(float(v[0]), float(v[1]))
    raise ValueError(f"{where}: expected [re, im], got {v!r}")


def coin_from_json(obj: dict, *, validate: bool = True) -> CoinState2 | CoinState4:
    """Build a coin state from the ``{"dim": ..}`` schema; absent coherences are zero."""
    if not isinstance(obj, dict) or "dim" not in obj:
        raise ValueError("coin JSON must be an object with a 'dim' key")
    dim = obj["dim"]
    if dim == 2:
        p = obj.get("p")
        if not isinstance(p, (list, tuple)) or len(p) != 2:
            raise ValueError("dim 2 coin needs 'p': [p1, pm1]")
        eta = _complex_pair(obj.get("eta", [0.0, 0.0]), "eta")
        state: CoinState2 | CoinState4 = CoinState2(float(p[0]), float(p[1]), eta)
    elif dim == 4:
        q = obj.get("q")
        if not isinstance(q, (list, tuple)) or len(q) != 4:
            raise ValueError("dim 4 coin needs 'q': [q1, q2, q3, q4]")
        raw = obj.get("eta", {}) or {}
        if not isinstance(raw, dict):
            raise ValueError("dim 4 coin 'eta' must be an object keyed by '12', '13', ...")
        pairs = {k: _complex_pair(v, f"eta[{k}]") for k, v in raw.items()}
        state = CoinState4.from_pairs([float(x) for x in q], pairs)
    else:
        raise ValueError(f"unsupported coin dimension {dim!r} (expected 2 or 4)")
    if validate:
        ensure_valid(state)
    return state


def load_coin_json(path: str | os.PathLike) -> CoinState2 | CoinState4:
    with open(path, encoding="utf-8") as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValueError(f"{path}: not valid JSON ({exc})") from exc
    return coin_from_json(obj)


def dump_coin_json(state: CoinState2 | CoinState4, path: str | os.PathLike) -> None:
    write_atomic(path, json.dumps(coin_to_json(state), indent=2) + "\n")


def render_csv(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_cell(v) for v in row])
    return buf.getvalue()


class _Encoder(json.JSONEncoder):
    def default(self, o):
        if isinstance(o, np.integer):
            return int(o)
        if isinstance(o, np.floating):
            return float(o)
        if isinstance(o, np.ndarray):
            return o.tolist()
        if isinstance(o, complex):
            return [o.real, o.imag]
        return super().default(o)


def render_json(obj: Any) -> str:
    # python floats serialise with repr, which is already shortest round-trip
    return json.dumps(obj, cls=_Encoder, indent=2) + "\n"


def write_atomic(path: str | os.PathLike, text: str) -> None:
    """Write via a temporary file in the target directory, then rename."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def read_csv_table(path: str | os.PathLike) -> tuple[list[str], list[list[str]]]:
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise ValueError(f"{path}: empty CSV")
    return rows[0], rows[1:]
