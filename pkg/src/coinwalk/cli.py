"""
Command-line front end.

Every command writes one table (CSV by default, JSON on request) to
``--output`` or stdout. Exit codes: 0 success, 2 invalid parameters or coin
state, 3 quadrature failed to converge, 64 usage error.

Examples::

    coinwalk qrw1d --n 100 --p1 0.5 --eta 0.1 --format csv
    coinwalk qrw2d --n 40 --q 0.25 0.25 0.25 0.25 --eta-entry 12 -0.25 --eta-entry 34 0.25
    coinwalk covariance --n-max 100 --method both
    coinwalk feasibility --zeta -0.5 0 0
    coinwalk sample --model qrw1d --n 100 --eta 0.1 --samples 1000000 --seed 42
    coinwalk figure fig4h --output fig4h.csv
"""

from __future__ import annotations

import argparse
import logging
import sys
from typing import Any, Sequence

from . import __version__
from .crw import CrwParams, crw_distribution, crw_moments
from .figures import FIGURES, emit_figure_data
from .io import (
    coin_to_json,
    dump_coin_json,
    load_coin_json,
    read_csv_table,
    render_csv,
    render_json,
    write_atomic,
)
from .oracle import compare_distributions, sample_walk
from .qrw import (
    feasibility_region_check,
    flip_coin2,
    grover_probabilities,
    grover_probabilities_from_zeta,
    qrw1d_distribution,
    qrw1d_moments,
    qrw2d_distribution,
    qrw2d_moments,
)
from .qw import (
    coin_reduced_direct,
    coin_reduced_integral,
    covariance_series,
    qw_distribution,
)
from .walktypes import (
    CoinState2,
    CoinState4,
    CoinValidationError,
    ConvergenceError,
    Distribution1D,
    Distribution2D,
    EffectiveCoherence,
    effective_coherence,
    ensure_valid,
    su2,
)

__all__ = ["run", "main", "build_parser"]

log = logging.getLogger("coinwalk")

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_CONVERGENCE = 3
EXIT_USAGE = 64

COMMANDS = (
    "crw",
    "qrw1d",
    "qrw2d",
    "qw",
    "covariance",
    "coin-analytics",
    "sample",
    "compare",
    "feasibility",
    "figure",
)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse reports usage problems with exit 2; route them to 64 instead."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _complex(text: str) -> complex:
    t = text.strip().replace(" ", "").replace("i", "j")
    try:
        return complex(t)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None


def _add_output(p: argparse.ArgumentParser) -> None:
    p.add_argument("-o", "--output", help="output file (default: stdout)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")


def _add_coin2(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("two-level coin (inline flags override --coin)")
    g.add_argument("--coin", help="coin-state JSON file")
    g.add_argument("--p1", type=float, help="population of |+1>; |-1> gets 1 - p1")
    g.add_argument("--eta", type=_complex, help="coherence, e.g. 0.1 or 0.1+0.05j")
    g.add_argument("--dump-coin", metavar="PATH", help="also write the resolved coin as JSON")


def _add_coin4(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("four-level coin (inline flags override --coin)")
    g.add_argument("--coin", help="coin-state JSON file")
    g.add_argument("--q", type=float, nargs=4, metavar="Q", help="diagonal q1..q4")
    g.add_argument(
        "--eta-entry",
        nargs=2,
        action="append",
        metavar=("IJ", "VALUE"),
        help="coherence entry, e.g. --eta-entry 12 -0.25 (repeatable)",
    )
    g.add_argument("--dump-coin", metavar="PATH", help="also write the resolved coin as JSON")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="coinwalk", description="Exact distributions for coin-driven walks.")
    parser.add_argument("--version", action="version", version=f"coinwalk {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("crw", help="classical random walk distribution")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p1", type=float, default=0.5)
    _add_output(p)

    p = sub.add_parser("qrw1d", help="1D quantum random walk distribution")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--su2", type=_complex, nargs=2, metavar=("A", "B"), help="flip with [[a, b], [-b*, a*]] instead of Hadamard")
    _add_coin2(p)
    _add_output(p)

    p = sub.add_parser("qrw2d", help="2D quantum random walk (Grover coin) distribution")
    p.add_argument("--n", type=int, required=True)
    _add_coin4(p)
    _add_output(p)

    p = sub.add_parser("qw", help="single-coin Hadamard quantum walk distribution")
    p.add_argument("--n", type=int, required=True)
    _add_coin2(p)
    _add_output(p)

    p = sub.add_parser("covariance", help="sigma_z step covariance of the quantum walk")
    p.add_argument("--n-max", type=int, required=True)
    p.add_argument("--p1", type=float, default=0.5, help="initial population of |+1>")
    p.add_argument("--method", choices=("direct", "integral", "both"), default="both")
    _add_output(p)

    p = sub.add_parser("coin-analytics", help="flipped-coin quantities and moments for a coin state")
    p.add_argument("--n", type=int, default=1, help="steps used for the moments")
    p.add_argument(
        "--reduced",
        type=int,
        choices=(1, -1),
        help="instead: reduced coin matrix of the quantum walk started in this basis state",
    )
    p.add_argument("--n-max", type=int, default=10, help="last step for --reduced")
    g = p.add_argument_group("coin (dimension taken from --coin, or 4 if --q is given)")
    g.add_argument("--coin", help="coin-state JSON file")
    g.add_argument("--p1", type=float)
    g.add_argument("--eta", type=_complex)
    g.add_argument("--q", type=float, nargs=4, metavar="Q")
    g.add_argument("--eta-entry", nargs=2, action="append", metavar=("IJ", "VALUE"))
    g.add_argument("--dump-coin", metavar="PATH")
    _add_output(p)

    p = sub.add_parser("sample", help="Monte Carlo endpoint histogram")
    _add_sampling(p)
    _add_output(p)

    p = sub.add_parser("compare", help="total variation / chi-square between distributions")
    p.add_argument("--a", help="reference distribution CSV (x,p or x,y,p)")
    p.add_argument("--b", help="second distribution CSV")
    p.add_argument("--n-samples", type=int, help="sample size behind --b, enables chi-square")
    _add_sampling(p, required=False)
    _add_output(p)

    p = sub.add_parser("feasibility", help="check an effective coherence against the tetrahedron")
    p.add_argument("--zeta", type=float, nargs=3, required=True, metavar=("Z1", "Z2", "Z3"))
    _add_output(p)

    p = sub.add_parser("figure", help="write the data behind one of the standard figures")
    p.add_argument("figure", choices=sorted(FIGURES))
    _add_output(p)

    return parser


def _add_sampling(p: argparse.ArgumentParser, required: bool = True) -> None:
    p.add_argument("--model", choices=("crw", "qrw1d", "qrw2d"), required=required)
    p.add_argument("--n", type=int, required=required)
    p.add_argument("--samples", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--chunks", type=int, default=8)
    g = p.add_argument_group("model parameters (inline flags override --coin)")
    g.add_argument("--coin", help="coin-state JSON file")
    g.add_argument("--p1", type=float)
    g.add_argument("--eta", type=_complex)
    g.add_argument("--q", type=float, nargs=4, metavar="Q")
    g.add_argument("--eta-entry", nargs=2, action="append", metavar=("IJ", "VALUE"))
    g.add_argument("--dump-coin", metavar="PATH")


def _warn_override(field: str, old: Any, new: Any) -> None:
    if old != new:
        log.warning("inline --%s=%s overrides %s from coin file", field, new, old)


def _resolve_coin2(args) -> CoinState2:
    base = None
    if getattr(args, "coin", None):
        base = load_coin_json(args.coin)
        if not isinstance(base, CoinState2):
            raise CoinValidationError("coin dimension = 2", 4.0, f"{args.coin} holds a 4-level coin")
    p1 = base.p1 if base else 0.5
    pm1 = base.pm1 if base else 0.5
    eta = base.eta if base else 0j
    if args.p1 is not None:
        if base:
            _warn_override("p1", base.p1, args.p1)
        p1, pm1 = args.p1, 1.0 - args.p1
    if args.eta is not None:
        if base:
            _warn_override("eta", base.eta, args.eta)
        eta = args.eta
    state = CoinState2(p1, pm1, eta)
    ensure_valid(state)
    if getattr(args, "dump_coin", None):
        dump_coin_json(state, args.dump_coin)
    return state


def _resolve_coin4(args) -> CoinState4:
    base = None
    if getattr(args, "coin", None):
        base = load_coin_json(args.coin)
        if not isinstance(base, CoinState4):
            raise CoinValidationError("coin dimension = 4", 2.0, f"{args.coin} holds a 2-level coin")
    q = list(base.q) if base else [0.25] * 4
    pairs = base.pairs() if base else {}
    if args.q is not None:
        if base:
            _warn_override("q", list(base.q), args.q)
        q = list(args.q)
    for key, value in args.eta_entry or []:
        val = _complex(value)
        if base:
            _warn_override(f"eta-entry {key}", pairs.get(key, 0j), val)
        pairs[key] = val
    state = CoinState4.from_pairs(q, pairs)
    ensure_valid(state)
    if getattr(args, "dump_coin", None):
        dump_coin_json(state, args.dump_coin)
    return state


def _wants_coin4(args) -> bool:
    if getattr(args, "q", None) is not None or getattr(args, "eta_entry", None):
        return True
    if getattr(args, "coin", None):
        import json

        with open(args.coin, encoding="utf-8") as fh:
            try:
                return json.load(fh).get("dim") == 4
            except (json.JSONDecodeError, AttributeError) as exc:
                raise ValueError(f"{args.coin}: not a coin JSON object ({exc})") from exc
    return False


def _dist_table(dist: Distribution1D | Distribution2D):
    if isinstance(dist, Distribution1D):
        x, p = dist.even_sites()
        return ["x", "p"], [[int(a), float(b)] for a, b in zip(x, p)]
    xs, ys, ps = dist.nonzero()
    return ["x", "y", "p"], [[int(a), int(b), float(c)] for a, b, c in zip(xs, ys, ps)]


def _emit(args, header, rows, meta: dict | None = None) -> None:
    if args.format == "csv":
        text = render_csv(header, rows)
    else:
        text = render_json({"command": args.command, **(meta or {}), "columns": header, "rows": rows})
    if args.output:
        write_atomic(args.output, text)
    else:
        sys.stdout.write(text)


def _cmd_crw(args) -> None:
    params = CrwParams(args.p1, 1.0 - args.p1, args.n)
    mean, var = crw_moments(params)
    header, rows = _dist_table(crw_distribution(params))
    _emit(args, header, rows, {"n": args.n, "p1": args.p1, "mean": mean, "variance": var})


def _cmd_qrw1d(args) -> None:
    state = _resolve_coin2(args)
    coin = su2(*args.su2) if args.su2 else None
    dist = qrw1d_distribution(state, coin, args.n)
    header, rows = _dist_table(dist)
    meta: dict[str, Any] = {"n": args.n, "coin": coin_to_json(state), "mean": dist.mean(), "variance": dist.variance()}
    _emit(args, header, rows, meta)


def _cmd_qrw2d(args) -> None:
    state = _resolve_coin4(args)
    dist = qrw2d_distribution(state, args.n)
    header, rows = _dist_table(dist)
    mom = qrw2d_moments(state, args.n)
    meta = {"n": args.n, "coin": coin_to_json(state), "mean": list(mom.mean), "var_x": mom.var_x, "var_y": mom.var_y, "var_total": mom.var_total}
    _emit(args, header, rows, meta)


def _cmd_qw(args) -> None:
    state = _resolve_coin2(args)
    dist = qw_distribution(state, args.n)
    header, rows = _dist_table(dist)
    _emit(args, header, rows, {"n": args.n, "coin": coin_to_json(state), "variance": dist.variance()})


def _cmd_covariance(args) -> None:
    coin = CoinState2(args.p1, 1.0 - args.p1)
    ensure_valid(coin)
    methods = ("direct", "integral") if args.method == "both" else (args.method,)
    series = covariance_series(coin, args.n_max, methods)
    _emit(args, ["n", "cov_direct", "cov_integral"], [list(r) for r in series.paired()], {"p1": args.p1})


def _cmd_coin_analytics(args) -> None:
    if args.reduced is not None:
        header = ["n", "method", "rho11_re", "rho11_im", "rho1m1_re", "rho1m1_im", "rhom11_re", "rhom11_im", "rhom1m1_re", "rhom1m1_im"]
        rows = []
        for n in range(args.n_max + 1):
            for m in (coin_reduced_direct(args.reduced, n), coin_reduced_integral(args.reduced, n)):
                vals = [m.rho11, m.rho1m1, m.rhom11, m.rhom1m1]
                rows.append([n, m.method] + [c for v in vals for c in (v.real, v.imag)])
        _emit(args, header, rows, {"basis": args.reduced})
        return
    if _wants_coin4(args):
        state4 = _resolve_coin4(args)
        z = effective_coherence(state4)
        probs = grover_probabilities(state4)
        mom = qrw2d_moments(state4, args.n)
        out = {
            "zeta1": z.zeta1,
            "zeta2": z.zeta2,
            "zeta3": z.zeta3,
            "rho_RR": probs.rhoRR,
            "rho_LL": probs.rhoLL,
            "rho_UU": probs.rhoUU,
            "rho_DD": probs.rhoDD,
            "feasible": feasibility_region_check(z),
            "n": args.n,
            "mean_x": mom.mean[0],
            "mean_y": mom.mean[1],
            "var_x": mom.var_x,
            "var_y": mom.var_y,
            "var_total": mom.var_total,
        }
    else:
        state2 = _resolve_coin2(args)
        f = flip_coin2(state2)
        mean, var = qrw1d_moments(state2, args.n)
        out = {
            "rho11": f.rho11,
            "rho_m1m1": f.rho_m1m1,
            "rho1m1_re": f.rho1m1.real,
            "rho1m1_im": f.rho1m1.imag,
            "n": args.n,
            "mean": mean,
            "variance": var,
        }
    if args.format == "json":
        text = render_json(out)
        if args.output:
            write_atomic(args.output, text)
        else:
            sys.stdout.write(text)
    else:
        _emit(args, ["quantity", "value"], [[k, v] for k, v in out.items()])


def _model_params(args):
    if args.model == "crw":
        p1 = 0.5 if args.p1 is None else args.p1
        return CrwParams(p1, 1.0 - p1, args.n)
    if args.model == "qrw1d":
        return _resolve_coin2(args)
    return _resolve_coin4(args)


def _analytic(model: str, params, n: int):
    if model == "crw":
        return crw_distribution(params)
    if model == "qrw1d":
        return qrw1d_distribution(params, n=n)
    return qrw2d_distribution(params, n)


def _cmd_sample(args) -> None:
    params = _model_params(args)
    report = sample_walk(args.model, params, args.n, args.samples, args.seed, args.chunks)
    header, rows = _dist_table(report.empirical)
    meta = {"model": args.model, "n": args.n, "n_samples": report.n_samples, "seed": report.seed, "chunk_count": report.chunk_count}
    _emit(args, header, rows, meta)


def _read_dist(path: str, n: int) -> Distribution1D | Distribution2D:
    import numpy as np

    header, rows = read_csv_table(path)
    side = 2 * n + 1

    def site(v: str) -> int:
        x = int(v)
        if abs(x) > n:
            raise ValueError(f"{path}: site {x} lies outside [-{n}, {n}]; step counts differ")
        return x + n

    if header == ["x", "p"]:
        probs = np.zeros(side)
        for x, p in rows:
            probs[site(x)] = float(p)
        return Distribution1D(n, probs)
    if header == ["x", "y", "p"]:
        grid = np.zeros((side, side))
        for x, y, p in rows:
            grid[site(x), site(y)] = float(p)
        return Distribution2D(n, grid)
    raise ValueError(f"{path}: unrecognised header {header}")


def _cmd_compare(args) -> None:
    if args.a or args.b:
        if not (args.a and args.b and args.n is not None):
            raise UsageError("compare: --a, --b and --n must be given together")
        a = _read_dist(args.a, args.n)
        b = _read_dist(args.b, args.n)
        res = compare_distributions(a, b, args.n_samples)
        meta = {"a": args.a, "b": args.b}
    else:
        if args.model is None or args.n is None:
            raise UsageError("compare: give --a/--b files or --model and --n")
        params = _model_params(args)
        a = _analytic(args.model, params, args.n)
        report = sample_walk(args.model, params, args.n, args.samples, args.seed, args.chunks)
        res = compare_distributions(a, report.empirical, report.n_samples)
        meta = {"model": args.model, "n": args.n, "n_samples": args.samples, "seed": args.seed}
    _emit(args, ["total_variation", "chi_square_p"], [[res.total_variation, res.chi_square_p]], meta)


def _cmd_feasibility(args) -> None:
    z = EffectiveCoherence(*args.zeta)
    probs = grover_probabilities_from_zeta(z)
    ok = feasibility_region_check(z)
    if ok:
        probs = type(probs)(*(max(p, 0.0) for p in probs))
    header = ["zeta1", "zeta2", "zeta3", "rho_RR", "rho_LL", "rho_UU", "rho_DD", "status"]
    row = [*args.zeta, *probs, "feasible" if ok else "infeasible"]
    _emit(args, header, [row])


def _cmd_figure(args) -> None:
    text = emit_figure_data(args.figure, args.output, args.format)
    if not args.output:
        sys.stdout.write(text)


_HANDLERS = {
    "crw": _cmd_crw,
    "qrw1d": _cmd_qrw1d,
    "qrw2d": _cmd_qrw2d,
    "qw": _cmd_qw,
    "covariance": _cmd_covariance,
    "coin-analytics": _cmd_coin_analytics,
    "sample": _cmd_sample,
    "compare": _cmd_compare,
    "feasibility": _cmd_feasibility,
    "figure": _cmd_figure,
}


def run(argv: Sequence[str] | None = None) -> int:
    """Parse ``argv``, run one command, and return the process exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s", stream=sys.stderr)
    try:
        _HANDLERS[args.command](args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except ConvergenceError as exc:
        print(f"convergence error: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    except (CoinValidationError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
