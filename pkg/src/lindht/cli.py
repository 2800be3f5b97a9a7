"""Command-line surface: dominance checks, plane scans, and exponent curves.

Every run that writes files also writes a sibling ``<out>.manifest.json``
with the full parameter echo, tool version, wall time, and sha256 digests of
the outputs, so results are reproducible byte for byte.

Exit codes: 0 ok, 2 usage/parse error, 3 solver failure, 4 budget exceeded.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import sys
import time

import numpy as np

from . import __version__, blackwell, exponents, scan
from .errors import (
    BudgetExceededError,
    DomainError,
    LindhtError,
    NoConvergenceError,
    SolverFailureError,
)
from .gf2 import Gf2Matrix

_BOOL_SPECS = {"and-or": ("and", "or"), "and-and": ("and", "and"),
               "or-or": ("or", "or"), "or-and": ("or", "and")}


def parse_statistic(spec: str):
    """Parse a statistic spec into (kind, payload).

    Forms: ``trunc:K`` (truncation to K coordinates), a binary matrix like
    ``101;011`` (the xor-syndrome statistic), ``pair:G,H`` (the two-sided
    statistic (G X^n, H Y^n)), or ``and-or`` / ``and-and`` (two-bit boolean
    pairs).
    """
    spec = spec.strip()
    if spec in _BOOL_SPECS:
        return "bool", _BOOL_SPECS[spec]
    if spec.startswith("trunc:"):
        k = int(spec.split(":", 1)[1])
        if k < 1:
            raise DomainError("truncation width must be positive")
        return "trunc", k
    if spec.startswith("pair:"):
        parts = spec.split(":", 1)[1].split(",")
        if len(parts) != 2:
            raise DomainError("pair spec needs two matrices separated by ','")
        return "pair", (Gf2Matrix.from_string(parts[0]), Gf2Matrix.from_string(parts[1]))
    return "matrix", Gf2Matrix.from_string(spec)


def statistic_dichotomy(kind: str, payload, p0: float, p1: float) -> blackwell.Dichotomy:
    if kind == "trunc":
        return blackwell.truncation_dichotomy(payload, p0, p1)
    if kind == "matrix":
        return blackwell.syndrome_dichotomy(payload, p0, p1)
    if kind == "pair":
        return blackwell.pair_dichotomy(payload[0], payload[1], p0, p1)
    if kind == "bool":
        return blackwell.bool_pair_dichotomy(p0, p1, *payload)
    raise DomainError(f"unknown statistic kind {kind!r}")


def _sha256(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def _emit(text: str, out_path: str | None, manifest: dict) -> None:
    data = text.encode()
    if out_path:
        with open(out_path, "wb") as fh:
            fh.write(data)
        manifest["outputs"] = {out_path: _sha256(data)}
        with open(out_path + ".manifest.json", "w") as fh:
            json.dump(manifest, fh, indent=2, sort_keys=True)
            fh.write("\n")
    else:
        sys.stdout.write(text)


def _manifest(command: str, params: dict, seed: int | None = None) -> dict:
    return {
        "command": command,
        "version": __version__,
        "params": params,
        "seed": seed,
        "wall_time_s": None,
        "outputs": {},
    }


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def cmd_check(args) -> int:
    start = time.perf_counter()
    ku, pu = parse_statistic(args.statistic_u)
    kv, pv = parse_statistic(args.statistic_v)
    du = statistic_dichotomy(ku, pu, args.p0, args.p1)
    dv = statistic_dichotomy(kv, pv, args.p0, args.p1)

    def direction(a, b):
        flag, info = blackwell.dominates(a, b, oracle=args.oracle, eps=args.eps)
        rec = {"dominates": bool(flag)}
        for key in ("roc_margin", "lp_gap", "oracle_agreement"):
            if key in info:
                rec[key] = info[key]
        if flag and args.oracle in ("lp", "both"):
            _, witness = blackwell.degradation_feasible(a, b, eps=args.eps)
            rec["witness"] = witness.entries.tolist() if witness else None
        return rec

    fwd = direction(du, dv)
    back = direction(dv, du)
    relation = {
        (True, True): "mutual",
        (True, False): "forward",
        (False, True): "backward",
        (False, False): "incomparable",
    }[(fwd["dominates"], back["dominates"])]

    params = {
        "statistic_u": args.statistic_u,
        "statistic_v": args.statistic_v,
        "p0": args.p0,
        "p1": args.p1,
        "oracle": args.oracle,
        "eps": args.eps,
    }
    manifest = _manifest("check", params)
    manifest["wall_time_s"] = time.perf_counter() - start
    report = {
        "command": "check",
        "version": __version__,
        "params": params,
        "forward": fwd,
        "backward": back,
        "relation": relation,
        "wall_time_s": manifest["wall_time_s"],
    }
    _emit(json.dumps(report, indent=2, sort_keys=True) + "\n", args.out, manifest)
    return 0


def cmd_scan(args) -> int:
    start = time.perf_counter()
    cfg = scan.ScanConfig(
        k=args.k,
        n=args.n,
        grid_step=args.step,
        eps=args.eps,
        oracle=args.oracle,
        dedupe=args.dedupe,
        include_endpoints=args.include_endpoints,
    )
    result = scan.scan_grid(cfg, workers=args.workers)
    text = _csv_text(
        ("p0", "p1", "dominates_all", "failing_code_A_bits"),
        scan.iter_csv_rows(result),
    )
    params = {
        "k": args.k,
        "n": args.n,
        "step": args.step,
        "eps": args.eps,
        "oracle": args.oracle,
        "dedupe": args.dedupe,
        "include_endpoints": args.include_endpoints,
        "workers": args.workers,
    }
    manifest = _manifest("scan", params)
    manifest["wall_time_s"] = time.perf_counter() - start
    manifest["metadata"] = {
        k: v for k, v in result.metadata.items() if k != "runtime_s"
    }
    _emit(text, args.out, manifest)
    return 0


def cmd_exponents(args) -> int:
    start = time.perf_counter()
    pairs = ("ux", "vy", "uv") if args.marginals == "vy" else ("ux", "uy", "uv")
    alphas = exponents.default_alphas(args.points, args.alpha_floor)
    sweep = exponents.sweep_bsc_curves(
        args.p0, args.p1, alphas=alphas, marginal_pairs=pairs,
        tol=args.ipf_tol, max_iter=args.max_iter,
    )
    header = ["alpha", "rate", "e_tr", "e_han", "e_com"]
    if args.with_fi:
        header.append("fi_exponent")
    by_alpha = {pt.alpha: pt for pt in sweep.points}
    failed = dict(sweep.failures)
    rows = []
    for alpha in alphas:
        alpha = float(alpha)
        if alpha in by_alpha:
            pt = by_alpha[alpha]
            row = [repr(pt.alpha), repr(pt.rate), repr(pt.e_tr),
                   repr(pt.e_han), repr(pt.e_com)]
        else:
            rate = 1.0 - exponents.h2(alpha)
            row = [repr(alpha), repr(rate),
                   repr(exponents.e_truncation(rate, args.p0, args.p1)),
                   "nan", "nan"]
        if args.with_fi:
            row.append(repr(exponents.fi_curve(args.p0, alpha)[1]))
        rows.append(row)
    text = _csv_text(header, rows)
    params = {
        "p0": args.p0, "p1": args.p1, "points": args.points,
        "alpha_floor": args.alpha_floor, "marginals": args.marginals,
        "ipf_tol": args.ipf_tol, "max_iter": args.max_iter,
        "with_fi": args.with_fi,
    }
    manifest = _manifest("exponents", params)
    manifest["wall_time_s"] = time.perf_counter() - start
    if failed:
        manifest["nonconverged_alphas"] = sorted(failed)
    _emit(text, args.out, manifest)
    if failed:
        print(
            f"warning: IPF did not converge at {len(failed)} sweep point(s)",
            file=sys.stderr,
        )
        return 3
    return 0


def cmd_fi_curve(args) -> int:
    start = time.perf_counter()
    alphas = np.linspace(args.alpha_floor, 0.5 - args.alpha_floor, args.points)
    rows = []
    for alpha in alphas:
        rate, expo = exponents.fi_curve(args.p, float(alpha))
        rows.append((repr(float(alpha)), repr(rate), repr(expo)))
    text = _csv_text(("alpha", "rate", "fi_exponent"), rows)
    params = {"p": args.p, "points": args.points, "alpha_floor": args.alpha_floor}
    manifest = _manifest("fi-curve", params)
    manifest["wall_time_s"] = time.perf_counter() - start
    _emit(text, args.out, manifest)
    return 0


def cmd_search_channels(args) -> int:
    start = time.perf_counter()
    res = exponents.random_test_channels_search(
        args.p0, args.p1, args.rate, args.trials,
        seed=args.seed, concentration=args.concentration,
    )
    params = {
        "p0": args.p0, "p1": args.p1, "rate": args.rate,
        "trials": args.trials, "concentration": args.concentration,
    }
    manifest = _manifest("search-channels", params, seed=args.seed)
    manifest["wall_time_s"] = time.perf_counter() - start
    report = {
        "command": "search-channels",
        "version": __version__,
        "params": params,
        "seed": args.seed,
        "best_exponent": res.best_exponent,
        "best_channels": [c.tolist() for c in res.best_channels]
        if res.best_channels
        else None,
        "bsc_alpha": res.bsc_alpha,
        "bsc_exponent": res.bsc_exponent,
        "beaten": res.beaten,
        "wall_time_s": manifest["wall_time_s"],
    }
    _emit(json.dumps(report, indent=2, sort_keys=True) + "\n", args.out, manifest)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lindht",
        description="Blackwell comparisons and Stein exponents for binary "
        "distributed hypothesis testing under linear compression.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="compare two statistics at one (p0, p1)")
    p.add_argument("statistic_u", help="e.g. 'trunc:1', '11', 'pair:101;011,110', 'and-or'")
    p.add_argument("statistic_v")
    p.add_argument("--p0", type=float, required=True)
    p.add_argument("--p1", type=float, required=True)
    p.add_argument("--oracle", choices=("roc", "lp", "both"), default="both")
    p.add_argument("--eps", type=float, default=1e-9)
    p.add_argument("--out")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("scan", help="scan the (p0, p1) grid for a (k, n)")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--step", type=float, default=0.01)
    p.add_argument("--eps", type=float, default=1e-9)
    p.add_argument("--oracle", choices=("roc", "lp", "both"), default="roc")
    p.add_argument("--dedupe", action="store_true")
    p.add_argument("--include-endpoints", action="store_true")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("exponents", help="exponent-rate curves for one (p0, p1)")
    p.add_argument("--p0", type=float, required=True)
    p.add_argument("--p1", type=float, required=True)
    p.add_argument("--points", type=int, default=400)
    p.add_argument("--alpha-floor", type=float, default=1e-4)
    p.add_argument("--marginals", choices=("vy", "uy"), default="vy",
                   help="third/first-agent pair marginal set used by the projection")
    p.add_argument("--ipf-tol", type=float, default=1e-10)
    p.add_argument("--max-iter", type=int, default=100000)
    p.add_argument("--with-fi", action="store_true",
                   help="append the one-sided bottleneck exponent at p0")
    p.add_argument("--out")
    p.set_defaults(func=cmd_exponents)

    p = sub.add_parser("fi-curve", help="one-sided-constraint exponent curve")
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--points", type=int, default=200)
    p.add_argument("--alpha-floor", type=float, default=1e-4)
    p.add_argument("--out")
    p.set_defaults(func=cmd_fi_curve)

    p = sub.add_parser("search-channels", help="random search over test channels")
    p.add_argument("--p0", type=float, required=True)
    p.add_argument("--p1", type=float, required=True)
    p.add_argument("--rate", type=float, required=True)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--concentration", type=float, default=1.0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_search_channels)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except BudgetExceededError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except (SolverFailureError, NoConvergenceError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (LindhtError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
