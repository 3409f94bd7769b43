"""Batch front-end: error tables, bound checks, sweeps, and dumps.

Exit status: 0 on success, 2 on invalid configuration, 3 when a check
run with --assert fails.  Outputs are UTF-8 with LF line endings; floats
are printed with 12 significant digits.  Identical configuration (and
seed, where one applies) produces byte-identical files regardless of the
parallelism setting: work items are pure and results are merged in grid
order.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import _kernels
from .bounds import (
    central_binomial_floor_check,
    central_binomial_floor_grid,
    const_alg_error_exact,
    floor_sweep,
    nayakwu_degree_bound,
    ratio_band,
)
from .combinat import WeightClass
from .errors import (
    avg_expected_error,
    avg_prob_error,
    count_scaled,
    expected_error,
    quantile_error,
    worst_expected_error,
    worst_prob_error,
)
from .estimators import EstimatorSpec, PartialFnSpec
from .measures import dump_measure_text, load_measure, uniform_inputs, uniform_means
from .polymethod import acceptance_poly_of_distinguisher, min_degree_lp

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_CHECK_FAILED = 3


def _default_workers() -> int:
    try:
        return max(1, int(os.environ.get("QMEAN_PARALLELISM", "1")))
    except ValueError:
        return 1


def _parallel_map(fn, items, workers):
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(fn, items))


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        return f"{x:.12g}"
    return str(x)


def _round12(x):
    if isinstance(x, float):
        return float(f"{x:.12g}")
    if isinstance(x, dict):
        return {k: _round12(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_round12(v) for v in x]
    return x


def _emit(text: str, path) -> None:
    if path:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _csv_text(header, rows) -> str:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    return "\n".join(lines) + "\n"


def _json_text(obj) -> str:
    return json.dumps(_round12(obj), indent=2, ensure_ascii=False) + "\n"


def _int_grid(text: str, flag: str):
    try:
        vals = [int(v) for v in text.split(",") if v.strip() != ""]
    except ValueError:
        raise SystemExit2(f"{flag}: expected a comma-separated integer list, got {text!r}")
    if not vals:
        raise SystemExit2(f"{flag}: grid must be nonempty")
    return vals


class SystemExit2(Exception):
    """Invalid configuration; message names the offending flag."""


def _make_estimator(name: str, r: int) -> EstimatorSpec:
    if name == "median-reps":
        return EstimatorSpec("median-reps", reps=r)
    return EstimatorSpec(name)


def _make_measure(args, n: int):
    if getattr(args, "measure_file", None):
        return load_measure(args.measure_file)
    name = getattr(args, "measure", None)
    if name == "uniform-inputs":
        return uniform_inputs(n)
    if name == "uniform-means":
        return uniform_means(n)
    if name is None:
        return None
    raise SystemExit2(f"--measure: unknown measure {name!r}")


def _budget_grid(args):
    if args.M and args.T:
        raise SystemExit2("--M/--T: give the query-budget grid through one flag only")
    grid = args.M or args.T
    if not grid:
        raise SystemExit2("--M: a query-budget grid is required")
    return _int_grid(grid, "--M")


# --- subcommand implementations -----------------------------------------

def _require_level(args) -> None:
    if args.criterion.endswith("-prob") and args.p is None:
        raise SystemExit2(f"--p: required for criterion {args.criterion}")
    if args.criterion.endswith("-expected") and args.q is None:
        raise SystemExit2(f"--q: required for criterion {args.criterion}")


def _cmd_error_table(args) -> int:
    _require_level(args)
    est = _make_estimator(args.estimator, args.r)
    budgets = _budget_grid(args)
    n = args.n
    mu = _make_measure(args, n)

    def one(budget):
        if args.criterion == "worst-prob":
            rep = worst_prob_error(est, n, budget, args.p)
        elif args.criterion == "avg-prob":
            if mu is None:
                raise SystemExit2("--measure: required for avg-prob")
            rep = avg_prob_error(est, n, budget, args.p, mu)
        elif args.criterion == "worst-expected":
            rep = worst_expected_error(est, n, budget, args.q)
        else:
            if mu is None:
                raise SystemExit2("--measure: required for avg-expected")
            rep = avg_expected_error(est, n, budget, args.q, mu)
        if args.count_scaled:
            rep = count_scaled(rep)
        return rep

    reports = _parallel_map(one, budgets, args.parallelism)
    if args.format == "csv":
        rows = [
            (r.criterion, r.n, r.T, r.p, r.q, r.measure, r.value) for r in reports
        ]
        _emit(_csv_text(("criterion", "n", "T", "p", "q", "measure", "value"), rows), args.output)
    else:
        _emit(_json_text({"reports": [r.to_json_dict() for r in reports]}), args.output)
    return EXIT_OK


def _cmd_check_lemma61(args) -> int:
    checks = []
    failures = 0
    worst = math.inf

    def one(n):
        out = []
        for c in central_binomial_floor_grid(n):
            out.append(central_binomial_floor_check(n, c))
        return out

    for block in _parallel_map(one, range(args.n_min, args.n_max + 1), args.parallelism):
        for chk in block:
            if not chk.holds:
                failures += 1
            worst = min(worst, chk.margin)
            if args.full or not chk.holds:
                checks.append(chk)
    total = sum(len(central_binomial_floor_grid(n)) for n in range(args.n_min, args.n_max + 1))
    payload = {
        "checks": [c.to_json_dict() for c in checks],
        "summary": {"total": total, "failures": failures, "worst_margin": worst},
    }
    _emit(_json_text(payload), args.output)
    if args.assert_ and failures:
        return EXIT_CHECK_FAILED
    return EXIT_OK


def _cmd_check_const_alg(args) -> int:
    res = const_alg_error_exact(args.n)
    holds = 0.95 <= res["ratio"] <= 1.05
    payload = {
        "checks": [
            {
                "name": "const-alg-ratio",
                "params": {"n": args.n},
                "lhs": res["ratio"],
                "rhs": 1.0,
                "holds": holds,
                "margin": res["ratio"] - 1.0,
            }
        ],
        "summary": {"total": 1, "failures": 0 if holds else 1, "value": res["value"]},
    }
    _emit(_json_text(payload), args.output)
    if args.assert_ and not holds:
        return EXIT_CHECK_FAILED
    return EXIT_OK


def _parse_estimators(text: str):
    out = []
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        if ":" in item:
            name, r = item.split(":", 1)
            out.append(_make_estimator(name, int(r)))
        else:
            out.append(_make_estimator(item, 1))
    if not out:
        raise SystemExit2("--estimators: list must be nonempty")
    return out


def _cmd_check_floors(args) -> int:
    _require_level(args)
    estimators = _parse_estimators(args.estimators)
    budgets = _int_grid(args.grid, "--grid")
    if args.criterion in ("avg-prob", "avg-expected") and not (args.measure or args.measure_file):
        raise SystemExit2(f"--measure: required for criterion {args.criterion}")

    mu_factory = None
    if args.measure or args.measure_file:
        mu_factory = lambda n: _make_measure(args, n)

    def one(est):
        return floor_sweep(
            est,
            args.criterion,
            [args.n],
            budgets,
            p=args.p,
            q=args.q,
            mu_factory=mu_factory,
            floor=args.floor,
        )

    rows = [r for block in _parallel_map(one, estimators, args.parallelism) for r in block]
    band = ratio_band(rows)
    if args.format == "csv":
        table = [
            (r.name, r.n, r.T, r.p, r.q, r.measure, r.value, r.floor, r.ratio)
            for r in rows
        ]
        _emit(
            _csv_text(("name", "n", "T", "p", "q", "measure", "value", "floor", "ratio"), table),
            args.output,
        )
    else:
        _emit(_json_text({"rows": [r.__dict__ for r in rows], "band": band}), args.output)
    if args.assert_ and band["min"] < args.min_ratio:
        return EXIT_CHECK_FAILED
    return EXIT_OK


def _markov_pool(rng, samples):
    """Deterministic pool of (estimator, n, k, budget) draws."""
    kinds = ("ae", "median-reps", "bernoulli", "constant")
    out = []
    for _ in range(samples):
        kind = kinds[rng.integers(0, len(kinds))]
        n = int(rng.integers(4, 33))
        k = int(rng.integers(0, n + 1))
        budget = int(2 ** rng.integers(1, 7))
        r = int(rng.integers(1, 4) * 2) if kind == "median-reps" else 1
        out.append((_make_estimator(kind, r), n, k, budget))
    return out


def _cmd_check_markov(args) -> int:
    rng = np.random.default_rng(args.seed)
    pool = _markov_pool(rng, args.samples)
    checks = []
    failures = 0
    for est, n, k, budget in pool:
        d = est.distribution(WeightClass(n, k), budget)
        a_true = d.true_mean
        for a in (2.5, 3.0, 4.0):
            for q in (1.0, 2.0):
                lhs = quantile_error(d, a_true, 1.0 - a ** (-q))
                rhs = a * expected_error(d, a_true, q)
                holds = lhs <= rhs
                if not holds:
                    failures += 1
                if args.full or not holds:
                    checks.append(
                        {
                            "name": "markov-bridge",
                            "params": {
                                "estimator": est.tag,
                                "n": n,
                                "k": k,
                                "budget": budget,
                                "a": a,
                                "q": q,
                            },
                            "lhs": lhs,
                            "rhs": rhs,
                            "holds": holds,
                            "margin": rhs - lhs,
                        }
                    )
    payload = {
        "checks": checks,
        "summary": {"total": 6 * len(pool), "failures": failures},
    }
    _emit(_json_text(payload), args.output)
    if args.assert_ and failures:
        return EXIT_CHECK_FAILED
    return EXIT_OK


def _cmd_check_degree_law(args) -> int:
    checks = []
    failures = 0
    total = 0
    for n in range(2, args.n_max + 1):
        for M in range(2, args.m_max + 1):
            for k1 in range(1, n + 1):
                for k2 in range(0, k1):
                    spec = PartialFnSpec(n, k1, k2)
                    for threshold in {1.0, max(1.0, (k1 - k2) / 2.0)}:
                        for kind in ("ae", "bernoulli"):
                            est = EstimatorSpec(kind)
                            vals = acceptance_poly_of_distinguisher(est, spec, M, threshold)
                            deg = vals.min_degree(args.tol)
                            holds = deg <= 2 * M
                            total += 1
                            if not holds:
                                failures += 1
                            if args.full or not holds:
                                checks.append(
                                    {
                                        "name": "degree-2T",
                                        "params": {
                                            "estimator": kind,
                                            "n": n,
                                            "M": M,
                                            "k1": k1,
                                            "k2": k2,
                                            "threshold": threshold,
                                        },
                                        "lhs": deg,
                                        "rhs": 2 * M,
                                        "holds": holds,
                                        "margin": 2 * M - deg,
                                    }
                                )
    payload = {"checks": checks, "summary": {"total": total, "failures": failures}}
    _emit(_json_text(payload), args.output)
    if args.assert_ and failures:
        return EXIT_CHECK_FAILED
    return EXIT_OK


def _cmd_degree_lp(args) -> int:
    spec = PartialFnSpec(args.n, args.k1, args.k2)
    witness = min_degree_lp(spec, args.c)
    payload = witness.to_json_dict()
    payload["nayakwu_bound"] = nayakwu_degree_bound(args.n, args.k1, args.k2)
    _emit(_json_text(payload), args.output)
    return EXIT_OK


def _cmd_dist_dump(args) -> int:
    est = _make_estimator(args.estimator, args.r)
    budget = args.M if args.M is not None else args.T
    if budget is None and args.estimator != "constant":
        raise SystemExit2("--M: query budget required for this estimator")
    d = est.distribution(WeightClass(args.n, args.k), budget or 0)
    _emit(_json_text(d.to_json_dict()), args.output)
    return EXIT_OK


def _cmd_measure_dump(args) -> int:
    if args.measure and args.n < 1:
        raise SystemExit2("--n: required alongside --measure")
    mu = _make_measure(args, args.n)
    if mu is None:
        raise SystemExit2("--measure: a measure name or --measure-file is required")
    if args.format == "json":
        payload = {"n": mu.n, "name": mu.name, "classProb": [float(p) for p in mu.class_prob]}
        _emit(_json_text(payload), args.output)
    else:
        _emit(dump_measure_text(mu), args.output)
    return EXIT_OK


# --- argument wiring -----------------------------------------------------

def _add_common(p):
    p.add_argument("--output", help="write to this path instead of stdout")
    p.add_argument(
        "--parallelism",
        type=int,
        default=_default_workers(),
        help="worker pool size (default: QMEAN_PARALLELISM or 1)",
    )


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="qmean",
        description="error tables, bound checks, and sweeps for Boolean-mean estimators",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    et = sub.add_parser("error-table", help="criterion values over a query-budget grid")
    et.add_argument("--estimator", required=True, choices=("ae", "ae-oracle", "median-reps", "constant", "bernoulli"))
    et.add_argument("--r", type=int, default=1, help="repetitions for median-reps")
    et.add_argument("--n", type=int, required=True)
    et.add_argument("--M", help="comma-separated query-budget grid")
    et.add_argument("--T", help="synonym for --M")
    et.add_argument("--criterion", required=True, choices=("worst-prob", "avg-prob", "worst-expected", "avg-expected"))
    et.add_argument("--p", type=float, help="confidence level for probabilistic criteria")
    et.add_argument("--q", type=float, help="moment order for expected criteria")
    et.add_argument("--measure", choices=("uniform-inputs", "uniform-means"))
    et.add_argument("--measure-file")
    et.add_argument("--count-scaled", action="store_true")
    et.add_argument("--format", choices=("csv", "json"), default="csv")
    _add_common(et)
    et.set_defaults(fn=_cmd_error_table)

    ck = sub.add_parser("check", help="run a bound-check suite")
    cksub = ck.add_subparsers(dest="check", required=True)

    c1 = cksub.add_parser("lemma61", help="central binomial floor over an n range")
    c1.add_argument("--n-min", type=int, default=4)
    c1.add_argument("--n-max", type=int, required=True)
    c1.add_argument("--assert", dest="assert_", action="store_true")
    c1.add_argument("--full", action="store_true", help="emit every check, not only failures")
    _add_common(c1)
    c1.set_defaults(fn=_cmd_check_lemma61)

    c2 = cksub.add_parser("const-alg", help="zero-query constant-algorithm error ratio")
    c2.add_argument("--n", type=int, required=True)
    c2.add_argument("--assert", dest="assert_", action="store_true")
    _add_common(c2)
    c2.set_defaults(fn=_cmd_check_const_alg)

    c3 = cksub.add_parser("floors", help="criterion-vs-floor ratio sweep")
    c3.add_argument("--n", type=int, required=True)
    c3.add_argument("--grid", required=True, help="comma-separated budget grid")
    c3.add_argument("--estimators", default="ae,median-reps:2,median-reps:4,constant,bernoulli")
    c3.add_argument("--criterion", default="avg-prob", choices=("worst-prob", "avg-prob", "worst-expected", "avg-expected"))
    c3.add_argument("--p", type=float)
    c3.add_argument("--q", type=float)
    c3.add_argument("--measure", choices=("uniform-inputs", "uniform-means"))
    c3.add_argument("--measure-file")
    c3.add_argument("--floor", default="rootn-T", choices=("rootn-T", "inv-T"))
    c3.add_argument("--min-ratio", type=float, default=0.0)
    c3.add_argument("--assert", dest="assert_", action="store_true")
    c3.add_argument("--format", choices=("csv", "json"), default="csv")
    _add_common(c3)
    c3.set_defaults(fn=_cmd_check_floors)

    c4 = cksub.add_parser("markov", help="quantile-vs-moment bridge on random distributions")
    c4.add_argument("--samples", type=int, default=200)
    c4.add_argument("--seed", type=int, default=20240801)
    c4.add_argument("--assert", dest="assert_", action="store_true")
    c4.add_argument("--full", action="store_true")
    _add_common(c4)
    c4.set_defaults(fn=_cmd_check_markov)

    c5 = cksub.add_parser("degree-law", help="acceptance-degree vs twice the query count")
    c5.add_argument("--n-max", type=int, default=12)
    c5.add_argument("--m-max", type=int, default=8)
    c5.add_argument("--tol", type=float, default=1e-8)
    c5.add_argument("--assert", dest="assert_", action="store_true")
    c5.add_argument("--full", action="store_true")
    _add_common(c5)
    c5.set_defaults(fn=_cmd_check_degree_law)

    dl = sub.add_parser("degree-lp", help="minimal separating degree via the LP oracle")
    dl.add_argument("--n", type=int, required=True)
    dl.add_argument("--k1", type=int, required=True)
    dl.add_argument("--k2", type=int, required=True)
    dl.add_argument("--c", type=float, required=True)
    _add_common(dl)
    dl.set_defaults(fn=_cmd_degree_lp)

    dd = sub.add_parser("dist-dump", help="dump one outcome distribution as JSON")
    dd.add_argument("--estimator", required=True, choices=("ae", "ae-oracle", "median-reps", "constant", "bernoulli"))
    dd.add_argument("--r", type=int, default=1)
    dd.add_argument("--n", type=int, required=True)
    dd.add_argument("--k", type=int, required=True)
    dd.add_argument("--M", type=int)
    dd.add_argument("--T", type=int)
    _add_common(dd)
    dd.set_defaults(fn=_cmd_dist_dump)

    md = sub.add_parser("measure-dump", help="dump a measure in the text file format")
    md.add_argument("--measure", choices=("uniform-inputs", "uniform-means"))
    md.add_argument("--measure-file")
    md.add_argument("--n", type=int, default=0)
    md.add_argument("--format", choices=("text", "json"), default="text")
    _add_common(md)
    md.set_defaults(fn=_cmd_measure_dump)

    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    _kernels.warmup()
    try:
        return args.fn(args)
    except SystemExit2 as exc:
        print(f"qmean: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ValueError, OSError) as exc:
        print(f"qmean: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
