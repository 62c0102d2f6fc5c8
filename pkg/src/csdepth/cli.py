"""Experiment runner.

One experiment per invocation; batch loops belong in the shell. Every
command echoes its full configuration into the report so a run can be
reproduced exactly; seeds are always explicit flags, never environment
derived. Reports are JSON on stdout or --output; rationals serialize as
p/q strings.

Exit codes: 0 success, 2 invalid configuration or unreadable dataset,
3 exact-mode selection-bound violation, 1 other library errors.
"""

from __future__ import annotations

import argparse
import csv as _csv
import json
import os
import sys
import time

from . import __version__
from .bounds import bounds_row
from .constructions import (
    Coloring,
    GaussianRandom,
    GeneratorSpec,
    MomentCurve,
    StretchedGrid,
    UniformRandom,
    generate,
)
from .dataio import load_dataset, parse_rational, save_dataset
from .depth import (
    SearchMethod,
    VerifyMode,
    colorful_depth_bruteforce,
    colorful_depth_sweep2d,
    max_depth_heuristic,
    verify_selection_bound,
)
from .arrangement import max_depth_exact2d
from .errors import (
    ConfigInvalid,
    CsdepthError,
    DatasetUnreadable,
    TheoremViolation,
)
from .geometry import Point
from .measures import (
    containment_probability,
    deep_point_search,
    family_from_json,
    mollification_convergence_check,
)

SCHEMA_VERSION = 1


def _parse_point(text: str) -> Point:
    try:
        coords = tuple(parse_rational(c) for c in text.split(","))
    except CsdepthError as exc:
        raise ConfigInvalid(f"bad query point {text!r}: {exc}") from exc
    if not coords:
        raise ConfigInvalid(f"bad query point {text!r}")
    return Point(coords)


def _parse_float_point(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(c) for c in text.split(","))
    except ValueError as exc:
        raise ConfigInvalid(f"bad query point {text!r}: {exc}") from exc


def _parse_dims(text: str) -> list[int]:
    if ".." in text:
        lo, hi = text.split("..", 1)
        try:
            return list(range(int(lo), int(hi) + 1))
        except ValueError as exc:
            raise ConfigInvalid(f"bad dimension range {text!r}") from exc
    try:
        return [int(text)]
    except ValueError as exc:
        raise ConfigInvalid(f"bad dimension {text!r}") from exc


def _emit(report: dict, output: str | None) -> None:
    text = json.dumps(report, indent=2) + "\n"
    if output:
        with open(output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _envelope(command: str, config: dict, results, started: float) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "tool_version": __version__,
        "command": command,
        "config": config,
        "results": results,
        "wall_time_s": round(time.monotonic() - started, 6),
    }


def _append_plot_rows(path: str, rows: list[dict]) -> None:
    if not rows:
        return
    fresh = not os.path.exists(path)
    with open(path, "a", newline="") as fh:
        writer = _csv.DictWriter(fh, fieldnames=list(rows[0].keys()))
        if fresh:
            writer.writeheader()
        writer.writerows(rows)


def _make_generator_spec(args) -> GeneratorSpec:
    kinds = {
        "uniform": UniformRandom(),
        "gaussian": GaussianRandom(),
        "stretched-grid": StretchedGrid(gamma=parse_rational(args.gamma)),
        "moment-curve": MomentCurve(),
    }
    if args.kind not in kinds:
        raise ConfigInvalid(f"unknown generator kind {args.kind!r}")
    coloring = (
        Coloring.RANDOM_BALANCED if args.coloring == "random-balanced" else Coloring.ROUND_ROBIN
    )
    return GeneratorSpec(
        kind=kinds[args.kind],
        n_per_color=args.n,
        dim=args.dim,
        seed=args.seed,
        coloring=coloring,
    )


# --- subcommand handlers ------------------------------------------------------


def _cmd_depth(args) -> tuple[dict, int]:
    cps = load_dataset(args.dataset)
    q = _parse_point(args.query)
    if args.method == "brute":
        res = colorful_depth_bruteforce(cps, q)
    elif args.method == "sweep":
        res = colorful_depth_sweep2d(cps, q)
    else:
        res = colorful_depth_sweep2d(cps, q) if cps.dim == 2 else colorful_depth_bruteforce(cps, q)
    return res.to_json(), 0


def _cmd_maxdepth(args) -> tuple[dict, int]:
    cps = load_dataset(args.dataset)
    if args.mode == "exact2d":
        res = max_depth_exact2d(cps)
    else:
        strategy = (
            SearchMethod.LOCAL_SEARCH if args.mode == "local" else SearchMethod.CENTROID_HEURISTIC
        )
        res = max_depth_heuristic(cps, strategy=strategy, budget=args.budget, seed=args.seed)
    if args.plot_csv:
        _append_plot_rows(
            args.plot_csv,
            [
                {
                    "experiment": "maxdepth",
                    "dataset": args.dataset,
                    "mode": args.mode,
                    "count": res.depth.count,
                    "total": res.depth.total,
                    "fraction": float(res.depth.fraction),
                }
            ],
        )
    return res.to_json(), 0


def _cmd_estimate(args) -> tuple[dict, int]:
    fam = _load_family(args.family)
    res = containment_probability(fam, _parse_float_point(args.query), args.trials, args.seed)
    if args.plot_csv:
        _append_plot_rows(
            args.plot_csv,
            [
                {
                    "experiment": "estimate",
                    "family": args.family,
                    "query": args.query,
                    "trials": args.trials,
                    "seed": args.seed,
                    "p_hat": res.p_hat,
                    "std_error": res.std_error,
                }
            ],
        )
    return res.to_json(), 0


def _load_family(path: str):
    if not os.path.exists(path):
        raise DatasetUnreadable(f"no such family file: {path}")
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise DatasetUnreadable(f"{path}: {exc}") from exc
    return family_from_json(doc)


def _cmd_search(args) -> tuple[dict, int]:
    fam = _load_family(args.family)
    res = deep_point_search(
        fam,
        grid_resolution=args.grid_resolution,
        refine_rounds=args.refine_rounds,
        n_per_eval=args.trials_per_eval,
        seed=args.seed,
    )
    return res.to_json(), 0


def _cmd_mollify_check(args) -> tuple[dict, int]:
    cps = load_dataset(args.dataset)
    q = _parse_point(args.query)
    res = mollification_convergence_check(cps, q, args.trials, args.seed)
    return res.to_json(), 0


def _cmd_generate(args) -> tuple[dict, int]:
    spec = _make_generator_spec(args)
    cps = generate(spec)
    save_dataset(cps, args.output_dataset)
    return (
        {
            "dataset": args.output_dataset,
            "dim": cps.dim,
            "class_sizes": list(cps.class_sizes),
        },
        0,
    )


def _cmd_bounds(args) -> tuple[dict | None, int]:
    rows = [bounds_row(d) for d in _parse_dims(args.dims)]
    if not args.json:
        from .dataio import _decimal_or_ratio

        cols = ["d", "barany", "wagner", "karasev_uncolored", "gromov", "upper_bmn"]
        table = [cols] + [
            [str(getattr(r, c)) for c in cols]
            + (
                ["[%s, %s]" % tuple(_decimal_or_ratio(v) for v in r.c3_interval)]
                if r.c3_interval
                else []
            )
            for r in rows
        ]
        ncols = max(len(row) for row in table)
        widths = [
            max((len(row[i]) for row in table if i < len(row)), default=0)
            for i in range(ncols)
        ]
        for row in table:
            sys.stdout.write(
                "  ".join(cell.ljust(widths[i]) for i, cell in enumerate(row)).rstrip() + "\n"
            )
        return None, 0
    return {"table": [r.to_json() for r in rows]}, 0


def _cmd_verify(args) -> tuple[dict, int]:
    mode = VerifyMode.EXACT_2D if args.mode == "exact2d" else VerifyMode.HEURISTIC
    instances = []
    if args.dataset:
        instances.append(("dataset", load_dataset(args.dataset)))
    else:
        if not args.generate:
            raise ConfigInvalid("verify needs --dataset or --generate KIND")
        for t in range(args.trials):
            spec = GeneratorSpec(
                kind={
                    "uniform": UniformRandom(),
                    "gaussian": GaussianRandom(),
                    "stretched-grid": StretchedGrid(gamma=parse_rational(args.gamma)),
                    "moment-curve": MomentCurve(),
                }[args.generate],
                n_per_color=args.n,
                dim=args.dim,
                seed=args.seed + t,
                coloring=Coloring.ROUND_ROBIN,
            )
            instances.append((f"generated[{t}]", generate(spec)))

    reports = []
    violation = False
    for label, cps in instances:
        try:
            rep = verify_selection_bound(cps, mode=mode, budget=args.budget, seed=args.seed)
        except TheoremViolation as exc:
            violation = True
            rep = exc.report
        doc = rep.to_json()
        doc["instance"] = label
        reports.append(doc)
    if args.plot_csv:
        _append_plot_rows(
            args.plot_csv,
            [
                {
                    "experiment": "verify",
                    "instance": doc["instance"],
                    "mode": doc["mode"],
                    "max_found": doc["max_found"],
                    "bound_value": doc["bound_value"],
                    "satisfied": doc["satisfied"],
                }
                for doc in reports
            ],
        )
    all_satisfied = all(doc["satisfied"] for doc in reports)
    results = {"reports": reports, "all_satisfied": all_satisfied}
    return results, 3 if violation else 0


# --- parser -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="csdepth",
        description="colorful simplicial depth experiments",
    )
    p.add_argument("--output", help="write the JSON report here instead of stdout")
    sub = p.add_subparsers(dest="command", required=True)

    d = sub.add_parser("depth", help="depth of a query point in a dataset")
    d.add_argument("--dataset", required=True)
    d.add_argument("--query", required=True, help="comma-separated exact coordinates")
    d.add_argument("--method", choices=["auto", "sweep", "brute"], default="auto")
    d.set_defaults(func=_cmd_depth)

    m = sub.add_parser("maxdepth", help="search for the deepest point")
    m.add_argument("--dataset", required=True)
    m.add_argument("--mode", choices=["exact2d", "centroid", "local"], default="exact2d")
    m.add_argument("--budget", type=int, default=200)
    m.add_argument("--seed", type=int, default=0)
    m.add_argument("--plot-csv", help="append tidy measurement rows to this CSV")
    m.set_defaults(func=_cmd_maxdepth)

    e = sub.add_parser("estimate", help="Monte Carlo containment probability")
    e.add_argument("--family", required=True, help="measure family JSON file")
    e.add_argument("--query", required=True)
    e.add_argument("--trials", type=int, required=True)
    e.add_argument("--seed", type=int, required=True)
    e.add_argument("--plot-csv")
    e.set_defaults(func=_cmd_estimate)

    s = sub.add_parser("search", help="grid search for a deep point of a family")
    s.add_argument("--family", required=True)
    s.add_argument("--grid-resolution", type=int, default=9)
    s.add_argument("--refine-rounds", type=int, default=3)
    s.add_argument("--trials-per-eval", type=int, default=20000)
    s.add_argument("--seed", type=int, required=True)
    s.set_defaults(func=_cmd_search)

    mc = sub.add_parser(
        "mollify-check", help="exact depth vs mollified containment estimate"
    )
    mc.add_argument("--dataset", required=True)
    mc.add_argument("--query", required=True)
    mc.add_argument("--trials", type=int, default=100000)
    mc.add_argument("--seed", type=int, required=True)
    mc.set_defaults(func=_cmd_mollify_check)

    g = sub.add_parser("generate", help="generate a dataset")
    g.add_argument(
        "--kind",
        choices=["uniform", "gaussian", "stretched-grid", "moment-curve"],
        required=True,
    )
    g.add_argument("--dim", type=int, default=2)
    g.add_argument("--n", type=int, required=True, help="points per color class")
    g.add_argument("--seed", type=int, required=True)
    g.add_argument("--gamma", default="10", help="stretched-grid growth base")
    g.add_argument(
        "--coloring", choices=["round-robin", "random-balanced"], default="round-robin"
    )
    g.add_argument("--output-dataset", required=True, help=".csv or .json path")
    g.set_defaults(func=_cmd_generate)

    b = sub.add_parser("bounds", help="table of selection constants")
    b.add_argument("--dims", default="1..12", help="single d or range lo..hi")
    b.add_argument("--json", action="store_true", help="JSON report instead of text table")
    b.set_defaults(func=_cmd_bounds)

    v = sub.add_parser("verify", help="check max depth against the selection bound")
    v.add_argument("--dataset")
    v.add_argument("--generate", choices=["uniform", "gaussian", "stretched-grid", "moment-curve"])
    v.add_argument("--trials", type=int, default=1, help="generated instances to verify")
    v.add_argument("--n", type=int, default=3)
    v.add_argument("--dim", type=int, default=2)
    v.add_argument("--gamma", default="10")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--mode", choices=["exact2d", "heuristic"], default="exact2d")
    v.add_argument("--budget", type=int, default=200)
    v.add_argument("--plot-csv")
    v.set_defaults(func=_cmd_verify)

    return p


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 2
    started = time.monotonic()
    config = {
        k: v for k, v in vars(args).items() if k not in ("func", "output") and v is not None
    }
    try:
        results, code = args.func(args)
    except (ConfigInvalid, DatasetUnreadable) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except TheoremViolation as exc:
        sys.stderr.write(f"selection bound violated: {exc}\n")
        return 3
    except CsdepthError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1
    if results is not None:
        _emit(_envelope(args.command, config, results, started), args.output)
    return code


def main() -> None:
    sys.exit(run())
