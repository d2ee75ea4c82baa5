"""Command-line entry point: ``hybrid-ris {run,asymptotics,thresholds,validate}``.

Exit codes: 0 success, 2 invalid scenario or arguments, 3 every trial failed.
"""
from __future__ import annotations

import argparse
import sys
import time
from dataclasses import replace
from pathlib import Path

from . import experiments as ex
from .errors import ScenarioError

EXIT_OK, EXIT_INVALID, EXIT_INFEASIBLE = 0, 2, 3

LEMMAS = {
    3: "passive RIS vs active and active/passive RIS",
    4: "passive RIS vs active/active RIS",
    5: "active/passive RIS vs active RIS",
    6: "active/active RIS vs active RIS (element ratio)",
}


def _emit(text, out):
    if out:
        Path(out).parent.mkdir(parents=True, exist_ok=True)
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_run(args):
    scenario = ex.validate_scenario(args.scenario)
    archs = [a.strip() for a in args.arch.split(",")] if args.arch else None
    if args.seed is not None:
        scenario = replace(scenario, seed=args.seed)
    progress = None
    if args.verbose:
        progress = lambda done, total: print(f"\r{done}/{total} trials", end="", file=sys.stderr)
    t0 = time.perf_counter()
    rows, results = ex.run_sweep(scenario, archs, args.trials, workers=args.workers, progress=progress)
    wall = time.perf_counter() - t0
    if progress:
        print(file=sys.stderr)
    text = ex.rows_to_csv(rows)
    if args.out:
        scenario = replace(scenario, trials=rows[0].trials if rows else scenario.trials)
        ex.write_outputs(text, args.out, ex.sweep_metadata(scenario, wall, rows))
    else:
        sys.stdout.write(text)
    if results and not any(r.ok for r in results):
        print("error: every trial failed or ended infeasible", file=sys.stderr)
        for msg in sorted({r.error for r in results})[:5]:
            print(f"  {msg}", file=sys.stderr)
        return EXIT_INFEASIBLE
    return EXIT_OK


def cmd_asymptotics(args):
    rows = ex.run_asymptotics_figure(args.fig, mc=args.mc, mc_trials=args.mc_trials, seed=args.seed)
    _emit(ex.rows_to_csv(rows, ex.ASYMPTOTIC_COLUMNS), args.out)
    return EXIT_OK


def cmd_thresholds(args):
    rows = ex.threshold_table(args.lemma)
    _emit(ex.rows_to_csv(rows, ("quantity", "parameter", "value")), args.out)
    return EXIT_OK


def cmd_validate(args):
    sc = ex.validate_scenario(args.scenario)
    sweep = f"{sc.sweep_variable} over {len(sc.sweep_values)} values" if sc.sweep_variable else "none"
    print(f"{sc.name}: N={sc.N} a={sc.a:g} M={sc.M} K={sc.K} trials={sc.trials} seed={sc.seed}")
    print(f"  architectures: {', '.join(sc.architectures)}")
    print(f"  sweep: {sweep}")
    return EXIT_OK


def build_parser():
    p = argparse.ArgumentParser(prog="hybrid-ris", description="Hybrid-RIS energy-efficiency toolkit")
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", help="run a scenario sweep through the optimizer")
    r.add_argument("--scenario", required=True, help="scenario JSON file or shipped name")
    r.add_argument("--arch", help="comma-separated architecture labels (default: the scenario's)")
    r.add_argument("--trials", type=int, help="override the trial count")
    r.add_argument("--seed", type=int, help="override the root seed")
    r.add_argument("--out", help="CSV path (a .json metadata sidecar is written next to it)")
    r.add_argument("--workers", type=int, default=1, help="worker processes (default 1)")
    r.add_argument("-v", "--verbose", action="store_true")
    r.set_defaults(func=cmd_run)

    a = sub.add_parser("asymptotics", help="tabulate large-RIS SNR curves")
    a.add_argument("--fig", required=True, choices=ex.FIGURES)
    a.add_argument("--mc", action="store_true", help="add Monte-Carlo points")
    a.add_argument("--mc-trials", type=int, default=10)
    a.add_argument("--seed", type=int, default=0)
    a.add_argument("--out")
    a.set_defaults(func=cmd_asymptotics)

    t = sub.add_parser("thresholds", help="element-count thresholds between architectures")
    t.add_argument("--lemma", required=True, type=int, choices=sorted(LEMMAS),
                   help="; ".join(f"{k}: {v}" for k, v in LEMMAS.items()))
    t.add_argument("--out")
    t.set_defaults(func=cmd_thresholds)

    v = sub.add_parser("validate", help="parse and check a scenario file")
    v.add_argument("--scenario", required=True)
    v.set_defaults(func=cmd_validate)
    return p


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INVALID if exc.code else EXIT_OK
    try:
        return args.func(args)
    except ScenarioError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
