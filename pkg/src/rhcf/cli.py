"""Command-line benchmark harness.

Subcommands:
  generate  write a scenario document for one of the benchmark families
  run       run planners over a scenario, emit CSV metrics and optional SVG
  classes   count simple start-goal paths (homotopy classes) of a scenario

Exit codes: 0 success, 1 usage error, 2 planning/construction failure.
The RHCF_SEED environment variable supplies the default seed when --seed is
absent.
"""

from __future__ import annotations

import argparse
import os
import sys
import time

from .homotopy import enumerate_simple_paths
from .metrics import MetricsReport, cumulative_gain, robust_diversity
from .planner import PathSet, RandomSource, derive_seed, rhcf
from .yen import yen_k_shortest
from .scenario import (FAMILIES, PlacementError, ScenarioFormatError,
                       ScenarioValidationError, generate_scenario,
                       load_scenario, save_scenario)
from .social_field import rasterize_field
from .svg import render_scene
from .voronoi import GraphConstructionError, build_navgraph

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_PLANNING = 2

SEED_ENV_VAR = "RHCF_SEED"

CSV_COLUMNS = ("scenario", "planner", "K", "trial", "seed", "time_us",
               "shortfall", "rd", "cg", "ncg", "best_cost", "n_paths")


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors; the CLI contract reserves 2 for
    # planning failures, so remap.
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _default_seed() -> int:
    env = os.environ.get(SEED_ENV_VAR)
    if env is not None:
        try:
            return int(env)
        except ValueError:
            return 0
    return 0


def _build_parser() -> _Parser:
    parser = _Parser(prog="rhcf", description=__doc__,
                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="generate a scenario file")
    gen.add_argument("--family", required=True, choices=FAMILIES)
    gen.add_argument("--peds", required=True, type=int, help="number of pedestrians")
    gen.add_argument("--seed", type=int, default=None)
    gen.add_argument("--out", default=None, help="output path (default: stdout)")

    run = sub.add_parser("run", help="run planners and emit CSV metrics")
    run.add_argument("--scenario", required=True, help="scenario document path")
    run.add_argument("--planner", choices=("rhcf", "yen", "both"), default="both")
    run.add_argument("--k", default="5", help="comma-separated K values, e.g. 1,5,10")
    run.add_argument("--trials", type=int, default=100)
    run.add_argument("--seed", type=int, default=None)
    run.add_argument("--out", default=None, help="CSV output path (default: stdout)")
    run.add_argument("--svg", default=None, help="optional scene SVG output path")
    run.add_argument("--max-attempts", type=int, default=None,
                     help="walk budget per rhcf call (default 1000*K)")

    cls = sub.add_parser("classes", help="count simple start-goal paths")
    cls.add_argument("--scenario", required=True)
    cls.add_argument("--limit", type=int, default=100000)
    return parser


def _write(path: str | None, text: str) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", newline="") as f:
            f.write(text)


def _cmd_generate(parser: _Parser, args) -> int:
    if args.peds < 1:
        parser.error("--peds must be >= 1")
    seed = args.seed if args.seed is not None else _default_seed()
    scenario = generate_scenario(args.family, args.peds, seed)
    _write(args.out, save_scenario(scenario) + "\n")
    return EXIT_OK


def _load_scenario_file(path: str):
    with open(path) as f:
        return load_scenario(f.read())


def _cmd_run(parser: _Parser, args) -> int:
    try:
        k_values = [int(v) for v in args.k.split(",") if v.strip()]
    except ValueError:
        parser.error("--k expects comma-separated integers")
    if not k_values or any(k < 1 for k in k_values):
        parser.error("--k values must be positive")
    if args.trials < 1:
        parser.error("--trials must be >= 1")
    seed = args.seed if args.seed is not None else _default_seed()
    planners = ["rhcf", "yen"] if args.planner == "both" else [args.planner]

    scenario = _load_scenario_file(args.scenario)
    graph = build_navgraph(scenario)

    yen_cache: dict[int, PathSet] = {}

    def yen_ref(k: int) -> PathSet:
        if k not in yen_cache:
            yen_cache[k] = yen_k_shortest(graph, k)
        return yen_cache[k]

    rows = [",".join(CSV_COLUMNS)]
    for p_idx, planner_name in enumerate(planners):
        for k_idx, k in enumerate(k_values):
            for trial in range(args.trials):
                trial_seed = derive_seed(seed, (p_idx * len(k_values) + k_idx)
                                         * args.trials + trial)
                t0 = time.perf_counter_ns()
                if planner_name == "rhcf":
                    ps = rhcf(graph, k, RandomSource(trial_seed),
                              max_attempts=args.max_attempts)
                else:
                    ps = yen_k_shortest(graph, k)
                elapsed_us = (time.perf_counter_ns() - t0) / 1000.0
                n = len(ps.paths)
                if n == 0:
                    report = MetricsReport(planner=planner_name, k=k,
                                           time_us=elapsed_us, rd=0.0, cg=0.0,
                                           ncg=0.0, path_costs=[])
                else:
                    cg = cumulative_gain(ps)
                    report = MetricsReport(
                        planner=planner_name, k=k, time_us=elapsed_us,
                        rd=robust_diversity(ps), cg=cg,
                        ncg=cg / cumulative_gain(yen_ref(n)),
                        path_costs=[p.cost for p in ps.paths])
                shortfall = 1 if (ps.shortfall or n < k) else 0
                best = min(report.path_costs) if report.path_costs else 0.0
                rows.append(",".join((
                    args.scenario, report.planner, str(report.k), str(trial),
                    str(trial_seed), f"{report.time_us!r}", str(shortfall),
                    f"{report.rd!r}", f"{report.cg!r}", f"{report.ncg!r}",
                    f"{best!r}", str(n))))
    _write(args.out, "\n".join(rows) + "\n")

    if args.svg is not None:
        show = rhcf(graph, k_values[0], RandomSource(derive_seed(seed, 0)),
                    max_attempts=args.max_attempts) \
            if "rhcf" in planners else yen_ref(k_values[0])
        field = rasterize_field(scenario)
        skeleton = sorted(graph.cell_owner) if graph.cell_owner else None
        _write(args.svg, render_scene(scenario, field=field, skeleton=skeleton,
                                      graph=graph, paths=show.paths))
    return EXIT_OK


def _cmd_classes(parser: _Parser, args) -> int:
    if args.limit < 1:
        parser.error("--limit must be >= 1")
    scenario = _load_scenario_file(args.scenario)
    graph = build_navgraph(scenario)
    result = enumerate_simple_paths(graph, limit=args.limit)
    print(f"count={len(result.paths)} overflow={1 if result.overflow else 0}")
    return EXIT_OK


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    handlers = {"generate": _cmd_generate, "run": _cmd_run, "classes": _cmd_classes}
    try:
        return handlers[args.command](parser, args)
    except (ScenarioFormatError, ScenarioValidationError) as exc:
        print(f"rhcf: invalid scenario: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FileNotFoundError as exc:
        print(f"rhcf: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (GraphConstructionError, PlacementError) as exc:
        print(f"rhcf: planning failed: {exc}", file=sys.stderr)
        return EXIT_PLANNING


if __name__ == "__main__":
    sys.exit(main())
