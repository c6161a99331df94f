"""Command-line runner.

    predtime run [SCENARIO_FILE] [--out DIR] [--preset NAME] [--step S]
                 [--seed-presets] [--plot-script]
    predtime list-presets

Without a scenario file, ``--preset`` runs a bundled preset. With a file,
``--preset`` selects one section of it. The output directory defaults to
``$PREDTIME_OUT`` or ``./predtime-out``.

Exit status: 0 when every requested check passed, 1 when a check failed or
a run diverged, 2 on a scenario parse or validation error.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .errors import ScenarioError
from .runner import default_out_dir, run_scenarios, write_plot_script
from .scenario import PRESETS, list_presets, load_scenarios, parse_scenarios, preset_text

EXIT_OK, EXIT_FAILED, EXIT_PARSE = 0, 1, 2


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="predtime", description="Predefined-time stability scenario runner.")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run scenarios and write CSV trajectories plus summary.json")
    run.add_argument("scenario_file", nargs="?", help="INI scenario file")
    run.add_argument("--out", type=Path, default=None, help="output directory (default: $PREDTIME_OUT)")
    run.add_argument("--preset", help="bundled preset, or a section of SCENARIO_FILE")
    run.add_argument("--step", type=float, help="override the integration step of every scenario")
    run.add_argument("--seed-presets", action="store_true",
                     help="write the bundled presets to OUT/presets.ini before running")
    run.add_argument("--plot-script", action="store_true", help="also write a gnuplot script OUT/plot.gp")

    sub.add_parser("list-presets", help="list bundled presets")
    return parser


def _load(args) -> list:
    if args.scenario_file is None:
        if args.preset is None:
            if args.seed_presets:
                return []
            raise ScenarioError("give a scenario file or --preset NAME")
        return parse_scenarios(preset_text(args.preset), source=f"preset:{args.preset}")
    scenarios = load_scenarios(args.scenario_file)
    if args.preset is not None:
        scenarios = [s for s in scenarios if s.name == args.preset]
        if not scenarios:
            raise ScenarioError(f"no section named {args.preset!r} in {args.scenario_file}")
    return scenarios


def cmd_run(args) -> int:
    out = args.out if args.out is not None else default_out_dir()
    try:
        if args.step is not None and not args.step > 0:
            raise ScenarioError("--step must be > 0")
        scenarios = _load(args)
        if args.step is not None:
            scenarios = [s.with_step(args.step) for s in scenarios]
    except ScenarioError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except OSError as exc:
        print(f"error: cannot read scenario file: {exc}", file=sys.stderr)
        return EXIT_PARSE

    out.mkdir(parents=True, exist_ok=True)
    if args.seed_presets:
        (out / "presets.ini").write_text("\n".join(text for _, text in PRESETS.values()), encoding="utf-8")

    summary = run_scenarios(scenarios, out)
    summary.write(out / "summary.json")
    if args.plot_script:
        write_plot_script(out / "plot.gp", summary)

    for sc in summary.scenarios:
        flag = "PASS" if sc["passed"] else "FAIL"
        note = " (run error)" if sc["status"] == "error" else ""
        print(f"{flag} {sc['name']}{note}  [{sc['wall_time']:.1f} s]")
    print(f"summary: {out / 'summary.json'}")
    return EXIT_OK if summary.passed else EXIT_FAILED


def cmd_list_presets(args) -> int:
    for name, desc in list_presets():
        print(f"{name:18s} {desc}")
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    if args.command == "run":
        return cmd_run(args)
    return cmd_list_presets(args)


if __name__ == "__main__":
    sys.exit(main())
