"""Command-line front end: run scenarios, manual-tuning sweeps, mode comparisons."""

from __future__ import annotations

import argparse
import sys

from .errors import OfoError
from .scenario import compare_modes, load_scenario, run_scenario


def _add_scenario_arg(p):
    p.add_argument("--scenario", required=True, help="path to a scenario YAML file")
    p.add_argument("--out", default=None, help="output directory (default: scenario's)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ofotune",
        description="Online Feedback Optimization simulator with adaptive tuning",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run a scenario (single run or configured sweep)")
    _add_scenario_arg(p_run)
    p_run.add_argument("--mode", default=None, help="named parameter override set")
    p_run.add_argument("--iters", type=int, default=None, help="override iteration count")

    p_sweep = sub.add_parser("sweep", help="run the scenario's manual-tuning sweep")
    _add_scenario_arg(p_sweep)

    p_cmp = sub.add_parser("compare", help="run one trace per mode and summarize")
    _add_scenario_arg(p_cmp)
    p_cmp.add_argument("--modes", required=True, help="comma-separated mode names")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_scenario(args.scenario)
        if args.command == "run":
            report = run_scenario(cfg, out_dir=args.out, mode=args.mode, iters=args.iters)
            if report.cases:
                for case in report.cases:
                    print(f"{case['label']}: epsilon={case['epsilon']:.6g} "
                          f"ratio={case['ratio_vs_baseline']:.4g}")
            elif report.epsilon == report.epsilon:  # has a reference
                print(f"run complete, epsilon={report.epsilon:.6g}")
            else:
                print("run complete")
        elif args.command == "sweep":
            if not cfg.sweep:
                raise OfoError("scenario defines no sweep cases")
            report = run_scenario(cfg, out_dir=args.out)
            for case in report.cases:
                print(f"{case['label']}: epsilon={case['epsilon']:.6g} "
                      f"ratio={case['ratio_vs_baseline']:.4g}")
        elif args.command == "compare":
            rows = compare_modes(cfg, [m.strip() for m in args.modes.split(",") if m.strip()],
                                 out_dir=args.out)
            for r in rows:
                extra = "" if r["epsilon"] != r["epsilon"] else f" epsilon={r['epsilon']:.6g}"
                print(f"{r['mode']}: final_phi={r['final_phi']:.6g} "
                      f"iters_to_target={r['iters_to_target']} increases={r['increases']}{extra}")
    except OfoError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
