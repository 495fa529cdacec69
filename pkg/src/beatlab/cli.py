"""Command-line entry point: ``beatlab run|run-all|custom|list``."""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from . import experiment
from .config import ConfigError, load_config
from .core import BeatlabError
from .experiment import PRESETS, Status

DEFAULT_OUT = "beatlab-out"


def _out_dir(arg: str | None) -> Path:
    if arg:
        return Path(arg)
    return Path(os.environ.get("BEATLAB_OUT") or DEFAULT_OUT)


def _report(res: experiment.RunResult) -> None:
    slope = res.result.get("slope")
    slope_txt = "" if slope is None else f" slope={slope:+.3f}"
    pink = res.result.get("pink")
    pink_txt = "" if pink is None else f" pink={str(pink).lower()}"
    status = "pass" if res.passed else "FAIL"
    print(f"{res.name:<10} {status}{slope_txt}{pink_txt}")
    for f in res.failures:
        print(f"    {f}")


def _cmd_list(args) -> int:
    for name, p in PRESETS.items():
        exp = p.expected.summary() if p.expected else "-"
        print(f"{name:<10} {p.description}  [{exp}]")
    return Status.OK


def _cmd_run(args) -> int:
    res = experiment.run_preset(args.preset, args.seed, _out_dir(args.out), args.plot_script)
    _report(res)
    return res.status


def _cmd_run_all(args) -> int:
    out = _out_dir(args.out)
    results = experiment.run_all(out, plot_script=args.plot_script)
    for r in results:
        _report(r)
    failed = sum(not r.passed for r in results)
    print(f"{len(results) - failed}/{len(results)} presets met expectations; summary in {out / 'summary.csv'}")
    return Status.EXPECTATION_FAILED if failed else Status.OK


def _cmd_custom(args) -> int:
    cfg = load_config(args.config)
    target = _out_dir(args.out) / cfg.name
    res = experiment.run_bank(cfg.name, cfg.seed, cfg.run, cfg.expectation, target, args.plot_script)
    _report(res)
    return res.status


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="beatlab", description="Pink noise from beats of crowded wave banks.")
    sub = parser.add_subparsers(dest="command", required=True)

    def out_opts(p):
        p.add_argument("--out", help=f"output directory (default: $BEATLAB_OUT or ./{DEFAULT_OUT})")
        p.add_argument("--plot-script", action="store_true", help="also write a gnuplot script per run")

    p = sub.add_parser("run", help="run one preset")
    p.add_argument("preset", choices=list(PRESETS), metavar="preset")
    p.add_argument("--seed", type=int, help="override the canonical seed")
    out_opts(p)
    p.set_defaults(func=_cmd_run)

    p = sub.add_parser("run-all", help="run every preset with canonical seeds")
    out_opts(p)
    p.set_defaults(func=_cmd_run_all)

    p = sub.add_parser("custom", help="run a pipeline described by a config file")
    p.add_argument("--config", required=True)
    out_opts(p)
    p.set_defaults(func=_cmd_custom)

    p = sub.add_parser("list", help="list presets")
    p.set_defaults(func=_cmd_list)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return Status.ERROR if exc.code else Status.OK
    try:
        return int(args.func(args))
    except ConfigError as exc:
        print(f"beatlab: {exc}", file=sys.stderr)
    except (BeatlabError, ValueError, OSError) as exc:
        print(f"beatlab: error: {exc}", file=sys.stderr)
    return Status.ERROR


if __name__ == "__main__":
    sys.exit(main())
