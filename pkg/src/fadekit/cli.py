"""Command-line front end.

    fadekit run <config.toml> [--set key=value ...] [--out PATH]
    fadekit validate <suite>
    fadekit version

`run` writes `<out>.csv` (one row per sweep point) and `<out>.meta.json`
(the fully resolved config plus library version and seed); the meta file can
be fed back to `run` to reproduce the CSV byte for byte.  Exit codes: 2 for
configuration problems, 3 for numerical failures, 1 for failed validation.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import __version__
from .config import Scenario, load_config
from .errors import ConfigError, FadekitError
from .sweep import run_sweep
from .validate import SUITES, run_suite


def _write_outputs(scenario: Scenario, out_base: str) -> tuple[str, str]:
    result = run_sweep(scenario)
    csv_path = out_base + ".csv"
    meta_path = out_base + ".meta.json"
    result.write_csv(csv_path)
    meta = {
        "config": scenario.resolved,
        "library_version": __version__,
        "seed": scenario.mc["seed"] if scenario.mc["enabled"] else None,
    }
    with open(meta_path, "w", newline="\n") as fh:
        json.dump(meta, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return csv_path, meta_path


def _cmd_run(args) -> int:
    try:
        scenario = load_config(args.config, args.set or [])
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    out_base = args.out or scenario.output_path
    try:
        csv_path, meta_path = _write_outputs(scenario, out_base)
    except FadekitError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"cannot write outputs at '{out_base}': {exc}", file=sys.stderr)
        return 2
    print(f"wrote {csv_path} and {meta_path}")
    return 0


def _cmd_validate(args) -> int:
    try:
        checks = run_suite(args.suite)
    except KeyError:
        known = ", ".join(sorted(SUITES) + ["all"])
        print(f"unknown suite '{args.suite}' (known: {known})", file=sys.stderr)
        return 2
    width = max(len(name) for name, _, _ in checks)
    failures = 0
    for name, ok, detail in checks:
        tag = "PASS" if ok else "FAIL"
        failures += 0 if ok else 1
        print(f"{tag}  {name:<{width}}  {detail}")
    print(f"{len(checks) - failures}/{len(checks)} checks passed")
    return 0 if failures == 0 else 1


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="fadekit",
        description="Multi-hop decode-and-forward link performance over nonlinear fading",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="evaluate a sweep described by a config file")
    p_run.add_argument("config", help="TOML config (or a .meta.json from a previous run)")
    p_run.add_argument(
        "--set",
        action="append",
        metavar="KEY=VALUE",
        help="override a config field, e.g. --set sweep.points=5",
    )
    p_run.add_argument("--out", help="output basename (default: output.path from the config)")
    p_run.set_defaults(func=_cmd_run)

    p_val = sub.add_parser("validate", help="run a named self-check suite")
    p_val.add_argument("suite", help="one of: " + ", ".join(sorted(SUITES) + ["all"]))
    p_val.set_defaults(func=_cmd_validate)

    p_ver = sub.add_parser("version", help="print the library version")
    p_ver.set_defaults(func=lambda _args: (print(__version__), 0)[1])

    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
