"""Command line entry point: ``mehler-nls <subcommand> --config FILE``.

Exit status 0 on success, 1 when a run fails inside a module, 2 when the
configuration does not validate (nothing is computed). Failures leave a
machine-readable ``error.json`` in the output directory.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import yaml

from .errors import ConfigError
from .harness import KINDS, OUT_ENV, ExperimentConfig, run, write_json


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mehler-nls", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for kind in KINDS:
        p = sub.add_parser(kind, help=f"run a {kind} experiment")
        p.add_argument("--config", required=True, help="YAML experiment file")
        p.add_argument("--out", help="output directory (overrides $MEHLER_NLS_OUT and the config)")
        p.add_argument("--seed", type=int, help="seed for randomized selections (overrides the config)")
        p.add_argument("--resume", action="store_true", help="skip work whose completed manifest matches")
    return parser


def _load(args) -> ExperimentConfig:
    path = Path(args.config)
    if not path.exists():
        raise ConfigError(f"config file {path} does not exist")
    try:
        data = yaml.safe_load(path.read_text())
    except yaml.YAMLError as exc:
        raise ConfigError(f"cannot parse {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError("configuration must be a mapping")
    data.setdefault("kind", args.command)
    if data["kind"] != args.command:
        raise ConfigError(f"config kind {data['kind']!r} does not match subcommand {args.command!r}")
    if args.seed is not None:
        data["seed"] = args.seed
    return ExperimentConfig.from_dict(data, path.parent)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = _load(args)
    except ConfigError as exc:
        err = {"error": type(exc).__name__, "message": str(exc), "kind": args.command}
        out = args.out or os.environ.get(OUT_ENV)
        if out:
            out = Path(out)
            out.mkdir(parents=True, exist_ok=True)
            write_json(out / "error.json", err)
        print(json.dumps(err), file=sys.stderr)
        return 2
    outcome = run(cfg, args.out, args.resume)
    if outcome.error:
        print(json.dumps(outcome.error), file=sys.stderr)
    else:
        print(json.dumps({"out": str(outcome.out), "summary": outcome.summary}, default=str))
    return outcome.status


if __name__ == "__main__":
    sys.exit(main())
