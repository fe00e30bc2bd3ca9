"""Command line entry points.

    ctxbridge run <scenario> [--log out.ndjson]
    ctxbridge serve --port N [--state DIR] [--host H]
    ctxbridge contract check <file>
    ctxbridge registry import <dir> [--state DIR]
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import contract as contract_mod
from .errors import BridgeError, ExpectationFailed
from .orb import alarm_to_line
from .registry import Registry, TABLE_FILES
from .scenario import load_scenario
from .server import serve
from .system import System, run


def _cmd_run(args) -> int:
    path = Path(args.scenario)
    try:
        scenario = load_scenario(path)
        log = run(scenario, seed_base=path.parent)
    except ExpectationFailed as e:
        print("expectations failed:", file=sys.stderr)
        for tick, what, expected, actual in e.failures:
            print(f"  tick {tick}: {what}: expected {expected!r}, got {actual!r}",
                  file=sys.stderr)
        return 1
    except BridgeError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    if args.log:
        Path(args.log).write_text(log.serialize(), encoding="utf-8")
    checked = len(scenario.expectations)
    print(f"ok: {len(log.entries)} events, {checked} expectations passed")
    return 0


def _cmd_serve(args) -> int:
    state_dir = Path(args.state) if args.state else None
    if state_dir and (state_dir / TABLE_FILES["profile"]).exists():
        system = System(seed=".", seed_base=state_dir)
    else:
        system = System(seed="builtin")
        if state_dir:
            state_dir.mkdir(parents=True, exist_ok=True)
            system.registry.save_tables(state_dir)
    if state_dir:
        system.log.subscribe(_appender(state_dir / "events.ndjson",
                                       lambda e: e.to_line()))
        system.orb.alarm_listener = _appender(state_dir / "alarms.ndjson",
                                              alarm_to_line)
    try:
        print(f"ctxbridge listening on http://{args.host}:{args.port}")
        serve(system, args.port, args.host)
    except KeyboardInterrupt:
        pass
    return 0


def _appender(path: Path, to_line):
    def append(item):
        with path.open("a", encoding="utf-8") as f:
            f.write(to_line(item) + "\n")
    return append


def _cmd_contract_check(args) -> int:
    try:
        text = Path(args.file).read_text(encoding="utf-8")
        c = contract_mod.parse_contract(text)
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except BridgeError as e:
        print(f"invalid contract: {e}", file=sys.stderr)
        return 1
    sys.stdout.write(contract_mod.render_contract(c) + "\n")
    return 0


def _cmd_registry_import(args) -> int:
    registry = Registry()
    try:
        registry.load_tables(args.dir)
    except BridgeError as e:
        print(f"import failed: {e}", file=sys.stderr)
        return 1
    out = Path(args.state)
    registry.save_tables(out)
    print(f"imported {len(registry.profiles)} profiles, "
          f"{len(registry.services)} services, "
          f"{len(registry.locations)} locations into {out}")
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="ctxbridge")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run a scenario file")
    p_run.add_argument("scenario")
    p_run.add_argument("--log", help="write the event log as NDJSON")
    p_run.set_defaults(fn=_cmd_run)

    p_serve = sub.add_parser("serve", help="serve the HTTP API")
    p_serve.add_argument("--port", type=int, default=8471)
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--state", help="state directory (tables and logs)")
    p_serve.set_defaults(fn=_cmd_serve)

    p_contract = sub.add_parser("contract", help="contract tools")
    contract_sub = p_contract.add_subparsers(dest="subcommand", required=True)
    p_check = contract_sub.add_parser("check", help="parse and canonicalize")
    p_check.add_argument("file")
    p_check.set_defaults(fn=_cmd_contract_check)

    p_registry = sub.add_parser("registry", help="registry tools")
    registry_sub = p_registry.add_subparsers(dest="subcommand", required=True)
    p_import = registry_sub.add_parser("import", help="load TSV tables")
    p_import.add_argument("dir")
    p_import.add_argument("--state", default="state")
    p_import.set_defaults(fn=_cmd_registry_import)

    args = parser.parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
