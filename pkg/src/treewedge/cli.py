"""Batch front end: run verification suites or one-off queries, emit JSON.

Reports are deterministic: they embed the config and the library version,
carry no timestamps, and all randomness comes from the seed, so identical
(config, seed) pairs produce byte-identical JSON.

Exit codes: 0 all properties pass, 1 a property failed, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .coherent import CoherentSystem
from .families import BitFamily, DigitFamily, InjFamily
from .forcing import simulate_filter, serialize_condition
from .literals import format_node, parse_cover, parse_node
from .ordinal import CNFSyntaxError, parse_cnf, to_cnf
from .sorgenfrey import format_interval, format_point, isolating_box, neg, parse_point
from .suites import SUITES, RunConfig, run_suite
from .trees import ExplicitTree
from .wedge import CoverUndecided, covers_within, find_safe_point, is_safe


class UsageError(ValueError):
    pass


def split_args(text: str) -> list[str]:
    """Whitespace split at bracket depth zero, so literals stay whole."""
    out, depth, cur = [], 0, []
    for ch in text:
        if ch in "([{":
            depth += 1
        elif ch in ")]}":
            depth -= 1
        if ch.isspace() and depth == 0:
            if cur:
                out.append("".join(cur))
                cur = []
        else:
            cur.append(ch)
    if cur:
        out.append("".join(cur))
    return out


def load_config_file(path: str) -> dict:
    """Flat key=value lines mirroring the command line flags."""
    out = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key=value")
        key, _, value = line.partition("=")
        out[key.strip()] = value.strip()
    return out


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="treewedge",
        description="verification suites and queries for the tree-topology workbench",
    )
    parser.add_argument("--config", help="flat key=value config file")
    parser.add_argument("--seed", type=int, help="random seed (default 0)")
    parser.add_argument("--json", dest="json_path", help="write the JSON report here")
    parser.add_argument("--suite", help=f"one of: {', '.join(sorted(SUITES))}")
    parser.add_argument("--query", help="single operation, e.g. 'eval-e w 3'")
    parser.add_argument("--budget-enum", type=int, help="enumeration budget")
    parser.add_argument("--budget-range", type=int, help="range search budget")
    parser.add_argument("--trials", type=int, help="randomized trial count")
    return parser


def merge_config(args) -> tuple[RunConfig, dict]:
    file_cfg = load_config_file(args.config) if args.config else {}

    def pick(flag_value, key, cast, default):
        if flag_value is not None:
            return flag_value
        if key in file_cfg:
            return cast(file_cfg[key])
        return default

    config = RunConfig(
        seed=pick(args.seed, "seed", int, 0),
        trials=pick(args.trials, "trials", int, 1000),
        budget_enum=pick(args.budget_enum, "budget-enum", int, 64),
        budget_range=pick(args.budget_range, "budget-range", int, 10_000),
        oracle_max=pick(None, "oracle-max", int, 100_000),
        oracle_sample=pick(None, "oracle-sample", int, 20_000),
        nat_anchors=pick(None, "nat-anchors", int, 64),
        anchors=tuple(
            s.strip()
            for s in file_cfg.get("anchors", ",".join(RunConfig().anchors)).split(",")
        ),
    )
    actions = {
        "suite": args.suite or file_cfg.get("suite"),
        "query": args.query or file_cfg.get("query"),
        "json": args.json_path or file_cfg.get("json"),
    }
    return config, actions


class QueryContext:
    def __init__(self, config: RunConfig):
        self.config = config
        self.coh = CoherentSystem()
        self.injs = InjFamily(self.coh, budget=config.budget_range)
        self.bits = BitFamily(self.coh)
        self.digits = DigitFamily(self.bits)

    def load_tree(self, path: str) -> ExplicitTree:
        return ExplicitTree.from_text(Path(path).read_text())

    def cover(self, text: str):
        return parse_cover(text, self.digits, self.load_tree)

    def node(self, family, text: str):
        return parse_node(family, text)

    def target(self, text: str):
        if text.startswith("include(") and text.endswith(")"):
            return ("include", self.node(self.digits, text[8:-1]))
        if text.startswith("reach(") and text.endswith(")"):
            return ("reach", parse_cnf(text[6:-1]))
        raise UsageError(f"bad target {text!r}")


def run_query(expr: str, config: RunConfig) -> dict:
    tokens = split_args(expr)
    if not tokens:
        raise UsageError("empty query")
    cmd, args = tokens[0], tokens[1:]
    ctx = QueryContext(config)
    try:
        result = _dispatch(ctx, cmd, args)
    except (CNFSyntaxError, ValueError, KeyError, CoverUndecided) as err:
        if isinstance(err, UsageError):
            raise
        result = {"error": f"{type(err).__name__}: {err}"}
    return {
        "version": __version__,
        "config": config.as_dict(),
        "query": expr,
        "result": result,
    }


def _dispatch(ctx: QueryContext, cmd: str, args: list[str]) -> dict:
    if cmd == "eval-e":
        _arity(cmd, args, 2)
        return {"value": ctx.coh.eval_e(parse_cnf(args[0]), parse_cnf(args[1]))}
    if cmd == "delta-e":
        _arity(cmd, args, 2)
        delta = ctx.coh.delta_e(parse_cnf(args[0]), parse_cnf(args[1]))
        return {"delta": sorted(to_cnf(x) for x in delta)}
    if cmd == "delta-x":
        _arity(cmd, args, 2)
        a, b = parse_cnf(args[0]), parse_cnf(args[1])
        return {
            "delta": sorted(to_cnf(x) for x in ctx.bits.char_delta(a, b)),
            "candidates": sorted(to_cnf(x) for x in ctx.bits.char_delta_candidates(a, b)),
        }
    if cmd == "is-safe":
        _arity(cmd, args, 2)
        cover = ctx.cover(args[0])
        node = ctx.node(cover.family, args[1])
        return {"safe": is_safe(cover, node)}
    if cmd == "find-safe":
        _arity(cmd, args, 2)
        cover = ctx.cover(args[0])
        found = find_safe_point(cover, parse_cnf(args[1]), budget=ctx.config.budget_enum)
        return {"node": None if found is None else format_node(cover.family, found)}
    if cmd == "covers-within":
        _arity(cmd, args, 2)
        cover = ctx.cover(args[0])
        return {"covered": covers_within(cover, parse_cnf(args[1]))}
    if cmd == "isolate":
        _arity(cmd, args, 1)
        x = parse_point(args[0])
        u, v, box = isolating_box(x)
        return {
            "u": format_point(u),
            "v": format_point(v),
            "box": [format_interval(box.first), format_interval(box.second)],
            "checks": {"contains_own_pair": box.contains((x, neg(x)))},
        }
    if cmd == "simulate":
        targets = [ctx.target(t) for t in args]
        _, report = simulate_filter(ctx.digits, targets, budget=ctx.config.budget_enum)
        return report
    if cmd == "extend":
        targets = [ctx.target(t) for t in args]
        p, _ = simulate_filter(ctx.digits, targets, budget=ctx.config.budget_enum)
        return {"condition": serialize_condition(ctx.digits, p)}
    raise UsageError(f"unknown query command {cmd!r}")


def _arity(cmd, args, n):
    if len(args) != n:
        raise UsageError(f"{cmd} takes {n} arguments, got {len(args)}")


def emit(report: dict, json_path: str | None) -> None:
    text = json.dumps(report, sort_keys=True, indent=2)
    if json_path:
        Path(json_path).write_text(text + "\n")
    if "properties" in report:
        for prop in report["properties"]:
            mark = "PASS" if prop["passed"] else "FAIL"
            note = f"  [{prop['note']}]" if prop.get("note") else ""
            print(f"{mark} {report['suite']}::{prop['name']}{note}")
    else:
        print(text)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config, actions = merge_config(args)
    except (UsageError, FileNotFoundError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    if bool(actions["suite"]) == bool(actions["query"]):
        print("error: exactly one of --suite or --query is required", file=sys.stderr)
        return 2
    try:
        if actions["suite"]:
            report = run_suite(actions["suite"], config)
        else:
            report = run_query(actions["query"], config)
    except (UsageError, KeyError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    emit(report, actions["json"])
    if actions["suite"]:
        return 0 if report["pass"] else 1
    return 0 if "error" not in report["result"] else 1


if __name__ == "__main__":
    sys.exit(main())
