"""Command line: ``sparse10adic {run,stats,verify,oracle}``."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from . import oracle, records, stats_report
from .forceability import DEFAULT_CAP, verify_record
from .greedy_engine import (
    DEFAULT_HEADROOM,
    DEFAULT_LOOKAHEAD,
    DEFAULT_TIE_DEPTH,
    GreedyEngine,
    RunRecord,
    record_from_states,
)

# 1013 odd digits after the seed, the size of the published tables
DEFAULT_DIGITS = 1014

EXIT_OK, EXIT_FAIL, EXIT_ERROR, EXIT_INTERRUPTED = 0, 1, 2, 130


@dataclass
class RunConfig:
    p1: int = 3
    target_digits: int = DEFAULT_DIGITS
    lookahead_cap: int = DEFAULT_LOOKAHEAD
    tie_depth_cap: int = DEFAULT_TIE_DEPTH
    headroom: int = DEFAULT_HEADROOM
    output_format: str = "json"
    output_path: Optional[str] = None

    def __post_init__(self):
        if self.p1 < 1:
            raise ValueError("p1 must be >= 1")
        if min(self.target_digits, self.lookahead_cap, self.tie_depth_cap, self.headroom) < 1:
            raise ValueError("digit target and caps must be >= 1")

    def engine(self) -> GreedyEngine:
        return GreedyEngine(self.lookahead_cap, self.tie_depth_cap, self.headroom)


def _err(msg: str) -> None:
    print(f"sparse10adic: {msg}", file=sys.stderr)


def execute_run(cfg: RunConfig, progress_every: int = 0) -> tuple[RunRecord, bool]:
    """Run the engine; on Ctrl-C return what was found, marked incomplete."""
    engine = cfg.engine()
    states = []
    interrupted = False
    try:
        for s in engine.iter_run(cfg.p1):
            states.append(s)
            n = len(states)
            if progress_every and (n % progress_every == 0 or n == cfg.target_digits):
                print(f"digits {n}/{cfg.target_digits}  level {s.known_level}", file=sys.stderr)
            if n == cfg.target_digits:
                break
    except KeyboardInterrupt:
        interrupted = True
    if not states:
        raise KeyboardInterrupt
    record = record_from_states(cfg.p1, states, incomplete=interrupted,
                                config=engine.config(cfg.p1, cfg.target_digits))
    return record, interrupted


def _output_path(template: str, p1: int, sweep: bool) -> str:
    if template == "-":
        return template
    if sweep and "{p1}" not in template:
        raise ValueError("with several --seed-p1 values the output path needs a {p1} placeholder")
    return template.replace("{p1}", str(p1))


def cmd_run(args) -> int:
    seeds = args.seed_p1 or [args.p1]
    status = EXIT_OK
    for p1 in seeds:
        cfg = RunConfig(p1, args.digits, args.lookahead, args.tie_depth, args.headroom,
                        "json", _output_path(args.output, p1, len(seeds) > 1))
        try:
            record, interrupted = execute_run(cfg, 0 if args.quiet else args.progress_every)
        except KeyboardInterrupt:
            _err("interrupted before the first digit")
            return EXIT_INTERRUPTED
        try:
            if cfg.output_path == "-":
                sys.stdout.write(records.dumps(record))
            else:
                records.dump(record, cfg.output_path)
                if not args.quiet:
                    print(f"wrote {cfg.output_path} ({len(record.digits)} digits)", file=sys.stderr)
        except OSError as exc:
            _err(f"cannot write record: {exc}")
            return EXIT_ERROR
        if interrupted:
            _err("interrupted; partial record marked incomplete")
            return EXIT_INTERRUPTED
    return status


def _load(path: str) -> RunRecord:
    try:
        return records.load(path)
    except OSError as exc:
        raise records.RecordFormatError(f"cannot read {path}: {exc}") from exc


def build_tables(record: RunRecord, table: str, slice: Optional[str], prefix: Optional[int],
                 include_seed: bool = False) -> list[stats_report.Table]:
    out = []
    if table in ("gaps", "all"):
        slices = [slice] if slice else (["q1", "q2", "q3", "q4"] if table == "all" else ["full"])
        for s in slices:
            out.append(stats_report.gaps_table(stats_report.gap_histogram(record, s), s))
    if table in ("digits", "all"):
        prefixes = [prefix] if prefix else [None]
        for p in prefixes:
            out.append(stats_report.digits_table(stats_report.digit_frequency(record, p, include_seed)))
    if table in ("matrix", "probabilities", "all"):
        m = stats_report.digit_gap_matrix(record)
        if table in ("matrix", "all"):
            out.append(stats_report.matrix_table(m))
        if table in ("probabilities", "all"):
            out.append(stats_report.probabilities_table(m))
    return out


def cmd_stats(args) -> int:
    try:
        record = _load(args.record)
        tables = build_tables(record, args.table, args.slice, args.prefix, args.include_seed)
    except (records.RecordFormatError, ValueError) as exc:
        _err(str(exc))
        return EXIT_ERROR
    text = stats_report.render(tables, args.format)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _summary(label: str, record: RunRecord, checks) -> dict:
    return {
        "record": label,
        "p1": record.p1,
        "digits": len(record.digits),
        "incomplete": record.incomplete,
        "passed": all(c.passed for c in checks),
        "checks": [{"name": c.name, "passed": c.passed, "witness": c.detail or None} for c in checks],
    }


def cmd_verify(args) -> int:
    summaries = []
    try:
        if args.fresh:
            for p1 in args.seed_p1 or [args.p1]:
                record, _ = execute_run(RunConfig(p1, args.digits), 0)
                summaries.append(_summary(f"fresh p1={p1}", record, verify_record(record, args.cap)))
        else:
            if not args.record:
                _err("give a record path or --fresh")
                return EXIT_ERROR
            record = _load(args.record)
            summaries.append(_summary(args.record, record, verify_record(record, args.cap)))
    except records.RecordFormatError as exc:
        _err(str(exc))
        return EXIT_ERROR
    ok = all(s["passed"] for s in summaries)
    json.dump({"passed": ok, "runs": summaries}, sys.stdout, indent=2)
    sys.stdout.write("\n")
    for s in summaries:
        for c in s["checks"]:
            if not c["passed"]:
                _err(f"{s['record']}: FAIL {c['name']}: {c['witness']}")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_oracle(args) -> int:
    report = oracle.run_oracle(bound=args.bound, max_k=args.max_k, class_levels=args.class_levels,
                               lemma2_cases=args.lemma2_cases, prefix_depth=args.prefix_depth,
                               seed=args.seed)
    out = {
        "passed": report.passed,
        "scope": report.scope,
        "checks": [{"name": c.name, "params": c.params, "passed": c.passed, "witness": c.witness,
                    **({"detail": c.detail} if c.name == "greedy prefix" else {})}
                   for c in report.checks],
    }
    json.dump(out, sys.stdout, indent=2)
    sys.stdout.write("\n")
    for c in report.checks:
        if not c.passed:
            _err(f"FAIL {c.name} {c.params}: {c.witness}")
    return EXIT_OK if report.passed else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="sparse10adic", description=__doc__)
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    def engine_args(p):
        p.add_argument("--p1", type=int, default=3, help="seed exponent (default 3)")
        p.add_argument("--seed-p1", type=int, nargs="+", metavar="P1",
                       help="run several seeds in one invocation")
        p.add_argument("--digits", type=int, default=DEFAULT_DIGITS,
                       help=f"nonzero digits to construct, seed digit included (default {DEFAULT_DIGITS})")

    p = sub.add_parser("run", help="construct the greedy expansion and write a run record")
    engine_args(p)
    p.add_argument("--lookahead", type=int, default=DEFAULT_LOOKAHEAD)
    p.add_argument("--tie-depth", type=int, default=DEFAULT_TIE_DEPTH)
    p.add_argument("--headroom", type=int, default=DEFAULT_HEADROOM)
    p.add_argument("-o", "--output", default="run-p{p1}.json",
                   help="record path, '{p1}' is substituted, '-' for stdout (default run-p{p1}.json)")
    p.add_argument("--progress-every", type=int, default=100)
    p.add_argument("-q", "--quiet", action="store_true")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("stats", help="print the gap and digit tables of a record")
    p.add_argument("record")
    p.add_argument("--table", choices=["gaps", "digits", "matrix", "probabilities", "all"], default="all")
    p.add_argument("--slice", choices=list(stats_report.SLICES))
    p.add_argument("--prefix", type=int, help="count only the first N digits after the seed")
    p.add_argument("--include-seed", action="store_true")
    p.add_argument("--format", choices=["text", "csv", "json"], default="text")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("verify", help="check theorems and corollaries on a record or a fresh run")
    p.add_argument("record", nargs="?")
    p.add_argument("--fresh", action="store_true")
    engine_args(p)
    p.add_argument("--cap", type=int, default=DEFAULT_CAP)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("oracle", help="brute-force cross-checks")
    p.add_argument("--bound", type=int, default=oracle.DEFAULT_BOUND)
    p.add_argument("--max-k", type=int, default=8)
    p.add_argument("--class-levels", type=int, default=6)
    p.add_argument("--lemma2-cases", type=int, default=100)
    p.add_argument("--prefix-depth", type=int, default=4)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_oracle)
    return ap


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except ValueError as exc:
        _err(str(exc))
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
