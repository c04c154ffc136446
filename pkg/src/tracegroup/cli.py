"""Command-line entry point.

Exit status: 0 on success, 1 on usage errors, 2 when input data cannot be read
or fails validation. Artifacts go to ``--output`` (stdout when omitted);
diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from contextlib import contextmanager
from typing import Optional

from .aggregate import aggregate_to_json, build_aggregate, render_group_dot, render_service_dot
from .errors import TraceGroupError
from .grouping import get_groups, grouping_to_obj
from .model import TraceSet, dump_trace_set, dumps, load_trace_set
from .preprocess import filter_incomplete, report_to_json
from .similarity import EncodingKind
from .threshold import find_optimal_threshold, result_to_obj

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2


class UsageError(Exception):
    pass


class DataError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


class _Timer:
    def __init__(self, enabled: bool):
        self.enabled = enabled

    @contextmanager
    def stage(self, name: str):
        start = time.perf_counter()
        yield
        if self.enabled:
            print(f"time {name}: {time.perf_counter() - start:.6f}s", file=sys.stderr)


def _log(msg: str) -> None:
    print(msg, file=sys.stderr)


def _read_traces(path: str) -> TraceSet:
    try:
        if path == "-":
            return load_trace_set(sys.stdin.buffer.read())
        with open(path, "rb") as fh:
            return load_trace_set(fh.read())
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc


def _write(path: Optional[str], text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise DataError(f"cannot write {path}: {exc}") from exc


def _load(args, timer: _Timer) -> TraceSet:
    with timer.stage("load"):
        ts = _read_traces(args.input)
    if getattr(args, "preprocess", False):
        with timer.stage("preprocess"):
            report = filter_incomplete(ts)
        _log(f"preprocess: kept {len(report.kept)}, removed {len(report.removed)}")
        ts = report.kept
    return ts


def _threshold(value: str) -> float:
    try:
        t = float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {value!r}") from None
    if not 0.0 <= t <= 1.0:
        raise argparse.ArgumentTypeError(f"threshold must lie in [0, 1], got {value}")
    return t


def _goal(value: str) -> int:
    try:
        g = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {value!r}") from None
    if g < 1:
        raise argparse.ArgumentTypeError(f"goal group count must be >= 1, got {value}")
    return g


def cmd_preprocess(args, timer: _Timer) -> int:
    with timer.stage("load"):
        ts = _read_traces(args.input)
    with timer.stage("preprocess"):
        report = filter_incomplete(ts)
    _write(args.output, dump_trace_set(report.kept))
    if args.removed:
        _write(args.removed, report_to_json(report, ts))
    _log(f"kept {len(report.kept)}, removed {len(report.removed)}")
    if report.edgeless_removed:
        _log(f"warning: {report.edgeless_removed} single-span trace(s) removed as subsets of traces with edges")
    return EXIT_OK


def cmd_group(args, timer: _Timer) -> int:
    ts = _load(args, timer)
    with timer.stage("group"):
        grouping = get_groups(ts, args.encoding, args.threshold, workers=args.workers)
    _write(args.output, dumps(grouping_to_obj(grouping, ts, threshold=args.threshold)))
    _log(f"{grouping.num_groups} group(s) from {len(ts)} trace(s)")
    return EXIT_OK


def cmd_find_threshold(args, timer: _Timer) -> int:
    ts = _load(args, timer)
    with timer.stage("search"):
        result = find_optimal_threshold(ts, args.encoding, args.goal_groups, workers=args.workers)
    _write(args.output, dumps(result_to_obj(result, ts)))
    _log(f"threshold {float(result.threshold):g} gives {result.num_groups} group(s) (goal {args.goal_groups})")
    return EXIT_OK


def _group_members(args, ts: TraceSet, timer: _Timer) -> list[int]:
    if args.groups:
        try:
            with open(args.groups, "rb") as fh:
                doc = json.loads(fh.read().decode("utf-8"))
            groups = [g["members"] for g in doc["groups"]]
        except OSError as exc:
            raise DataError(f"cannot read {args.groups}: {exc}") from exc
        except (ValueError, KeyError, TypeError) as exc:
            raise DataError(f"bad grouping file {args.groups}: {exc}") from exc
        if not 0 <= args.group_index < len(groups):
            raise DataError(f"group index {args.group_index} out of range ({len(groups)} groups)")
        index = ts.index_of()
        missing = [m for m in groups[args.group_index] if m not in index]
        if missing:
            raise DataError(f"grouping refers to unknown traceIds: {missing}")
        return [index[m] for m in groups[args.group_index]]
    with timer.stage("group"):
        if args.threshold is not None:
            grouping = get_groups(ts, args.encoding, args.threshold)
        else:
            grouping = find_optimal_threshold(ts, args.encoding, args.goal_groups).grouping
    if not 0 <= args.group_index < grouping.num_groups:
        raise DataError(f"group index {args.group_index} out of range ({grouping.num_groups} groups)")
    return list(grouping.groups[args.group_index].members)


def cmd_aggregate(args, timer: _Timer) -> int:
    if args.groups is None and args.threshold is None and args.goal_groups is None:
        raise UsageError("aggregate needs --groups, --threshold or --goal-groups")
    fmt = args.format or ("dot" if args.service else "json")
    if args.service and fmt != "dot":
        raise UsageError("--service renders a DOT view; use --format dot")
    ts = _load(args, timer)
    members = _group_members(args, ts, timer)
    with timer.stage("aggregate"):
        agg = build_aggregate([ts[i] for i in members])
        if args.service:
            text = render_service_dot(agg, args.service)
        elif fmt == "dot":
            text = render_group_dot(agg)
        else:
            text = aggregate_to_json(agg)
    _write(args.output, text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="tracegroup", description="Filter, group and visualize distributed traces.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    common = _Parser(add_help=False)
    common.add_argument("--input", required=True, help="trace JSON file ('-' for stdin)")
    common.add_argument("--output", help="artifact path (default stdout)")
    common.add_argument("--time", action="store_true", help="print stage durations to stderr")

    grouped = _Parser(add_help=False)
    grouped.add_argument(
        "--encoding", type=EncodingKind.parse, default=EncodingKind.SERVICES,
        help="services, structure or depth (default services)",
    )
    grouped.add_argument("--preprocess", action="store_true", help="drop incomplete traces first")
    grouped.add_argument("--workers", type=int, default=1, help=argparse.SUPPRESS)

    p = sub.add_parser("preprocess", parents=[common], help="remove incomplete traces")
    p.add_argument("--removed", help="also write the removal report JSON here")
    p.set_defaults(func=cmd_preprocess)

    p = sub.add_parser("group", parents=[common, grouped], help="group traces at a fixed threshold")
    p.add_argument("--threshold", type=_threshold, required=True)
    p.set_defaults(func=cmd_group)

    p = sub.add_parser("find-threshold", parents=[common, grouped], help="search a threshold for a goal group count")
    p.add_argument("--goal-groups", type=_goal, required=True)
    p.set_defaults(func=cmd_find_threshold)

    p = sub.add_parser("aggregate", parents=[common, grouped], help="aggregate one group as JSON or DOT")
    source = p.add_mutually_exclusive_group()
    source.add_argument("--groups", help="grouping JSON produced by 'group' or 'find-threshold'")
    source.add_argument("--threshold", type=_threshold)
    source.add_argument("--goal-groups", type=_goal)
    p.add_argument("--group-index", type=int, default=0)
    p.add_argument("--format", choices=["json", "dot"])
    p.add_argument("--service", help="render the chosen-service view for this service")
    p.set_defaults(func=cmd_aggregate)
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    timer = _Timer(getattr(args, "time", False))
    try:
        return args.func(args, timer)
    except UsageError as exc:
        print(f"tracegroup: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DataError, TraceGroupError) as exc:
        print(f"tracegroup: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
