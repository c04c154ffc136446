"""Trace data model, JSON ingestion and the derived views used by encoders.

A trace is a forest of spans. Each span names the service that executed it and
optionally points at the span that called it. Everything downstream works on
three projections of a trace: its service set, its caller->callee edges and
its depth.

Input documents look like::

    {"traces": [{"traceId": "t0",
                 "spans": [{"spanId": "s1", "parentSpanId": null, "service": "Front End"},
                           {"spanId": "s2", "parentSpanId": "s1", "service": "Friends"}]}]}
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from typing import IO, Any, Iterator, Optional, Union

from .errors import (
    CycleDetectedError,
    DanglingParentError,
    DuplicateSpanIdError,
    DuplicateTraceIdError,
    EmptyTraceError,
    MalformedJsonError,
    SchemaViolationError,
)

CallEdge = tuple[str, str]


@dataclass(frozen=True)
class Span:
    span_id: str
    parent_span_id: Optional[str]
    service: str
    start_time: Optional[float] = None
    duration: Optional[float] = None

    @property
    def is_root(self) -> bool:
        return self.parent_span_id is None


@dataclass(frozen=True)
class Trace:
    """An immutable, validated span forest.

    Construct through :func:`make_trace` (or the loader) so the structural
    checks run; the dataclass constructor itself does not validate.
    """

    trace_id: str
    spans: tuple[Span, ...]
    _children: dict = field(default=None, repr=False, compare=False, hash=False)

    def children(self) -> dict[str, list[Span]]:
        if self._children is None:
            kids: dict[str, list[Span]] = {s.span_id: [] for s in self.spans}
            for s in self.spans:
                if s.parent_span_id is not None:
                    kids[s.parent_span_id].append(s)
            object.__setattr__(self, "_children", kids)
        return self._children

    @property
    def roots(self) -> list[Span]:
        return [s for s in self.spans if s.is_root]

    def __len__(self) -> int:
        return len(self.spans)


@dataclass(frozen=True)
class TraceSet:
    traces: tuple[Trace, ...] = ()

    def __len__(self) -> int:
        return len(self.traces)

    def __iter__(self) -> Iterator[Trace]:
        return iter(self.traces)

    def __getitem__(self, index: int) -> Trace:
        return self.traces[index]

    @property
    def trace_ids(self) -> list[str]:
        return [t.trace_id for t in self.traces]

    def index_of(self) -> dict[str, int]:
        return {t.trace_id: i for i, t in enumerate(self.traces)}

    def subset(self, indices) -> "TraceSet":
        return TraceSet(tuple(self.traces[i] for i in indices))


def make_trace(trace_id: str, spans) -> Trace:
    """Build a :class:`Trace` after checking ids, parent links and acyclicity."""
    spans = tuple(spans)
    if not spans:
        raise EmptyTraceError(f"trace {trace_id!r} has no spans")
    by_id: dict[str, Span] = {}
    for s in spans:
        if not s.service.strip():
            raise SchemaViolationError(f"trace {trace_id!r}: span {s.span_id!r} has a blank service name")
        if s.span_id in by_id:
            raise DuplicateSpanIdError(f"trace {trace_id!r}: duplicate spanId {s.span_id!r}")
        by_id[s.span_id] = s
    for s in spans:
        if s.parent_span_id is None:
            continue
        if s.parent_span_id == s.span_id:
            raise CycleDetectedError(f"trace {trace_id!r}: span {s.span_id!r} is its own parent")
        if s.parent_span_id not in by_id:
            raise DanglingParentError(
                f"trace {trace_id!r}: span {s.span_id!r} references unknown parent {s.parent_span_id!r}"
            )
    _check_acyclic(trace_id, by_id)
    return Trace(trace_id, spans)


def _check_acyclic(trace_id: str, by_id: dict[str, Span]) -> None:
    # 0 = unvisited, 1 = on current parent chain, 2 = known to reach a root
    state = dict.fromkeys(by_id, 0)
    for start in by_id:
        chain = []
        cur: Optional[str] = start
        while cur is not None and state[cur] == 0:
            state[cur] = 1
            chain.append(cur)
            cur = by_id[cur].parent_span_id
        if cur is not None and state[cur] == 1:
            raise CycleDetectedError(f"trace {trace_id!r}: parent links form a cycle through {cur!r}")
        for sid in chain:
            state[sid] = 2


def services_of(trace: Trace) -> frozenset[str]:
    return frozenset(s.service for s in trace.spans)


def edge_multiset(trace: Trace) -> Counter:
    """Caller->callee service pairs, one count per parent-child span pair."""
    by_id = {s.span_id: s for s in trace.spans}
    return Counter(
        (by_id[s.parent_span_id].service, s.service) for s in trace.spans if s.parent_span_id is not None
    )


def edges_of(trace: Trace) -> tuple[Counter, frozenset[CallEdge]]:
    multi = edge_multiset(trace)
    return multi, frozenset(multi)


def edge_set(trace: Trace) -> frozenset[CallEdge]:
    return frozenset(edge_multiset(trace))


def depth_of(trace: Trace) -> int:
    """Number of spans on the longest root-to-leaf path."""
    kids = trace.children()
    best = 0
    stack = [(r.span_id, 1) for r in trace.roots]
    while stack:
        sid, d = stack.pop()
        best = max(best, d)
        stack.extend((c.span_id, d + 1) for c in kids[sid])
    return best


# -- JSON ------------------------------------------------------------------

_NUMBER = (int, float)


def _require(obj: dict, key: str, types, where: str, nullable: bool = False):
    if key not in obj:
        raise SchemaViolationError(f"{where}: missing required field {key!r}")
    value = obj[key]
    if value is None and nullable:
        return None
    if isinstance(value, bool) or not isinstance(value, types):
        raise SchemaViolationError(f"{where}: field {key!r} has wrong type {type(value).__name__}")
    return value


def _optional_number(obj: dict, key: str, where: str) -> Optional[float]:
    value = obj.get(key)
    if value is None:
        return None
    if isinstance(value, bool) or not isinstance(value, _NUMBER):
        raise SchemaViolationError(f"{where}: field {key!r} must be a number")
    return value


def _parse_span(raw: Any, where: str) -> Span:
    if not isinstance(raw, dict):
        raise SchemaViolationError(f"{where}: span must be an object")
    span_id = _require(raw, "spanId", str, where)
    where = f"{where} span {span_id!r}"
    parent = _require(raw, "parentSpanId", str, where, nullable=True)
    service = _require(raw, "service", str, where)
    return Span(
        span_id=span_id,
        parent_span_id=parent,
        service=service,
        start_time=_optional_number(raw, "startTime", where),
        duration=_optional_number(raw, "duration", where),
    )


def trace_set_from_obj(doc: Any) -> TraceSet:
    if not isinstance(doc, dict):
        raise SchemaViolationError("top-level JSON value must be an object")
    raw_traces = _require(doc, "traces", list, "document")
    traces = []
    seen: set[str] = set()
    for index, raw in enumerate(raw_traces):
        where = f"traces[{index}]"
        if not isinstance(raw, dict):
            raise SchemaViolationError(f"{where}: trace must be an object")
        if raw.get("traceId") is None:
            trace_id = str(index)
        else:
            trace_id = _require(raw, "traceId", str, where)
        raw_spans = _require(raw, "spans", list, where)
        trace = make_trace(trace_id, (_parse_span(s, where) for s in raw_spans))
        if trace_id in seen:
            raise DuplicateTraceIdError(f"duplicate traceId {trace_id!r}")
        seen.add(trace_id)
        traces.append(trace)
    return TraceSet(tuple(traces))


def load_trace_set(source: Union[bytes, str, IO]) -> TraceSet:
    """Parse and validate a trace document.

    ``source`` may be raw bytes, text, or a readable file object (binary or
    text). Traces keep their file order.
    """
    if hasattr(source, "read"):
        source = source.read()
    if isinstance(source, (bytes, bytearray)):
        try:
            source = bytes(source).decode("utf-8")
        except UnicodeDecodeError as exc:
            raise MalformedJsonError(f"input is not UTF-8: {exc}") from exc
    try:
        doc = json.loads(source)
    except json.JSONDecodeError as exc:
        raise MalformedJsonError(f"invalid JSON: {exc}") from exc
    return trace_set_from_obj(doc)


def span_to_obj(span: Span) -> dict:
    out: dict[str, Any] = {"spanId": span.span_id, "parentSpanId": span.parent_span_id, "service": span.service}
    if span.start_time is not None:
        out["startTime"] = span.start_time
    if span.duration is not None:
        out["duration"] = span.duration
    return out


def trace_set_to_obj(ts: TraceSet) -> dict:
    return {"traces": [{"traceId": t.trace_id, "spans": [span_to_obj(s) for s in t.spans]} for t in ts]}


def dumps(obj: Any) -> str:
    """Canonical JSON text used for every artifact: stable, UTF-8, newline-terminated."""
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


def dump_trace_set(ts: TraceSet) -> str:
    return dumps(trace_set_to_obj(ts))
