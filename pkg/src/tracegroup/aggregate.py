"""Group-level aggregate of traces and its DOT / JSON renderings.

The aggregate keeps the service universe of a group, how many member traces
contain each service, and how often each service called each other service
summed over the group. Two DOT views are produced from it: the whole group,
with services common to every trace in yellow and the rest in gray, and a
single chosen service in green with its outgoing calls weighted by count.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Sequence

from .errors import EmptyGroupError, SchemaViolationError, UnknownServiceError
from .model import Trace, dumps, edge_multiset

YELLOW = "#FFFF00"
GRAY = "#D3D3D3"
GREEN = "#90EE90"

BASE_WIDTH = 0.5
WIDTH_SCALE = 1.0
BASE_PENWIDTH = 1.0
PENWIDTH_SCALE = 4.0


@dataclass(frozen=True)
class AggregateGroup:
    total_traces: int
    services: tuple[str, ...]
    presence: tuple[int, ...]
    calls: tuple[tuple[int, ...], ...]

    def index(self, service: str) -> int:
        try:
            return self.services.index(service)
        except ValueError:
            raise UnknownServiceError(f"service {service!r} is not part of this group") from None

    def presence_map(self) -> dict[str, int]:
        return dict(zip(self.services, self.presence))

    def call_row(self, service: str) -> dict[str, int]:
        """Nonzero outgoing call counts of ``service``."""
        row = self.calls[self.index(service)]
        return {callee: c for callee, c in zip(self.services, row) if c}


def build_aggregate(group_traces: Sequence[Trace]) -> AggregateGroup:
    if not group_traces:
        raise EmptyGroupError("an aggregate needs at least one trace")
    services: dict[str, int] = {}
    for trace in group_traces:
        for span in trace.spans:
            services.setdefault(span.service, len(services))
    n = len(services)
    presence = [0] * n
    calls = [[0] * n for _ in range(n)]
    for trace in group_traces:
        for name in {s.service for s in trace.spans}:
            presence[services[name]] += 1
        for (caller, callee), count in edge_multiset(trace).items():
            calls[services[caller]][services[callee]] += count
    return AggregateGroup(
        total_traces=len(group_traces),
        services=tuple(services),
        presence=tuple(presence),
        calls=tuple(tuple(r) for r in calls),
    )


def aggregate_to_obj(agg: AggregateGroup) -> dict:
    return {
        "totalTraces": agg.total_traces,
        "services": list(agg.services),
        "presence": list(agg.presence),
        "calls": [list(r) for r in agg.calls],
    }


def aggregate_to_json(agg: AggregateGroup) -> str:
    return dumps(aggregate_to_obj(agg))


def aggregate_from_json(text: str) -> AggregateGroup:
    try:
        doc = json.loads(text)
        agg = AggregateGroup(
            total_traces=int(doc["totalTraces"]),
            services=tuple(doc["services"]),
            presence=tuple(doc["presence"]),
            calls=tuple(tuple(r) for r in doc["calls"]),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaViolationError(f"bad aggregate document: {exc}") from exc
    n = len(agg.services)
    if len(agg.presence) != n or len(agg.calls) != n or any(len(r) != n for r in agg.calls):
        raise SchemaViolationError("aggregate arrays disagree in size")
    return agg


# -- DOT -------------------------------------------------------------------


def _quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n") + '"'


def _num(x: float) -> str:
    return f"{x:.3f}"


def node_width(agg: AggregateGroup, i: int) -> float:
    return BASE_WIDTH + WIDTH_SCALE * agg.presence[i] / agg.total_traces


def _group_color(agg: AggregateGroup, i: int) -> str:
    return YELLOW if agg.presence[i] == agg.total_traces else GRAY


def _node_line(agg: AggregateGroup, i: int, color: str) -> str:
    return f"  {_quote(agg.services[i])} [fillcolor={_quote(color)}, width={_num(node_width(agg, i))}];"


_HEADER = ["digraph G {", "  node [style=filled, fixedsize=true];"]


def render_group_dot(agg: AggregateGroup) -> str:
    lines = list(_HEADER)
    lines += [_node_line(agg, i, _group_color(agg, i)) for i in range(len(agg.services))]
    for i, row in enumerate(agg.calls):
        for j, count in enumerate(row):
            if count:
                lines.append(f"  {_quote(agg.services[i])} -> {_quote(agg.services[j])} [label={_quote(str(count))}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def render_service_dot(agg: AggregateGroup, service: str) -> str:
    a = agg.index(service)
    row = agg.calls[a]
    max_out = max(row, default=0)
    lines = list(_HEADER)
    lines.append(_node_line(agg, a, GREEN))
    if max_out:
        for j, count in enumerate(row):
            if count and j != a:
                lines.append(_node_line(agg, j, _group_color(agg, j)))
        for j, count in enumerate(row):
            if count:
                pen = BASE_PENWIDTH + PENWIDTH_SCALE * count / max_out
                lines.append(f"  {_quote(agg.services[a])} -> {_quote(agg.services[j])} [penwidth={_num(pen)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
