"""Drop traces that are truncated recordings of another trace in the set.

A trace counts as incomplete when its deduplicated edge set is a proper subset
of some other trace's edge set. Traces with identical edge sets are all kept.
Single-span traces have no edges and are therefore removed whenever any trace
with at least one edge exists.
"""

from __future__ import annotations

from dataclasses import dataclass

from .model import TraceSet, dumps, edge_set, trace_set_to_obj


@dataclass(frozen=True)
class FilterReport:
    kept: TraceSet
    removed: tuple[tuple[int, int], ...]
    """``(removed index, witness index)`` pairs, both indices into the input set."""
    kept_indices: tuple[int, ...] = ()
    edgeless_removed: int = 0


def filter_incomplete(ts: TraceSet) -> FilterReport:
    edges = [edge_set(t) for t in ts]
    n = len(edges)
    # Compare only against strictly larger sets; a proper superset must be larger.
    order = sorted(range(n), key=lambda i: len(edges[i]))
    maximal = [True] * n
    for pos, i in enumerate(order):
        ei = edges[i]
        for j in order[pos + 1 :]:
            if len(edges[j]) > len(ei) and ei < edges[j]:
                maximal[i] = False
                break
    kept_idx = tuple(i for i in range(n) if maximal[i])
    removed = []
    edgeless = 0
    for i in range(n):
        if maximal[i]:
            continue
        witness = next(k for k in kept_idx if edges[i] < edges[k])
        removed.append((i, witness))
        if not edges[i]:
            edgeless += 1
    return FilterReport(ts.subset(kept_idx), tuple(removed), kept_idx, edgeless)


def report_to_obj(report: FilterReport, ts: TraceSet) -> dict:
    return {
        "kept": trace_set_to_obj(report.kept),
        "removed": [
            {"traceId": ts[i].trace_id, "witnessTraceId": ts[w].trace_id} for i, w in report.removed
        ],
    }


def report_to_json(report: FilterReport, ts: TraceSet) -> str:
    return dumps(report_to_obj(report, ts))
