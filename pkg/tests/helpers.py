"""Trace generators and brute-force oracles shared by the test modules."""

from __future__ import annotations

import random
from collections import deque
from fractions import Fraction
from pathlib import Path

from tracegroup.model import Span, TraceSet, make_trace

DATA = Path(__file__).parent / "data"


def random_trace(rng: random.Random, trace_id: str, services: list[str], extra_spans: int = 0):
    """Random span tree using every service in ``services`` at least once."""
    names = list(services) + [rng.choice(services) for _ in range(extra_spans)]
    rng.shuffle(names)
    spans = []
    for k, name in enumerate(names):
        parent = None if k == 0 else f"s{rng.randrange(k)}"
        spans.append(Span(f"s{k}", parent, name))
    return make_trace(trace_id, spans)


def random_trace_set(rng: random.Random, n: int, vocab: int, max_services: int | None = None) -> TraceSet:
    pool = [f"svc{k}" for k in range(vocab)]
    max_services = max_services or vocab
    traces = []
    for i in range(n):
        size = rng.randint(1, min(max_services, vocab))
        traces.append(random_trace(rng, str(i), rng.sample(pool, size), extra_spans=rng.randint(0, 3)))
    return TraceSet(tuple(traces))


def chain(trace_id: str, services: list[str]):
    return make_trace(
        trace_id, [Span(f"s{k}", None if k == 0 else f"s{k-1}", s) for k, s in enumerate(services)]
    )


def from_edges(trace_id: str, root: str, edges: list[tuple[str, str]]):
    """Tree whose spans realise the given caller->callee edges (callers must already exist)."""
    spans = [Span("s0", None, root)]
    last = {root: "s0"}
    for caller, callee in edges:
        sid = f"s{len(spans)}"
        spans.append(Span(sid, last[caller], callee))
        last.setdefault(callee, sid)
    return make_trace(trace_id, spans)


def jaccard_oracle(a: set, b: set) -> Fraction:
    """Membership enumeration over the combined universe."""
    universe = list(a) + [x for x in b if x not in a]
    if not universe:
        return Fraction(1)
    both = sum(1 for x in universe if x in a and x in b)
    return Fraction(both, len(universe))


def bfs_components(n: int, edges) -> list[frozenset[int]]:
    adj = [[] for _ in range(n)]
    for i, j in edges:
        adj[i].append(j)
        adj[j].append(i)
    seen = [False] * n
    out = []
    for s in range(n):
        if seen[s]:
            continue
        comp = []
        q = deque([s])
        seen[s] = True
        while q:
            v = q.popleft()
            comp.append(v)
            for w in adj[v]:
                if not seen[w]:
                    seen[w] = True
                    q.append(w)
        out.append(frozenset(comp))
    return out


def brute_edges(encodings, threshold: Fraction, sim) -> set[tuple[int, int]]:
    n = len(encodings)
    return {
        (i, j) for i in range(n) for j in range(i + 1, n) if sim(encodings[i], encodings[j]) >= threshold
    }


def truncate(trace, rng: random.Random, new_id: str):
    """Copy of ``trace`` with some leaf spans dropped, as a lost-span recording would look."""
    spans = list(trace.spans)
    for _ in range(rng.randint(1, max(1, len(spans) - 1))):
        parents = {s.parent_span_id for s in spans}
        leaves = [s for s in spans if s.span_id not in parents and s.parent_span_id is not None]
        if not leaves:
            break
        spans.remove(rng.choice(leaves))
    return make_trace(new_id, spans)


def with_injected_subsets(rng: random.Random, ts: TraceSet, count: int) -> TraceSet:
    traces = list(ts.traces)
    for k in range(count):
        traces.append(truncate(rng.choice(ts.traces), rng, f"cut{k}"))
    rng.shuffle(traces)
    return TraceSet(tuple(traces))
