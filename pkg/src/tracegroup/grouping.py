"""Connected components of the similarity graph and representative election."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Union

from .errors import EmptyGroupError
from .model import TraceSet
from .similarity import EncodingKind, Ratio, SimilarityGraph, SimilarityIndex, as_ratio


class DisjointSetUnion:
    """Union by size with path compression over the elements ``0..n-1``."""

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.size = [1] * n

    def __len__(self) -> int:
        return len(self.parent)

    def _check(self, i: int) -> None:
        if not 0 <= i < len(self.parent):
            raise IndexError(f"element {i} out of range for {len(self.parent)} elements")

    def _root(self, i: int) -> int:
        parent = self.parent
        root = i
        while parent[root] != root:
            root = parent[root]
        while parent[i] != root:
            parent[i], i = root, parent[i]
        return root

    def find(self, i: int) -> int:
        self._check(i)
        return self._root(i)

    def union(self, i: int, j: int) -> bool:
        """Merge the sets holding ``i`` and ``j``; False if already together."""
        self._check(i)
        self._check(j)
        ri, rj = self._root(i), self._root(j)
        if ri == rj:
            return False
        if self.size[ri] < self.size[rj]:
            ri, rj = rj, ri
        self.parent[rj] = ri
        self.size[ri] += self.size[rj]
        return True

    def sets(self) -> list[list[int]]:
        """All sets as sorted member lists, ordered by smallest member."""
        by_root: dict[int, list[int]] = {}
        for i in range(len(self.parent)):
            by_root.setdefault(self._root(i), []).append(i)
        return sorted(by_root.values(), key=lambda m: m[0])


def components(g: SimilarityGraph) -> list[list[int]]:
    dsu = DisjointSetUnion(g.node_count)
    for i, j in g.edges:
        dsu.union(i, j)
    return dsu.sets()


def pick_representative(members: Iterable[int], g: SimilarityGraph) -> int:
    """Highest-degree member; ties go to the smallest trace index."""
    members = list(members)
    if not members:
        raise EmptyGroupError("cannot pick a representative of an empty group")
    deg = g.degrees()
    return min(members, key=lambda i: (-deg[i], i))


@dataclass(frozen=True)
class Group:
    members: tuple[int, ...]
    representative: int


@dataclass(frozen=True)
class TraceGrouping:
    groups: tuple[Group, ...]
    threshold: Fraction
    kind: EncodingKind

    @property
    def num_groups(self) -> int:
        return len(self.groups)

    def member_sets(self) -> list[frozenset[int]]:
        return [frozenset(g.members) for g in self.groups]


def grouping_from_graph(g: SimilarityGraph) -> TraceGrouping:
    groups = tuple(Group(tuple(m), pick_representative(m, g)) for m in components(g))
    return TraceGrouping(groups, g.threshold, g.kind)


def get_groups(
    ts: TraceSet,
    kind: Union[str, EncodingKind],
    threshold: Ratio,
    workers: int = 1,
    index: Optional[SimilarityIndex] = None,
) -> TraceGrouping:
    """Encode, connect, split into components and elect representatives.

    Pass a prebuilt ``index`` to skip re-encoding when probing many thresholds
    on one trace set.
    """
    t = as_ratio(threshold)
    if index is None:
        index = SimilarityIndex.from_traces(ts, kind)
    return grouping_from_graph(index.graph(t, workers=workers))


def grouping_to_obj(grouping: TraceGrouping, ts: TraceSet, threshold: Optional[float] = None) -> dict:
    ids = ts.trace_ids
    return {
        "encoding": grouping.kind.value,
        "threshold": float(grouping.threshold) if threshold is None else threshold,
        "numGroups": grouping.num_groups,
        "groups": [
            {"members": [ids[i] for i in g.members], "representative": ids[g.representative]}
            for g in grouping.groups
        ],
    }
