"""Pick a similarity threshold whose group count lands closest to a goal.

The group count is a non-decreasing step function of the threshold: raising
it can only remove similarity-graph edges. :func:`find_optimal_threshold`
bisects [0, 1] on that function; :func:`sweep_optimal_threshold` evaluates
one point on every plateau and serves as the exact reference.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .errors import EmptyTraceSetError
from .grouping import TraceGrouping, get_groups, grouping_to_obj
from .model import TraceSet
from .similarity import EncodingKind, SimilarityIndex

MIN_BRACKET = 1e-6
MAX_ITERATIONS = 40


@dataclass(frozen=True)
class ThresholdSearchResult:
    threshold: Fraction
    num_groups: int
    grouping: TraceGrouping
    probes: tuple[tuple[Fraction, int], ...]


def _check(ts: TraceSet, goal_groups: int) -> None:
    if len(ts) == 0:
        raise EmptyTraceSetError("cannot choose a threshold for an empty trace set")
    if isinstance(goal_groups, bool) or not isinstance(goal_groups, int) or goal_groups < 1:
        raise ValueError(f"goal group count must be an integer >= 1, got {goal_groups!r}")


def _best(probes, goal_groups: int) -> tuple[Fraction, int]:
    # closest to goal first, then the larger threshold
    return min(probes, key=lambda p: (abs(p[1] - goal_groups), -p[0]))


def find_optimal_threshold(
    ts: TraceSet, kind: Union[str, EncodingKind], goal_groups: int, workers: int = 1
) -> ThresholdSearchResult:
    """Binary search for the threshold giving ``goal_groups`` groups.

    Too many groups means too few edges, so the threshold moves down; too few
    groups moves it up. An exact hit stops the search. Otherwise the loop runs
    until the bracket is narrower than ``MIN_BRACKET`` or ``MAX_ITERATIONS``
    probes were made. A bracket end that never moved is probed at the end,
    because midpoints can never reach threshold 0 itself, and at 0 every pair
    is connected. The best probe wins.
    """
    _check(ts, goal_groups)
    index = SimilarityIndex.from_traces(ts, kind)

    def count(t: Fraction) -> int:
        return get_groups(ts, index.kind, t, workers=workers, index=index).num_groups

    low, high = Fraction(0), Fraction(1)
    probes: list[tuple[Fraction, int]] = []
    hit = False
    for _ in range(MAX_ITERATIONS):
        if high - low < MIN_BRACKET:
            break
        mid = (low + high) / 2
        cur = count(mid)
        probes.append((mid, cur))
        if cur == goal_groups:
            hit = True
            break
        if cur > goal_groups:
            high = mid
        else:
            low = mid
    if not hit:
        if low == 0:
            probes.append((low, count(low)))
        if high == 1:
            probes.append((high, count(high)))

    threshold, _ = _best(probes, goal_groups)
    grouping = get_groups(ts, index.kind, threshold, workers=workers, index=index)
    return ThresholdSearchResult(threshold, grouping.num_groups, grouping, tuple(probes))


def sweep_optimal_threshold(
    ts: TraceSet, kind: Union[str, EncodingKind], goal_groups: int
) -> ThresholdSearchResult:
    """Exhaustive reference: one probe per plateau of the group-count function."""
    _check(ts, goal_groups)
    index = SimilarityIndex.from_traces(ts, kind)
    values = index.similarity_values()
    candidates = {Fraction(0), Fraction(1)} | values
    below_one = [v for v in values if v < 1]
    if below_one:
        candidates.add((max(below_one) + 1) / 2)
    probes = []
    for t in sorted(candidates):
        probes.append((t, get_groups(ts, index.kind, t, index=index).num_groups))
    threshold, _ = _best(probes, goal_groups)
    grouping = get_groups(ts, index.kind, threshold, index=index)
    return ThresholdSearchResult(threshold, grouping.num_groups, grouping, tuple(probes))


def result_to_obj(result: ThresholdSearchResult, ts: TraceSet) -> dict:
    out = grouping_to_obj(result.grouping, ts)
    out["probes"] = [{"threshold": float(t), "numGroups": c} for t, c in result.probes]
    return out
