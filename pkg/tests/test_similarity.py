import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import brute_edges, chain, jaccard_oracle, random_trace_set
from tracegroup.errors import KindMismatchError
from tracegroup.model import TraceSet
from tracegroup.similarity import (
    Encoding,
    EncodingKind,
    as_ratio,
    build_similarity_graph,
    encode,
    passes,
    similarity,
)

S = EncodingKind.SERVICES


def svc(*names):
    return Encoding(S, elements=frozenset(names))


def test_pair_encodings(example_pair):
    t1, t2 = example_pair
    assert encode(t1, "services").elements == {"Front End", "Friends Database", "Post", "Friends", "Feed"}
    assert encode(t2, S).elements == {"Front End", "Friends", "Friends Database"}
    assert similarity(encode(t1, S), encode(t2, S)) == Fraction(3, 5)


def test_structure_and_depth_encodings():
    lone = chain("x", ["X"])
    assert encode(lone, EncodingKind.STRUCTURE).elements == frozenset()
    assert encode(chain("c", ["A", "B", "C"]), EncodingKind.DEPTH).depth == 3


@pytest.mark.parametrize(
    "a, b, expected",
    [
        (svc("A", "B", "C", "D"), svc("A", "B", "C"), Fraction(3, 4)),
        (svc("A", "B"), svc("C", "D"), Fraction(0)),
        (svc("A", "B"), svc("A", "B"), Fraction(1)),
        (Encoding(EncodingKind.STRUCTURE, elements=frozenset()), Encoding(EncodingKind.STRUCTURE, elements=frozenset()), Fraction(1)),
        (Encoding(EncodingKind.DEPTH, depth=3), Encoding(EncodingKind.DEPTH, depth=3), Fraction(1)),
        (Encoding(EncodingKind.DEPTH, depth=3), Encoding(EncodingKind.DEPTH, depth=2), Fraction(0)),
    ],
)
def test_similarity_values(a, b, expected):
    assert similarity(a, b) == expected
    assert similarity(b, a) == expected


def test_kind_mismatch():
    with pytest.raises(KindMismatchError):
        similarity(svc("A"), Encoding(EncodingKind.DEPTH, depth=1))


def test_threshold_parsing():
    assert as_ratio(0.8) == Fraction(4, 5)
    assert as_ratio(Fraction(3, 5)) == Fraction(3, 5)
    assert as_ratio(1) == 1
    for bad in (-0.1, 1.5, float("nan")):
        with pytest.raises(ValueError):
            as_ratio(bad)
    with pytest.raises(TypeError):
        as_ratio("0.5")


def test_boundary_is_inclusive():
    a, b = svc("A", "B", "C", "D", "E"), svc("A", "B", "C")
    assert passes(a, b, 0.6)
    assert passes(a, b, Fraction(3, 5))
    assert not passes(a, b, 0.6000001)
    # exact 4/5 similarity passes a 0.8 threshold despite 0.8 > 4/5 in binary
    assert passes(svc(*"ABCDE"), svc(*"ABCD"), 0.8)


def test_graph_on_worked_example(example_pair):
    assert build_similarity_graph(example_pair, S, 0.6).edges == ((0, 1),)
    assert build_similarity_graph(example_pair, S, 0.8).edges == ()


def test_threshold_zero_is_complete(fixture24):
    g = build_similarity_graph(fixture24, S, 0)
    assert len(g.edges) == 24 * 23 // 2


def test_empty_and_singleton_sets():
    assert build_similarity_graph(TraceSet(), S, 0.5).edges == ()
    assert build_similarity_graph(TraceSet((chain("a", ["X"]),)), S, 0).edges == ()


kinds = st.sampled_from(list(EncodingKind))


@settings(max_examples=80, deadline=None)
@given(seed=st.integers(0, 10**6), n=st.integers(0, 18), vocab=st.integers(1, 8), kind=kinds,
       num=st.integers(0, 12), den=st.integers(1, 12))
def test_graph_matches_pairwise_oracle(seed, n, vocab, kind, num, den):
    ts = random_trace_set(random.Random(seed), n, vocab)
    t = Fraction(min(num, den), den)
    encs = [encode(x, kind) for x in ts]
    if kind is EncodingKind.DEPTH:
        sim = lambda a, b: Fraction(int(a.depth == b.depth))  # noqa: E731
    else:
        sim = lambda a, b: jaccard_oracle(set(a.elements), set(b.elements))  # noqa: E731
    g = build_similarity_graph(ts, kind, t)
    assert g.edge_set() == brute_edges(encs, t, sim)
    assert list(g.edges) == sorted(g.edges)
    assert all(i < j for i, j in g.edges)
    assert build_similarity_graph(ts, kind, t, workers=3).edges == g.edges


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 10**6), n=st.integers(2, 14), vocab=st.integers(1, 8), kind=kinds)
def test_similarity_laws_and_monotone_edges(seed, n, vocab, kind):
    ts = random_trace_set(random.Random(seed), n, vocab)
    encs = [encode(x, kind) for x in ts]
    for a in encs:
        assert similarity(a, a) == 1
        for b in encs:
            s = similarity(a, b)
            assert 0 <= s <= 1 and s == similarity(b, a)
    ladder = [Fraction(k, 10) for k in range(11)]
    graphs = [build_similarity_graph(ts, kind, t).edge_set() for t in ladder]
    for lo, hi in zip(graphs, graphs[1:]):
        assert hi <= lo


def test_large_threshold_denominator_falls_back_exactly():
    # a denominator this large cannot be cross-multiplied in int64
    t = Fraction(3, 5) - Fraction(1, 10**30)
    a = chain("a", list("ABCDE"))
    b = chain("b", list("ABC"))
    g = build_similarity_graph(TraceSet((a, b)), S, t)
    assert g.edges == ((0, 1),)
    assert build_similarity_graph(TraceSet((a, b)), S, Fraction(3, 5) + Fraction(1, 10**30)).edges == ()
