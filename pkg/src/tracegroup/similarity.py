"""Trace encodings, Jaccard similarity and the thresholded similarity graph.

Similarities are exact rationals. A pair passes a threshold ``p/q`` when
``q * |a & b| >= p * |a | b|``, so thresholds that sit exactly on a
similarity value (3/5 and the like) are never misclassified by float rounding.
"""

from __future__ import annotations

import enum
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational
from typing import Optional, Union

import numpy as np

from .errors import KindMismatchError
from .model import Trace, TraceSet, depth_of, edge_set, services_of

Ratio = Union[float, int, Fraction]

_BLOCK_ROWS = 256
_INT64_SAFE = 2**62


class EncodingKind(enum.Enum):
    SERVICES = "services"
    STRUCTURE = "structure"
    DEPTH = "depth"

    @classmethod
    def parse(cls, value: Union[str, "EncodingKind"]) -> "EncodingKind":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise ValueError(f"unknown encoding {value!r}; expected one of services, structure, depth") from None


@dataclass(frozen=True)
class Encoding:
    kind: EncodingKind
    elements: Optional[frozenset] = None
    depth: Optional[int] = None

    def as_set(self) -> frozenset:
        """Set view used for batch comparison.

        Depth becomes a one-element set, whose Jaccard index is exactly the
        equality indicator.
        """
        if self.kind is EncodingKind.DEPTH:
            return frozenset([self.depth])
        return self.elements


def encode(trace: Trace, kind: Union[str, EncodingKind]) -> Encoding:
    kind = EncodingKind.parse(kind)
    if kind is EncodingKind.SERVICES:
        return Encoding(kind, elements=services_of(trace))
    if kind is EncodingKind.STRUCTURE:
        return Encoding(kind, elements=edge_set(trace))
    return Encoding(kind, depth=depth_of(trace))


def similarity(a: Encoding, b: Encoding) -> Fraction:
    """Jaccard index of two encodings as an exact fraction.

    Two empty sets are identical (1). Depth encodings score 1 when equal and
    0 otherwise.
    """
    if a.kind is not b.kind:
        raise KindMismatchError(f"cannot compare {a.kind.value} encoding with {b.kind.value} encoding")
    if a.kind is EncodingKind.DEPTH:
        return Fraction(int(a.depth == b.depth))
    union = len(a.elements | b.elements)
    if union == 0:
        return Fraction(1)
    return Fraction(len(a.elements & b.elements), union)


def as_ratio(threshold: Ratio) -> Fraction:
    """Convert a threshold to an exact fraction in [0, 1].

    Floats are read by their shortest decimal repr, so ``0.8`` means 4/5
    rather than the nearest binary double.
    """
    if isinstance(threshold, bool):
        raise TypeError("threshold must be a number")
    if isinstance(threshold, Rational):
        value = Fraction(threshold)
    elif isinstance(threshold, float):
        if not math.isfinite(threshold):
            raise ValueError(f"threshold must be finite, got {threshold!r}")
        value = Fraction(repr(threshold))
    else:
        raise TypeError(f"threshold must be a number, got {type(threshold).__name__}")
    if not 0 <= value <= 1:
        raise ValueError(f"threshold must lie in [0, 1], got {threshold!r}")
    return value


def passes(a: Encoding, b: Encoding, threshold: Ratio) -> bool:
    return similarity(a, b) >= as_ratio(threshold)


@dataclass(frozen=True)
class SimilarityGraph:
    node_count: int
    edges: tuple[tuple[int, int], ...]
    """Sorted ``(i, j)`` pairs with ``i < j``."""
    threshold: Fraction
    kind: EncodingKind
    _degree: list = field(default=None, repr=False, compare=False, hash=False)

    def degrees(self) -> list[int]:
        if self._degree is None:
            deg = [0] * self.node_count
            for i, j in self.edges:
                deg[i] += 1
                deg[j] += 1
            object.__setattr__(self, "_degree", deg)
        return self._degree

    def edge_set(self) -> frozenset[tuple[int, int]]:
        return frozenset(self.edges)


class SimilarityIndex:
    """Encodings of one trace set packed as a 0/1 incidence matrix.

    Building it once lets callers probe many thresholds (the optimizer does)
    without re-encoding. Row blocks of the pairwise intersection matrix are
    computed independently, so ``workers > 1`` evaluates them on a thread pool;
    blocks are reassembled in order and the output does not depend on
    scheduling.
    """

    def __init__(self, encodings: list[Encoding], kind: EncodingKind):
        self.kind = kind
        self.encodings = encodings
        sets = [e.as_set() for e in encodings]
        vocab: dict = {}
        for s in sets:
            for el in s:
                vocab.setdefault(el, len(vocab))
        n = len(sets)
        incidence = np.zeros((n, max(len(vocab), 1)), dtype=np.float64)
        for row, s in enumerate(sets):
            if s:
                incidence[row, [vocab[el] for el in s]] = 1.0
        self.incidence = incidence
        self.sizes = np.array([len(s) for s in sets], dtype=np.int64)

    @classmethod
    def from_traces(cls, ts: TraceSet, kind: Union[str, EncodingKind]) -> "SimilarityIndex":
        kind = EncodingKind.parse(kind)
        return cls([encode(t, kind) for t in ts], kind)

    def __len__(self) -> int:
        return len(self.encodings)

    def _block_edges(self, lo: int, hi: int, num: int, den: int) -> np.ndarray:
        # Counts are small integers, so float64 matmul is exact.
        inter = np.rint(self.incidence[lo:hi] @ self.incidence.T).astype(np.int64)
        union = self.sizes[lo:hi, None] + self.sizes[None, :] - inter
        if den * int(self.sizes.max(initial=0)) * 2 + 1 < _INT64_SAFE:
            ok = inter * den >= union * num
        else:
            ok = inter.astype(object) * den >= union.astype(object) * num
            ok = ok.astype(bool)
        rows = np.arange(lo, hi)[:, None]
        ok &= np.arange(len(self))[None, :] > rows
        ii, jj = np.nonzero(ok)
        return np.stack([ii + lo, jj], axis=1)

    def graph(self, threshold: Ratio, workers: int = 1) -> SimilarityGraph:
        t = as_ratio(threshold)
        n = len(self)
        bounds = [(lo, min(lo + _BLOCK_ROWS, n)) for lo in range(0, n, _BLOCK_ROWS)]
        args = [(lo, hi, t.numerator, t.denominator) for lo, hi in bounds]
        if workers > 1 and len(bounds) > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                blocks = list(pool.map(lambda a: self._block_edges(*a), args))
        else:
            blocks = [self._block_edges(*a) for a in args]
        edges = tuple(map(tuple, np.concatenate(blocks).tolist())) if blocks else ()
        return SimilarityGraph(n, edges, t, self.kind)

    def similarity_values(self) -> set[Fraction]:
        """Distinct pairwise similarity values."""
        out = set()
        n = len(self)
        for i in range(n):
            for j in range(i + 1, n):
                out.add(similarity(self.encodings[i], self.encodings[j]))
        return out


def build_similarity_graph(
    ts: TraceSet, kind: Union[str, EncodingKind], threshold: Ratio, workers: int = 1
) -> SimilarityGraph:
    """Connect every pair of traces whose similarity is at least ``threshold``."""
    return SimilarityIndex.from_traces(ts, kind).graph(threshold, workers=workers)
