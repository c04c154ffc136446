"""Group similar distributed traces and visualize each group in aggregate."""

from .aggregate import (
    AggregateGroup,
    aggregate_from_json,
    aggregate_to_json,
    build_aggregate,
    render_group_dot,
    render_service_dot,
)
from .errors import *  # noqa: F401,F403
from .grouping import DisjointSetUnion, Group, TraceGrouping, components, get_groups, pick_representative
from .model import Span, Trace, TraceSet, depth_of, edges_of, load_trace_set, make_trace, services_of
from .preprocess import FilterReport, filter_incomplete
from .similarity import Encoding, EncodingKind, SimilarityGraph, build_similarity_graph, encode, similarity
from .threshold import ThresholdSearchResult, find_optimal_threshold, sweep_optimal_threshold

__version__ = "0.1.0"
