"""Decremental shortest-path engine built on multi-scale hopsets.

Maintains a (beta, 1+eps)-hopset of a weighted undirected graph under edge
deletions and weight increases, and serves (1+eps)-approximate SSSP/MSSP
and a (2k-1)(1+eps)-approximate distance oracle with O(k) queries, all
cross-checkable against exact oracles.
"""

from .clustering import ClusterState, Hierarchy, sample_hierarchy, sample_uniform_hierarchy
from .estree import AdjacencyHost, MonotoneEsTree
from .graph import (
    DynamicGraph,
    GraphError,
    ScaledView,
    UpdateBatch,
    num_scales,
    scale,
    unscale,
)
from .hopset import (
    HopsetParams,
    HopsetState,
    bounded_hop_distance,
    hopset_edges,
    init_hopset,
    process_update,
    union_adjacency,
)
from .oracle import DistanceOracle, init_oracle, sketch_query
from .sssp import SourceSet, init_sources, query_distance

__version__ = "0.1.0"

__all__ = [
    "AdjacencyHost",
    "ClusterState",
    "DistanceOracle",
    "DynamicGraph",
    "GraphError",
    "Hierarchy",
    "HopsetParams",
    "HopsetState",
    "MonotoneEsTree",
    "ScaledView",
    "SourceSet",
    "UpdateBatch",
    "bounded_hop_distance",
    "hopset_edges",
    "init_hopset",
    "init_oracle",
    "init_sources",
    "num_scales",
    "process_update",
    "query_distance",
    "sample_hierarchy",
    "sample_uniform_hierarchy",
    "scale",
    "sketch_query",
    "union_adjacency",
    "unscale",
]
