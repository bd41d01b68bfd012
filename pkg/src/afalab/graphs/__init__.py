"""Spoke graphs presented stage by stage."""

from afalab.graphs.build import (
    DIRECTED, ELONGATED, SHAPES, SINGLEDEGREE, STANDARD, Layout, Spoke, build_family,
    build_singledegree, build_spoke, extend_spoke, new_graph, permuted_copy, spoke_node_count,
)
from afalab.graphs.staged import GraphSnapshot, StagedGraph
from afalab.graphs.strings import (
    DecreasingString, FamilySpec, all_decreasing, countdown_string, parse_family,
)

__all__ = [
    "DIRECTED", "ELONGATED", "SHAPES", "SINGLEDEGREE", "STANDARD", "DecreasingString", "FamilySpec",
    "GraphSnapshot", "Layout", "Spoke", "StagedGraph", "all_decreasing", "build_family", "parse_family",
    "build_singledegree", "build_spoke", "countdown_string", "extend_spoke", "new_graph",
    "permuted_copy", "spoke_node_count",
]
