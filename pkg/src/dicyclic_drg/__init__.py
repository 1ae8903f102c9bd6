"""Generalized dicyclic groups, their Cayley graphs, and distance-regularity checks."""

from .cayley import Graph, cayley_graph, connection_set, parse_set_spec
from .drg import IntersectionArray, intersection_array
from .graphkit import canonical_form, is_isomorphic, named_graph
from .groups import generalized_dicyclic, parse_group_spec
from .verifier import classify_instance, enumerate_minimal_sets, verify_theorem

__version__ = "0.1.0"

__all__ = [
    "Graph",
    "IntersectionArray",
    "canonical_form",
    "cayley_graph",
    "classify_instance",
    "connection_set",
    "enumerate_minimal_sets",
    "generalized_dicyclic",
    "intersection_array",
    "is_isomorphic",
    "named_graph",
    "parse_group_spec",
    "parse_set_spec",
    "verify_theorem",
]
