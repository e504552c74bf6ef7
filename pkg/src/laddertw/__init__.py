"""Exact treewidth, ladder reduction rules and phylogenetic display graphs."""
from .decomposition import (Budget, TreeDecomposition, TreewidthResult, ValidationReport, Violation,
                            exact_treewidth, lower_bound, treewidth, upper_bound_heuristic, validate)
from .errors import (LadderTWError, MalformedInputError, PolicyError, PreconditionError, StructuralError,
                     TreewidthUnknown)
from .graph import Graph, build_graph, contract_edge, subdivide_edge, suppress_degree2
from .ladder import (Ladder, classify, extend_decomposition_pointed, extend_decomposition_square, find_ladders,
                     is_ladder, lengthen, shorten)
from .phylo import (PhyloTree, chain_reduce, display_graph, find_common_chains, parse_newick, serialize,
                    subtree_reduce)
from .reducer import ReductionPolicy, ReductionReport, certify_tw_at_least, reduce, replay

__version__ = "0.1.0"

__all__ = [
    "Budget", "TreeDecomposition", "TreewidthResult", "ValidationReport", "Violation",
    "exact_treewidth", "lower_bound", "treewidth", "upper_bound_heuristic", "validate",
    "LadderTWError", "MalformedInputError", "PolicyError", "PreconditionError", "StructuralError",
    "TreewidthUnknown",
    "Graph", "build_graph", "contract_edge", "subdivide_edge", "suppress_degree2",
    "Ladder", "classify", "extend_decomposition_pointed", "extend_decomposition_square", "find_ladders",
    "is_ladder", "lengthen", "shorten",
    "PhyloTree", "chain_reduce", "display_graph", "find_common_chains", "parse_newick", "serialize",
    "subtree_reduce",
    "ReductionPolicy", "ReductionReport", "certify_tw_at_least", "reduce", "replay",
]
