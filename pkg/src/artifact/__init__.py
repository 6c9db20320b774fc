"""Separator-trees of graphs without large highly connected subgraphs, the
abstract trees behind the edge bound, extremal families and brute-force
oracles."""

from .graph import Graph, GraphError
from .septree import Found, SeparatorTree, build

__all__ = ["Graph", "GraphError", "Found", "SeparatorTree", "build"]
__version__ = "0.1.0"
