"""Vertex connectivity and small separations via unit-capacity max flow."""

from __future__ import annotations

from typing import Callable, Iterable, Optional

import numpy as np

from . import _kernels
from .graph import Graph, GraphError, Separation, to_mask

SeparationStrategy = Callable[[Graph, frozenset, int], Optional[Separation]]


def adjacency_matrix(g: Graph) -> np.ndarray:
    if g._matrix is None:
        mat = np.zeros((g.n, g.n), dtype=np.uint8)
        for u, v in g.edges:
            mat[u, v] = mat[v, u] = 1
        mat.setflags(write=False)
        g._matrix = mat
    return g._matrix


def _membership(g: Graph, part: Iterable[int] | None) -> np.ndarray:
    vec = np.zeros(g.n, dtype=np.uint8)
    if part is None:
        vec[:] = 1
    else:
        for v in part:
            vec[v] = 1
    return vec


def local_connectivity(g: Graph, u: int, v: int) -> int:
    """Maximum number of internally disjoint u-v paths (the edge uv counts as one)."""
    g.check_vertices((u, v))
    if u == v:
        raise GraphError("local connectivity needs two distinct vertices")
    adj = adjacency_matrix(g)
    reach = np.zeros(g.n, dtype=np.uint8)
    direct = g.has_edge(u, v)
    paths = _kernels.max_flow(adj, _membership(g, None), u, v, g.n + 1, direct, reach)
    return paths + (1 if direct else 0)


def lexicographic_min_cut(g: Graph, part: frozenset, k: int) -> Optional[Separation]:
    """Default strategy: component split if disconnected, else the source-side
    minimum cut of the first non-adjacent pair with connectivity at most k."""
    adj = adjacency_matrix(g)
    side_a = np.zeros(g.n, dtype=np.uint8)
    side_b = np.zeros(g.n, dtype=np.uint8)
    if not _kernels.find_separation(adj, _membership(g, part), k, side_a, side_b):
        return None
    return Separation.of(np.flatnonzero(side_a).tolist(), np.flatnonzero(side_b).tolist())


def find_small_separation(
    g: Graph,
    k: int,
    part: Iterable[int] | None = None,
    strategy: SeparationStrategy = lexicographic_min_cut,
) -> Optional[Separation]:
    """A separation of ``g[part]`` of order <= k with both sides proper, or None.

    The returned sides are subsets of ``part`` (original vertex ids).
    """
    vs = g.check_vertices(range(g.n) if part is None else part)
    if len(vs) < 2:
        return None
    sep = strategy(g, vs, k)
    if sep is not None:
        _check_strategy_output(g, vs, k, sep)
    return sep


def _check_strategy_output(g: Graph, part: frozenset, k: int, sep: Separation) -> None:
    a, b, s = sep.side_a, sep.side_b, sep.separator
    if a | b != part or a & b != s or len(s) > k or not (a - s) or not (b - s):
        raise AssertionError(f"strategy returned an invalid separation {sep}")
    mb = to_mask(b - s)
    if any(g.mask(v) & mb for v in a - s):
        raise AssertionError("strategy returned a separation with a crossing edge")


def is_k_plus_1_connected(g: Graph, k: int, part: Iterable[int] | None = None) -> bool:
    vs = g.check_vertices(range(g.n) if part is None else part)
    if len(vs) < k + 2:
        return False
    if k == 0:
        return find_small_separation(g, 0, vs) is None
    return find_small_separation(g, k, vs) is None


def find_highly_connected_subgraph(
    g: Graph,
    k: int,
    strategy: SeparationStrategy = lexicographic_min_cut,
) -> Optional[frozenset]:
    """Vertex set of a (k+1)-connected subgraph on more than 2k vertices met by
    the recursive splitting, or None when the splitting finishes."""
    if strategy is lexicographic_min_cut:
        adj = adjacency_matrix(g)
        witness = np.zeros(g.n, dtype=np.uint8)
        if _kernels.split_until_witness(adj, _membership(g, None), k, witness):
            return frozenset(np.flatnonzero(witness).tolist())
        return None
    stack = [frozenset(range(g.n))]
    while stack:
        part = stack.pop()
        if len(part) <= 2 * k:
            continue
        sep = find_small_separation(g, k, part, strategy)
        if sep is None:
            return part
        stack.append(sep.side_b)
        stack.append(sep.side_a)
    return None
