"""Undirected simple graphs on dense integer ids, separations and gluing."""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping


class GraphError(ValueError):
    """Malformed graph data or an invalid vertex reference."""


def _pair(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


class Graph:
    """Immutable simple graph with vertices ``0..n-1``.

    Adjacency is kept both as frozensets and as integer bitmasks; the masks
    are what the connectivity kernels consume.
    """

    __slots__ = ("n", "edges", "_nbrs", "_masks", "_matrix")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = ()):
        if n < 0:
            raise GraphError("negative vertex count")
        seen = set()
        for e in edges:
            u, v = int(e[0]), int(e[1])
            if u == v:
                raise GraphError(f"self-loop at {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge ({u},{v}) out of range for n={n}")
            seen.add(_pair(u, v))
        self.n = n
        self.edges: tuple[tuple[int, int], ...] = tuple(sorted(seen))
        nbrs: list[set[int]] = [set() for _ in range(n)]
        for u, v in self.edges:
            nbrs[u].add(v)
            nbrs[v].add(u)
        self._nbrs = tuple(frozenset(s) for s in nbrs)
        self._masks = tuple(sum(1 << w for w in s) for s in nbrs)
        self._matrix = None

    # basic queries

    def neighbors(self, v: int) -> frozenset[int]:
        return self._nbrs[v]

    def mask(self, v: int) -> int:
        """Neighbourhood of ``v`` as a bitmask."""
        return self._masks[v]

    @property
    def masks(self) -> tuple[int, ...]:
        return self._masks

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._nbrs[u]

    def vertices(self) -> range:
        return range(self.n)

    def degree(self, v: int) -> int:
        return len(self._nbrs[v])

    def check_vertices(self, vs: Iterable[int]) -> frozenset[int]:
        out = frozenset(vs)
        for v in out:
            if not isinstance(v, int) or not 0 <= v < self.n:
                raise GraphError(f"unknown vertex {v!r}")
        return out

    def induced_edge_count(self, within: Iterable[int]) -> int:
        m = to_mask(within)
        return sum((self._masks[v] & m).bit_count() for v in iter_mask(m)) // 2

    def induced(self, within: Iterable[int]) -> "Graph":
        """Subgraph on ``within`` relabelled to ``0..|within|-1`` in ascending order."""
        vs = sorted(self.check_vertices(within))
        idx = {v: i for i, v in enumerate(vs)}
        es = [(idx[u], idx[v]) for u, v in self.edges if u in idx and v in idx]
        return Graph(len(vs), es)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Graph) and self.n == other.n and self.edges == other.edges

    def __hash__(self) -> int:
        return hash((self.n, self.edges))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={len(self.edges)})"

    # serialisation

    def to_text(self) -> str:
        lines = [f"{self.n} {len(self.edges)}"]
        lines += [f"{u} {v}" for u, v in self.edges]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Graph":
        rows = [ln.split() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
        if not rows or len(rows[0]) != 2:
            raise GraphError("header must be 'n m'")
        try:
            n, m = int(rows[0][0]), int(rows[0][1])
            es = [(int(r[0]), int(r[1])) for r in rows[1:] if len(r) == 2]
        except ValueError as exc:
            raise GraphError(f"non-integer token: {exc}") from None
        if any(len(r) != 2 for r in rows[1:]):
            raise GraphError("edge lines must have exactly two ids")
        if len(es) != m:
            raise GraphError(f"header announces {m} edges, found {len(es)}")
        g = cls(n, es)
        if len(g.edges) != m:
            raise GraphError("duplicate edges in input")
        return g

    def to_dict(self) -> dict:
        return {"n": self.n, "edges": [list(e) for e in self.edges]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, d: Mapping) -> "Graph":
        try:
            return cls(int(d["n"]), [tuple(e) for e in d["edges"]])
        except (KeyError, TypeError) as exc:
            raise GraphError(f"bad graph record: {exc}") from None


@dataclass(frozen=True)
class Separation:
    side_a: frozenset[int]
    side_b: frozenset[int]
    separator: frozenset[int]

    @classmethod
    def of(cls, a: Iterable[int], b: Iterable[int]) -> "Separation":
        a, b = frozenset(a), frozenset(b)
        return cls(a, b, a & b)

    @property
    def order(self) -> int:
        return len(self.separator)


# bitmask helpers

def to_mask(vs: Iterable[int]) -> int:
    m = 0
    for v in vs:
        m |= 1 << v
    return m


def iter_mask(m: int):
    while m:
        low = m & -m
        yield low.bit_length() - 1
        m ^= low


def mask_set(m: int) -> frozenset[int]:
    return frozenset(iter_mask(m))


# operations

def complete_graph(n: int) -> Graph:
    return Graph(n, [(u, v) for u in range(n) for v in range(u + 1, n)])


def empty_graph(n: int) -> Graph:
    return Graph(n)


def path_graph(n: int) -> Graph:
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n: int) -> Graph:
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def edge_count(g: Graph) -> int:
    return len(g.edges)


def average_degree(g: Graph) -> Fraction:
    if g.n == 0:
        raise GraphError("average degree of the empty graph is undefined")
    return Fraction(2 * len(g.edges), g.n)


def anti_edge_count(g: Graph, within: Iterable[int] | None = None) -> int:
    vs = g.check_vertices(range(g.n) if within is None else within)
    s = len(vs)
    return s * (s - 1) // 2 - g.induced_edge_count(vs)


def verify_separation(g: Graph, sep: Separation) -> bool:
    a = g.check_vertices(sep.side_a)
    b = g.check_vertices(sep.side_b)
    s = g.check_vertices(sep.separator)
    if a | b != frozenset(range(g.n)) or a & b != s:
        return False
    ma, mb = to_mask(a - s), to_mask(b - s)
    return all(g.mask(v) & mb == 0 for v in iter_mask(ma))


def glue(g1: Graph, g2: Graph, identify: Mapping[int, int] | Iterable[tuple[int, int]]) -> Graph:
    """Disjoint union of ``g1`` and ``g2`` with paired vertices identified.

    ``identify`` maps vertices of ``g1`` to vertices of ``g2``. Vertices of
    ``g1`` keep their ids; unpaired vertices of ``g2`` get ids ``g1.n, g1.n+1, ...``
    in ascending order.
    """
    pairs = list(identify.items()) if isinstance(identify, Mapping) else list(identify)
    left = [int(p[0]) for p in pairs]
    right = [int(p[1]) for p in pairs]
    if len(set(left)) != len(left) or len(set(right)) != len(right):
        raise GraphError("pairing is not injective")
    g1.check_vertices(left)
    g2.check_vertices(right)
    back = dict(zip(right, left))
    relabel = {}
    nxt = g1.n
    for v in range(g2.n):
        if v in back:
            relabel[v] = back[v]
        else:
            relabel[v] = nxt
            nxt += 1
    es = list(g1.edges) + [(relabel[u], relabel[v]) for u, v in g2.edges]
    return Graph(nxt, es)


def disjoint_union(g1: Graph, g2: Graph) -> Graph:
    return glue(g1, g2, {})


def is_forest(g: Graph) -> bool:
    parent = list(range(g.n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in g.edges:
        ru, rv = find(u), find(v)
        if ru == rv:
            return False
        parent[ru] = rv
    return True


def components(g: Graph, within: int | None = None) -> list[int]:
    """Connected components of ``g[within]`` as bitmasks, ordered by least vertex."""
    rest = (1 << g.n) - 1 if within is None else within
    out = []
    while rest:
        comp = frontier = rest & -rest
        while frontier:
            nxt = 0
            for v in iter_mask(frontier):
                nxt |= g.mask(v)
            frontier = nxt & rest & ~comp
            comp |= frontier
        out.append(comp)
        rest &= ~comp
    return out
