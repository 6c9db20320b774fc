"""Extremal graph families built by doubling and gluing, with closed-form
edge counts."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .abstract import AbstractSepTree, BoundConstants, abstract_from_nested
from .graph import Graph, GraphError, complete_graph, glue


class FamilyError(ValueError):
    """Parameters outside a family's domain."""


def _log2_exact(k: int) -> Optional[int]:
    if k >= 1 and k & (k - 1) == 0:
        return k.bit_length() - 1
    return None


@dataclass
class Construction:
    """A generated graph together with how it was assembled.

    ``atoms`` lists the vertex sets of the copies of the base graph,
    ``nested`` is the construction tree in the ``abstract_from_nested``
    format and ``spare`` holds per-atom vertices never used by a separator.
    """

    graph: Graph
    k: int
    atoms: list[list[int]]
    nested: object
    spare: list[list[int]] = field(default_factory=list)

    def abstract_tree(self) -> AbstractSepTree:
        return abstract_from_nested(self.nested, self.k)


def _copy_labels(n: int, shared) -> dict[int, int]:
    """Where ``glue(g, g, identity on shared)`` sends the vertices of the copy."""
    relabel, nxt = {}, n
    for v in range(n):
        if v in shared:
            relabel[v] = v
        else:
            relabel[v] = nxt
            nxt += 1
    return relabel


def _double(c: Construction, sep: list[int]) -> Construction:
    """Two copies of ``c`` glued along ``sep`` by the identity map."""
    g = c.graph
    doubled = glue(g, g, {v: v for v in sep})
    relabel = _copy_labels(g.n, set(sep))
    atoms = c.atoms + [[relabel[v] for v in atom] for atom in c.atoms]
    spare = c.spare + [[relabel[v] for v in s] for s in c.spare]
    return Construction(doubled, c.k, atoms, (c.k, c.nested, c.nested), spare)


def build_G(k: int, i: int) -> Construction:
    """Atoms are stored in the position order of the base clique, so level j
    takes positions offset_j .. offset_j + k/2^j - 1 of every atom, which are
    the lowest positions no earlier separator touched."""
    if k < 1 or i < 0:
        raise FamilyError("need k >= 1 and i >= 0")
    for j in range(i):
        if k % (1 << j):
            raise FamilyError(f"k={k} is not divisible by 2^{j}")
    c = Construction(complete_graph(2 * k), k, [list(range(2 * k))], 2 * k)
    offset = 0
    for j in range(i):
        take = k >> j
        sep = [v for atom in c.atoms for v in atom[offset:offset + take]]
        c = _double(c, sep)
        offset += take
    c.spare = [atom[offset:] for atom in c.atoms]
    return c


def gen_G(k: int, i: int) -> Graph:
    """Doubling family starting from K_{2k}; step j glues two copies along a
    separator taking k/2^j fresh vertices from every atom.

    Needs k/2^j integral for j < i. Equality in the edge bound is reached
    while 2^i <= k and also one step past that for k = 2.
    """
    return build_G(k, i).graph


def gen_G_formula(k: int, i: int) -> Fraction:
    c = BoundConstants(k)
    return c.bound(k + k * (1 << i), 1 << i)


def _independent_set(c: Construction) -> list[int]:
    if len(c.spare) != c.k or any(not s for s in c.spare):
        raise FamilyError("construction has no independent k-set of spare vertices")
    return [s[0] for s in c.spare]


def _glue_copies(g: Graph, core: list[int], copies: int) -> Graph:
    if copies < 1:
        raise FamilyError("need at least one copy")
    out = g
    for _ in range(copies - 1):
        out = glue(out, g, {v: v for v in core})
    return out


def gen_Gstar_glued(k: int, copies: int) -> Graph:
    """Copies of the last doubling-family member glued at an independent k-set."""
    p = _log2_exact(k)
    if p is None:
        raise FamilyError(f"k={k} is not a power of two")
    c = build_G(k, p)
    core = _independent_set(c)
    if c.graph.induced_edge_count(core):
        raise AssertionError("spare vertices are not independent")
    return _glue_copies(c.graph, core, copies)


def gstar_formula(k: int, n: int) -> Fraction:
    return (Fraction(5 * k, 3) - Fraction(1, 2) - Fraction(1, 6 * k)) * (n - k)


def gen_mader(k: int, t: int) -> Graph:
    """Independent k-set joined completely to each of t disjoint k-cliques."""
    if k < 1 or t < 1:
        raise FamilyError("need k >= 1 and t >= 1")
    es = []
    for c in range(t):
        block = range(k + c * k, k + (c + 1) * k)
        es += [(u, v) for u in block for v in block if u < v]
        es += [(u, v) for u in range(k) for v in block]
    return Graph(k + t * k, es)


def mader_formula(k: int, n: int) -> Fraction:
    return Fraction(3 * k - 1, 2) * (n - k)


def _h0(k: int) -> tuple[Graph, list[list[int]]]:
    """Complement on 2k vertices of disjoint K_{m,m}, m = k/2, k/4, .., 1.

    Blocks take ids in order of descending m; the two leftover vertices get
    the highest ids. Returns the graph and the block vertex sets.
    """
    blocks, pos = [], 0
    m = k // 2
    while m >= 1:
        blocks.append(list(range(pos, pos + 2 * m)))
        pos += 2 * m
        m //= 2
    missing = set()
    for b in blocks:
        half = len(b) // 2
        missing |= {(u, v) for u in b[:half] for v in b[half:]}
    es = [(u, v) for u in range(2 * k) for v in range(u + 1, 2 * k) if (u, v) not in missing]
    return Graph(2 * k, es), blocks


@dataclass
class HConstruction:
    graph: Graph
    k: int
    copies: list[dict[int, int]]  # per H_0 copy: local id -> global id
    blocks: list[list[int]]
    nested: object

    def block_vertices(self, m: int) -> list[int]:
        """Global vertices of every copy's K_{m,m} block."""
        idx = [j for j, b in enumerate(self.blocks) if len(b) == 2 * m]
        return [cp[v] for cp in self.copies for j in idx for v in self.blocks[j]]

    def spare(self) -> list[list[int]]:
        leftover = [2 * self.k - 2, 2 * self.k - 1]
        return [[cp[v] for v in leftover] for cp in self.copies]


def build_H(k: int, i: int) -> HConstruction:
    p = _log2_exact(k)
    if p is None or p < 1:
        raise FamilyError(f"k={k} is not a power of two >= 2")
    if not 0 <= i <= p:
        raise FamilyError(f"i={i} outside 0..{p}")
    h0, blocks = _h0(k)
    c = HConstruction(h0, k, [{v: v for v in range(2 * k)}], blocks, 2 * k)
    for j in range(i):
        sep = c.block_vertices(k >> (j + 1))
        if len(sep) != k:
            raise AssertionError("separator does not have k vertices")
        g = c.graph
        relabel = _copy_labels(g.n, set(sep))
        copies = c.copies + [{x: relabel[y] for x, y in cp.items()} for cp in c.copies]
        c = HConstruction(glue(g, g, {v: v for v in sep}), k, copies, blocks, (k, c.nested, c.nested))
    return c


def gen_H(k: int, i: int) -> Graph:
    return build_H(k, i).graph


def h0_formula(k: int) -> Fraction:
    return Fraction(5 * k * k, 3) - k + Fraction(1, 3)


def h_separator_formula(k: int, i: int) -> Fraction:
    return Fraction(k * k, 1 << (i + 2)) - Fraction(k, 2)


def h_formula(k: int, n: int) -> Fraction:
    """Closed form for the edge number of H_i in terms of n = n_i."""
    d = n - k
    return (Fraction(3 * k - 1, 2) * d + Fraction(d, 3 * k)
            + Fraction(k * k, 3) * Fraction(k, 2 * d) - Fraction(k, 2))


def h_separator_edges(k: int, i: int) -> int:
    c = build_H(k, i)
    return c.graph.induced_edge_count(c.block_vertices(k >> (i + 1)))


def gen_glued_H(k: int, copies: int) -> Graph:
    """Copies of H_{log2 k} glued at an independent k-set of leftover vertices."""
    p = _log2_exact(k)
    if p is None or p < 1:
        raise FamilyError(f"k={k} is not a power of two >= 2")
    c = build_H(k, p)
    core = [s[0] for s in c.spare()]
    if len(core) != k or c.graph.induced_edge_count(core):
        raise AssertionError("leftover vertices do not form an independent k-set")
    return _glue_copies(c.graph, core, copies)


# ---------------------------------------------------------------------------
# provenance and soundness


FAMILIES = ("G", "Gstar", "mader", "H", "Hglued")


def generate(family: str, k: int, param: int) -> tuple[Graph, dict]:
    """Graph plus provenance record for one family member.

    ``param`` is i for G and H, t for mader and the copy count otherwise.
    """
    if family == "G":
        g, key, formula = gen_G(k, param), "i", gen_G_formula(k, param)
    elif family == "Gstar":
        g, key = gen_Gstar_glued(k, param), "copies"
        formula = gstar_formula(k, g.n)
    elif family == "mader":
        g, key = gen_mader(k, param), "t"
        formula = mader_formula(k, g.n)
    elif family == "H":
        g, key = gen_H(k, param), "i"
        formula = h_formula(k, g.n)
    elif family == "Hglued":
        g, key = gen_glued_H(k, param), "copies"
        formula = mader_formula(k, g.n)
    else:
        raise FamilyError(f"unknown family {family!r}")
    record = {"family": family, "k": k, key: param, "n": g.n, "e": len(g.edges),
              "formula_e": str(formula), "matches": formula == len(g.edges)}
    return g, record


def provenance_json(record: dict) -> str:
    return json.dumps(record, sort_keys=True)


ORACLE_LIMIT = 16


def verify_family_soundness(g: Graph, k: int) -> Optional[bool]:
    """True if no (k+1)-connected subgraph on more than 2k vertices exists,
    by exhaustive search. None means the graph is too large to check."""
    from .oracle import brute_highly_connected

    if g.n > ORACLE_LIMIT:
        return None
    try:
        return brute_highly_connected(g, k, 2 * k + 1) is None
    except GraphError:
        return None
