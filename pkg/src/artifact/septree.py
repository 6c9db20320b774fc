"""Separator-trees of graphs: construction, valuation, anti-edge
classification, atomic defects and the associated framework."""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Iterable, Mapping, Optional, Union

from .connectivity import SeparationStrategy, find_small_separation, lexicographic_min_cut
from .graph import Graph, GraphError, to_mask
from .tree import (
    Profile,
    Shape,
    TreeError,
    UndefinedFreeCount,
    Valuation,
    balanced_multipartite_free,
    general_free,
)


@dataclass(frozen=True)
class Found:
    """A (k+1)-connected vertex set with more than 2k vertices met while splitting."""

    witness: frozenset[int]


@dataclass(frozen=True)
class AntiEdgeClass:
    verdict: str  # "free" or "atomic"
    atom: Optional[int]  # the atom for atomic verdicts
    sep: int
    branch: int

    @property
    def is_free(self) -> bool:
        return self.verdict == "free"


class SeparatorTree:
    """Parts and separators of a graph arranged as a bipartite rooted tree.

    Part ids are assigned in preorder with the first child of every separator
    visited first; separator ids follow the same walk.
    """

    def __init__(self, g: Graph, k: int, shape: Shape, part_sets: Mapping[int, frozenset],
                 sep_sets: Mapping[int, frozenset]):
        self.g = g
        self.k = k
        self.shape = shape
        self.part_sets = {p: frozenset(v) for p, v in part_sets.items()}
        self.sep_sets = {s: frozenset(v) for s, v in sep_sets.items()}
        self._profile: Optional[Profile] = None
        self.validate()

    # construction

    @classmethod
    def from_nested(cls, g: Graph, k: int, nested) -> "SeparatorTree":
        """Build from nested records.

        An atom is an iterable of vertices; an inner part is a dict with
        ``children`` (two records) and optionally ``sep`` and ``part``. Missing
        separators and parts are derived from the children.
        """
        part_child, sep_children, parts, seps = {}, {}, {}, {}
        counter = {"p": 0, "s": 0}

        def visit(node) -> tuple[int, frozenset]:
            pid = counter["p"]
            counter["p"] += 1
            if isinstance(node, Mapping):
                kids = node.get("children")
                if not kids or len(kids) != 2:
                    raise TreeError("an inner part needs exactly two children")
                sid = counter["s"]
                counter["s"] += 1
                part_child[pid] = sid
                a, va = visit(kids[0])
                b, vb = visit(kids[1])
                sep = frozenset(node["sep"]) if "sep" in node else va & vb
                vs = frozenset(node["part"]) if "part" in node else va | vb
                sep_children[sid] = (a, b)
                seps[sid] = sep
            else:
                vs = frozenset(node)
                part_child[pid] = None
            parts[pid] = vs
            return pid, vs

        visit(nested)
        return cls(g, k, Shape(0, part_child, sep_children), parts, seps)

    def validate(self) -> None:
        g, k = self.g, self.k
        sh = self.shape
        if set(self.part_sets) != set(sh.part_child) or set(self.sep_sets) != set(sh.sep_children):
            raise TreeError("vertex sets do not match the tree shape")
        for vs in list(self.part_sets.values()) + list(self.sep_sets.values()):
            g.check_vertices(vs)
        if self.part_sets[sh.root] != frozenset(range(g.n)):
            raise TreeError("root part must be the whole graph")
        for a in sh.atoms:
            if len(self.part_sets[a]) > 2 * k:
                raise TreeError(f"atom {a} has {len(self.part_sets[a])} > 2k vertices")
        for s, (a, b) in sh.sep_children.items():
            pa, pb = self.part_sets[a], self.part_sets[b]
            sep = self.sep_sets[s]
            if len(sep) > k:
                raise TreeError(f"separator {s} has {len(sep)} > k vertices")
            if pa | pb != self.part_sets[sh.part_above(s)] or pa & pb != sep:
                raise TreeError(f"separator {s} is not a separation of the part above")
            if not (pa - sep) or not (pb - sep):
                raise TreeError(f"separator {s} has an improper side")
            mb = to_mask(pb - sep)
            if any(g.mask(v) & mb for v in pa - sep):
                raise TreeError(f"an edge crosses separator {s}")

    # numbers

    @property
    def atom_num(self) -> dict[int, int]:
        return {a: len(self.part_sets[a]) for a in self.shape.atoms}

    @property
    def sep_num(self) -> dict[int, int]:
        return {s: len(v) for s, v in self.sep_sets.items()}

    @property
    def profile(self) -> Profile:
        if self._profile is None:
            self._profile = Profile(self.shape, self.atom_num, self.sep_num, self.k)
        return self._profile

    def edges_of(self, p: int) -> int:
        return self.g.induced_edge_count(self.part_sets[p])

    def anti_edges_within(self, vs: Iterable[int]) -> list[tuple[int, int]]:
        g = self.g
        return [(u, v) for u, v in combinations(sorted(vs), 2) if not g.has_edge(u, v)]

    # serialisation

    def to_dict(self, val: Optional[Valuation] = None) -> dict:
        """Nested records; children are listed (small, big) when a valuation is given."""
        sh = self.shape

        def rec(p: int) -> dict:
            node = {"id": p, "role": "part", "vertices": sorted(self.part_sets[p])}
            s = sh.part_child[p]
            if s is not None:
                a, b = sh.sep_children[s]
                if val is not None and val.big[s] == a:
                    a, b = b, a
                node["children"] = [{
                    "id": s,
                    "role": "separator",
                    "vertices": sorted(self.sep_sets[s]),
                    "children": [rec(a), rec(b)],
                }]
            return node

        return {"k": self.k, "root": rec(sh.root)}

    def to_json(self, val: Optional[Valuation] = None) -> str:
        return json.dumps(self.to_dict(val), sort_keys=True)


def build(g: Graph, k: int, strategy: SeparationStrategy = lexicographic_min_cut) -> Union[SeparatorTree, Found]:
    """Split recursively along separations of order at most k until every part
    has at most 2k vertices. Returns Found with the first part that cannot be
    split."""
    if k < 1:
        raise ValueError("adhesion must be a positive integer")
    part_child: dict[int, Optional[int]] = {}
    sep_children: dict[int, tuple[int, int]] = {}
    parts: dict[int, frozenset] = {}
    seps: dict[int, frozenset] = {}
    n_parts = n_seps = 0
    # explicit stack of (vertex set, parent separator, child slot)
    stack: list[tuple[frozenset, Optional[int], int]] = [(frozenset(range(g.n)), None, 0)]
    pending: dict[int, list] = {}
    while stack:
        vs, parent, slot = stack.pop()
        pid = n_parts
        n_parts += 1
        parts[pid] = vs
        if parent is not None:
            pending[parent][slot] = pid
        if len(vs) <= 2 * k:
            part_child[pid] = None
            continue
        sep = find_small_separation(g, k, vs, strategy)
        if sep is None:
            return Found(vs)
        sid = n_seps
        n_seps += 1
        part_child[pid] = sid
        seps[sid] = sep.separator
        pending[sid] = [None, None]
        stack.append((sep.side_b, sid, 1))
        stack.append((sep.side_a, sid, 0))
    for sid, (a, b) in pending.items():
        sep_children[sid] = (a, b)
    return SeparatorTree(g, k, Shape(0, part_child, sep_children), parts, seps)


def assign_valuation(t: SeparatorTree) -> Valuation:
    return t.profile.valuation


# ---------------------------------------------------------------------------
# free and atomic anti-edges


def _check_anti_edge(t: SeparatorTree, s: int, x: tuple[int, int]) -> tuple[int, int]:
    u, v = x
    if u == v or u not in t.sep_sets[s] or v not in t.sep_sets[s]:
        raise GraphError(f"{x} does not lie inside separator {s}")
    if t.g.has_edge(u, v):
        raise GraphError(f"{x} is an edge, not an anti-edge")
    return (u, v) if u < v else (v, u)


def classify_anti_edge(t: SeparatorTree, val: Valuation, s: int, branch: int,
                       x: tuple[int, int]) -> AntiEdgeClass:
    """Follow x down from separator ``s`` into its child part ``branch``."""
    sh = t.shape
    if sh.part_parent[branch] != s:
        raise TreeError(f"part {branch} is not directly below separator {s}")
    u, v = _check_anti_edge(t, s, x)
    cur = branch
    while True:
        s2 = sh.part_child[cur]
        if s2 is None:
            return AntiEdgeClass("atomic", cur, s, branch)
        a2, b2 = sh.sep_children[s2]
        sep2 = t.sep_sets[s2]
        pa, pb = t.part_sets[a2], t.part_sets[b2]
        pa_only, pb_only = pa - sep2, pb - sep2
        if (u in pa_only and v in pb_only) or (u in pb_only and v in pa_only):
            return AntiEdgeClass("free", None, s, branch)
        in_a = u in pa and v in pa
        in_b = u in pb and v in pb
        if in_a and not in_b:
            cur = a2
        elif in_b and not in_a:
            cur = b2
        else:
            cur = val.big[s2]


def _atomic_in(t: SeparatorTree, val: Valuation, p: int, restrict: Optional[frozenset]) -> int:
    """Anti-edges of part p (inside ``restrict`` if given) that are atomic in p."""
    sh = t.shape
    vs = t.part_sets[p]
    if restrict is not None:
        vs = vs & restrict
    if sh.is_atom(p):
        return len(t.anti_edges_within(vs))
    # an anti-edge of p is classified at the nearest separator above p holding it
    done: set[tuple[int, int]] = set()
    count = 0
    for s, idx in sh.up(p):
        below = sh.sep_children[s][idx]
        for x in t.anti_edges_within(vs & t.sep_sets[s]):
            if x in done:
                continue
            done.add(x)
            if classify_anti_edge(t, val, s, below, x).verdict == "atomic":
                count += 1
    return count


def atomic_defect(t: SeparatorTree, val: Valuation, p: int) -> int:
    """alpha(P): anti-edges of P that are atomic in P, each counted once."""
    return _atomic_in(t, val, p, None)


def atomic_defect_in(t: SeparatorTree, val: Valuation, p: int, s: int) -> int:
    """alpha(P, S): the part of alpha(P) with both ends in S."""
    return _atomic_in(t, val, p, t.sep_sets[s])


def check_alpha_inequality(t: SeparatorTree, val: Valuation, p: int) -> bool:
    s = t.shape.part_child[p]
    if s is None:
        return True
    big = val.big[s]
    small = val.small_part(t.shape, s)
    return atomic_defect(t, val, p) <= (atomic_defect(t, val, big) + atomic_defect(t, val, small)
                                        - atomic_defect_in(t, val, small, s))


def count_free_anti_edges(t: SeparatorTree, val: Valuation, s: int, branch: int) -> int:
    return sum(classify_anti_edge(t, val, s, branch, x).is_free
               for x in t.anti_edges_within(t.sep_sets[s]))


# ---------------------------------------------------------------------------
# associated technical data and framework


def technical_data(t: SeparatorTree, val: Valuation) -> dict[tuple[int, int], int]:
    """m(X, S): tiny vertices v of atom X whose S_v is S.

    S_v is the lowest separator with X in its small branch and v in it.
    Vertices with no such separator are left out.
    """
    sh = t.shape
    prof = Profile(sh, t.atom_num, t.sep_num, t.k, fixed=val.big)
    out: dict[tuple[int, int], int] = {}
    for x in sh.atoms:
        if prof.normal[x]:
            continue
        above = sh.sep_above(x)
        own = t.sep_sets[above] if above is not None else frozenset()
        for v in sorted(t.part_sets[x] - own):
            for s, idx in sh.up(x):
                if sh.sep_children[s][idx] != val.big[s] and v in t.sep_sets[s]:
                    out[(x, s)] = out.get((x, s), 0) + 1
                    break
    return out


def framework_value(t: SeparatorTree, val: Valuation, s: int,
                    tech: Optional[Mapping[tuple[int, int], int]] = None) -> Fraction:
    sh = t.shape
    prof = Profile(sh, t.atom_num, t.sep_num, t.k, fixed=val.big)
    small = val.small_part(sh, s)
    size = len(t.sep_sets[s])
    atoms = sh.atoms_below(small)
    if all(prof.normal[a] for a in sh.atoms):
        if sh.is_atom(small):
            return Fraction(0)
        return balanced_multipartite_free(size, len(atoms))
    if tech is None:
        tech = technical_data(t, val)
    ms = [m for (x, s2), m in sorted(tech.items()) if s2 == s and x in atoms]
    try:
        return general_free(size, ms, prof.normal_below[small], sh.is_atom(small))
    except UndefinedFreeCount:
        # no normal atom to spread the rest over: fall back to all atoms
        return balanced_multipartite_free(size, len(atoms))


def associated_framework(t: SeparatorTree, val: Valuation) -> dict[int, Fraction]:
    tech = technical_data(t, val)
    return {s: framework_value(t, val, s, tech) for s in t.shape.seps}


def framework_edge_number(t: SeparatorTree, val: Valuation, f: Mapping[int, Fraction],
                          p: Optional[int] = None, check: bool = True) -> Fraction:
    """e(P-hat) of the framework, evaluated recursively."""
    sh = t.shape
    p = sh.root if p is None else p
    if check:
        for s in sh.seps_below(p):
            need = count_free_anti_edges(t, val, s, val.small_part(sh, s))
            if f[s] < need:
                raise ValueError(f"framework value {f[s]} at separator {s} is below its {need} free anti-edges")
    memo: dict[int, Fraction] = {}
    for q in reversed(sh.parts_below(p)):
        s = sh.part_child[q]
        if s is None:
            memo[q] = Fraction(comb(len(t.part_sets[q]), 2))
        else:
            a, b = sh.sep_children[s]
            size = len(t.sep_sets[s])
            memo[q] = memo[a] + memo[b] - Fraction(size * (size - 1), 2) + Fraction(f[s])
    return memo[p]


# ---------------------------------------------------------------------------
# whole-tree checks


def check_edge_identity(t: SeparatorTree) -> dict[int, bool]:
    """e(P) = e(A) + e(B) - e(S) at every separator."""
    g = t.g
    out = {}
    for s, (a, b) in t.shape.sep_children.items():
        p = t.shape.part_above(s)
        out[s] = t.edges_of(p) == t.edges_of(a) + t.edges_of(b) - g.induced_edge_count(t.sep_sets[s])
    return out


def check_baby_case(g: Graph, t: SeparatorTree, val: Valuation,
                    f: Optional[Mapping[int, Fraction]] = None) -> dict[int, bool]:
    """e(P) <= e(P-hat) - alpha(P) at every part."""
    if f is None:
        f = associated_framework(t, val)
    framework_edge_number(t, val, f)
    return {p: g.induced_edge_count(t.part_sets[p])
            <= framework_edge_number(t, val, f, p, check=False) - atomic_defect(t, val, p)
            for p in t.shape.part_child}


def check_free_bounds(t: SeparatorTree, val: Valuation) -> dict[int, bool]:
    """Exact free count at each separator against the associated framework."""
    f = associated_framework(t, val)
    return {s: count_free_anti_edges(t, val, s, val.small_part(t.shape, s)) <= f[s] for s in t.shape.seps}


def check_normal_free_bound(t: SeparatorTree, val: Valuation) -> dict[int, bool]:
    """Free count <= s^2/2 - s^2/(2L(A)) with L(A) the atoms of the small
    branch; only meaningful when every atom is normal."""
    sh = t.shape
    out = {}
    for s in sh.seps:
        small = val.small_part(sh, s)
        bound = balanced_multipartite_free(len(t.sep_sets[s]), len(sh.atoms_below(small)))
        out[s] = count_free_anti_edges(t, val, s, small) <= bound
    return out


def verify_tree(g: Graph, t: SeparatorTree, val: Optional[Valuation] = None) -> dict[str, bool]:
    """All per-tree checks reduced to one verdict each."""
    val = assign_valuation(t) if val is None else val
    prof = Profile(t.shape, t.atom_num, t.sep_num, t.k, fixed=val.big)
    out = {
        "edge_identity": all(check_edge_identity(t).values()),
        "valuation": prof.check_valuation(),
        "alpha_inequality": all(check_alpha_inequality(t, val, p) for p in t.shape.part_child),
        "free_count_bound": all(check_free_bounds(t, val).values()),
        "baby_case": all(check_baby_case(g, t, val).values()),
        # a root atom keeps all its anti-edges as defect
        "root_defect_zero": t.shape.is_degenerate() or atomic_defect(t, val, t.shape.root) == 0,
    }
    if all(prof.normal.values()):
        out["normal_free_bound"] = all(check_normal_free_bound(t, val).values())
    return out
