"""Abstract separator-trees: integer labels instead of vertex sets, their
vertex and edge numbers, saturation and the bound checks built on them."""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Optional

import numpy as np

from .tree import (
    Profile,
    Shape,
    TreeError,
    UndefinedFreeCount,
    Valuation,
    balanced_multipartite_free,
    general_free,
    is_normal_number,
)


@dataclass(frozen=True)
class BoundConstants:
    k: int

    @property
    def beta(self) -> Fraction:
        return Fraction(5 * self.k, 3) - Fraction(1, 2)

    @property
    def gamma(self) -> Fraction:
        return Fraction(self.k * self.k, 3)

    @property
    def eps(self) -> Fraction:
        return Fraction(self.k, 2)

    def bound(self, n: int, normal_atoms: int) -> Fraction:
        """beta (n - k) + gamma / L - eps with L = max(normal_atoms, 1)."""
        return self.beta * (n - self.k) + self.gamma / max(normal_atoms, 1) - self.eps


class AbstractSepTree:
    """Tree shape with atom and separator vertex numbers, technical data
    ``tech[(atom, sep)] = m`` and a valuation.

    Without ``big`` the canonical staged valuation is used.
    """

    def __init__(self, shape: Shape, atom_num: Mapping[int, int], sep_num: Mapping[int, int], k: int,
                 tech: Optional[Mapping[tuple[int, int], int]] = None, big: Optional[Mapping[int, int]] = None):
        if k < 1:
            raise TreeError("adhesion must be positive")
        self.shape = shape
        self.k = k
        self.atom_num = {a: int(atom_num[a]) for a in shape.atoms}
        self.sep_num = {s: int(sep_num[s]) for s in shape.seps}
        for a, m in self.atom_num.items():
            if not 1 <= m <= 2 * k:
                raise TreeError(f"atom {a} has vertex number {m} outside [1, {2 * k}]")
        for s, m in self.sep_num.items():
            if not 0 <= m <= k:
                raise TreeError(f"separator {s} has vertex number {m} outside [0, {k}]")
        self.profile = Profile(shape, self.atom_num, self.sep_num, k, fixed=big)
        self.tech = {key: int(m) for key, m in (tech or {}).items() if m}
        problem = self.technical_data_problem()
        if problem:
            raise TreeError(problem)
        self._n: dict[int, int] = {}
        for p in reversed(shape.parts_preorder):
            s = shape.part_child[p]
            if s is None:
                self._n[p] = self.atom_num[p]
            else:
                a, b = shape.sep_children[s]
                self._n[p] = self._n[a] + self._n[b] - self.sep_num[s]

    # basic data

    @property
    def valuation(self) -> Valuation:
        return self.profile.valuation

    @property
    def big(self) -> dict[int, int]:
        return dict(self.profile.big)

    def small(self, s: int) -> int:
        return self.profile.small(s)

    def is_normal(self, atom: int) -> bool:
        return self.profile.normal[atom]

    def technical_data_problem(self) -> Optional[str]:
        sh, prof = self.shape, self.profile
        per_atom: dict[int, int] = {}
        per_sep: dict[int, int] = {}
        for (a, s), m in self.tech.items():
            if m < 0:
                return f"negative technical data at {(a, s)}"
            if a not in prof.tiny:
                return f"technical data on non-tiny atom {a}"
            if s not in self.sep_num:
                return f"technical data on unknown separator {s}"
            idx = sh.branch_index(s, a)
            if idx is None or sh.sep_children[s][idx] == prof.big[s] or sh.sep_above(a) == s:
                return f"atom {a} is not a valid technical-data partner of separator {s}"
            per_atom[a] = per_atom.get(a, 0) + m
            per_sep[s] = per_sep.get(s, 0) + m
        for a, m in per_atom.items():
            if m > prof.tiny[a]:
                return f"atom {a} assigns {m} vertices but has {prof.tiny[a]} tiny vertices"
        for s, m in per_sep.items():
            if m > self.sep_num[s]:
                return f"separator {s} receives {m} vertices but has vertex number {self.sep_num[s]}"
        return None

    def m_values(self, s: int) -> list[int]:
        return [m for (a, t), m in sorted(self.tech.items()) if t == s]

    def copy_with(self, **changes) -> "AbstractSepTree":
        args = dict(shape=self.shape, atom_num=self.atom_num, sep_num=self.sep_num, k=self.k,
                    tech=self.tech, big=None)
        args.update(changes)
        return AbstractSepTree(**args)

    # serialisation

    def to_dict(self) -> dict:
        sh = self.shape

        def rec(p: int) -> dict:
            node = {"id": p, "role": "part", "vertex_number": self._n[p]}
            s = sh.part_child[p]
            if s is None:
                node["kind"] = "normal" if self.is_normal(p) else "tiny"
            else:
                small, big = self.small(s), self.profile.big[s]
                node["children"] = [{"id": s, "role": "separator", "vertex_number": self.sep_num[s],
                                     "children": [rec(small), rec(big)]}]
            return node

        return {
            "k": self.k,
            "root": rec(sh.root),
            "technical_data": [{"atom": a, "separator": s, "m": m} for (a, s), m in sorted(self.tech.items())],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def from_separator_tree(t) -> AbstractSepTree:
    """The associated abstract tree of a concrete separator-tree, carrying its
    canonical valuation and associated technical data."""
    from .septree import assign_valuation, technical_data

    val = assign_valuation(t)
    return AbstractSepTree(t.shape, t.atom_num, t.sep_num, t.k, technical_data(t, val), big=val.big)


# ---------------------------------------------------------------------------
# numbers


def vertex_number(a: AbstractSepTree, p: Optional[int] = None) -> int:
    return a._n[a.shape.root if p is None else p]


def tiny_vertex_count(a: AbstractSepTree, atom: int) -> int:
    if not a.shape.is_atom(atom):
        raise TreeError(f"{atom} is not an atom")
    if a.is_normal(atom):
        raise TreeError(f"atom {atom} is normal, tiny vertices are not defined")
    return a.profile.tiny[atom]


def f_general(a: AbstractSepTree, s: int, fallback: bool = False) -> Fraction:
    """Free anti-edge number at separator s.

    A small branch that is a single atom contributes nothing. With
    ``fallback`` a small branch without normal atoms is treated as a balanced
    multipartite graph over all its atoms instead of raising.
    """
    sh = a.shape
    small = a.small(s)
    try:
        return general_free(a.sep_num[s], a.m_values(s), a.profile.normal_below[small], sh.is_atom(small))
    except UndefinedFreeCount:
        if not fallback:
            raise
        return balanced_multipartite_free(a.sep_num[s], len(sh.atoms_below(small)))


def edge_number(a: AbstractSepTree, p: Optional[int] = None, fallback: bool = False) -> Fraction:
    sh = a.shape
    p = sh.root if p is None else p
    memo: dict[int, Fraction] = {}
    for q in reversed(sh.parts_below(p)):
        s = sh.part_child[q]
        if s is None:
            m = a.atom_num[q]
            memo[q] = Fraction(m * (m - 1), 2)
        else:
            x, y = sh.sep_children[s]
            n_s = a.sep_num[s]
            memo[q] = memo[x] + memo[y] - Fraction(n_s * (n_s - 1), 2) + f_general(a, s, fallback)
    return memo[p]


# ---------------------------------------------------------------------------
# classification


def classify_atoms(a: AbstractSepTree) -> dict[int, str]:
    return {x: "normal" if a.is_normal(x) else "tiny" for x in a.shape.atoms}


def normal_atom_count(a: AbstractSepTree) -> int:
    return sum(a.profile.normal.values())


def is_saturated(a: AbstractSepTree) -> bool:
    return all(n == a.k for n in a.sep_num.values()) and all(
        a.profile.normal_below[a.shape.part_above(s)] > 0 for s in a.shape.seps)


def is_real(a: AbstractSepTree) -> bool:
    for s, (x, y) in a.shape.sep_children.items():
        if a.sep_num[s] > min(a._n[x], a._n[y]):
            return False
    return True


# ---------------------------------------------------------------------------
# saturation


@dataclass(frozen=True)
class SaturationStep:
    op: int
    node: int
    vertex_number: int
    node_count: int
    real: bool


def _node_count(a: AbstractSepTree) -> int:
    return len(a.shape.part_child) + len(a.shape.sep_children)


def _termination_measure(a: AbstractSepTree) -> tuple[int, int]:
    # op 1 and op 3 remove nodes, op 2 shrinks the total separator deficit
    return (_node_count(a), sum(a.k - m for m in a.sep_num.values()))


def _rebuild(a: AbstractSepTree, root: int, part_child: dict, sep_children: dict, atom_num: dict,
             sep_num: dict, tech: dict) -> AbstractSepTree:
    shape = Shape(root, part_child, sep_children)
    prof = Profile(shape, {x: atom_num[x] for x in shape.atoms}, {s: sep_num[s] for s in shape.seps}, a.k)
    # keep entries that are still inside the domain of technical data
    kept = {}
    for (x, s), m in sorted(tech.items()):
        if m <= 0 or x not in prof.tiny or s not in sep_children:
            continue
        idx = shape.branch_index(s, x)
        if idx is None or shape.sep_children[s][idx] == prof.big[s] or shape.sep_above(x) == s:
            continue
        kept[(x, s)] = m
    # cap per-atom sums at the tiny count, trimming the highest separators first
    for x in prof.tiny:
        over = sum(m for (y, _), m in kept.items() if y == x) - prof.tiny[x]
        if over > 0:
            for s, _ in reversed(shape.up(x)):
                if over <= 0:
                    break
                m = kept.get((x, s), 0)
                cut = min(m, over)
                if cut:
                    kept[(x, s)] = m - cut
                    over -= cut
    return AbstractSepTree(shape, {x: atom_num[x] for x in shape.atoms}, {s: sep_num[s] for s in shape.seps},
                           a.k, {key: m for key, m in kept.items() if m})


def _op1(a: AbstractSepTree) -> Optional[tuple[AbstractSepTree, int]]:
    sh = a.shape
    for x in sh.atoms:
        s = sh.sep_above(x)
        if s is None or a.atom_num[x] > a.sep_num[s]:
            continue
        p = sh.part_above(s)
        sib = [c for c in sh.sep_children[s] if c != x][0]
        part_child = dict(sh.part_child)
        sep_children = dict(sh.sep_children)
        del part_child[x]
        del part_child[p]
        del sep_children[s]
        root = sh.root
        if p == root:
            root = sib
        else:
            up = sh.part_parent[p]
            sep_children[up] = tuple(sib if c == p else c for c in sep_children[up])
        tech = {key: m for key, m in a.tech.items() if key[0] != x and key[1] != s}
        return _rebuild(a, root, part_child, sep_children, a.atom_num, a.sep_num, tech), x
    return None


def _op2(a: AbstractSepTree) -> Optional[tuple[AbstractSepTree, int]]:
    sh = a.shape
    for s in sh.seps_postorder:
        small = a.small(s)
        if a.sep_num[s] < a.k and a.sep_num[s] < a._n[small]:
            sep_num = dict(a.sep_num)
            sep_num[s] += 1
            tech = dict(a.tech)
            if sh.is_atom(small) and small in a.profile.tiny:
                have = a.profile.tiny[small] - 1
                if sum(m for (y, _), m in tech.items() if y == small) > have:
                    for t, _ in sh.up(small):
                        if tech.get((small, t), 0) > 0:
                            tech[(small, t)] -= 1
                            break
            return _rebuild(a, sh.root, sh.part_child, sh.sep_children, a.atom_num, sep_num, tech), s
    return None


def _op3(a: AbstractSepTree) -> Optional[tuple[AbstractSepTree, int]]:
    sh = a.shape
    for s in sh.seps_postorder:
        p = sh.part_above(s)
        if a._n[p] > 2 * a.k or a.profile.normal_below[p] > 0:
            continue
        below = set(sh.parts_below(p)) - {p}
        gone_seps = set(sh.seps_below(p))
        part_child = {q: c for q, c in sh.part_child.items() if q not in below}
        part_child[p] = None
        sep_children = {t: c for t, c in sh.sep_children.items() if t not in gone_seps}
        atom_num = dict(a.atom_num)
        atom_num[p] = a._n[p]
        tech: dict[tuple[int, int], int] = {}
        merged: dict[int, int] = {}
        for (x, t), m in a.tech.items():
            if t in gone_seps:
                continue
            if x in below:
                merged[t] = merged.get(t, 0) + m
            else:
                tech[(x, t)] = m
        if not is_normal_number(a._n[p], a.k):
            above = sh.sep_above(p)
            for t, m in merged.items():
                if t != above:
                    tech[(p, t)] = m
        return _rebuild(a, sh.root, part_child, sep_children, atom_num, a.sep_num, tech), p
    return None


def saturate(a: AbstractSepTree, trace: Optional[list] = None) -> AbstractSepTree:
    """Apply the three reduction operations with their priority until none
    applies. ``trace`` collects a SaturationStep per operation."""
    if not is_real(a):
        raise TreeError("saturation needs a real abstract tree")
    cur = a
    measure = _termination_measure(cur)
    while True:
        for op, fn in ((1, _op1), (2, _op2), (3, _op3)):
            res = fn(cur)
            if res is not None:
                break
        else:
            return cur
        cur, node = res
        nxt = _termination_measure(cur)
        if not nxt < measure:
            raise AssertionError(f"saturation did not make progress: {measure} -> {nxt}")
        measure = nxt
        if trace is not None:
            trace.append(SaturationStep(op, node, vertex_number(cur), _node_count(cur), is_real(cur)))


def saturation_report(a: AbstractSepTree, fallback: bool = False) -> dict:
    """Verdicts about one saturation run.

    ``measure_decreasing`` asks whether (vertex number, node count) drops
    lexicographically at every step and ``real_preserved`` whether every
    intermediate tree stays real. The edge-number inequality is None when an
    edge number is undefined (and ``fallback`` is off).
    """
    trace: list[SaturationStep] = []
    sat = saturate(a, trace)
    prev = (vertex_number(a), _node_count(a))
    decreasing = True
    for st in trace:
        nxt = (st.vertex_number, st.node_count)
        decreasing &= nxt < prev
        prev = nxt
    try:
        ineq = edge_number(a, fallback=fallback) <= edge_number(sat, fallback=fallback) + a.k * (
            vertex_number(a) - vertex_number(sat))
    except UndefinedFreeCount:
        ineq = None
    return {
        "saturated": is_saturated(sat),
        "real_preserved": all(st.real for st in trace),
        "measure_decreasing": decreasing,
        "inequality": ineq,
        "normal_monotone": normal_atom_count(sat) >= normal_atom_count(a),
        "steps": len(trace),
    }


def check_saturation_inequality(a: AbstractSepTree, fallback: bool = False) -> bool:
    """e(T) <= e(sat) + k (n(T) - n(sat)); raises UndefinedFreeCount when an
    edge number is undefined and ``fallback`` is off."""
    sat = saturate(a)
    return edge_number(a, fallback=fallback) <= edge_number(sat, fallback=fallback) + a.k * (
        vertex_number(a) - vertex_number(sat))


def check_normal_monotone(a: AbstractSepTree) -> bool:
    return normal_atom_count(saturate(a)) >= normal_atom_count(a)


# ---------------------------------------------------------------------------
# branching errors and the closed-form inequalities


def branching_error_value(lo: int, hi: int) -> Fraction:
    """x(S) from the normal-atom counts of the small (lo) and big (hi) branch."""
    if lo < 1 or hi < 1:
        raise ValueError("both branches need a normal atom")
    return Fraction(1, 2 * lo) + Fraction(1, lo + hi) - Fraction(1, hi)


def branching_error(a: AbstractSepTree, s: int) -> Fraction:
    prof = a.profile
    return branching_error_value(prof.normal_below[a.small(s)], prof.normal_below[prof.big[s]])


def branching_error_sum(a: AbstractSepTree) -> Fraction:
    return sum((branching_error(a, s) for s in a.shape.seps), Fraction(0))


def check_calc1(pairs: Iterable[tuple[int, int]]) -> bool:
    """1/a + 1/b <= 1/(a+b) + 3/(2a) for every 1 <= a <= b."""
    for la, lb in pairs:
        if not 1 <= la <= lb:
            raise ValueError(f"bad pair {(la, lb)}")
        if Fraction(1, la) + Fraction(1, lb) > Fraction(1, la + lb) + Fraction(3, 2 * la):
            return False
    return True


def calc1_grid_ok(limit: int) -> bool:
    """Vectorised form of check_calc1 over 1 <= a <= b <= limit.

    Multiplying through by 2ab(a+b) leaves the integer inequality
    2b(a+b) + 2a(a+b) <= 2ab + 3b(a+b).
    """
    a, b = np.meshgrid(np.arange(1, limit + 1, dtype=np.int64), np.arange(1, limit + 1, dtype=np.int64))
    keep = a <= b
    a, b = a[keep], b[keep]
    return bool(np.all(2 * b * (a + b) + 2 * a * (a + b) <= 2 * a * b + 3 * b * (a + b)))


def check_calci(pairs: Iterable[tuple[int, int]]) -> bool:
    """x(S) >= 1/(4 lo^2) whenever lo < hi."""
    for lo, hi in pairs:
        if not 1 <= lo < hi:
            raise ValueError(f"bad pair {(lo, hi)}")
        if branching_error_value(lo, hi) < Fraction(1, 4 * lo * lo):
            return False
    return True


def calci_grid_ok(limit: int) -> bool:
    """Vectorised check_calci over 1 <= lo < hi <= limit.

    With D = 4 lo^2 * 2 lo (lo+hi) hi the inequality becomes
    4 lo^2 (lo+hi) hi + 8 lo^3 hi - 8 lo^3 (lo+hi) >= 2 lo (lo+hi) hi.
    """
    lo, hi = np.meshgrid(np.arange(1, limit + 1, dtype=np.int64), np.arange(1, limit + 1, dtype=np.int64))
    keep = lo < hi
    lo, hi = lo[keep], hi[keep]
    lhs = 4 * lo * lo * (lo + hi) * hi + 8 * lo ** 3 * hi - 8 * lo ** 3 * (lo + hi)
    return bool(np.all(lhs >= 2 * lo * (lo + hi) * hi))


def voll_normal_slack(a: AbstractSepTree) -> Fraction:
    """Right side minus left side of the strengthened normal bound."""
    if any(not a.is_normal(x) for x in a.shape.atoms):
        raise TreeError("tree has a tiny atom")
    if not is_saturated(a):
        raise TreeError("tree is not saturated")
    c = BoundConstants(a.k)
    n = vertex_number(a)
    return c.bound(n, normal_atom_count(a)) - c.gamma * branching_error_sum(a) - edge_number(a)


def check_voll_normal(a: AbstractSepTree) -> bool:
    return voll_normal_slack(a) >= 0


def main_bound_slack(a: AbstractSepTree, fallback: bool = True) -> Fraction:
    if not is_real(a):
        raise TreeError("tree is not real")
    n = vertex_number(a)
    if n < 2 * a.k:
        raise TreeError(f"vertex number {n} is below 2k")
    return BoundConstants(a.k).bound(n, normal_atom_count(a)) - edge_number(a, fallback=fallback)


def check_main_bound(a: AbstractSepTree, fallback: bool = True) -> bool:
    return main_bound_slack(a, fallback) >= 0


def check_no_normal_base(k: int) -> bool:
    """2k^2 <= beta (k+1) + gamma - eps: the base case without normal atoms."""
    c = BoundConstants(k)
    return 2 * k * k <= c.beta * (k + 1) + c.gamma - c.eps


# ---------------------------------------------------------------------------
# random instances


def _random_shape(rng: np.random.Generator, leaves: list[bool]) -> tuple[dict, dict, list[int]]:
    """Merge random subtrees pairwise; a subtree without a normal atom is only
    merged with one that has one. Returns part_child, sep_children and the
    atom list; ids are assigned later."""
    # items: (node, has_normal); nodes are nested tuples ("atom", idx) / ("sep", left, right)
    items = [(("atom", i), normal) for i, normal in enumerate(leaves)]
    while len(items) > 1:
        i = int(rng.integers(len(items)))
        first = items.pop(i)
        pool = [j for j, it in enumerate(items) if first[1] or it[1]]
        if not pool:
            pool = list(range(len(items)))
        j = pool[int(rng.integers(len(pool)))]
        second = items.pop(j)
        items.append((("sep", first[0], second[0]), first[1] or second[1]))
    return items[0][0]


def _number(nested, atom_val: list[int], sep_val) -> tuple[Shape, dict, dict, dict]:
    part_child, sep_children, atom_num, sep_num = {}, {}, {}, {}
    counter = {"p": 0, "s": 0}
    nums = {}

    def visit(node) -> int:
        pid = counter["p"]
        counter["p"] += 1
        if node[0] == "atom":
            part_child[pid] = None
            atom_num[pid] = atom_val[node[1]]
            nums[pid] = atom_num[pid]
            return pid
        sid = counter["s"]
        counter["s"] += 1
        part_child[pid] = sid
        x = visit(node[1])
        y = visit(node[2])
        sep_children[sid] = (x, y)
        sep_num[sid] = sep_val(nums[x], nums[y])
        nums[pid] = nums[x] + nums[y] - sep_num[sid]
        return pid

    visit(nested)
    return Shape(0, part_child, sep_children), atom_num, sep_num, nums


def _random_tech(rng: np.random.Generator, shape: Shape, atom_num: dict, sep_num: dict, k: int) -> dict:
    prof = Profile(shape, atom_num, sep_num, k)
    cap = dict(sep_num)
    tech = {}
    for x in shape.atoms:
        if x not in prof.tiny:
            continue
        left = max(prof.tiny[x], 0)
        for s, idx in shape.up(x)[1:]:
            if left == 0:
                break
            if shape.sep_children[s][idx] == prof.big[s] or cap[s] == 0:
                continue
            m = int(rng.integers(0, min(left, cap[s]) + 1))
            if m:
                tech[(x, s)] = m
                cap[s] -= m
                left -= m
    return tech


def random_real_tree(rng: np.random.Generator, k: int, normal: int, tiny: int,
                     with_tech: bool = True) -> AbstractSepTree:
    """Random real abstract tree; separators may be below k."""
    if normal + tiny < 1:
        raise ValueError("need at least one atom")
    lo_normal = -(-4 * k // 3)
    leaves = [True] * normal + [False] * tiny
    rng.shuffle(leaves)
    vals = [int(rng.integers(lo_normal, 2 * k + 1)) if nm else int(rng.integers(1, lo_normal)) for nm in leaves]
    nested = _random_shape(rng, leaves)
    shape, atom_num, sep_num, _ = _number(nested, vals, lambda x, y: int(rng.integers(0, min(k, x, y) + 1)))
    tech = _random_tech(rng, shape, atom_num, sep_num, k) if with_tech else {}
    return AbstractSepTree(shape, atom_num, sep_num, k, tech)


def random_saturated_tree(rng: np.random.Generator, k: int, normal: int, tiny: int,
                          with_tech: bool = True) -> AbstractSepTree:
    """Random saturated abstract tree: every separator has vertex number k,
    every atom at least k vertices, a normal atom below every separator."""
    if normal < 1 and tiny + normal > 1:
        raise ValueError("a saturated tree with separators needs a normal atom")
    lo_normal = -(-4 * k // 3)
    leaves = [True] * normal + [False] * tiny
    rng.shuffle(leaves)
    vals = [int(rng.integers(lo_normal, 2 * k + 1)) if nm else int(rng.integers(k, lo_normal)) for nm in leaves]
    nested = _random_shape(rng, leaves)
    shape, atom_num, sep_num, _ = _number(nested, vals, lambda x, y: k)
    tech = _random_tech(rng, shape, atom_num, sep_num, k) if with_tech else {}
    return AbstractSepTree(shape, atom_num, sep_num, k, tech)


def abstract_from_nested(nested, k: int, tech: Optional[Mapping] = None,
                         big: Optional[Mapping[int, int]] = None) -> AbstractSepTree:
    """Build from nested records: an int is an atom vertex number, a triple
    (sep_number, left, right) an inner part. Ids follow preorder."""

    def conv(node):
        if isinstance(node, int):
            return ("atom", node)
        s, left, right = node
        return ("sep", conv(left), conv(right), s)

    flat_atoms: list[int] = []

    def collect(node):
        if node[0] == "atom":
            flat_atoms.append(node[1])
            return ("atom", len(flat_atoms) - 1)
        return ("sep", collect(node[1]), collect(node[2]), node[3])

    tree = collect(conv(nested))
    seps_in_order: list[int] = []

    def order(node):
        # _number asks for separator values after both children
        if node[0] == "sep":
            order(node[1])
            order(node[2])
            seps_in_order.append(node[3])

    order(tree)
    it = iter(seps_in_order)
    shape, atom_num, sep_num, _ = _number(_strip(tree), flat_atoms, lambda x, y: next(it))
    return AbstractSepTree(shape, atom_num, sep_num, k, tech, big)


def _strip(node):
    if node[0] == "atom":
        return node
    return ("sep", _strip(node[1]), _strip(node[2]))
