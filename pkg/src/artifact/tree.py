"""Rooted bipartite part/separator trees and the staged valuation.

Both concrete separator-trees and abstract ones share this shape. Parts and
separator-nodes live in separate id spaces. The root is the largest element of
the tree-order, so "below" means further from the root.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional


class TreeError(ValueError):
    pass


class Shape:
    """Immutable tree shape.

    ``part_child[p]`` is the separator just below part ``p`` (None for atoms),
    ``sep_children[s]`` the two parts just below ``s`` in stored order.
    """

    def __init__(self, root: int, part_child: Mapping[int, Optional[int]],
                 sep_children: Mapping[int, tuple[int, int]]):
        self.root = root
        self.part_child = dict(part_child)
        self.sep_children = {s: tuple(c) for s, c in sep_children.items()}
        self.part_parent: dict[int, Optional[int]] = {p: None for p in self.part_child}
        self.sep_parent: dict[int, int] = {}
        for p, s in self.part_child.items():
            if s is not None:
                if s in self.sep_parent:
                    raise TreeError(f"separator {s} has two parents")
                self.sep_parent[s] = p
        for s, (a, b) in self.sep_children.items():
            if a == b:
                raise TreeError(f"separator {s} has a repeated child")
            for c in (a, b):
                if self.part_parent.get(c) is not None:
                    raise TreeError(f"part {c} has two parents")
                self.part_parent[c] = s
        if set(self.sep_parent) != set(self.sep_children):
            raise TreeError("separator parent/child maps disagree")
        if self.part_parent.get(root) is not None:
            raise TreeError("root has a parent")
        self._preorder = self._walk()
        if len(self._preorder) != len(self.part_child):
            raise TreeError("tree is not connected")
        self.atoms: tuple[int, ...] = tuple(p for p in self._preorder if self.part_child[p] is None)
        self._atoms_below: dict[int, tuple[int, ...]] = {}
        for p in reversed(self._preorder):
            s = self.part_child[p]
            if s is None:
                self._atoms_below[p] = (p,)
            else:
                a, b = self.sep_children[s]
                self._atoms_below[p] = self._atoms_below[a] + self._atoms_below[b]
        # separators listed children-first
        self.seps_postorder: tuple[int, ...] = tuple(
            self.part_child[p] for p in reversed(self._preorder) if self.part_child[p] is not None
        )
        self._up: dict[int, tuple[tuple[int, int], ...]] = {}
        for p in self._preorder:
            s = self.part_parent[p]
            if s is None:
                self._up[p] = ()
            else:
                idx = self.sep_children[s].index(p)
                self._up[p] = ((s, idx),) + self._up[self.sep_parent[s]]

    def _walk(self) -> list[int]:
        out, stack = [], [self.root]
        while stack:
            p = stack.pop()
            out.append(p)
            s = self.part_child[p]
            if s is not None:
                a, b = self.sep_children[s]
                stack.append(b)
                stack.append(a)
        return out

    # queries

    @property
    def parts_preorder(self) -> list[int]:
        return list(self._preorder)

    @property
    def seps(self) -> tuple[int, ...]:
        return self.seps_postorder

    def is_atom(self, p: int) -> bool:
        return self.part_child[p] is None

    def is_degenerate(self) -> bool:
        return self.part_child[self.root] is None

    def atoms_below(self, p: int) -> tuple[int, ...]:
        return self._atoms_below[p]

    def up(self, p: int) -> tuple[tuple[int, int], ...]:
        """Separators above part ``p``, nearest first, with the index of the
        child branch that contains ``p``."""
        return self._up[p]

    def sep_above(self, p: int) -> Optional[int]:
        return self.part_parent[p]

    def part_above(self, s: int) -> int:
        return self.sep_parent[s]

    def branch_index(self, s: int, p: int) -> Optional[int]:
        """0 or 1 if part ``p`` lies in that branch of separator ``s``, else None."""
        for t, idx in self._up[p]:
            if t == s:
                return idx
        return None

    def sep_below_sep(self, s: int, t: int) -> bool:
        """True if separator ``s`` is strictly below separator ``t``."""
        return self.branch_index(t, self.sep_parent[s]) is not None

    def comparable(self, s: int, t: int) -> bool:
        return s == t or self.sep_below_sep(s, t) or self.sep_below_sep(t, s)

    def parts_below(self, p: int) -> list[int]:
        out, stack = [], [p]
        while stack:
            q = stack.pop()
            out.append(q)
            s = self.part_child[q]
            if s is not None:
                stack.extend(reversed(self.sep_children[s]))
        return out

    def seps_below(self, p: int) -> list[int]:
        return [self.part_child[q] for q in self.parts_below(p) if self.part_child[q] is not None]


# ---------------------------------------------------------------------------
# normal atoms, tiny vertices, desires and the staged valuation


def is_normal_number(m: int, k: int) -> bool:
    """An atom with ``m`` vertices is normal iff m >= k + k/3 (exact)."""
    return 3 * m >= 4 * k


def normal_threshold(k: int) -> Fraction:
    return Fraction(4 * k, 3)


@dataclass(frozen=True)
class Valuation:
    big: Mapping[int, int]  # separator -> part id of its big branch

    def big_part(self, s: int) -> int:
        return self.big[s]

    def small_part(self, shape: Shape, s: int) -> int:
        a, b = shape.sep_children[s]
        return b if self.big[s] == a else a

    def big_index(self, shape: Shape, s: int) -> int:
        return shape.sep_children[s].index(self.big[s])


class Profile:
    """Normal-atom counts, tiny-vertex counts and the canonical valuation of a
    tree given atom and separator vertex numbers."""

    def __init__(self, shape: Shape, atom_num: Mapping[int, int], sep_num: Mapping[int, int], k: int,
                 fixed: Optional[Mapping[int, int]] = None):
        self.shape = shape
        self.k = k
        self.atom_num = atom_num
        self.sep_num = sep_num
        self.normal = {a: is_normal_number(atom_num[a], k) for a in shape.atoms}
        self.normal_below = {p: sum(self.normal[a] for a in shape.atoms_below(p)) for p in shape.part_child}
        self.tiny = {}
        for a in shape.atoms:
            if not self.normal[a]:
                s = shape.sep_above(a)
                self.tiny[a] = atom_num[a] - (sep_num[s] if s is not None else 0)
        self.big: dict[int, int] = {}
        for s in shape.seps_postorder:
            if fixed is not None:
                self.big[s] = fixed[s]
            else:
                self.big[s] = self._choose(s)
        self.valuation = Valuation(dict(self.big))

    def almost_small(self, s: int, idx: int) -> bool:
        c = self.shape.sep_children[s]
        return self.normal_below[c[idx]] <= self.normal_below[c[1 - idx]]

    def balanced(self, s: int) -> bool:
        a, b = self.shape.sep_children[s]
        return self.normal_below[a] == self.normal_below[b]

    def in_big(self, s: int, idx: int) -> bool:
        return self.shape.sep_children[s][idx] == self.big[s]

    def desires(self, atom: int, s: int) -> bool:
        """The desire predicate; needs the big branches strictly between the
        atom's own separator and ``s``."""
        if self.normal.get(atom, True):
            return False
        path = self.shape.up(atom)
        if not path or path[0][0] == s:
            return False
        for t, idx in path[1:]:
            if t == s:
                return self.almost_small(s, idx)
            if not self.in_big(t, idx):
                return False
        return False

    def desired(self, atom: int) -> list[int]:
        """Separators desired by a tiny atom, lowest first."""
        if self.normal.get(atom, True):
            return []
        path = self.shape.up(atom)
        out = []
        for t, idx in path[1:]:
            if self.almost_small(t, idx):
                out.append(t)
            if not self.in_big(t, idx):
                break
        return out

    def relevant_tiny(self, s: int, idx: int) -> int:
        branch = self.shape.sep_children[s][idx]
        return sum(self.tiny[a] for a in self.shape.atoms_below(branch)
                   if a in self.tiny and self.desires(a, s))

    def desiring_atoms(self, s: int, idx: int) -> int:
        branch = self.shape.sep_children[s][idx]
        return sum(1 for a in self.shape.atoms_below(branch) if a in self.tiny and self.desires(a, s))

    def _choose(self, s: int) -> int:
        a, b = self.shape.sep_children[s]
        la, lb = self.normal_below[a], self.normal_below[b]
        if la != lb:
            return a if la > lb else b
        ra, rb = self.relevant_tiny(s, 0), self.relevant_tiny(s, 1)
        if ra != rb:
            return a if ra > rb else b
        # atoms without tiny vertices still count as desiring
        da, db = self.desiring_atoms(s, 0), self.desiring_atoms(s, 1)
        if da != db:
            return a if da > db else b
        return a if min(self.shape.atoms_below(a)) < min(self.shape.atoms_below(b)) else b

    def small(self, s: int) -> int:
        a, b = self.shape.sep_children[s]
        return b if self.big[s] == a else a

    def check_valuation(self) -> bool:
        for s in self.shape.seps_postorder:
            a, b = self.shape.sep_children[s]
            i = 0 if self.big[s] == a else 1
            c = (a, b)
            if self.normal_below[c[i]] < self.normal_below[c[1 - i]]:
                return False
            if self.balanced(s) and self.relevant_tiny(s, i) < self.relevant_tiny(s, 1 - i):
                return False
        return True


# ---------------------------------------------------------------------------
# free anti-edge counts at a separator


class UndefinedFreeCount(ArithmeticError):
    """The general formula divides by a zero normal-atom count."""


def balanced_multipartite_free(s: int, classes: int) -> Fraction:
    """s^2/2 - s^2/(2L): edges of a balanced complete L-partite graph on s
    vertices, ignoring rounding."""
    return Fraction(s * s, 2) - Fraction(s * s, 2 * classes)


def general_free(s: int, m_values: list[int], normal_small: int, small_is_atom: bool) -> Fraction:
    """Free anti-edge count at a separator from its vertex number, the
    technical-data values m(X, S) of the small branch and its normal atoms.

    A small branch that is a single atom has no free anti-edges at all, which
    is also what the formula gives for a normal atom.
    """
    if small_is_atom:
        return Fraction(0)
    ms = sum(m_values)
    if ms > s:
        raise ValueError(f"technical data assigns {ms} vertices to a separator of size {s}")
    if ms == s:
        spread = Fraction(0)
    elif normal_small == 0:
        raise UndefinedFreeCount(f"small branch has no normal atom while {s - ms} separator vertices remain")
    else:
        spread = Fraction((s - ms) ** 2, 2 * normal_small)
    return Fraction(s * s, 2) - spread - sum(Fraction(m * (m - 1), 2) for m in m_values) - Fraction(ms, 2)
