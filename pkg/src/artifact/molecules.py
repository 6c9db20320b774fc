"""Desires, achievements, molecules and their reach; checks of the molecule
statements and of the molecule-removal bound."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Union

from .abstract import (
    AbstractSepTree,
    BoundConstants,
    branching_error_value,
    edge_number,
    is_saturated,
    normal_atom_count,
    saturate,
    vertex_number,
    voll_normal_slack,
)
from .tree import TreeError

INF = math.inf
Reach = Union[int, float]  # an int, or math.inf when undefined


@dataclass(frozen=True)
class Molecule:
    atoms: tuple[int, ...]
    final: Optional[int]
    reach: Reach
    n: int  # tiny vertices


@dataclass(frozen=True)
class EquivalenceClass:
    sep: int
    atoms: tuple[int, ...]
    reach: int
    mass: int  # tiny vertices


@dataclass
class MoleculeReport:
    desires: dict[int, list[int]]
    achieves: dict[int, Optional[int]]
    molecules: list[Molecule]
    classes: dict[int, list[EquivalenceClass]] = field(default_factory=dict)  # by molecule index

    def molecule_of(self, atom: int) -> int:
        for i, m in enumerate(self.molecules):
            if atom in m.atoms:
                return i
        raise KeyError(atom)

    def x_sets(self, idx: int) -> dict[int, list[int]]:
        """X_i of molecule ``idx``: separators of the classes with reach in
        (l_M / 2^(i+1), l_M / 2^i]. Empty for infinite reach."""
        mol = self.molecules[idx]
        out: dict[int, list[int]] = {}
        if mol.reach == INF:
            return out
        for c in self.classes[idx]:
            i = 0
            while not (Fraction(mol.reach, 2 ** (i + 1)) < c.reach <= Fraction(mol.reach, 2 ** i)):
                i += 1
            out.setdefault(i, []).append(c.sep)
        return out

    def to_dict(self) -> dict:
        mols = []
        for i, m in enumerate(self.molecules):
            mols.append({
                "atoms": list(m.atoms),
                "final_separator": m.final,
                "reach": None if m.reach == INF else m.reach,
                "n_M": m.n,
                "classes": [{"separator": c.sep, "atoms": list(c.atoms), "reach": c.reach, "m": c.mass}
                            for c in self.classes[i]],
                "X": {str(j): v for j, v in sorted(self.x_sets(i).items())},
            })
        return {"molecules": mols}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def separator_reach(a: AbstractSepTree, s: int) -> int:
    """Normal atoms in the small branch of s."""
    return a.profile.normal_below[a.small(s)]


def compute_desires(a: AbstractSepTree) -> dict[int, list[int]]:
    """Separators desired by each tiny atom, lowest first."""
    return {x: a.profile.desired(x) for x in a.shape.atoms if x in a.profile.tiny}


def compute_achieves(a: AbstractSepTree, desires: Optional[dict] = None) -> dict[int, Optional[int]]:
    desires = compute_desires(a) if desires is None else desires
    sh = a.shape
    out: dict[int, Optional[int]] = {}
    for x, ds in desires.items():
        hit = [s for s in ds if sh.sep_children[s][sh.branch_index(s, x)] != a.profile.big[s]]
        if len(hit) > 1:
            raise AssertionError(f"atom {x} achieves several separators {hit}")
        out[x] = hit[0] if hit else None
    return out


def compute_molecules(a: AbstractSepTree) -> MoleculeReport:
    sh = a.shape
    desires = compute_desires(a)
    achieves = compute_achieves(a, desires)
    tiny = sorted(desires)
    parent = {x: x for x in tiny}

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    first_by_sep: dict[int, int] = {}
    for x in tiny:
        for s in desires[x]:
            if s in first_by_sep:
                rx, ry = find(x), find(first_by_sep[s])
                if rx != ry:
                    parent[max(rx, ry)] = min(rx, ry)
            else:
                first_by_sep[s] = x
    groups: dict[int, list[int]] = {}
    for x in tiny:
        groups.setdefault(find(x), []).append(x)

    depth = {s: len(sh.up(sh.part_above(s))) for s in sh.seps}
    molecules, classes = [], {}
    for idx, atoms in enumerate(sorted(groups.values())):
        n_m = sum(max(a.profile.tiny[x], 0) for x in atoms)
        got = [achieves[x] for x in atoms]
        if any(s is None for s in got):
            final, reach = None, INF
        else:
            final = min(set(got), key=lambda s: (depth[s], s))
            reach = separator_reach(a, final)
        molecules.append(Molecule(tuple(atoms), final, reach, n_m))
        by_sep: dict[int, list[int]] = {}
        for x in atoms:
            if achieves[x] is not None:
                by_sep.setdefault(achieves[x], []).append(x)
        classes[idx] = [EquivalenceClass(s, tuple(xs), separator_reach(a, s),
                                         sum(max(a.profile.tiny[x], 0) for x in xs))
                        for s, xs in sorted(by_sep.items())]
    return MoleculeReport(desires, achieves, molecules, classes)


# ---------------------------------------------------------------------------
# the ten molecule statements


def _atom_reach(a: AbstractSepTree, rep: MoleculeReport, x: int) -> Reach:
    s = rep.achieves[x]
    return INF if s is None else separator_reach(a, s)


def verify_section6(a: AbstractSepTree, rep: Optional[MoleculeReport] = None) -> dict[str, bool]:
    rep = compute_molecules(a) if rep is None else rep
    sh, prof = a.shape, a.profile
    out = {}

    finals = [m.final for m in rep.molecules if m.final is not None]
    out["final_separators_distinct"] = len(finals) == len(set(finals))

    out["unachieved_desire_balanced"] = all(
        prof.balanced(s) for x, ds in rep.desires.items() for s in ds if rep.achieves[x] != s)

    ok = True
    for m in rep.molecules:
        for x in m.atoms:
            s = rep.achieves[x]
            if s is not None and not (prof.balanced(s) or s == m.final):
                ok = False
    out["achieved_balanced_or_final"] = ok

    out["final_not_balanced"] = all(not prof.balanced(s) for s in finals)

    out["desired_reach_doubles"] = all(
        separator_reach(a, ds[i + 1]) >= 2 * separator_reach(a, ds[i])
        for ds in rep.desires.values() for i in range(len(ds) - 1))

    ok = True
    for cls in rep.classes.values():
        for c in cls:
            seps = sorted({s for x in c.atoms for s in rep.desires[x]})
            ok &= all(sh.comparable(s, t) for s in seps for t in seps)
    out["class_desires_chain"] = ok

    out["partner_class"] = _check_partner_classes(a, rep)

    ok = True
    for m in rep.molecules:
        if m.reach == INF:
            continue
        weight = {x: max(prof.tiny[x], 0) for x in m.atoms}
        for i in range(1, m.reach // 2 + 1):
            at_least_i = sum(w for x, w in weight.items() if _atom_reach(a, rep, x) >= i)
            at_least_2i = sum(w for x, w in weight.items() if _atom_reach(a, rep, x) >= 2 * i)
            ok &= 2 * at_least_2i >= at_least_i
    out["half_reach_doubles"] = ok

    ok_x0, ok_xi = True, True
    for idx, m in enumerate(rep.molecules):
        if m.reach == INF:
            continue
        xs = rep.x_sets(idx)
        ok_x0 &= len(xs.get(0, [])) == 1
        i = 1
        while 2 ** (i + 1) <= m.reach:  # i <= log2(l_M) - 1
            ok_xi &= len(xs.get(i, [])) <= 2 ** (i - 1)
            i += 1
    out["x0_single"] = ok_x0
    out["x_i_bounded"] = ok_xi
    return out


def _check_partner_classes(a: AbstractSepTree, rep: MoleculeReport) -> bool:
    """For an atom whose reach is below that of its molecule: its class lies
    in the small branch of the achieved separator, the big branch holds atoms
    of exactly one class desiring it (achieving nothing counts as one class
    of infinite reach), that class reaches at least twice as far and carries
    at least as many tiny vertices, and classes of nearby reach get distinct
    partners."""
    sh, prof = a.shape, a.profile
    for m in rep.molecules:
        partner: dict[int, object] = {}
        for x in m.atoms:
            s = rep.achieves[x]
            if s is None:
                continue
            i = separator_reach(a, s)
            if not i < m.reach:
                continue
            small = a.small(s)
            mates = [y for y in m.atoms if rep.achieves[y] == s]
            if any(sh.branch_index(s, y) is None or sh.sep_children[s][sh.branch_index(s, y)] != small
                   for y in mates):
                return False
            big = prof.big[s]
            keys = {rep.achieves[y] for y in m.atoms
                    if s in rep.desires[y] and sh.sep_children[s][sh.branch_index(s, y)] == big}
            if len(keys) != 1:
                return False
            key = keys.pop()
            reach_y = INF if key is None else separator_reach(a, key)
            if reach_y < 2 * i:
                return False
            ys = [y for y in m.atoms if rep.achieves[y] == key]
            if sum(max(prof.tiny[y], 0) for y in mates) > sum(max(prof.tiny[y], 0) for y in ys):
                return False
            partner[s] = key
        for s1, y1 in partner.items():
            for s2, y2 in partner.items():
                if s1 < s2:
                    r1, r2 = separator_reach(a, s1), separator_reach(a, s2)
                    if max(r1, r2) < 2 * min(r1, r2) and y1 == y2:
                        return False
    return True


def check_reach_sum(a: AbstractSepTree, rep: MoleculeReport, idx: int) -> bool:
    m = rep.molecules[idx]
    if m.reach == INF:
        raise ValueError("reach sum needs a finite reach")
    total = sum((Fraction(max(a.profile.tiny[x], 0), _atom_reach(a, rep, x)) for x in m.atoms), Fraction(0))
    return total <= Fraction(2, 3) * m.n + Fraction(m.n, 3 * m.reach ** 2)


# ---------------------------------------------------------------------------
# removing molecules


def delete_molecule(a: AbstractSepTree, atoms) -> AbstractSepTree:
    """Shrink the molecule's tiny atoms to the separator above them and drop
    their technical data; big branches stay as they were."""
    atoms = set(atoms)
    if not atoms <= set(a.profile.tiny):
        raise TreeError("molecule contains a non-tiny atom")
    atom_num = dict(a.atom_num)
    for x in atoms:
        s = a.shape.sep_above(x)
        atom_num[x] = a.sep_num[s] if s is not None else atom_num[x]
        if atom_num[x] < 1:
            raise TreeError(f"atom {x} would be left without vertices")
    tech = {key: m for key, m in a.tech.items() if key[0] not in atoms}
    return AbstractSepTree(a.shape, atom_num, a.sep_num, a.k, tech, big=a.big)


def molecule_edge_number(a: AbstractSepTree, atoms) -> Fraction:
    return edge_number(a) - edge_number(delete_molecule(a, atoms))


def _is_molecule(a: AbstractSepTree, rep: MoleculeReport, atoms) -> int:
    want = tuple(sorted(atoms))
    for i, m in enumerate(rep.molecules):
        if m.atoms == want:
            return i
    raise TreeError(f"{list(want)} is not a molecule")


def log2_at_least(q: Fraction, reach: int) -> bool:
    """Exact test of q <= log2(reach) for a rational q and integer reach >= 1."""
    if q <= 0:
        return True
    if reach == 1:
        return False
    # 2^(a/b) <= reach  <=>  2^a <= reach^b
    if q > math.log2(reach) + 1e-9 * (1 + q):
        return False
    return 2 ** q.numerator <= reach ** q.denominator


def log2_at_most(q: Fraction, reach: int) -> bool:
    """Exact test of log2(reach) <= q."""
    if q < 0:
        return False
    if q == 0:
        return reach == 1
    if math.log2(reach) > q + 1e-9 * (1 + q):
        return False
    return reach ** q.denominator <= 2 ** q.numerator


def class_loss(k: int, m: int, reach: int) -> Fraction:
    """Edge loss of deleting a class of m tiny vertices that all count at a
    separator of the given reach: k m + k m / l - m^2 / (2 l) - m / 2."""
    return k * m + Fraction(k * m, reach) - Fraction(m * m, 2 * reach) - Fraction(m, 2)


def removal_excess(k: int, e_m: Fraction, n_m: int) -> Fraction:
    return e_m - BoundConstants(k).beta * n_m


def check_molecule_removal(a: AbstractSepTree, atoms, rep: Optional[MoleculeReport] = None) -> bool:
    """e(M) <= beta n_M + k^2 log2(l_M) / (18 l_M^3); the error term is 0
    for infinite reach."""
    rep = compute_molecules(a) if rep is None else rep
    m = rep.molecules[_is_molecule(a, rep, atoms)]
    excess = removal_excess(a.k, molecule_edge_number(a, m.atoms), m.n)
    if excess <= 0:
        return True
    if m.reach == INF:
        return False
    return log2_at_least(excess * 18 * m.reach ** 3 / (a.k * a.k), m.reach)


def compensation_holds(k: int, lo: int, hi: int) -> bool:
    """gamma x(S) >= k^2 log2(lo) / (18 lo^3) for branch counts lo < hi."""
    x = branching_error_value(lo, hi)
    # gamma x >= k^2 log2(lo) / (18 lo^3)  <=>  log2(lo) <= 6 lo^3 x
    return log2_at_most(6 * lo ** 3 * x, lo)


def compensation_grid_ok(limit: int) -> bool:
    """The worst case x = 1/(4 l^2) reduces the comparison to l^2 <= 2^(3l)."""
    return all(ell * ell <= 2 ** (3 * ell) for ell in range(1, limit + 1))


def check_compensation(a: AbstractSepTree, rep: Optional[MoleculeReport] = None) -> bool:
    rep = compute_molecules(a) if rep is None else rep
    finals = [m.final for m in rep.molecules if m.final is not None]
    if len(finals) != len(set(finals)):
        return False
    prof = a.profile
    for m in rep.molecules:
        if m.reach == INF:
            continue
        s = m.final
        if prof.balanced(s):
            return False
        if not compensation_holds(a.k, m.reach, prof.normal_below[prof.big[s]]):
            return False
    return True


def check_composition(a: AbstractSepTree) -> dict[str, bool]:
    """Delete the molecules one at a time and follow the bound through.

    ``telescoping``: the per-molecule edge numbers add up to the total loss.
    ``normal_bound``: what is left saturates to a normal tree meeting the
    strengthened normal bound. ``main_bound``: the resulting bound on e(T).
    """
    if not is_saturated(a):
        raise TreeError("composition check needs a saturated tree")
    rep = compute_molecules(a)
    cur = a
    losses = []
    for m in rep.molecules:
        nxt = delete_molecule(cur, m.atoms)
        losses.append(edge_number(cur) - edge_number(nxt))
        cur = nxt
    out = {"telescoping": edge_number(a) - edge_number(cur) == sum(losses, Fraction(0))}
    rest = saturate(cur)
    if all(rest.is_normal(x) for x in rest.shape.atoms) and rest.shape.atoms and normal_atom_count(rest) > 0:
        out["normal_bound"] = voll_normal_slack(rest) >= 0 and edge_number(cur) <= edge_number(rest)
    else:
        out["normal_bound"] = len(rest.shape.atoms) == 1
    c = BoundConstants(a.k)
    n = vertex_number(a)
    out["main_bound"] = n < 2 * a.k or edge_number(a) <= c.bound(n, normal_atom_count(a))
    return out
