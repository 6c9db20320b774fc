"""Seeded verification suites shared by the command line and the acceptance
tests. Each suite returns a JSON-ready tally of instances and violations."""

from __future__ import annotations

import time
from collections import Counter
from typing import Iterator

import numpy as np

from .abstract import (
    AbstractSepTree,
    calc1_grid_ok,
    calci_grid_ok,
    random_real_tree,
    random_saturated_tree,
    saturation_report,
)
from .graph import Graph, glue
from .molecules import (
    INF,
    check_compensation,
    check_composition,
    check_molecule_removal,
    check_reach_sum,
    compensation_grid_ok,
    compute_molecules,
    verify_section6,
)
from .septree import Found, SeparatorTree, assign_valuation, build, count_free_anti_edges, verify_tree
from .tree import UndefinedFreeCount

SUITES = ("calc1", "calci", "compensation", "section6", "removal", "saturation", "trees")
DEFAULT_GRID = {"calc1": 100, "calci": 200, "compensation": 1000}
DEFAULT_COUNT = 500
TREE_KS = (2, 3, 4, 6)


def saturated_trees(seed: int, count: int) -> Iterator[AbstractSepTree]:
    rng = np.random.default_rng(seed)
    for _ in range(count):
        k = int(rng.choice(TREE_KS))
        yield random_saturated_tree(rng, k, int(rng.integers(1, 17)), int(rng.integers(0, 9)))


def real_trees(seed: int, count: int) -> Iterator[AbstractSepTree]:
    rng = np.random.default_rng(seed)
    for _ in range(count):
        k = int(rng.choice(TREE_KS))
        normal = int(rng.integers(0, 7))
        tiny = int(rng.integers(0 if normal else 1, 4))
        yield random_real_tree(rng, k, normal, tiny)


def _block_chain(rng: np.random.Generator, k: int) -> tuple[int, list]:
    """Dense random blocks, each attached to k existing vertices."""
    size = int(rng.integers(k + 1, 2 * k + 1))
    n = size
    es = [(u, v) for u in range(size) for v in range(u + 1, size) if rng.random() < 0.8]
    for _ in range(int(rng.integers(0, 3))):
        size = int(rng.integers(k + 1, 2 * k + 1))
        shared = [int(x) for x in rng.choice(n, size=min(k, n), replace=False)]
        block = shared + list(range(n, n + size - len(shared)))
        n += size - len(shared)
        es += [(block[i], block[j]) for i in range(len(block)) for j in range(i + 1, len(block))
               if rng.random() < 0.8]
    return n, es


def _glued_blocks(rng: np.random.Generator, k: int) -> Graph:
    """Two block chains glued along k vertices picked at random on each side,
    so the separator meets several blocks of both sides."""
    n1, e1 = _block_chain(rng, k)
    n2, e2 = _block_chain(rng, k)
    s = min(k, n1, n2)
    left = Graph(n1, e1)
    right = Graph(n2, e2)
    pairs = zip(rng.choice(n1, size=s, replace=False).tolist(), rng.choice(n2, size=s, replace=False).tolist())
    return glue(left, right, dict(pairs))


def _split_sample(rng: np.random.Generator, k: int) -> Graph:
    """A two-block side attached to a block chain through a separator that
    takes private vertices from both blocks."""
    a, b = (int(x) for x in rng.integers(k + 1, 2 * k + 1, size=2))
    j = int(rng.integers(0, k))
    n = a + b - j
    xs, ys = list(range(a)), list(range(a - j, n))
    es = [(u, v) for blk in (xs, ys) for i, u in enumerate(blk) for v in blk[i + 1:] if rng.random() < 0.8]
    px, py = xs[:a - j], ys[j:]
    h = int(rng.integers(1, k)) if k > 1 else 1
    sep = rng.choice(px, size=min(h, len(px)), replace=False).tolist()
    sep += rng.choice(py, size=min(k - len(sep), len(py)), replace=False).tolist()
    n2, e2 = 0, []
    while n2 < len(sep):
        n2, e2 = _block_chain(rng, k)
    targets = rng.choice(n2, size=len(sep), replace=False).tolist()
    return glue(Graph(n2, e2), Graph(n, es), dict(zip(targets, sep)))


def _gnp(rng: np.random.Generator, k: int) -> Graph:
    n = int(rng.integers(2 * k + 1, 15))
    p = float(rng.choice((0.2, 0.35, 0.5)))
    bits = np.triu(rng.random((n, n)) < p, 1)
    return Graph(n, [tuple(map(int, e)) for e in np.argwhere(bits)])


def graph_trees(seed: int, count: int) -> Iterator[tuple[Graph, SeparatorTree]]:
    """Random graphs that split all the way down, with their separator-trees.

    Samples rotate between G(n, p), glued block chains and graphs whose
    separator meets two blocks of one side; the latter two put anti-edges
    into separators.
    """
    rng = np.random.default_rng(seed)
    made = tries = 0
    while made < count:
        kind = tries % 3
        tries += 1
        k = int(rng.integers(1, 4))
        if kind == 0:
            g = _gnp(rng, k)
        elif kind == 1:
            g = _glued_blocks(rng, k)
        else:
            g = _split_sample(rng, max(k, 2))
            k = max(k, 2)
        t = build(g, k)
        if isinstance(t, Found):
            continue
        made += 1
        yield g, t


def _grid(name: str, grid_max: int) -> dict:
    fn = {"calc1": calc1_grid_ok, "calci": calci_grid_ok, "compensation": compensation_grid_ok}[name]
    start = time.perf_counter()
    ok = bool(fn(grid_max))
    return {"suite": name, "grid_max": grid_max, "holds": ok, "elapsed": time.perf_counter() - start}


def section6_suite(seed: int, count: int) -> dict:
    """The molecule statements, reach sums and the compensation check."""
    fails: Counter = Counter()
    for a in saturated_trees(seed, count):
        rep = compute_molecules(a)
        for key, ok in verify_section6(a, rep).items():
            fails[key] += not ok
        fails["reach_sum"] += not all(check_reach_sum(a, rep, i)
                                      for i, m in enumerate(rep.molecules) if m.reach != INF)
        fails["compensation"] += not check_compensation(a, rep)
        for key, ok in check_composition(a).items():
            fails["composition_" + key] += not ok
    return {"suite": "section6", "seed": seed, "instances": count, "violations": dict(sorted(fails.items()))}


def removal_suite(seed: int, count: int) -> dict:
    """Per-molecule removal inequality, tallied by reach."""
    by_reach: Counter = Counter()
    checked: Counter = Counter()
    for a in saturated_trees(seed, count):
        rep = compute_molecules(a)
        for m in rep.molecules:
            key = "reach_" + ("inf" if m.reach == INF else str(m.reach) if m.reach < 4 else "4+")
            checked[key] += 1
            by_reach[key] += not check_molecule_removal(a, m.atoms, rep)
    return {"suite": "removal", "seed": seed, "instances": count, "molecules": dict(sorted(checked.items())),
            "violations": dict(sorted(by_reach.items()))}


def saturation_suite(seed: int, count: int) -> dict:
    fails: Counter = Counter()
    undefined = 0
    for a in real_trees(seed, count):
        rep = saturation_report(a)
        fails["saturated"] += not rep["saturated"]
        fails["normal_monotone"] += not rep["normal_monotone"]
        if rep["inequality"] is None:
            undefined += 1
        else:
            fails["inequality"] += not rep["inequality"]
    return {"suite": "saturation", "seed": seed, "instances": count, "undefined_edge_number": undefined,
            "violations": dict(sorted(fails.items()))}


def trees_suite(seed: int, count: int) -> dict:
    """Per-tree checks on separator-trees of random graphs."""
    fails: Counter = Counter()
    with_free = 0
    for g, t in graph_trees(seed, count):
        val = assign_valuation(t)
        try:
            verdicts = verify_tree(g, t, val)
        except UndefinedFreeCount:
            fails["undefined"] += 1
            continue
        for key, ok in verdicts.items():
            fails[key] += not ok
        with_free += any(count_free_anti_edges(t, val, s, val.small_part(t.shape, s)) for s in t.shape.seps)
    return {"suite": "trees", "seed": seed, "instances": count, "with_free_anti_edges": with_free,
            "violations": dict(sorted(fails.items()))}


def run_suite(name: str, grid_max: int | None = None, seed: int = 0, count: int = DEFAULT_COUNT) -> dict:
    if name in DEFAULT_GRID:
        return _grid(name, DEFAULT_GRID[name] if grid_max is None else grid_max)
    fn = {"section6": section6_suite, "removal": removal_suite,
          "saturation": saturation_suite, "trees": trees_suite}.get(name)
    if fn is None:
        raise ValueError(f"unknown suite {name!r}")
    return fn(seed, count)


def suite_passed(report: dict) -> bool:
    if "holds" in report:
        return report["holds"]
    return not any(report["violations"].values())
