"""Exhaustive ground truth: subset search for highly connected subgraphs and
small-graph scans over labelled graphs."""

from __future__ import annotations

import time
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Optional

import numpy as np

from . import _kernels
from .abstract import BoundConstants
from .graph import Graph
from .septree import Found, assign_valuation, build, verify_tree

BRUTE_LIMIT = 16
MASK_BITS = 62


class BudgetExceeded(RuntimeError):
    """The requested enumeration is larger than the configured budget."""


def _nb_masks(g: Graph) -> np.ndarray:
    return np.array(g.masks if g.n else [0], dtype=np.int64)


def brute_highly_connected(g: Graph, k: int, min_size: int) -> Optional[frozenset]:
    """Vertex set of at least ``min_size`` vertices inducing a (k+1)-connected
    subgraph, or None.

    Sizes are tried from n downwards and, within a size, subsets in ascending
    bitmask order, so the answer is a largest such set. Connectivity is
    decided by trying every vertex cut of size at most k.
    """
    if g.n > BRUTE_LIMIT:
        raise BudgetExceeded(f"subset search is limited to {BRUTE_LIMIT} vertices, got {g.n}")
    if k < 0:
        raise ValueError("k must be nonnegative")
    found = int(_kernels.brute_search(_nb_masks(g), g.n, k, max(min_size, 1)))
    if found == 0:
        return None
    return frozenset(v for v in range(g.n) if found >> v & 1)


def brute_is_k_plus_1_connected(g: Graph, k: int) -> bool:
    if g.n > MASK_BITS:
        raise BudgetExceeded("graph too large for bitmask cut enumeration")
    return bool(_kernels.brute_is_connected_plus(_nb_masks(g), (1 << g.n) - 1, k))


# ---------------------------------------------------------------------------
# graph enumeration


def pair_count(n: int) -> int:
    return n * (n - 1) // 2


def exhaustive_allowed(k: int, n: int) -> bool:
    return n <= 6 or (k == 1 and n <= 7)


def graph_from_mask(n: int, mask: int) -> Graph:
    """Edge set from a mask over vertex pairs in lexicographic order."""
    es, i = [], 0
    for u in range(n):
        for v in range(u + 1, n):
            if mask >> i & 1:
                es.append((u, v))
            i += 1
    return Graph(n, es)


def sweep_probabilities(k: int, n: int) -> tuple[float, ...]:
    return (0.3, 0.5, 0.7, min(1.0, (10 * k / 3) / (n - 1)))


def random_masks(k: int, n: int, seed: int, trials: int) -> np.ndarray:
    """G(n, p) samples as pair masks; trial t uses the t-th sweep probability
    cyclically."""
    m = pair_count(n)
    if m > MASK_BITS:
        raise BudgetExceeded(f"n={n} has more than {MASK_BITS} vertex pairs")
    rng = np.random.default_rng(seed)
    ps = np.array(sweep_probabilities(k, n))[np.arange(trials) % 4]
    weights = np.left_shift(np.int64(1), np.arange(m, dtype=np.int64))
    out = np.empty(trials, dtype=np.int64)
    chunk = 1 << 14
    for lo in range(0, trials, chunk):
        hi = min(trials, lo + chunk)
        bits = rng.random((hi - lo, m)) < ps[lo:hi, None]
        out[lo:hi] = bits.astype(np.int64) @ weights
    return out


def iter_masks(k: int, n: int, mode: str, seed: int = 0, trials: int = 0) -> Iterator[int]:
    if mode == "exhaustive":
        if not exhaustive_allowed(k, n):
            raise BudgetExceeded(f"exhaustive enumeration not allowed for k={k}, n={n}")
        yield from range(1 << pair_count(n))
    elif mode == "random":
        yield from (int(x) for x in random_masks(k, n, seed, trials))
    else:
        raise ValueError(f"unknown mode {mode!r}")


# ---------------------------------------------------------------------------
# reports


@dataclass
class ScanReport:
    k: int
    n: int
    mode: str
    scanned: int
    qualifying: int
    counterexamples: int
    max_edges: int
    bound: str
    elapsed: float
    extra: dict = field(default_factory=dict)

    def to_dict(self, timing: bool = True) -> dict:
        d = asdict(self)
        d.update(d.pop("extra"))
        if not timing:
            d.pop("elapsed")
        return d


_STAT_NAMES = ("scanned", "qualifying", "counterexamples", "disagreements",
               "max_edges", "forest_mismatches", "witnesses")


@lru_cache(maxsize=64)
def _kernel_stats(k: int, n: int, mode: str, seed: int, trials: int) -> tuple[tuple[int, ...], float]:
    out = np.zeros(len(_STAT_NAMES), dtype=np.int64)
    start = time.perf_counter()
    if mode == "exhaustive":
        if not exhaustive_allowed(k, n):
            raise BudgetExceeded(f"exhaustive enumeration not allowed for k={k}, n={n}")
        _kernels.scan_range(n, k, 0, 1 << pair_count(n), out)
    elif mode == "random":
        _kernels.scan_masks(n, k, random_masks(k, n, seed, trials), out)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return tuple(int(x) for x in out), time.perf_counter() - start


def kernel_stats(k: int, n: int, mode: str = "exhaustive", seed: int = 0, trials: int = 0) -> dict:
    """Counts from one compiled pass: theorem counterexamples, flow/brute
    disagreements and, for k = 1, forest mismatches. Cached per argument set."""
    if k < 1 or n < 1:
        raise ValueError("need k >= 1 and n >= 1")
    if mode == "exhaustive":
        seed, trials = 0, 0
    stats, elapsed = _kernel_stats(k, n, mode, seed, trials)
    d = dict(zip(_STAT_NAMES, stats))
    d["elapsed"] = elapsed
    return d


def _mode_extra(mode: str, seed: int, trials: int) -> dict:
    return {"seed": seed, "trials": trials} if mode == "random" else {}


def scan_theorem_main(k: int, n: int, mode: str = "exhaustive", seed: int = 0, trials: int = 0) -> ScanReport:
    """Every scanned graph with average degree at least 10k/3 must contain a
    (k+1)-connected subgraph on at least 2k+1 vertices."""
    d = kernel_stats(k, n, mode, seed, trials)
    extra = _mode_extra(mode, seed, trials)
    extra["flow_disagreements"] = d["disagreements"]
    return ScanReport(k, n, mode, d["scanned"], d["qualifying"], d["counterexamples"], d["max_edges"],
                      str(Fraction(5 * k * n, 3)), d["elapsed"], extra)


def scan_bound(k: int, n: int, mode: str = "exhaustive", seed: int = 0, trials: int = 0) -> ScanReport:
    """Every scanned graph without a highly connected subgraph must stay below
    beta(n-k) + gamma/L - eps, with L the normal-atom count of its built
    separator-tree, and the tree must pass the per-part inequalities."""
    if n < 2 * k + 1:
        raise ValueError(f"the edge bound needs n >= 2k+1, got n={n}")
    if mode == "exhaustive" and pair_count(n) > 15:
        raise BudgetExceeded("exhaustive bound scans are limited to n <= 6")
    consts = BoundConstants(k)
    start = time.perf_counter()
    scanned = qualifying = bad = max_e = 0
    tight = 0
    worst = None
    for mask in iter_masks(k, n, mode, seed, trials):
        scanned += 1
        g = graph_from_mask(n, mask)
        t = build(g, k)
        if isinstance(t, Found):
            continue
        qualifying += 1
        e = len(g.edges)
        max_e = max(max_e, e)
        val = assign_valuation(t)
        L = sum(t.profile.normal.values())
        bound = consts.bound(n, L)
        checks = verify_tree(g, t, val)
        ok = e <= bound and checks["baby_case"] and checks["alpha_inequality"]
        if not ok:
            bad += 1
            if worst is None:
                worst = sorted(g.edges)
        elif e == bound:
            tight += 1
    extra = _mode_extra(mode, seed, trials)
    extra["equalities"] = tight
    if worst is not None:
        extra["first_counterexample"] = [list(e) for e in worst]
    return ScanReport(k, n, mode, scanned, qualifying, bad, max_e,
                      str(consts.bound(n, 1)), time.perf_counter() - start, extra)


def bound_check_graph(g: Graph, k: int) -> dict:
    """Edge bound verdict for a single graph, e.g. a family member."""
    t = build(g, k)
    if isinstance(t, Found):
        return {"witness": sorted(t.witness)}
    L = sum(t.profile.normal.values())
    bound = BoundConstants(k).bound(g.n, L)
    e = len(g.edges)
    return {"e": e, "L": max(L, 1), "bound": str(bound), "holds": e <= bound, "equality": e == bound}


def conjectured_bound(k: int, n: int) -> Fraction:
    """Conjectured maximum for 2k <= n <= k^2 + k; the linear formula beyond."""
    d = n - k
    linear = Fraction(3 * k - 1, 2) * d
    if n >= k * k + k:
        return linear
    return linear + Fraction(d, 3 * k) + Fraction(k * k, 3) * Fraction(k, 2 * d) - Fraction(k, 2)


def search_edge_maximum(k: int, n: int) -> dict:
    """Largest edge count over all labelled n-vertex graphs without a
    (k+1)-connected subgraph on more than 2k vertices, next to the
    conjectured value. Nothing is asserted."""
    if not exhaustive_allowed(k, n) or k > 2:
        raise BudgetExceeded(f"edge-maximum search not allowed for k={k}, n={n}")
    d = kernel_stats(k, n)
    out = {"k": k, "n": n, "max_edges": d["max_edges"], "scanned": d["scanned"]}
    if n > k:
        out["conjectured"] = str(conjectured_bound(k, n))
    return out
