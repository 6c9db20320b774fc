"""The eight acceptance criteria. Each records a PASS/FAIL line that the
terminal summary prints; running this file as a script prints them too."""

import time
from fractions import Fraction as F

import numpy as np
import pytest

from artifact.abstract import BoundConstants, check_main_bound, from_separator_tree, main_bound_slack
from artifact.extremal import build_G, gen_G, gen_Gstar_glued, gen_H, gen_mader, h_separator_edges
from artifact.graph import edge_count, is_forest
from artifact.oracle import graph_from_mask, kernel_stats, pair_count, scan_theorem_main
from artifact.septree import Found, build
from artifact.suites import run_suite, suite_passed

RESULTS: dict[str, str] = {}


def record(key: str, ok: bool, detail: str) -> None:
    RESULTS[key] = f"criterion {key}: {'PASS' if ok else 'FAIL'} - {detail}"


def timed(fn):
    start = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - start


# 1 --------------------------------------------------------------------------


def _formula_mismatches() -> list[str]:
    bad = []
    for k in range(1, 9):
        if edge_count(gen_G(k, 0)) != k * (2 * k - 1):
            bad.append(f"G_0 k={k}")
    if edge_count(gen_G(2, 1)) != 11:
        bad.append("G_1 k=2")
    for k in (2, 4):
        for copies in (1, 2, 3):
            g = gen_Gstar_glued(k, copies)
            if edge_count(g) != (F(5 * k, 3) - F(1, 2) - F(1, 6 * k)) * (g.n - k):
                bad.append(f"G* k={k} copies={copies}")
    for k in range(1, 6):
        for t in range(1, 7):
            g = gen_mader(k, t)
            if edge_count(g) != F(3 * k - 1, 2) * (g.n - k):
                bad.append(f"mader k={k} t={t}")
    for k in (2, 4, 8):
        if edge_count(gen_H(k, 0)) != F(5 * k * k, 3) - k + F(1, 3):
            bad.append(f"H_0 k={k}")
        p = k.bit_length() - 1
        for i in range(p + 1):
            g = gen_H(k, i)
            d = g.n - k
            eq7 = F(3 * k - 1, 2) * d + F(d, 3 * k) + F(k * k, 3) * F(k, 2 * d) - F(k, 2)
            if g.n != k + k * 2 ** i or edge_count(g) != eq7:
                bad.append(f"H_{i} k={k}")
            if i < p and h_separator_edges(k, i) != F(k * k, 2 ** (i + 2)) - F(k, 2):
                bad.append(f"S_{i} k={k}")
    return bad


def test_criterion_1_extremal_formulas():
    bad, elapsed = timed(_formula_mismatches)
    record("1", not bad and elapsed < 1, f"family edge counts vs closed forms, {elapsed:.2f}s"
           + (f", mismatches {bad}" if bad else ""))
    assert not bad
    assert elapsed < 1


# 2 --------------------------------------------------------------------------


def test_criterion_2_doubling_equality():
    slacks = {}
    for k, i in [(2, 0), (2, 1), (2, 2), (4, 0), (4, 1), (4, 2)]:
        g = gen_G(k, i)
        t = build(g, k)
        built = None if isinstance(t, Found) else main_bound_slack(from_separator_tree(t))
        a = build_G(k, i).abstract_tree()
        slacks[(k, i)] = (main_bound_slack(a), built, check_main_bound(a))
    ok = all(s == (0, 0, True) for s in slacks.values())
    record("2", ok, "main bound slack 0 on G_i for k=2,4 and i=0..2")
    assert ok, slacks


# 3, 6, 7 share one compiled pass per (k, n) -----------------------------------


EXHAUSTIVE = [(1, n) for n in range(1, 8)] + [(2, n) for n in range(1, 7)]
RANDOM = [(2, n) for n in (7, 8, 9)]
TRIALS = 100_000


def test_criterion_3_theorem_scan():
    start = time.perf_counter()
    reps = [scan_theorem_main(k, n) for k, n in EXHAUSTIVE]
    reps += [scan_theorem_main(k, n, "random", 0, TRIALS) for k, n in RANDOM]
    elapsed = time.perf_counter() - start
    bad = [(r.k, r.n) for r in reps if r.counterexamples]
    qualifying = sum(r.qualifying for r in reps)
    ok = not bad and elapsed <= 300
    record("3", ok, f"{sum(r.scanned for r in reps)} graphs, {qualifying} dense, "
           f"{len(bad)} counterexamples, {elapsed:.1f}s")
    assert not bad
    assert elapsed <= 300


def test_criterion_6_flow_matches_brute():
    stats = {kn: kernel_stats(*kn) for kn in EXHAUSTIVE}
    bad = {kn: d["disagreements"] for kn, d in stats.items() if d["disagreements"]}
    record("6", not bad, f"flow vs subset search on {sum(d['scanned'] for d in stats.values())} graphs, "
           f"{sum(bad.values())} disagreements")
    assert not bad


def _python_build_agrees(n: int) -> bool:
    # the compiled splitter mirrors build; check that on every graph up to n = 5
    for mask in range(1 << pair_count(n)):
        g = graph_from_mask(n, mask)
        if isinstance(build(g, 1), Found) == is_forest(g):
            return False
    return True


def test_criterion_7_forests():
    stats = {n: kernel_stats(1, n) for n in range(1, 8)}
    mismatches = sum(d["forest_mismatches"] for d in stats.values())
    direct = all(_python_build_agrees(n) for n in range(1, 6))
    ok = mismatches == 0 and direct
    record("7", ok, f"k=1 splits iff forest on {sum(d['scanned'] for d in stats.values())} graphs, "
           f"{mismatches} mismatches")
    assert mismatches == 0
    assert direct


# 4 --------------------------------------------------------------------------


COUNT = 500
STRUCTURAL = ("trees", "saturation", "section6")
_suite_reports: dict[str, dict] = {}


def _suite(name):
    if name not in _suite_reports:
        _suite_reports[name] = run_suite(name, seed=0, count=COUNT)
    return _suite_reports[name]


def _criterion_4_line():
    reps = {name: _suite(name) for name in STRUCTURAL + ("removal",)}
    failed = {name: {k: v for k, v in r["violations"].items() if v} for name, r in reps.items()
              if not suite_passed(r)}
    detail = f"{COUNT} seeded instances per suite"
    if failed:
        detail += f", violations {failed}"
    record("4", not failed, detail)


def test_criterion_4_structural_suites():
    _criterion_4_line()
    for name in STRUCTURAL:
        assert suite_passed(_suite(name)), _suite(name)


@pytest.mark.xfail(strict=True, reason="per-molecule removal bound fails for reach-one molecules "
                   "with technical data; see the decisions ledger")
def test_criterion_4_molecule_removal():
    _criterion_4_line()
    rep = _suite("removal")
    assert not any(rep["violations"].values()), rep["violations"]


# 5 --------------------------------------------------------------------------


def test_criterion_5_grids():
    reps, elapsed = timed(lambda: [run_suite(name) for name in ("calc1", "calci", "compensation")])
    ok = all(r["holds"] for r in reps) and elapsed < 1
    record("5", ok, "grids a<=b<=100, l-<l+<=200, l<=1000 " + f"{elapsed:.2f}s")
    assert ok, reps


# 8 --------------------------------------------------------------------------


def test_criterion_8_boundary_identity():
    bad = [k for k in range(1, 101)
           if k * (2 * k - 1) != (c := BoundConstants(k)).beta * k + c.gamma - c.eps]
    record("8", not bad, "k(2k-1) = beta k + gamma - eps for k=1..100")
    assert not bad


if __name__ == "__main__":
    for name, fn in list(globals().items()):
        if name.startswith("test_criterion"):
            try:
                fn()
            except AssertionError:
                pass
    for key in sorted(RESULTS):
        print(RESULTS[key])
