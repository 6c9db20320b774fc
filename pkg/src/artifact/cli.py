"""Command-line front end.

Exit codes: 0 success, 1 a checked inequality failed, 2 a highly connected
subgraph was found, 64 malformed input, 65 budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

from .extremal import FAMILIES, FamilyError, generate, provenance_json
from .graph import Graph, GraphError
from .oracle import BudgetExceeded, bound_check_graph, scan_bound, scan_theorem_main, search_edge_maximum
from .septree import Found, assign_valuation, build, verify_tree
from .suites import DEFAULT_COUNT, SUITES, run_suite, suite_passed
from .tree import UndefinedFreeCount

EXIT_OK, EXIT_VIOLATION, EXIT_WITNESS, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 64, 65


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2)


def _emit(obj, path: Optional[str] = None) -> None:
    text = _dump(obj) + "\n"
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _read_graph(path: str) -> Graph:
    try:
        if path == "-":
            text = sys.stdin.read()
        else:
            with open(path) as fh:
                text = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    return Graph.from_text(text)


def _positive_k(k: int) -> int:
    if k < 1:
        raise UsageError("--k must be a positive integer")
    return k


# subcommands


def cmd_decompose(args) -> int:
    g = _read_graph(args.graph)
    t = build(g, _positive_k(args.k))
    if isinstance(t, Found):
        _emit({"k": args.k, "witness": sorted(t.witness)}, args.json)
        return EXIT_WITNESS
    _emit({"k": args.k, "tree": t.to_dict(assign_valuation(t))}, args.json)
    return EXIT_OK


def cmd_verify(args) -> int:
    g = _read_graph(args.graph)
    k = _positive_k(args.k)
    t = build(g, k)
    if isinstance(t, Found):
        _emit({"k": k, "witness": sorted(t.witness)})
        return EXIT_WITNESS
    report = {"k": k, "n": g.n, "e": len(g.edges)}
    try:
        checks = verify_tree(g, t, assign_valuation(t))
    except UndefinedFreeCount as exc:
        report["error"] = str(exc)
        _emit(report)
        return EXIT_VIOLATION
    if g.n >= 2 * k + 1:
        bound = bound_check_graph(g, k)
        checks["edge_bound"] = bound["holds"]
        report["edge_bound"] = {key: bound[key] for key in ("L", "bound", "equality")}
    report["checks"] = checks
    _emit(report)
    failed = [name for name, ok in checks.items() if not ok]
    if failed:
        print("violated: " + ", ".join(failed), file=sys.stderr)
        return EXIT_VIOLATION
    return EXIT_OK


def cmd_gen(args) -> int:
    param = {"G": args.i, "H": args.i, "mader": args.t}.get(args.family, args.copies)
    if param is None:
        flag = {"G": "--i", "H": "--i", "mader": "--t"}.get(args.family, "--copies")
        raise UsageError(f"family {args.family} needs {flag}")
    try:
        g, record = generate(args.family, args.k, param)
    except FamilyError as exc:
        raise UsageError(str(exc)) from None
    if args.provenance:
        with open(args.provenance, "w") as fh:
            fh.write(provenance_json(record) + "\n")
        sys.stdout.write(g.to_text())
    else:
        # a comment line keeps the output readable as a graph file
        sys.stdout.write("# " + provenance_json(record) + "\n" + g.to_text())
    return EXIT_OK if record["matches"] else EXIT_VIOLATION


def cmd_scan(args) -> int:
    k = _positive_k(args.k)
    mode = "random" if args.random else "exhaustive"
    if args.max:
        _emit(search_edge_maximum(k, args.n))
        return EXIT_OK
    fn = scan_bound if args.bound else scan_theorem_main
    try:
        rep = fn(k, args.n, mode, args.seed, args.trials if mode == "random" else 0)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    out = rep.to_dict(timing=args.timing)
    _emit(out)
    bad = out["counterexamples"] or out.get("flow_disagreements", 0)
    return EXIT_VIOLATION if bad else EXIT_OK


def cmd_lemmas(args) -> int:
    rep = run_suite(args.suite, args.grid_max, args.seed, args.count)
    if not args.timing:
        rep.pop("elapsed", None)
    _emit(rep)
    if not suite_passed(rep):
        failed = [key for key, v in rep.get("violations", {}).items() if v] or [args.suite]
        print(f"{args.suite}: violated: " + ", ".join(failed), file=sys.stderr)
        return EXIT_VIOLATION
    return EXIT_OK


def make_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="artifact", description="Separator-trees, extremal families and exhaustive checks.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    d = sub.add_parser("decompose", help="split a graph into a separator-tree or report a witness")
    d.add_argument("graph", help="edge-list file, '-' for stdin")
    d.add_argument("--k", type=int, required=True)
    d.add_argument("--json", metavar="OUT", help="write the JSON here instead of stdout")
    d.set_defaults(func=cmd_decompose)

    v = sub.add_parser("verify", help="check the per-tree inequalities and the edge bound")
    v.add_argument("graph")
    v.add_argument("--k", type=int, required=True)
    v.set_defaults(func=cmd_verify)

    g = sub.add_parser("gen", help="generate an extremal family member")
    g.add_argument("--family", choices=FAMILIES, required=True)
    g.add_argument("--k", type=int, required=True)
    g.add_argument("--i", type=int)
    g.add_argument("--t", type=int)
    g.add_argument("--copies", type=int)
    g.add_argument("--provenance", metavar="OUT", help="write provenance JSON here")
    g.set_defaults(func=cmd_gen)

    s = sub.add_parser("scan", help="exhaustive or sampled small-graph scans")
    what = s.add_mutually_exclusive_group(required=True)
    what.add_argument("--theorem", action="store_true", help="dense graphs must contain a witness")
    what.add_argument("--bound", action="store_true", help="witness-free graphs must obey the edge bound")
    what.add_argument("--max", action="store_true", help="largest witness-free edge count")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--n", type=int, required=True)
    how = s.add_mutually_exclusive_group()
    how.add_argument("--exhaustive", action="store_true", help="all labelled graphs (default)")
    how.add_argument("--random", action="store_true", help="G(n, p) samples")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--trials", type=int, default=100_000)
    s.add_argument("--timing", action="store_true", help="include elapsed seconds")
    s.set_defaults(func=cmd_scan)

    lm = sub.add_parser("lemmas", help="grid and seeded property suites")
    lm.add_argument("--suite", choices=SUITES, required=True)
    lm.add_argument("--grid-max", type=int)
    lm.add_argument("--seed", type=int, default=0)
    lm.add_argument("--count", type=int, default=DEFAULT_COUNT)
    lm.add_argument("--timing", action="store_true")
    lm.set_defaults(func=cmd_lemmas)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = make_parser().parse_args(argv)
    if getattr(args, "seed", 0) is not None and not 0 <= getattr(args, "seed", 0) < 2 ** 64:
        print("error: --seed must fit in 64 bits", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except (GraphError, UsageError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET


if __name__ == "__main__":
    sys.exit(main())
