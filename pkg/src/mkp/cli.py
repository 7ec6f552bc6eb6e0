"""``mkp`` command line: gen, chordal, build, solve, complete, verify.

Machine-readable JSON goes to stdout, one-line human summaries to stderr.
Exit codes: 0 success, 1 infeasible input or failed verification, 2 usage
or contract error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from fractions import Fraction

from . import __version__
from .assignment import Partition, load_solution, partition_to_edges
from .chordal import clique_row_bound, greedy_fill_in
from .completion import complete_solution
from .exceptions import GeneratorError, GraphFormatError, InfeasibleAssignment, RowCapExceeded
from .graph import GENERATORS, all_pairs, emit_graph, parse_graph
from .lpfile import emit_lp
from .models import (
    MODEL_KINDS,
    build_clique_ilp,
    build_clique_isdp,
    build_edge_model,
    build_isdp,
    build_node_edge_model,
    model_size,
)
from .sdpa import emit_sdpa
from .solver import (
    branch_and_bound_solve,
    brute_force_solve,
    check_feasible_clique_model,
    check_feasible_edge_model,
    gap,
    verify_isdp_point,
)

EXIT_OK, EXIT_FAILED, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _num(q):
    q = Fraction(q)
    return q.numerator if q.denominator == 1 else float(q)


def _seed(text):
    value = int(text)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must be a 64-bit unsigned integer")
    return value


def _read_input(path):
    try:
        with open(path, "rb") as fh:
            raw = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    return raw, hashlib.sha256(raw).hexdigest()


def _load_graph(path):
    raw, digest = _read_input(path)
    return parse_graph(raw.decode("utf-8")), digest


def _emit(report):
    json.dump(report, sys.stdout, indent=2)
    sys.stdout.write("\n")


def _say(msg):
    print(msg, file=sys.stderr)


def _write(path, text):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _base(args, digest=None):
    report = {"command": args.argv}
    if digest:
        report["input_sha256"] = digest
    return report


def cmd_gen(args):
    fam = args.family
    if fam == "band":
        _require(args, "n", "k")
        g = GENERATORS[fam](args.n, args.k, args.seed)
    elif fam in ("spinglass2g", "spinglass2pm"):
        _require(args, "rows", "cols")
        g = GENERATORS[fam](args.rows, args.cols, args.seed)
    else:
        _require(args, "n")
        g = GENERATORS[fam](args.n, 0.1 if args.density is None else args.density, args.seed)
    text = emit_graph(g) + "\n"
    weights = list(g.weights.values())
    stats = {
        "n": g.n,
        "m": g.m,
        "weight_min": _num(min(weights)) if weights else None,
        "weight_max": _num(max(weights)) if weights else None,
        "weight_sum": _num(sum(weights, Fraction(0))),
        "negative_fraction": sum(w < 0 for w in weights) / len(weights) if weights else 0.0,
    }
    if args.output:
        _write(args.output, text)
        _emit({**_base(args), "family": fam, "seed": args.seed, **stats, "output": args.output})
    else:
        sys.stdout.write(text)
    _say(f"{fam}: n={g.n} m={g.m}")
    return EXIT_OK


def _require(args, *names):
    missing = [f"--{n}" for n in names if getattr(args, n) is None]
    if missing:
        raise UsageError(f"--family {args.family} needs {' '.join(missing)}")


def cmd_chordal(args):
    g, digest = _load_graph(args.input)
    start = time.perf_counter()
    d = greedy_fill_in(g)
    elapsed = time.perf_counter() - start
    report = _base(args, digest)
    report.update(
        n=g.n,
        E=g.m,
        F=len(d.F),
        fill=len(d.fill_edges),
        K=len(d.cliques),
        max_clique=d.max_clique_size,
        clique_bound_holds=(len(d.cliques) <= g.n - 2) if g.n >= 3 else None,
        cliques=[list(c) for c in d.cliques],
        fill_edges=[list(e) for e in d.fill_edges],
        seconds=round(elapsed, 6),
    )
    _emit(report)
    _say(f"|E|={g.m} |F|={len(d.F)} fill={len(d.fill_edges)} |K|={len(d.cliques)} max clique={d.max_clique_size}")
    return EXIT_OK


def _build(model, g, k, relax):
    if model == "edge":
        return build_edge_model(g, k, relax), None
    if model == "node-edge":
        return build_node_edge_model(g, k, relax), None
    if model == "isdp":
        return build_isdp(g, k, relax), None
    d = greedy_fill_in(g)
    if model == "clique-ilp":
        return build_clique_ilp(g, d, k, relax), d
    return build_clique_isdp(g, d, k, relax), d


def cmd_build(args):
    g, digest = _load_graph(args.input)
    if args.model in ("isdp", "clique-isdp") and not args.relax:
        raise UsageError(
            "integer SDP models cannot be written to SDPA (integrality has no slot in the "
            "format); pass --relax for the continuous relaxation, or use 'mkp verify' to "
            "check integer points"
        )
    start = time.perf_counter()
    model, d = _build(args.model, g, args.k, args.relax)
    text = emit_sdpa(model) if args.model.endswith("isdp") else emit_lp(model)
    elapsed = time.perf_counter() - start
    _write(args.output, text)
    report = _base(args, digest)
    report.update(
        model=args.model,
        k=args.k,
        relax=args.relax,
        format="sdpa" if args.model.endswith("isdp") else "lp",
        output=args.output,
        size=model_size(model).as_dict(),
        objective_offset=_num(model.offset),
        seconds=round(elapsed, 6),
    )
    if args.model == "clique-ilp":
        report["rows_before_dedupe"] = clique_row_bound(d.cliques, args.k)
    _emit(report)
    _say(f"{args.model}: {report['size']}")
    return EXIT_OK


def cmd_solve(args):
    g, digest = _load_graph(args.input)
    solver = brute_force_solve if args.method == "brute" else branch_and_bound_solve
    result = solver(g, args.k)
    out = result.to_json()
    if args.lower_bound is not None:
        out["lower_bound"] = args.lower_bound
        out["gap"] = gap(result.optimum, args.lower_bound)
    if args.output:
        _write(args.output, json.dumps(out, indent=2) + "\n")
    _emit({**_base(args, digest), **out})
    _say(f"optimum {result.optimum} after {result.nodes_explored} nodes")
    return EXIT_OK


def _objective_from_bits(g, x):
    return sum((w for e, w in g.weights.items() if x[e]), Fraction(0))


def cmd_complete(args):
    g, digest = _load_graph(args.input)
    kind, sol, k = load_solution(args.assignment)
    k = args.k or k
    if k is None:
        raise UsageError("k is missing from the assignment file; pass --k")
    d = greedy_fill_in(g)
    x_F = partition_to_edges(sol, d.F) if kind == "partition" else sol
    report = _base(args, digest)
    try:
        full = complete_solution(x_F, d, k)
    except InfeasibleAssignment as exc:
        report.update(feasible_input=False, violated=exc.row)
        _emit(report)
        _say(f"input assignment is infeasible: {exc.row}")
        return EXIT_FAILED
    verdict = check_feasible_edge_model(full, g.n, k)
    report.update(
        feasible_input=True,
        objective_before=_num(_objective_from_bits(g, x_F)),
        objective_after=_num(_objective_from_bits(g, full)),
        completed=verdict.to_json(),
        **full.to_json(k),
    )
    if args.output:
        _write(args.output, json.dumps(full.to_json(k), indent=2) + "\n")
    _emit(report)
    _say(f"completed {len(full) - len(d.F)} edges; edge-model feasible: {verdict.ok}")
    return EXIT_OK if verdict else EXIT_FAILED


def cmd_verify(args):
    g, digest = _load_graph(args.input)
    kind, sol, k = load_solution(args.solution)
    k = args.k or k
    if k is None:
        raise UsageError("k is missing from the solution file; pass --k")
    if args.model == "edge":
        domain = all_pairs(g.n)
    elif args.model in ("clique-ilp", "clique-isdp"):
        d = greedy_fill_in(g)
        domain = d.F
    elif args.model == "isdp":
        domain = all_pairs(g.n)
    else:
        domain = g.edges
    x = partition_to_edges(sol, domain) if kind == "partition" else sol
    missing = [e for e in domain if e not in x]
    if missing:
        raise UsageError(f"solution lacks edge {missing[0]} required by the {args.model} model")
    if args.model == "edge":
        verdict = check_feasible_edge_model(x, g.n, k)
    elif args.model == "clique-ilp":
        verdict = check_feasible_clique_model(x, d, k)
    elif args.model == "isdp":
        verdict = verify_isdp_point(x, build_isdp(g, k), k)
    elif args.model == "clique-isdp":
        verdict = verify_isdp_point(x, build_clique_isdp(g, d, k), k)
    else:
        if kind != "partition":
            raise UsageError("node-edge verification needs a partition ('color') solution")
        verdict = _verify_node_edge(g, sol, k)
    report = _base(args, digest)
    report.update(model=args.model, k=k, **verdict.to_json())
    value = _objective_from_bits(g, x)
    report["objective"] = _num(value)
    if args.lower_bound is not None:
        report["gap"] = gap(value, args.lower_bound)
    _emit(report)
    _say(f"{args.model}: {'feasible' if verdict else 'infeasible, ' + str(verdict.row)}")
    return EXIT_OK if verdict else EXIT_FAILED


def _verify_node_edge(g, p: Partition, k):
    from .solver import Verdict

    model = build_node_edge_model(g, k)
    for v in g.vertices:
        if p.of(v) > k:
            # no indicator exists for this colour, so the assignment row fails
            return Verdict(False, f"assign_{v}", (v,))
    point = {f"xn_{i}_{c}": int(p.of(i) == c) for i in g.vertices for c in range(1, k + 1)}
    point.update({f"y_{i}_{j}": int(p.of(i) == p.of(j)) for i, j in g.edges})
    row = model.violated(point)
    return Verdict(True) if row is None else Verdict(False, row.name)


def build_parser():
    parser = argparse.ArgumentParser(prog="mkp", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"mkp {__version__}")
    sub = parser.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("gen", help="generate a random instance")
    p.add_argument("--family", required=True, choices=sorted(GENERATORS))
    p.add_argument("--n", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--rows", type=int)
    p.add_argument("--cols", type=int)
    p.add_argument("--density", type=float)
    p.add_argument("--seed", type=_seed, default=0)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("chordal", help="greedy fill-in chordal extension report")
    p.add_argument("-i", "--input", required=True)
    p.set_defaults(func=cmd_chordal)

    p = sub.add_parser("build", help="write an LP or SDPA model file")
    p.add_argument("--model", required=True, choices=MODEL_KINDS)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--relax", action="store_true")
    p.add_argument("-i", "--input", required=True)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("solve", help="exact solve by brute force or branch and bound")
    p.add_argument("-i", "--input", required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--method", choices=("brute", "bnb"), default="bnb")
    p.add_argument("--lower-bound", type=float)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("complete", help="extend a clique-model assignment to all vertex pairs")
    p.add_argument("-i", "--input", required=True)
    p.add_argument("--assignment", required=True)
    p.add_argument("--k", type=int)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_complete)

    p = sub.add_parser("verify", help="check a solution against a model's constraints")
    p.add_argument("-i", "--input", required=True)
    p.add_argument("--model", required=True, choices=MODEL_KINDS)
    p.add_argument("--solution", required=True)
    p.add_argument("--k", type=int)
    p.add_argument("--lower-bound", type=float)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    args.argv = ["mkp"] + argv
    try:
        return args.func(args)
    except (UsageError, RowCapExceeded, GraphFormatError, GeneratorError, ValueError) as exc:
        _say(f"mkp {args.cmd}: {exc}")
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
