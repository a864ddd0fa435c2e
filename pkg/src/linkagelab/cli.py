"""Command-line entry point.

JSON results go to stdout, a one-line human summary to stderr.  Exit codes:
0 all verdicts true, 1 a verification failed, 2 usage, format, envelope or
budget problems.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import time
from fractions import Fraction

from . import io as gio
from .benes import augmented_benes, augmented_link, benes_construct, benes_link, degree3_transform
from .flow import flow_capacity_certificate, integralize, solve_concurrent_flow
from .graph import BlowupView, grid_graph, linkage_errors
from .indsub import GraphInvariant, alternating_enumerator, colsub_preprocess, colsub_via_indsub
from .linkage import (
    BudgetExceeded,
    EnvelopeError,
    benes_witness,
    grid_witness,
    is_matching_linked,
    max_matching_linked_set,
)
from .randomgraphs import gnp_experiment
from .reduction import PipelineError, count_colorful_sub, full_pipeline


class UsageError(Exception):
    pass


def _default_seed():
    raw = os.environ.get("LINKAGELAB_SEED", "0")
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"LINKAGELAB_SEED must be an integer, got {raw!r}") from None


def _int_list(text):
    try:
        return [int(x) for x in text.replace(" ", "").split(",") if x]
    except ValueError:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from None


def _json_default(obj):
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, (set, frozenset, tuple)):
        return list(obj)
    raise TypeError(f"cannot serialise {type(obj).__name__}")


# --- benes -------------------------------------------------------------------


def cmd_benes_build(args):
    net = augmented_benes(args.level) if args.augment else benes_construct(args.level)
    if args.degree3:
        if not args.augment:
            raise UsageError("--degree3 applies to the augmented network; add --augment")
        d3 = degree3_transform(net)
        graph, inputs, outputs = d3.graph, d3.inputs, net.outputs
    else:
        graph, inputs, outputs = net.graph, net.inputs, net.outputs
    text = gio.format_graph(graph, inputs=inputs, outputs=outputs)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
        args.artifacts = [args.out]
    else:
        sys.stdout.write(text)
    summary = {"level": args.level, "vertices": graph.n, "edges": graph.m,
               "max_degree": graph.max_degree, "augmented": args.augment, "degree3": args.degree3}
    return True, summary, not args.out


def cmd_benes_route(args):
    pairs = gio.read_matching(args.matching)
    if args.augmented:
        net = augmented_benes(args.level)
        link = augmented_link(args.level, pairs)
        want = pairs
    else:
        net = benes_construct(args.level)
        link = benes_link(args.level, pairs)
        want = [(i, net.outputs[j]) for i, j in pairs]
    errs = linkage_errors(net.graph, link, want)
    result = {
        "level": args.level,
        "augmented": args.augmented,
        "paths": [{"pair": list(pair), "path": list(p)} for pair, p in link.items],
        "max_congestion": link.max_congestion(),
        "verified": not errs,
        "errors": errs,
    }
    return not errs, result, False


# --- linkage -----------------------------------------------------------------


def cmd_linkage_certify(args):
    g = gio.read_graph(args.graph)
    vertices = _int_list(args.set)
    q = args.blowup
    host = BlowupView(g, q) if q > 1 else g
    for v in vertices:
        if not 0 <= v < host.n:
            raise UsageError(f"vertex {v} is not in the (blown-up) graph")
    cert = is_matching_linked(host, vertices, budget=args.budget)
    result = {
        "set": vertices,
        "q": q,
        "matchings_checked": cert.matchings_checked,
        "status": cert.status,
        "counterexample": cert.counterexample,
    }
    if cert.status == "inconclusive":
        return None, result, False
    return cert.certified, result, False


def cmd_linkage_max(args):
    g = gio.read_graph(args.graph)
    w = max_matching_linked_set(g, args.blowup, budget=args.budget)
    return True, w.as_dict(), False


# --- reduce ------------------------------------------------------------------


def _pattern(text, budget):
    kind, _, arg = text.partition(":")
    if kind == "benes":
        level = int(arg)
        return augmented_benes(level).graph, benes_witness(level)
    if kind == "grid":
        ell = int(arg)
        return grid_graph(ell), grid_witness(ell)
    if kind == "file":
        h = gio.read_graph(arg)
        return h, max_matching_linked_set(h, 1, budget=budget, exact=h.n <= 4)
    raise UsageError(f"pattern must be benes:L, grid:L or file:PATH, got {text!r}")


def cmd_reduce_pipeline(args):
    g = gio.read_graph(args.instance)
    try:
        h, witness = _pattern(args.pattern, args.budget)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    report = full_pipeline(g, h, witness, verify=args.verify, fallback=not args.no_fallback)
    report["pattern"] = args.pattern
    report["witness"] = witness.as_dict()
    verdict = report.get("counts_equal", True) and report["size_bound_ok"]
    return verdict, report, False


# --- flow --------------------------------------------------------------------


def cmd_flow_eps(args):
    g = gio.read_graph(args.graph)
    terms = _int_list(args.terminals)
    sol = solve_concurrent_flow(g, terms)
    result = {"terminals": terms, "epsilon": str(sol.epsilon)}
    if sol.epsilon > 0:
        clique = integralize(sol)
        raw = sol.epsilon * len(sol.terminals) ** 2 / 108
        result.update(D=clique.D, q=clique.q, bound=str(max(Fraction(1), raw)), bound_raw=str(raw))
    else:
        result.update(D=None, q=None, bound="1", bound_raw="0")
    if args.certify:
        if sol.epsilon == 0:
            raise UsageError("terminals are disconnected; nothing to certify")
        cert = flow_capacity_certificate(g, terms, seed=args.seed)
        result["certificate"] = {"mode": cert.mode, "matchings_checked": cert.matchings_checked,
                                 **cert.witness.as_dict()}
    return True, result, False


# --- random ------------------------------------------------------------------


def cmd_random_experiment(args):
    if not 0 <= args.p <= 1:
        raise UsageError("--p must lie in [0, 1]")
    rep = gnp_experiment(args.k, args.p, args.r, args.trials, args.seed,
                         budget=args.budget, jobs=args.jobs)
    return True, rep.as_dict(), False


# --- indsub ------------------------------------------------------------------


def _invariant(name, h):
    if name == "indicator":
        return GraphInvariant.indicator_of(h)
    if name.startswith("table:"):
        path = name[6:]
        k, rows = gio.parse_invariant_table(open(path).read(), path)
        return GraphInvariant.from_table(k, dict(rows))
    try:
        return GraphInvariant.builtin(name, h.n)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def cmd_indsub_reduce(args):
    h = gio.read_graph(args.pattern)
    host = gio.read_colored(args.host)
    phi = _invariant(args.invariant, h)
    if phi.k != h.n:
        raise UsageError(f"invariant has arity {phi.k}, pattern has {h.n} vertices")
    coef = alternating_enumerator(phi, h)
    if coef == 0:
        raise UsageError("alternating enumerator of the pattern is zero for this invariant")
    pre = colsub_preprocess(h, host)
    reduced = colsub_via_indsub(h, pre, phi)
    direct = count_colorful_sub(h, host)
    result = {"phi_hat": str(coef), "reduced_count": reduced, "direct_count": direct,
              "match": reduced == direct}
    return reduced == direct, result, False


# --- selftest ----------------------------------------------------------------


def cmd_selftest(args):
    from .acceptance import run_all

    results = run_all(seed=args.seed, echo=lambda line: print(line, file=sys.stderr))
    out = {
        "criteria": [
            {"number": r.number, "title": r.title, "passed": r.passed,
             "seconds": round(r.seconds, 2), "detail": r.detail}
            for r in results
        ]
    }
    return all(r.passed for r in results), out, False


# --- parser ------------------------------------------------------------------


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None,
                        help="random seed (default: $LINKAGELAB_SEED or 0)")
    common.add_argument("--jobs", type=int, default=1, help="worker processes for trials")
    common.add_argument("--budget", type=int, default=200_000,
                        help="search-node budget per linkage search")

    parser = argparse.ArgumentParser(prog="linkagelab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    benes = sub.add_parser("benes", help="Benes networks").add_subparsers(dest="action", required=True)
    p = benes.add_parser("build", parents=[common], help="emit a network in graph format")
    p.add_argument("--level", type=int, required=True)
    p.add_argument("--augment", action="store_true")
    p.add_argument("--degree3", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=cmd_benes_build)
    p = benes.add_parser("route", parents=[common], help="route a matching file")
    p.add_argument("--level", type=int, required=True)
    p.add_argument("--matching", required=True,
                   help="lines 'i j': input i to output j, or input pairs with --augmented")
    p.add_argument("--augmented", action="store_true")
    p.set_defaults(func=cmd_benes_route)

    link = sub.add_parser("linkage", help="matching-linked sets").add_subparsers(dest="action", required=True)
    p = link.add_parser("certify", parents=[common], help="certify a matching-linked set")
    p.add_argument("--graph", required=True)
    p.add_argument("--set", required=True, help='comma-separated vertices, e.g. "0,3,5"')
    p.add_argument("--blowup", type=int, default=1, help="check in graph (x) J_q")
    p.set_defaults(func=cmd_linkage_certify)
    p = link.add_parser("max", parents=[common], help="largest matching-linked set of a blowup")
    p.add_argument("--graph", required=True)
    p.add_argument("--blowup", type=int, default=1)
    p.set_defaults(func=cmd_linkage_max)

    red = sub.add_parser("reduce", help="3-Coloring reduction").add_subparsers(dest="action", required=True)
    p = red.add_parser("pipeline", parents=[common], help="run the full counting pipeline")
    p.add_argument("--instance", required=True)
    p.add_argument("--pattern", required=True, help="benes:L | grid:L | file:H.graph")
    p.add_argument("--verify", action="store_true", help="also run the brute-force counters")
    p.add_argument("--no-fallback", action="store_true",
                   help="fail instead of using the single-block embedding")
    p.set_defaults(func=cmd_reduce_pipeline)

    flow = sub.add_parser("flow", help="concurrent flow").add_subparsers(dest="action", required=True)
    p = flow.add_parser("eps", parents=[common], help="exact epsilon(H, W)")
    p.add_argument("--graph", required=True)
    p.add_argument("--terminals", required=True)
    p.add_argument("--certify", action="store_true", help="build and check the linked set")
    p.set_defaults(func=cmd_flow_eps)

    rnd = sub.add_parser("random", help="random-graph experiments").add_subparsers(dest="action", required=True)
    p = rnd.add_parser("experiment", parents=[common], help="equipartition linkage experiment")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--trials", type=int, default=100)
    p.set_defaults(func=cmd_random_experiment)

    ind = sub.add_parser("indsub", help="induced subgraph counting").add_subparsers(dest="action", required=True)
    p = ind.add_parser("reduce", parents=[common], help="colourful count via #IndSub")
    p.add_argument("--pattern", required=True)
    p.add_argument("--host", required=True, help="colored graph file")
    p.add_argument("--invariant", default="indicator",
                   help="indicator | clique | edgeless | connected | even_edges | one | table:FILE")
    p.set_defaults(func=cmd_indsub_reduce)

    p = sub.add_parser("selftest", parents=[common], help="run the acceptance checks")
    p.set_defaults(func=cmd_selftest)
    return parser


def dispatch(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    start = time.perf_counter()
    try:
        if args.seed is None:
            args.seed = _default_seed()
        verdict, result, quiet = args.func(args)
    except (UsageError, ValueError, BudgetExceeded, OSError) as exc:
        # ValueError covers format and envelope errors and malformed inputs
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except PipelineError as exc:
        code = 2 if isinstance(exc.__cause__, (EnvelopeError, ValueError)) else 1
        print(f"error: {exc}", file=sys.stderr)
        return code
    elapsed = round(time.perf_counter() - start, 4)
    name = f"{args.command} {getattr(args, 'action', '')}".strip()
    timings = {"total": elapsed}
    if isinstance(result, dict) and isinstance(result.get("timings"), dict):
        timings.update(result["timings"])
    report = {
        "command": ["linkagelab"] + list(argv if argv is not None else sys.argv[1:]),
        "seed": args.seed,
        "timings": timings,
        "verdicts": {name: verdict},
        "artifacts": getattr(args, "artifacts", []),
        "result": result,
    }
    if not quiet:
        print(json.dumps(report, indent=2, default=_json_default))
    status = {True: "ok", False: "FAILED", None: "inconclusive"}[verdict]
    print(f"{name}: {status} in {elapsed}s", file=sys.stderr)
    if verdict is None:
        return 2
    return 0 if verdict else 1


def main():
    sys.exit(dispatch())


if __name__ == "__main__":
    main()
