"""Command line entry point.

Exit status: 0 when every validity certificate passes, 1 on a failed
certificate or degenerate input, 2 on usage or input-format errors.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

import numpy as np

from . import io
from .cover import cover as run_cover, validate_cover
from .delaunay import Graph, cover_pairs, delaunay_graph, matching_of
from .experiment import SUITES, run_experiment
from .generate import GENERATORS, gen_instance, perturb
from .geometry import DegenerateInputError, GeometryError, hitting_set
from .oracle import (BudgetExceeded, OracleBudget, exact_k_ball, exact_max_packing, exact_min_cover,
                     max_independent_bruteforce, max_matching_bruteforce)
from .pack import pack_greedy, validate_packing
from .render import homothets_from_json, render_svg
from .weaknet import build_weak_net, verify_hitting
from .zonotope import zonotope_cover, zonotope_weak_net


class UsageError(Exception):
    pass


def _common(p):
    p.add_argument("--seed", type=int, default=0, help="seed for every randomized step")
    p.add_argument("--out", type=Path, help="write the JSON result here (default: stdout)")
    p.add_argument("--svg", type=Path, help="render the result as SVG")
    p.add_argument("--quiet", action="store_true", help="suppress the summary line")


def _inputs(p, k=False, eps=False):
    p.add_argument("--body", type=Path, required=True, help="body JSON")
    p.add_argument("--points", type=Path, required=True, help="point-set JSON")
    p.add_argument("--jitter", type=float, default=0.0, metavar="SIGMA",
                   help="Gaussian perturbation applied before solving (seeded by --seed)")
    if k:
        p.add_argument("--k", type=int, required=True)
    if eps:
        p.add_argument("--epsilon", type=float, required=True)


def build_parser():
    parser = argparse.ArgumentParser(prog="homocover", description="Covering and packing point sets with homothets.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate an instance")
    p.add_argument("generator", choices=GENERATORS)
    p.add_argument("--param", action="append", default=[], metavar="KEY=VALUE")
    _common(p)

    p = sub.add_parser("cover", help="k-minus cover")
    _inputs(p, k=True)
    p.add_argument("--method", choices=("auto", "net", "greedy"), default="auto")
    p.add_argument("--lenient", action="store_true", help="fall back to smaller homothets on boundary ties")
    _common(p)

    p = sub.add_parser("pack", help="greedy k-plus packing")
    _inputs(p, k=True)
    p.add_argument("--lenient", action="store_true", help="accept candidates holding 3k/2 or more points")
    _common(p)

    p = sub.add_parser("net", help="weak epsilon-net")
    _inputs(p, eps=True)
    p.add_argument("--approx-factor", type=float)
    p.add_argument("--audit", choices=("auto", "exact", "random", "none"), default="auto")
    _common(p)

    p = sub.add_parser("zono-net", help="vertex net for a zonotope")
    _inputs(p, eps=True)
    p.add_argument("--audit", choices=("auto", "random", "none"), default="auto")
    _common(p)

    p = sub.add_parser("zono-cover", help="zonotope cover via vertex nets and facet regions")
    _inputs(p, k=True)
    p.add_argument("--lenient", action="store_true")
    _common(p)

    p = sub.add_parser("delaunay", help="generalized Delaunay graph")
    _inputs(p)
    p.add_argument("--steps", type=int, default=720, help="pencil resolution for polygon bodies")
    p.add_argument("--match", action="store_true", help="highlight a maximum matching in the SVG")
    _common(p)

    p = sub.add_parser("match", help="maximum matching of a graph JSON")
    p.add_argument("--graph", type=Path, required=True)
    _common(p)

    p = sub.add_parser("oracle", help="exact solvers for small instances")
    p.add_argument("task", choices=("kball", "cover", "pack", "matching", "independent"))
    p.add_argument("--body", type=Path)
    p.add_argument("--points", type=Path)
    p.add_argument("--graph", type=Path)
    p.add_argument("--k", type=int)
    p.add_argument("--budget", type=float, default=60.0, help="time limit in seconds")
    _common(p)

    p = sub.add_parser("experiment", help="run an experiment suite")
    p.add_argument("suite", choices=SUITES)
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--n-max", type=int)
    p.add_argument("--csv", type=Path, help="per-record table with wall times")
    p.add_argument("--figures", type=Path, help="directory for PNG figures")
    _common(p)

    p = sub.add_parser("render", help="SVG of points with homothets and edges")
    p.add_argument("--points", type=Path, required=True)
    p.add_argument("--body", type=Path)
    p.add_argument("--homothets", type=Path, help="cover or packing JSON")
    p.add_argument("--graph", type=Path)
    p.add_argument("--project", action="store_true", help="draw the first two coordinates of d > 2 data")
    _common(p)
    return parser


def _load(args):
    try:
        body = io.body_from_dict(io.read_json(args.body))
        S = io.points_from_dict(io.read_json(args.points))
    except (OSError, ValueError, KeyError) as exc:
        raise UsageError(str(exc)) from exc
    if args.jitter:
        S = perturb(S, args.jitter, args.seed)
    return body, S


def _emit(args, payload):
    text = io.dumps(payload)
    if args.out:
        args.out.write_text(text + "\n")
    else:
        print(text)


def _say(args, msg):
    if not args.quiet:
        print(msg, file=sys.stderr)


def cmd_gen(args):
    params = {}
    for item in args.param:
        key, _, val = item.partition("=")
        if not _:
            raise UsageError(f"bad --param {item!r}; use KEY=VALUE")
        params[key] = val
    inst = gen_instance(args.generator, params, args.seed)
    _emit(args, inst.to_dict())
    if args.svg:
        render_svg(args.svg, inst.points[:, :2])
    _say(args, f"generated {len(inst.points)} points")
    return 0


def cmd_cover(args):
    body, S = _load(args)
    c = run_cover(body, S, args.k, args.method, strict=not args.lenient)
    v = validate_cover(c, S)
    out = c.to_dict(valid=bool(v))
    if args.jitter:
        out["jitter"] = {"sigma": args.jitter, "seed": args.seed}
    _emit(args, out)
    if args.svg:
        render_svg(args.svg, S, c.homothets)
    _say(args, f"cover: {len(c)} homothets, ratio {c.size_ratio:.3f}, valid={bool(v)}")
    return 0 if v else 1


def cmd_pack(args):
    body, S = _load(args)
    p = pack_greedy(body, S, args.k, strict=not args.lenient)
    v = validate_packing(p, S)
    _emit(args, p.to_dict(valid=bool(v)))
    if args.svg:
        render_svg(args.svg, S, p.homothets)
    _say(args, f"packing: {len(p)} homothets, ratio {p.size_ratio:.3f}, valid={bool(v)}")
    return 0 if v else 1


def _audit(args, net, body, S, modes):
    if args.audit == "none":
        return None
    return verify_hitting(net, body, S, args.epsilon, mode=args.audit if args.audit in modes else "auto",
                          seed=args.seed)


def cmd_net(args):
    body, S = _load(args)
    net = build_weak_net(body, S, args.epsilon, args.approx_factor)
    rep = _audit(args, net, body, S, ("exact", "random"))
    bound = math.ceil(1 / args.epsilon) * len(hitting_set(body, 1 / net.approx_factor))
    out = net.to_dict()
    out.update(sizeBound=bound, audit=None if rep is None else {"mode": rep.mode, "passed": rep.passed})
    _emit(args, out)
    if args.svg:
        render_svg(args.svg, np.vstack([S, net.points]) if len(net) else S)
    ok = (rep is None or rep.passed) and len(net) <= bound
    _say(args, f"net: {len(net)} points over {net.rounds} rounds (bound {bound}), audit={'skipped' if rep is None else rep.passed}")
    return 0 if ok else 1


def cmd_zono_net(args):
    body, S = _load(args)
    net = zonotope_weak_net(body, S, args.epsilon)
    rep = _audit(args, net, body, S, ("random",))
    bound = len(body.verts) / args.epsilon
    out = net.to_dict()
    out.update(sizeBound=bound, audit=None if rep is None else {"mode": rep.mode, "passed": rep.passed})
    _emit(args, out)
    if args.svg:
        render_svg(args.svg, np.vstack([S, net.points]) if len(net) else S)
    ok = (rep is None or rep.passed) and len(net) <= bound + 1e-9
    _say(args, f"zonotope net: {len(net)} points (bound {bound:g})")
    return 0 if ok else 1


def cmd_zono_cover(args):
    body, S = _load(args)
    c = zonotope_cover(body, S, args.k, strict=not args.lenient)
    v = validate_cover(c, S)
    _emit(args, c.to_dict(valid=bool(v)))
    if args.svg:
        render_svg(args.svg, S, c.homothets)
    _say(args, f"zonotope cover: {len(c)} homothets, valid={bool(v)}")
    return 0 if v else 1


def cmd_delaunay(args):
    body, S = _load(args)
    g = delaunay_graph(body, S, args.steps)
    out = g.to_dict()
    out["approximate"] = g.approximate
    highlight = []
    if args.match:
        M = matching_of(g)
        highlight = M.edges
        out["matching"] = [list(e) for e in M.edges]
        out["pairCover"] = len(cover_pairs(body, S, g))
    _emit(args, out)
    if args.svg:
        render_svg(args.svg, S, edges=g.edges, highlight=highlight)
    _say(args, f"Delaunay graph: {len(g.edges)} edges{' (approximate)' if g.approximate else ''}")
    return 0


def _graph(path):
    try:
        return Graph.from_dict(io.read_json(path))
    except (OSError, ValueError, KeyError) as exc:
        raise UsageError(str(exc)) from exc


def cmd_match(args):
    g = _graph(args.graph)
    M = matching_of(g)
    _emit(args, {"size": len(M), "edges": [list(e) for e in M.edges], "tutteSet": M.tutte_set,
                 "certified": M.certified})
    _say(args, f"matching of size {len(M)}, certified={M.certified}")
    return 0 if M.certified else 1


def cmd_oracle(args):
    budget = OracleBudget(max_points=400 if args.task == "kball" else 20, time_limit=args.budget)
    if args.task in ("matching", "independent"):
        if not args.graph:
            raise UsageError("--graph is required")
        g = _graph(args.graph)
        fn = max_matching_bruteforce if args.task == "matching" else max_independent_bruteforce
        _emit(args, {"size": fn(g.n, g.edges)})
        return 0
    if not args.points or args.k is None:
        raise UsageError("--points and --k are required")
    args.jitter = 0.0
    if args.task == "kball":
        S = io.points_from_dict(io.read_json(args.points))
        h = exact_k_ball(S, args.k, budget)
        _emit(args, h.to_dict())
        return 0
    if not args.body:
        raise UsageError("--body is required")
    body, S = _load(args)
    if args.task == "cover":
        res, v = exact_min_cover(body, S, args.k, budget), None
        v = validate_cover(res, S)
    else:
        res = exact_max_packing(body, S, args.k, budget)
        v = validate_packing(res, S)
    _emit(args, res.to_dict(valid=bool(v)))
    if args.svg:
        render_svg(args.svg, S, res.homothets)
    _say(args, f"optimal {args.task}: {len(res)} homothets")
    return 0 if v else 1


def cmd_experiment(args):
    rep = run_experiment(args.suite, args.trials, args.seed, args.n_max)
    _emit(args, rep.to_dict())
    if args.csv:
        from .report import write_csv
        write_csv(rep, args.csv)
    if args.figures:
        from .report import plot_report
        plot_report(rep, args.figures)
    if not args.quiet:
        print(rep.table(), file=sys.stderr)
    return 0 if rep.passed else 1


def cmd_render(args):
    S = io.points_from_dict(io.read_json(args.points))
    hs, edges = [], []
    if args.homothets:
        if not args.body:
            raise UsageError("--body is required with --homothets")
        body = io.body_from_dict(io.read_json(args.body))
        hs = homothets_from_json(body, io.read_json(args.homothets)["homothets"])
    if args.graph:
        edges = _graph(args.graph).edges
    if not args.svg:
        raise UsageError("--svg is required")
    render_svg(args.svg, S, hs, edges, project=args.project)
    return 0


COMMANDS = {"gen": cmd_gen, "cover": cmd_cover, "pack": cmd_pack, "net": cmd_net, "zono-net": cmd_zono_net,
            "zono-cover": cmd_zono_cover, "delaunay": cmd_delaunay, "match": cmd_match, "oracle": cmd_oracle,
            "experiment": cmd_experiment, "render": cmd_render}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (DegenerateInputError, BudgetExceeded) as exc:
        print(f"failed: {exc}", file=sys.stderr)
        return 1
    except GeometryError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
