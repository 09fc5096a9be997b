"""Command line entry point: ``propnet <command> ...``.

Exit status is 0 on success, 2 when a size cap refuses the request and 1 for
any input problem (bad file, bad parameter, unsupported graph class).
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import axioms, centrality as cen
from .errors import (ConvergenceError, DivergenceError, GraphClassError, GraphParseError,
                     ParameterError, SizeCapError)
from .experiments import deletion_experiment, euclidean_experiment, sweep_experiment
from .generators import MODELS, EuclideanConfig, generate
from .io import read_graph, read_labeled_graph, read_selection, write_edge_list, write_matrix, write_vector
from .rules import canonical_rule, run_rule

ALL_RULES = "top-rank,top-katz,mes-rank,mes-katz,bos-rank,bos-katz,seq-absorb-rank"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _int_list(text: str) -> list[int]:
    out = []
    for part in str(text).split(","):
        part = part.strip()
        if ":" in part:
            a, b = part.split(":")
            out += list(range(int(a), int(b) + 1))
        elif part:
            out.append(int(part))
    return out


def _float_list(text: str) -> list[float]:
    return [float(x) for x in str(text).split(",") if x.strip()]


def _ratio(text: str) -> tuple[int, int]:
    a, b = str(text).split(":")
    return int(a), int(b)


def _pair(text: str) -> tuple[float, float]:
    a, b = str(text).split(",")
    return float(a), float(b)


def _global_flags(suppress: bool) -> argparse.ArgumentParser:
    # subcommands repeat the global flags without defaults, so a flag given
    # before the subcommand is not reset by the subparser
    def dflt(v):
        return argparse.SUPPRESS if suppress else v
    g = _Parser(add_help=False)
    g.add_argument("--seed", type=int, default=dflt(0))
    g.add_argument("--alpha", type=float, default=dflt(None),
                   help="decay factor (default 0.85, or 0.85/lambda for Katz)")
    g.add_argument("--format", choices=("csv", "json"), default=dflt("json"))
    g.add_argument("--out", default=dflt(None), help="output file (default stdout)")
    g.add_argument("--config", default=dflt(None), help="flat key=value file; flags win")
    g.add_argument("-v", "--verbose", action="store_true", default=dflt(False))
    return g


def build_parser() -> argparse.ArgumentParser:
    common = _global_flags(suppress=True)
    p = _Parser(prog="propnet", description=__doc__.splitlines()[0],
                parents=[_global_flags(suppress=False)])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def graph_args(sp):
        sp.add_argument("--graph", required=True, help="edge list file")
        sp.add_argument("--undirected", action="store_true",
                        help="read every line as a pair of opposite edges")

    sp = sub.add_parser("select", parents=[common], help="run a selection rule")
    graph_args(sp)
    sp.add_argument("--rule", required=True)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--kind", choices=("pagerank", "katz"), default="pagerank",
                    help="centrality for absorb-exact")
    sp.add_argument("--epsilon", type=float, default=cen.DEFAULT_EPSILON)
    sp.add_argument("--diagonal", choices=("literal", "zero", "cycles"), default=None)

    sp = sub.add_parser("centrality", parents=[common], help="centrality scores or utilities")
    graph_args(sp)
    sp.add_argument("--kind", choices=("pagerank", "katz"), default="pagerank")
    sp.add_argument("--utilities", action="store_true", help="emit the per-pair utility matrix")
    sp.add_argument("--diagonal", choices=("literal", "zero", "cycles"), default="literal")

    sp = sub.add_parser("axioms-check", parents=[common], help="check a proportionality axiom")
    graph_args(sp)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--selection", required=True, help="selection JSON or a JSON list of names")
    sp.add_argument("--axiom", choices=("clique", "component", "subgraph"), required=True)
    sp.add_argument("--scope", default="components",
                    help="components | all:<b> | explicit JSON list of node-name lists")

    sp = sub.add_parser("generate", parents=[common], help="sample a Euclidean graph")
    _euclid_args(sp)
    sp.add_argument("--points", default=None, help="write node,x,y,group CSV here")

    ex = sub.add_parser("experiment", parents=[common], help="run an experiment pipeline")
    exs = ex.add_subparsers(dest="experiment", required=True, parser_class=_Parser)
    e = exs.add_parser("sweep", parents=[common])
    _labeled_args(e)
    e.add_argument("--k-range", default="1:50")
    e.add_argument("--rules", default=ALL_RULES)
    e = exs.add_parser("deletion", parents=[common])
    _labeled_args(e)
    e.add_argument("--target", default="both")
    e.add_argument("--p", default="0.1,0.3,0.5,0.7,0.9")
    e.add_argument("--reps", type=int, default=100)
    e.add_argument("--k", default="10")
    e.add_argument("--rules", default=ALL_RULES)
    e = exs.add_parser("euclidean", parents=[common])
    _euclid_args(e)
    e.add_argument("--instances", type=int, default=100)
    e.add_argument("--k", type=int, default=10)
    e.add_argument("--rules", default="top-rank,top-katz,mes-rank,mes-katz,bos-rank,bos-katz")
    e.add_argument("--dump", default=None, help="write selected points CSV here")
    return p


def _labeled_args(sp):
    sp.add_argument("--graph", required=True)
    sp.add_argument("--labels", required=True, help="CSV with header node,label")
    sp.add_argument("--undirected", action="store_true")


def _euclid_args(sp):
    d = EuclideanConfig()
    sp.add_argument("--model", choices=MODELS, default=d.model)
    sp.add_argument("--n", type=int, default=d.n)
    sp.add_argument("--ratio", type=_ratio, default=d.ratio, help="a:b group split")
    sp.add_argument("--mean0", type=_pair, default=d.mean0)
    sp.add_argument("--mean1", type=_pair, default=d.mean1)
    sp.add_argument("--sigma0", type=float, default=d.sigma0)
    sp.add_argument("--sigma1", type=float, default=d.sigma1)
    sp.add_argument("--radius", type=float, default=d.radius)
    sp.add_argument("--edge-prob", type=float, default=d.edge_prob)
    sp.add_argument("--neighbor-count", type=int, default=d.neighbor_count)
    sp.add_argument("--omit-prob", type=float, default=d.omit_prob)
    sp.add_argument("--bias", type=float, default=d.bias)


def _euclid_config(args) -> EuclideanConfig:
    return EuclideanConfig(n=args.n, ratio=args.ratio, mean0=args.mean0, mean1=args.mean1,
                           sigma0=args.sigma0, sigma1=args.sigma1, model=args.model,
                           radius=args.radius, edge_prob=args.edge_prob,
                           neighbor_count=args.neighbor_count, omit_prob=args.omit_prob,
                           bias=args.bias, seed=args.seed).validate()


def read_config(path) -> dict[str, str]:
    out = {}
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ParameterError(f"{path}:{lineno}: expected key=value")
        key, val = line.split("=", 1)
        out[key.strip().lstrip("-").replace("-", "_")] = val.strip()
    return out


def _subparsers(parser):
    for action in parser._actions:
        if isinstance(action, argparse._SubParsersAction):
            for sp in action.choices.values():
                yield sp
                yield from _subparsers(sp)


def _apply_config(parser, argv) -> None:
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    if not known.config:
        return
    cfg = read_config(known.config)
    cfg.pop("config", None)
    global_keys = {a.dest for a in _global_flags(False)._actions}
    for sp in [parser, *_subparsers(parser)]:
        dests = {a.dest: a for a in sp._actions}
        local = {}
        for key, val in cfg.items():
            # global flags live on the top-level parser only
            if key not in dests or (sp is not parser and key in global_keys):
                continue
            if isinstance(dests[key], argparse._StoreTrueAction):
                val = val.lower() in ("1", "true", "yes", "on")
            local[key] = val
            dests[key].required = False
        sp.set_defaults(**local)
    known_keys = {a.dest for sp in [parser, *_subparsers(parser)] for a in sp._actions}
    unknown = set(cfg) - known_keys
    if unknown:
        raise ParameterError(f"unknown config key(s): {', '.join(sorted(unknown))}")


def _emit(args, text: str):
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
        if text and not text.endswith("\n"):
            sys.stdout.write("\n")


def _cmd_select(args):
    G = read_graph(args.graph, args.undirected)
    rule = canonical_rule(args.rule)
    kw = {}
    if rule == "absorb_exact":
        kw = {"kind": args.kind, "epsilon": args.epsilon}
        if args.alpha is not None:
            kw["alpha"] = args.alpha
        sel = run_rule(rule, G, args.k, **kw)
    else:
        if args.diagonal and rule.startswith(("mes", "bos")):
            kw["diagonal"] = args.diagonal
        sel = run_rule(rule, G, args.k, args.alpha, **kw)
    data = sel.to_dict(G)
    if args.format == "json":
        return json.dumps(data, indent=1)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["rank", "node", "id"])
    for i, v in enumerate(sel.members):
        w.writerow([i + 1, G.name(v), v])
    return buf.getvalue()


def _cmd_centrality(args):
    G = read_graph(args.graph, args.undirected)
    alpha = args.alpha if args.alpha is not None else cen.default_alpha(G, args.kind)
    if args.utilities:
        mu = cen.utilities(G, args.kind, alpha, args.diagonal).mu
        if args.format == "csv":
            return write_matrix(G, mu)
        return json.dumps({"kind": args.kind, "alpha": alpha, "diagonal": args.diagonal,
                           "nodes": [G.name(v) for v in range(G.n)], "mu": mu.tolist()})
    x = cen.centrality(G, args.kind, alpha)
    if args.format == "csv":
        return write_vector(G, x.values)
    return json.dumps({"kind": args.kind, "alpha": alpha, "residual": x.tolerance,
                       "scores": {G.name(v): float(s) for v, s in enumerate(x.values)}}, indent=1)


def _parse_scope(G, text: str):
    if text == "components":
        return "components"
    if text.startswith("all:"):
        return axioms.all_subsets_up_to(int(text[4:]))
    try:
        sets = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParameterError(f"unrecognised scope {text!r}") from exc
    return [[G.node_id(str(x)) for x in S] for S in sets]


def _cmd_axioms(args):
    G = read_graph(args.graph, args.undirected)
    W = read_selection(args.selection, G)
    rep = axioms.check(G, args.k, W, args.axiom, _parse_scope(G, args.scope))
    data = rep.to_dict()
    for w in data["witnesses"]:
        w["S"] = [G.name(v) for v in w["S"]]
    if args.format == "json":
        return json.dumps(data, indent=1)
    buf = io.StringIO()
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(["axiom", "satisfied", "checked_sets", "S", "entitled", "got"])
    for w in data["witnesses"] or [{"S": [], "entitled": "", "got": ""}]:
        wr.writerow([rep.axiom, rep.satisfied, rep.checked_sets, " ".join(w["S"]),
                     w["entitled"], w["got"]])
    return buf.getvalue()


def _cmd_generate(args):
    cfg = _euclid_config(args)
    cloud, G = generate(cfg)
    if args.points:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["node", "x", "y", "group"])
        for v in range(G.n):
            w.writerow([v, repr(float(cloud.points[v, 0])), repr(float(cloud.points[v, 1])),
                        int(cloud.group[v])])
        Path(args.points).write_text(buf.getvalue(), encoding="utf-8")
    if args.format == "json":
        return json.dumps({"n": G.n, "edges": G.edges, "points": cloud.points.tolist(),
                           "group": cloud.group.tolist()})
    return write_edge_list(G)


def _rules(text: str) -> list[str]:
    return [canonical_rule(r) for r in str(text).split(",") if r.strip()]


def _cmd_experiment(args):
    if args.experiment == "sweep":
        LG = read_labeled_graph(args.graph, args.labels, args.undirected)
        rep = sweep_experiment(LG, _int_list(args.k_range), _rules(args.rules), args.alpha)
    elif args.experiment == "deletion":
        LG = read_labeled_graph(args.graph, args.labels, args.undirected)
        rep = deletion_experiment(LG, args.target, _float_list(args.p), args.reps,
                                  _int_list(args.k), _rules(args.rules), args.seed, args.alpha)
    else:
        rep = euclidean_experiment(_euclid_config(args), args.instances, args.k,
                                   _rules(args.rules), args.alpha)
        if args.dump:
            buf = io.StringIO()
            w = csv.DictWriter(buf, fieldnames=["instance", "rule", "node", "x", "y", "group"],
                               lineterminator="\n")
            w.writeheader()
            w.writerows(rep.dump)
            Path(args.dump).write_text(buf.getvalue(), encoding="utf-8")
    if args.format == "json":
        return rep.to_json()
    return rep.to_csv()


COMMANDS = {"select": _cmd_select, "centrality": _cmd_centrality, "axioms-check": _cmd_axioms,
            "generate": _cmd_generate, "experiment": _cmd_experiment}


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        _apply_config(parser, argv)
        try:
            args = parser.parse_args(argv)
        except SystemExit as exc:
            return exc.code if isinstance(exc.code, int) else 1
        logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                            format="%(levelname)s %(name)s: %(message)s")
        _emit(args, COMMANDS[args.command](args))
    except SizeCapError as exc:
        print(f"propnet: refused: {exc}", file=sys.stderr)
        return 2
    except (GraphParseError, GraphClassError, ParameterError, DivergenceError,
            ConvergenceError, OSError, ValueError, KeyError) as exc:
        print(f"propnet: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
