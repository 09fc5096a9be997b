"""Thin out one political camp and track how each rule's selection follows.

Defaults use the synthetic stand-in; pass the real Political Blogs files
(directed edge list, node,label CSV) for the full run.
"""
import argparse
from pathlib import Path

from propnet.experiments import deletion_experiment
from propnet.io import read_labeled_graph

DATA = Path(__file__).resolve().parents[1] / "data" / "standins" / "polblogs"
RULES = ["top_rank", "top_katz", "mes_rank", "bos_rank"]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--graph", default=str(DATA / "edges.txt"))
    ap.add_argument("--labels", default=str(DATA / "labels.csv"))
    ap.add_argument("--p", default="0.1,0.3,0.5,0.7,0.9")
    ap.add_argument("--reps", type=int, default=20)
    ap.add_argument("--k", default="10")
    ap.add_argument("--rules", default=",".join(RULES))
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out", default="polblogs_deletion.csv")
    args = ap.parse_args()
    LG = read_labeled_graph(args.graph, args.labels)
    rep = deletion_experiment(LG, "both", [float(x) for x in args.p.split(",")], args.reps,
                              [int(x) for x in args.k.split(",")], args.rules.split(","),
                              seed=args.seed)
    Path(args.out).write_text(rep.to_csv(aggregate=True))
    for a in rep.aggregate():
        ci = "-" if a["ci95"] is None else f"{a['ci95']:.3f}"
        print(f"p={a['parameter']:<4} k={a['k']:<3} {a['rule']:12s} {a['mean']:.3f} +/- {ci}")


if __name__ == "__main__":
    main()
