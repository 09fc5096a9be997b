"""Write small synthetic graphs in the same file formats as the real datasets.

football: 12 conferences of 9 teams plus 4 independents, dense within
conferences, sparse across (undirected edge list).
polblogs: two camps of 40 blogs with homophilous directed links.
"""
import argparse
from pathlib import Path

from propnet.generators import stream


def football(seed: int):
    rng = stream(seed, "standin-football")
    labels = [f"conf{c:02d}" for c in range(12) for _ in range(9)] + ["independent"] * 4
    n = len(labels)
    edges = []
    for u in range(n):
        for v in range(u + 1, n):
            same = labels[u] == labels[v] != "independent"
            if rng.random() < (0.75 if same else 0.04):
                edges.append((u, v))
    return edges, labels


def polblogs(seed: int):
    rng = stream(seed, "standin-polblogs")
    labels = ["liberal"] * 40 + ["conservative"] * 40
    n = len(labels)
    edges = [(u, v) for u in range(n) for v in range(n) if u != v
             and rng.random() < (0.12 if labels[u] == labels[v] else 0.01)]
    return edges, labels


def write(root: Path, edges, labels):
    root.mkdir(parents=True, exist_ok=True)
    (root / "edges.txt").write_text("".join(f"t{u} t{v}\n" for u, v in edges))
    (root / "labels.csv").write_text(
        "node,label\n" + "".join(f"t{v},{lab}\n" for v, lab in enumerate(labels)))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default=str(Path(__file__).resolve().parents[1] / "data" / "standins"))
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    out = Path(args.out)
    write(out / "football", *football(args.seed))
    write(out / "polblogs", *polblogs(args.seed))
    print(f"wrote stand-ins under {out}")


if __name__ == "__main__":
    main()
