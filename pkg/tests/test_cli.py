import json

import pytest

from propnet.cli import main


@pytest.fixture
def files(tmp_path):
    g = tmp_path / "g.txt"
    g.write_text("# path\na b\nb c\nc d\n")
    lab = tmp_path / "labels.csv"
    lab.write_text("node,label\na,X\nb,X\nc,Y\nd,Y\n")
    return tmp_path, g, lab


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_select_json_and_csv(files, capsys):
    tmp, g, _ = files
    code, out, _ = run(capsys, "select", "--graph", g, "--rule", "top-rank", "--k", 2)
    assert code == 0
    data = json.loads(out)
    assert data["names"] == ["d", "c"] and data["rule"] == "top_rank"
    code, out, _ = run(capsys, "--format", "csv", "select", "--graph", g, "--rule", "mes-rank",
                       "--k", 1)
    assert code == 0 and out.splitlines()[0] == "rank,node,id"


def test_select_absorb_exact(files, capsys):
    _, g, _ = files
    code, out, _ = run(capsys, "select", "--graph", g, "--rule", "absorb-exact", "--k", 2)
    assert code == 0 and sorted(json.loads(out)["names"]) == ["b", "d"]


def test_exit_codes(files, capsys, tmp_path):
    _, g, _ = files
    assert run(capsys, "select", "--graph", g, "--rule", "nope", "--k", 1)[0] == 1
    assert run(capsys, "select", "--graph", tmp_path / "missing", "--rule", "top-rank",
               "--k", 1)[0] == 1
    assert run(capsys, "select", "--graph", g, "--rule", "top-rank", "--k", 9)[0] == 1
    assert run(capsys, "select", "--graph", g)[0] == 1
    big = tmp_path / "big.txt"
    big.write_text("".join(f"{i} {j}\n" for i in range(22) for j in range(22) if i != j))
    code, _, err = run(capsys, "select", "--graph", big, "--rule", "absorb-exact", "--k", 2)
    assert code == 2 and "refused" in err


def test_centrality(files, capsys):
    _, g, _ = files
    code, out, _ = run(capsys, "--alpha", "0.5", "centrality", "--graph", g)
    assert code == 0
    assert json.loads(out)["scores"]["c"] == pytest.approx(1.75)
    code, out, _ = run(capsys, "centrality", "--graph", g, "--utilities", "--format", "csv",
                       "--alpha", "0.5")
    assert out.splitlines()[1].startswith("a,1.0,0.5,0.25")


def test_axioms_check(files, capsys, tmp_path):
    g = tmp_path / "pair_triangle.txt"
    g.write_text("0 1\n1 0\n2 3\n3 2\n2 4\n4 2\n3 4\n4 3\n5 2\n5 3\n5 4\n")
    sel = tmp_path / "sel.json"
    sel.write_text('["2", "3", "4"]')
    code, out, _ = run(capsys, "axioms-check", "--graph", g, "--k", 3, "--selection", sel,
                       "--axiom", "clique")
    rep = json.loads(out)
    assert code == 0 and not rep["satisfied"]
    assert rep["witnesses"] == [{"S": ["0", "1"], "entitled": 1, "got": 0}]
    code, out, _ = run(capsys, "axioms-check", "--graph", g, "--k", 3, "--selection", sel,
                       "--axiom", "subgraph", "--scope", "all:3")
    assert code == 0 and json.loads(out)["checked_sets"] > 0


def test_generate_and_config(files, capsys, tmp_path):
    pts = tmp_path / "pts.csv"
    code, out, _ = run(capsys, "--format", "csv", "generate", "--n", 20, "--ratio", "1:3",
                       "--points", pts)
    assert code == 0
    assert pts.read_text().splitlines()[0] == "node,x,y,group"
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# shared\nn = 20\nratio = 1:3\nformat = csv\nseed = 4\n")
    code, a, _ = run(capsys, "generate", "--config", cfg)
    code2, b, _ = run(capsys, "generate", "--config", cfg, "--seed", "4")
    code3, c, _ = run(capsys, "generate", "--config", cfg, "--seed", "5")
    assert code == code2 == code3 == 0 and a == b != c
    bad = tmp_path / "bad.cfg"
    bad.write_text("colour = blue\n")
    assert run(capsys, "generate", "--config", bad)[0] == 1


def test_experiments(files, capsys, tmp_path):
    _, g, lab = files
    code, out, _ = run(capsys, "--format", "csv", "experiment", "sweep", "--graph", g,
                       "--labels", lab, "--k-range", "1:3", "--rules", "top-rank")
    assert code == 0 and len(out.strip().splitlines()) == 4
    code, out, _ = run(capsys, "experiment", "deletion", "--graph", g, "--labels", lab,
                       "--p", "0.5", "--reps", 2, "--k", 1, "--rules", "top-rank")
    assert code == 0 and json.loads(out)["rows"]
    dump = tmp_path / "dump.csv"
    code, out, _ = run(capsys, "experiment", "euclidean", "--n", 20, "--instances", 2,
                       "--k", 2, "--rules", "top-katz", "--dump", dump)
    assert code == 0 and len(dump.read_text().splitlines()) == 5
