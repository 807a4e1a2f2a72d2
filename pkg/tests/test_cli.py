import csv
import io as stdio
import random
import subprocess
import sys

import pytest

from mxk import io
from mxk.cli import main
from mxk.frame import blow_up, dowling, frame_rank
from mxk.algebra import KLEIN_FOUR, group_make
from mxk.generators import random_biased_graph
from mxk.graphs import kostochka_family
from mxk.linear import coupled_example, crown, projective_geometry
from mxk.matroid import bits, clique_matroid
from mxk.minors import MinorWitness
from mxk.towers import canonical_clique_tower


def _same_rank_on_random_subsets(A, B, rng, count=100):
    assert A.ground == B.ground
    g = A.ground
    for _ in range(count):
        S = [e for e in g if rng.random() < 0.5]
        assert A.rank(S) == B.rank(S)


@pytest.mark.parametrize("obj", [
    projective_geometry(3, 3),
    crown(5, 2, 2),
    coupled_example(5, 3),
    clique_matroid(6),
    kostochka_family(4, 8),
])
def test_round_trip_matroid_instances(obj):
    back = io.loads(io.dumps(obj))
    _same_rank_on_random_subsets(io.matroid_of(obj), io.matroid_of(back), random.Random(7))


@pytest.mark.parametrize("seed", range(5))
def test_round_trip_biased_graphs(seed):
    B = random_biased_graph(random.Random(seed))
    C = io.loads(io.dumps(B))
    ids = B.edge_ids
    for m in range(1 << len(ids)):
        S = [ids[k] for k in bits(m)]
        assert frame_rank(B, S) == frame_rank(C, S)


def test_round_trip_table_group_and_tower():
    V = group_make("explicit", KLEIN_FOUR)
    B = blow_up((3, [(0, 1), (1, 2)]), V)
    C = io.loads(io.dumps(B))
    assert C.gain.group.op == V.op
    _, T = canonical_clique_tower(3)
    assert io.loads(io.dumps(T)) == T


def test_format_errors():
    with pytest.raises(io.FormatError):
        io.loads("")
    with pytest.raises(io.FormatError):
        io.loads("matroid linear q=2 rank=2 cols=3\n1 0\n0 1\n")
    with pytest.raises(io.FormatError):
        io.loads("widget\n")
    with pytest.raises(io.FormatError):
        io.parse_group("dihedral")
    with pytest.raises(io.FormatError):
        io.dumps(dowling(3, 2))


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_construct_commands(tmp_path, capsys):
    code, out, _ = run(["construct", "crown", "--n", "5", "--q", "2", "--t", "2", "-o", str(tmp_path / "c.mx")], capsys)
    assert code == 0 and "size=15" in out
    assert (tmp_path / "c.mx").read_text().startswith("matroid linear q=2 rank=5 cols=15")
    code, out, _ = run(["construct", "dowling", "--n", "4", "--group", "cyclic3", "-o", str(tmp_path / "d.mx")], capsys)
    assert "size=22" in out
    code, out, _ = run(["construct", "pg", "--rank", "3", "--q", "2", "-o", str(tmp_path / "f.mx")], capsys)
    assert "size=7" in out
    code, out, _ = run(["construct", "kostochka-graph", "--t", "4", "--n", "8", "-o", str(tmp_path / "k.mx")], capsys)
    assert (tmp_path / "k.mx").read_text().startswith("graph vertices=8")
    code, out, _ = run(["construct", "blowup", "--n", "3", "--group", "Z2", "--edges", "0-1,1-2"], capsys)
    assert out.startswith("biasedgraph vertices=3 group=cyclic 2")
    with pytest.raises(SystemExit):
        main(["construct", "crown", "--n", "5"])


def test_check_commands(tmp_path, capsys):
    io.write(crown(4, 2, 1), tmp_path / "c41.mx")
    code, out, _ = run(["check", str(tmp_path / "c41.mx"), "clique-minor", "--t", "4", "--expect", "absent"], capsys)
    assert code == 0 and "status: pass" in out
    code, out, _ = run(["check", str(tmp_path / "c41.mx"), "clique-minor", "--t", "4", "--expect", "present"], capsys)
    assert code == 1
    io.write(projective_geometry(3, 2), tmp_path / "fano.mx")
    code, out, _ = run(["check", str(tmp_path / "fano.mx"), "line-minor", "--k", "4"], capsys)
    assert "result: not found" in out
    wpath = tmp_path / "w.txt"
    code, out, _ = run(["check", str(tmp_path / "fano.mx"), "line-minor", "--k", "3", "--witness-out", str(wpath)], capsys)
    w = MinorWitness.from_text(wpath.read_text())
    from mxk.matroid import uniform
    assert w.replay(projective_geometry(3, 2), uniform(2, 3))
    code, out, _ = run(["check", str(tmp_path / "fano.mx"), "kung-bound"], capsys)
    assert "result: holds" in out and "bound=7" in out
    code, out, _ = run(["check", str(tmp_path / "fano.mx"), "b-clique", "--basis", "0,1,3"], capsys)
    assert "result:" in out
    io.write(blow_up((3, [(0, 1), (1, 2)]), group_make("cyclic", 2)), tmp_path / "b.mx")
    code, out, _ = run(["check", str(tmp_path / "b.mx"), "frame-rank-agreement"], capsys)
    assert "result: holds" in out
    io.write(dowling(4, 3).backend.biased, tmp_path / "dg.mx")
    code, out, _ = run(["check", str(tmp_path / "dg.mx"), "frame-rank-agreement"], capsys)
    assert code == 0 and "inconclusive" in out
    code, out, _ = run(["--strict", "check", str(tmp_path / "dg.mx"), "frame-rank-agreement"], capsys)
    assert code == 3


def test_tower_commands(tmp_path, capsys):
    io.write(projective_geometry(3, 2), tmp_path / "fano.mx")
    code, out, _ = run(["towers", str(tmp_path / "fano.mx"), "count", "--n", "2"], capsys)
    assert out.strip() == "42"
    code, out, _ = run(["towers", str(tmp_path / "fano.mx"), "census", "--n", "2"], capsys)
    rows = list(csv.DictReader(stdio.StringIO(out)))
    assert [r["w_i"] for r in rows] == ["7", "42"] and all(r["nexti"] == "True" for r in rows)
    io.write(clique_matroid(5), tmp_path / "k5.mx")
    code, out, _ = run(["towers", str(tmp_path / "k5.mx"), "find", "--t", "3", "-o", str(tmp_path / "t.txt")], capsys)
    assert code == 0
    code, out, _ = run(["towers", str(tmp_path / "k5.mx"), "exploit", "--t", "4", "--tower", str(tmp_path / "t.txt")], capsys)
    assert code == 0 and "replay: ok" in out
    code, out, _ = run(["towers", str(tmp_path / "k5.mx"), "enumerate", "--n", "2", "-o", str(tmp_path / "all")], capsys)
    assert len(list((tmp_path / "all").iterdir())) == 60
    io.write(coupled_example(4, 2), tmp_path / "free.mx")
    code, out, _ = run(["towers", str(tmp_path / "free.mx"), "count", "--n", "2"], capsys)
    assert out.strip() == "0"
    code, out, _ = run(["towers", str(tmp_path / "free.mx"), "count", "--n", "6"], capsys)
    assert "inconclusive" in out


def test_verify_writes_csv(tmp_path, capsys):
    target = tmp_path / "r.csv"
    code, _, err = run(["verify", "formulas", "--seed", "7", "--csv", str(target), "--witness-dir", str(tmp_path / "w")], capsys)
    assert code == 0
    rows = list(csv.reader(target.open()))
    assert rows[0] == ["suite", "check-id", "claim", "status", "witness-file", "millis"]
    assert {r[3] for r in rows[1:]} == {"pass"}


def test_module_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "mxk", "verify", "formulas", "--witness-dir", str(tmp_path)],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout.startswith("suite,check-id,claim,status,witness-file,millis")


def test_caps_environment_override(tmp_path, monkeypatch, capsys):
    io.write(projective_geometry(3, 2), tmp_path / "fano.mx")
    monkeypatch.setenv("MXK_CAPS", "towers=1")
    code, out, _ = run(["towers", str(tmp_path / "fano.mx"), "count", "--n", "2"], capsys)
    assert "inconclusive" in out
    monkeypatch.setenv("MXK_CAPS", "bogus=3")
    code, _, err = run(["towers", str(tmp_path / "fano.mx"), "count", "--n", "2"], capsys)
    assert code == 2 and "unknown cap" in err
