import csv
import json

import pytest

from afalab.cli import main

TRACE = """kind=above complete=1 domain=3
x 0 s 0 v 4
x 0 s 3 v 2
x 1 s 0 v 3
x 1 s 5 v 2
x 1 s 9 v 1
x 2 s 0 v 0
"""

REGISTRY = """e 0 prog constant 5
e 1 prog staircase-down 4 2 1
e 2 prog delayed-converge 3 2
e 3 prog tracking 1
e 4 prog divergent
"""


@pytest.fixture
def work(tmp_path, monkeypatch):
    monkeypatch.delenv("AFALAB_REPORT_DIR", raising=False)
    (tmp_path / "t.txt").write_text(TRACE)
    (tmp_path / "fam.txt").write_text("<2>\n<2,1>\n<2,1,0>\n")
    (tmp_path / "reg.txt").write_text(REGISTRY)
    monkeypatch.chdir(tmp_path)
    return tmp_path


def run(*argv):
    return main(list(argv))


def test_build_elongated_certifies_duv(work, capsys):
    rc = run("build", "--shape", "elongated", "--family", "periodic:2", "--trace", "t.txt",
             "--stages", "50", "--out", "e.graph", "--report", "b.json")
    assert rc == 0
    assert "d(u,v)=10" in capsys.readouterr().out
    assert (work / "e.graph").exists() and (work / "e.graph.layout.json").exists()
    assert json.loads((work / "b.json").read_text())["duv"]["value"] == 10


def test_build_counts_match_formula(work, capsys):
    from afalab.graphs import DecreasingString as D, spoke_node_count
    assert run("build", "--shape", "standard", "--family", "explicit:fam.txt", "--out", "s.graph") == 0
    expected = 1 + sum(spoke_node_count(D.parse(s), "standard") for s in ["2", "2 1", "2 1 0"])
    assert f"nodes {expected}" in capsys.readouterr().out


def test_build_empty_family_is_parse_error(work, capsys):
    (work / "empty.txt").write_text("")
    assert run("build", "--shape", "standard", "--family", "explicit:empty.txt") == 2
    assert "error" in capsys.readouterr().err


def test_bad_trace_file_reports_line(work, capsys):
    (work / "bad.txt").write_text("kind=above complete=1 domain=1\nx 0 s 0 v 2\nx 0 s 1 v nine\n")
    assert run("build", "--shape", "standard", "--trace", "bad.txt") == 2
    assert "bad.txt:3" in capsys.readouterr().err


def test_verify_oracle_equivalence(work, capsys):
    run("build", "--shape", "elongated", "--family", "explicit:fam.txt", "--out", "g.graph")
    assert run("verify", "--suite", "oracle-equivalence", "g.graph") == 0
    assert "PASS oracle-equivalence" in capsys.readouterr().out


def test_verify_mind_change_bound(work):
    run("build", "--shape", "elongated", "--family", "periodic:2", "--trace", "t.txt", "--out", "g.graph")
    assert run("verify", "--suite", "mind-changes", "--bound", "4", "g.graph") == 0


def test_verify_corrupted_graph(work, capsys):
    run("build", "--shape", "standard", "--family", "explicit:fam.txt", "--out", "g.graph")
    lines = (work / "g.graph").read_text().splitlines()
    edge = next(i for i, l in enumerate(lines) if l.startswith("e ") and " 0 " not in l[:6])
    del lines[edge]
    (work / "g.graph").write_text("\n".join(lines) + "\n")
    assert run("verify", "g.graph", "--report", "v.json") == 1
    report = json.loads((work / "v.json").read_text())
    failed = next(s for s in report["suites"] if s["suite"] == "oracle-equivalence")
    assert not failed["passed"] and failed["failures"]


def test_verify_unknown_suite(work):
    run("build", "--shape", "standard", "--family", "explicit:fam.txt", "--out", "g.graph")
    assert run("verify", "--suite", "bogus", "g.graph") == 2


def test_verify_missing_layout(work):
    (work / "x.graph").write_text("directed=0 stage=0 complete=1\nn 0 0\n")
    assert run("verify", "x.graph") == 2


def test_reports_are_deterministic(work, monkeypatch):
    monkeypatch.setenv("AFALAB_REPORT_DIR", str(work / "reports"))
    run("build", "--shape", "directed", "--family", "explicit:fam.txt", "--trace", "t.txt", "--out", "d.graph")
    outputs = []
    for _ in range(2):
        assert run("verify", "d.graph", "--seed", "3") == 0
        outputs.append((work / "reports" / "verify.json").read_bytes())
    assert outputs[0] == outputs[1]
    assert (work / "reports" / "build.json").exists()


def test_decode_pair_and_all(work, capsys):
    run("build", "--shape", "standard", "--family", "explicit:fam.txt", "--out", "g.graph")
    layout = json.loads((work / "g.graph.layout.json").read_text())
    b0, b1 = layout["spokes"][0]["b"], layout["spokes"][1]["b"]
    assert run("decode", "g.graph", str(b0), str(b1), "--report", "d.json") == 0
    row = json.loads((work / "d.json").read_text())["decodes"][0]
    assert row["value"] == row["bfs"] and len(row["queries"]) == 2
    assert run("decode", "g.graph", "--all") == 0
    assert "all agree with BFS" in capsys.readouterr().out
    assert run("decode", "g.graph") == 2


def test_export_dot_and_matrix(work, capsys):
    run("build", "--shape", "standard", "--family", "explicit:fam.txt", "--out", "g.graph")
    assert run("export", "g.graph", "--dot", "g.dot", "--matrix", "g.csv") == 0
    dot = (work / "g.dot").read_text()
    assert dot.startswith("graph G {") and 'role="a"' in dot
    rows = list(csv.reader((work / "g.csv").open()))
    m = [[int(v) for v in r[1:]] for r in rows[1:]]
    assert all(m[i][i] == 0 for i in range(len(m)))
    assert all(m[i][j] == m[j][i] for i in range(len(m)) for j in range(len(m)))
    assert run("export", "g.graph", "--matrix", "g.csv", "--max-nodes", "5") == 2


def test_export_directed_dot(work, capsys):
    run("build", "--shape", "directed", "--family", "explicit:fam.txt", "--out", "d.graph")
    capsys.readouterr()
    assert run("export", "d.graph", "--dot", "-") == 0
    out = capsys.readouterr().out
    assert out.startswith("digraph") and " -> " in out


def test_trace_tools(work, capsys):
    assert run("trace-tools", "classify", "t.txt") == 0
    assert "max changes 2" in capsys.readouterr().out
    assert run("trace-tools", "countdown", "t.txt", "--bound", "2", "--out", "c.txt") == 0
    assert "x 1 s 9 v 0" in (work / "c.txt").read_text()
    assert run("trace-tools", "countdown", "t.txt", "--bound", "1") == 2
    assert run("trace-tools", "dual", "t.txt", "--out", "d.txt") == 0
    assert "kind=below" in (work / "d.txt").read_text()
    assert run("trace-tools", "v", "t.txt") == 0


def test_trace_tools_range(work, capsys):
    (work / "s.txt").write_text("x0=2\ngrow 2\ngrow 5\ngrow 1\ncycle\ngrow 7\n")
    assert run("trace-tools", "range", "s.txt", "--out", "r.txt", "--report", "r.json") == 0
    assert json.loads((work / "r.json").read_text())["limit_range"] == [2, 5]


def test_trace_tools_constructions(work, capsys):
    assert run("trace-tools", "1complete", "reg.txt", "--stages", "40", "--out", "f.txt") == 0
    assert run("trace-tools", "diagonal", "nocollapse", "reg.txt", "--stages", "30", "--n", "1",
               "--out", "w.txt") == 0
    out = capsys.readouterr().out
    assert "e=3: defeated" in out and "e=4: vacuous" in out


def test_trace_tools_apply_tt(work, capsys):
    (work / "r.txt").write_text("norm 1\nselector builtin identity\nevaluator offset 2\n")
    assert run("trace-tools", "apply-tt", "r.txt", "--oracle", "t.txt", "--inputs", "0,1") == 0
    assert "0 -> 4" in capsys.readouterr().out
    (work / "r2.txt").write_text("norm 1\nselector builtin window 2\nevaluator sum\n")
    assert run("trace-tools", "apply-tt", "r2.txt", "--oracle", "t.txt", "--inputs", "0") == 1


def test_usage_errors_exit_2(work):
    with pytest.raises(SystemExit) as exc:
        run("build")
    assert exc.value.code == 2
    assert run("build", "--shape", "standard") == 2
    assert run("build", "--shape", "standard", "--family", "weird:1") == 2
