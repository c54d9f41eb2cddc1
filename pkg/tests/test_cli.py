import json

import pytest

from modcalc.cli import main
from modcalc.errors import GraphSyntaxError
from modcalc.graph import canonical_form, core
from modcalc.notation import parse_graph

from conftest import EX1, EX2


def test_parse_examples():
    g = parse_graph(EX1)
    assert core(g).root_vertices == ("o",)
    assert {v.id: v.weight for v in g.vertices} == {"o": 0, "a": 2, "b": 0, "c": 3, "d": 2}
    h = parse_graph(EX2)
    assert core(h).root_vertices == ("o-", "o+")
    assert canonical_form(g) != canonical_form(h)


@pytest.mark.parametrize("text", ["g2(0)[x(", "g2(0", "g3(0)", "g2(0)[a(1)]]", "g2(0)[o(1)]"])
def test_syntax_errors(text):
    with pytest.raises(GraphSyntaxError):
        parse_graph(text)


def test_syntax_error_position():
    with pytest.raises(GraphSyntaxError) as e:
        parse_graph("g2(0)[x(")
    assert e.value.position == 8


def test_enumerate(capsys):
    assert main(["enumerate", "--d", "0"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["count"] == 2


def test_vocab(capsys):
    assert main(["vocab", EX1]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["s"] == "{a, aa, bc, bcbc, bcbcbc, bd, bdbd}"
    assert out["s_minus"] == out["s_plus"] == out["t"] == out["s"]
    assert out["depth"] == 2


def test_bad_graph_exit_code(capsys):
    assert main(["vocab", "g2(0)[x("]) == 2
    assert "position" in capsys.readouterr().err


def test_simulate_and_render(tmp_path):
    out, dot = tmp_path / "r.json", tmp_path / "f.dot"
    assert main(["simulate", EX2, "--out", str(out), "--dot", str(dot)]) == 0
    rep = json.loads(out.read_text())
    assert len(rep["terminals"]) == 13
    assert rep["verification"]["ok"]
    assert dot.read_text().startswith("digraph forest {")
    again = tmp_path / "g.dot"
    assert main(["render", str(out), "--dot", str(again)]) == 0
    assert again.read_text() == dot.read_text()


def test_simulate_round_prefix(tmp_path):
    out = tmp_path / "r.json"
    main(["simulate", EX2, "--rounds", "A", "--out", str(out)])
    rep = json.loads(out.read_text())
    assert [r["name"] for r in rep["rounds"]] == ["A"]
    assert "diagonalization" not in rep


def test_diagonalize_command(tmp_path):
    out = tmp_path / "d.json"
    assert main(["diagonalize", "g2(2)", "--n", "1", "--out", str(out)]) == 0
    rep = json.loads(out.read_text())
    st = rep["states"]
    assert all(s["chain_ok"] for s in st)
    assert {s["local_model"]["primary_dim"] for s in st} == {2 * 2 - 1 + 3}


def test_verify_exit_code_matches_summary(tmp_path, capsys):
    out = tmp_path / "report.json"
    code = main(["verify", "--d-max", "1", "--out", str(out)])
    rep = json.loads(out.read_text())
    assert code == (0 if rep["failures"] == 0 else 1)
    assert "failures:" in capsys.readouterr().out


def test_verify_is_byte_stable(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    main(["verify", "--d-max", "2", "--out", str(a)])
    main(["verify", "--d-max", "2", "--out", str(b)])
    assert a.read_bytes() == b.read_bytes()
