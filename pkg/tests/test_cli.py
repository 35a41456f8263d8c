import json

import pytest
from conftest import DATA

from artinian.cli import main


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def lines(text):
    return dict(ln.split(": ", 1) for ln in text.splitlines() if ": " in ln and not ln.startswith(" "))


def test_ring_show(capsys):
    code, out, _ = run(capsys, "ring-show", "--ring", DATA / "ex18_p3.ring")
    assert code == 0
    d = lines(out)
    assert d["summary"] == "length 5 embdim 2 exponent 3 type 2 gorenstein no"
    assert d["Delta_R"] == "0 0, 0 1, 1 0, 0 2, 1 1"
    assert d["E_R"] == "1, T, S, T^2, S*T"


def test_ring_show_machine(capsys):
    code, out, _ = run(capsys, "ring-show", "--ring", DATA / "galois4_2.ring", "--format", "machine")
    assert code == 0
    data = json.loads(out)
    assert data["command"] == "ring-show" and data["results"]["size"] == 16
    assert set(data) >= {"argv", "inputs", "results", "seconds"}


@pytest.mark.parametrize("ring,sentence,value", [
    ("f2_t3.ring", "len:3", "yes"), ("f2_t3.ring", "len:4", "no"),
    ("f2_t2.ring", "art:2", "yes"), ("f2_t3.ring", "art:2", "no"), ("f2_t3.ring", "artx:3", "yes"),
    ("f2_xy2.ring", "min", "no"), ("z4_x.ring", "min", "yes"), ("f3_t2.ring", "loc", "yes"),
    ("f4_t2.ring", "root:1", "yes"), ("f4_t2.ring", "root:2", "no"),
])
def test_check(capsys, ring, sentence, value):
    code, out, _ = run(capsys, "check", "--ring", DATA / ring, "--sentence", sentence)
    assert code == 0
    d = lines(out)
    assert d["value"] == value
    assert d.get("reference", value) == value


def test_check_product_ring_not_local(capsys):
    code, out, _ = run(capsys, "check", "--ring", DATA / "f2_t2.ring", "--ring", DATA / "f2_t2.ring",
                       "--sentence", "loc", "--format", "machine")
    assert code == 0
    assert json.loads(out)["results"]["value"] is False


def test_reduce(capsys):
    code, out, _ = run(capsys, "reduce", "exists y. x*y = 0", "--gens", "g1")
    assert code == 0
    d = lines(out)
    assert d["reduced"] == "exists y. exists y1. x*y = g1*y1"
    assert d["shape"] == "∃_1" and d["round trip"] == "yes"


def test_solve_with_transfer(capsys):
    code, out, _ = run(capsys, "solve", "--ring", DATA / "z4_x.ring", "--system", DATA / "sqrt_m1.sys",
                       "--transfer", DATA / "z4x_w.ring", "--oracle")
    assert code == 0
    d = lines(out)
    assert d["transferred solution"] == "1 + X"
    assert "oracle: yes" in out


def test_solve_growth_by_degree(capsys):
    # x^2 = T has no solution: squares in F_q[T]/(T^2) are constants
    code, out, _ = run(capsys, "solve", "--ring", DATA / "f2_t2.ring", "--system", DATA / "sqrt_t.sys",
                       "--transfer", "degree:2")
    assert code == 0
    d = lines(out)
    assert d["solution over R"] == "none" and d["solution over extension"] == "none"
    assert d["extension residue field"] == "F_4"
    code, out, _ = run(capsys, "solve", "--ring", DATA / "f2_t2.ring", "--system", DATA / "sqrt_m1.sys",
                       "--transfer", "degree:2")
    assert code == 0 and lines(out)["transferred solution"] == "1"


def test_examples(capsys):
    code, out, _ = run(capsys, "examples", "sec5", "--p", 2, "--k1", 2, "--k2", 3, "--bound", 6)
    assert code == 0
    assert "embeddings: 126, 189" in out and "commuting pairs: 0" in out
    assert lines(out)["amalgam found"] == "no"


def test_budget_exit_code(capsys):
    code, _, err = run(capsys, "solve", "--ring", DATA / "z4x_w.ring", "--system", DATA / "sqrt_m1.sys",
                       "--budget", 2)
    assert code == 2
    assert "budget" in err


@pytest.mark.parametrize("argv", [
    ["ring-show", "--ring", "/nonexistent.ring"],
    ["ring-show"],
    ["check", "--ring", str(DATA / "f2_t2.ring"), "--sentence", "bogus:1"],
    ["reduce", "exists y. x*y =", "--gens", "g1"],
    ["examples", "1.8", "--p", "4"],
])
def test_input_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 1 and err
