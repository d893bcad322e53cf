"""Command-line front end: exit codes, report shape, and agreement with library calls."""

import json

import pytest

from markedgroups import MarkedGroup, ball, parse_group
from markedgroups.cli import run


def call(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def report(capsys, *argv):
    code, out, _ = call(capsys, *argv)
    return code, json.loads(out)


def test_ball_writes_certificate(tmp_path, capsys):
    path = tmp_path / "ball.json"
    code, rep = report(capsys, "ball", "Z^2", "--gens", "e1,e2", "-R", "2", "-o", str(path))
    assert code == 0 and rep["result"]["states"] == 13
    assert set(rep) == {"tool_version", "config", "timings", "result"}
    lib = ball(MarkedGroup.standard(parse_group("Z^2")), 2)
    assert path.read_bytes() == lib.to_bytes()


def test_witness_command(capsys):
    code, out, _ = call(capsys, "witness", "abelian_step", "--k", "2", "--l", "3", "-R", "4",
                        "--format", "text")
    assert code == 0 and out.strip() == "agree=true"
    code, _, _ = call(capsys, "witness", "abelian_step", "--k", "2", "--l", "3", "-R", "4",
                      "--verify-radius", "8", "--format", "text")
    assert code == 1


def test_order_abelian(capsys):
    code, out, _ = call(capsys, "order-abelian", "Z x Z/6", "Z^2 x Z/2", "--format", "text")
    assert code == 0 and out.strip() == "true"
    code, out, _ = call(capsys, "order-abelian", "Z^2", "Z", "--format", "text")
    assert code == 1 and out.strip() == "false"


def test_catalog_csv(capsys):
    code, out, _ = call(capsys, "order-abelian", "--catalog", "--format", "csv")
    lines = out.strip().splitlines()
    assert code == 0 and lines[0] == "A,B,verdict,method" and len(lines) == 34 * 34 + 1
    assert not any(",unknown," in ln for ln in lines)


def test_compare_and_growth(capsys):
    code, rep = report(capsys, "compare", "Z^2", "F2", "-R", "2")
    assert code == 1 and rep["result"]["first_divergence"] == 2
    code, out, _ = call(capsys, "growth", "F2", "-R", "3", "--format", "csv")
    assert code == 0 and out == "r,nu\n0,1\n1,5\n2,17\n3,53\n"


def test_girth_relations(capsys):
    code, out, _ = call(capsys, "girth", "Z^2", "--rmax", "3", "--format", "text")
    assert out.strip() == "girth=4"
    code, rep = report(capsys, "relations", "Z^2", "-L", "4")
    assert len(rep["result"]["relations"]) == 1


def test_poset_and_hall(capsys):
    code, rep = report(capsys, "poset", "--primes", "2,3,5")
    assert code == 0 and rep["result"]["pairs"] == 64 and rep["result"]["matches_reverse_inclusion"]
    code, out, _ = call(capsys, "hall", "--subsets", "5,7;5", "--format", "text")
    assert code == 0 and out.split("\n")[:2] == ["1 1", "0 1"]


def test_colouring_file_roundtrip(tmp_path, capsys):
    path = tmp_path / "phi.json"
    code, rep = report(capsys, "colouring", "--primes", "2,3", "--theta", "1,0,3;0,1,2", "-o", str(path))
    assert code == 0 and rep["result"]["replay_matches"]
    data = json.loads(path.read_text())
    assert set(data) == {"default", "assignments", "log"}
    code, rep = report(capsys, "hall", "--phi", str(path), "--psi", str(path), "-R", "2")
    assert code == 0 and rep["result"]["agree"]


def test_identity_lab_commands(capsys):
    code, out, _ = call(capsys, "sentence", "F2", "([x,y]=1 & [y,z]=1 & y!=1) => [x,z]=1",
                        "--rho", "2", "--format", "text")
    assert code == 0 and out.strip() == "holds_on_ball=true"
    code, rep = report(capsys, "sentence", "Z x F2", "([x,y]=1 & [y,z]=1 & y!=1) => [x,z]=1", "--rho", "2")
    assert code == 1 and set(rep["result"]["witness"]) == {"x", "y", "z"}
    code, out, _ = call(capsys, "merge", "x^2", "x^3", "--format", "text")
    assert out.strip() == "x^6"
    code, out, _ = call(capsys, "smallcancel", "x y x y", "--format", "text")
    assert code == 1
    code, rep = report(capsys, "smallcancel", "--generate", "2,10")
    assert code == 0 and rep["result"]["ok"]
    code, rep = report(capsys, "discriminate", "--k", "2", "--N", "3", "-R", "4")
    assert code == 0 and rep["result"]["radius"] == 2
    code, rep = report(capsys, "distinctive", "[x,y]")
    assert code == 0 and rep["result"]["verified"]


def test_alpha_and_nueg(capsys):
    code, rep = report(capsys, "alpha", "--tol", "1e-9")
    assert code == 0 and abs(rep["result"]["alpha"] - 0.7674) < 1e-4 and rep["result"]["certified"]
    code, out, _ = call(capsys, "nueg", "Z/2", "-R", "1,2", "--format", "csv")
    assert code == 0 and out.startswith("R,nu_witness,nu_std,rate_witness,rate_std,agree\n")


def test_transport_command(capsys):
    code, out, _ = call(capsys, "transport", "zm_in_zn", "-R", "6", "--words", "e1 e2, e2",
                        "--format", "text")
    assert code == 0 and out.strip() == "radius=3 agree=true"


@pytest.mark.parametrize("argv", [["ball", "Q^2", "-R", "1"], ["ball", "Z", "-R", "-1"],
                                  ["witness", "nope", "-R", "2"], ["nonsense"],
                                  ["ball", "F3", "-R", "6", "--cap", "100"]])
def test_errors_exit_2(capsys, argv):
    code, _, err = call(capsys, *argv)
    assert code == 2


def test_report_echoes_config(capsys):
    code, rep = report(capsys, "growth", "Z", "-R", "2", "--threads", "3", "--cap", "1000")
    cfg = rep["config"]
    assert cfg["threads"] == 3 and cfg["cap"] == 1000 and cfg["params"]["R"] == 2
