import json

import pytest

from flagmirror.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_superpotential_text(capsys):
    code, out, _ = run(capsys, "superpotential", "--shape", "2,4;7")
    assert code == 0
    assert "p_27" in out and "p_1467" in out
    assert out.count("D") >= 8


def test_superpotential_latex(capsys):
    code, out, _ = run(capsys, "superpotential", "--shape", "2,4;7",
                       "--format", "latex")
    assert code == 0
    assert "\\frac{q_{2} p_{46}}{p_{67}}" in out
    assert "p_{24} p_{1567}" in out


def test_superpotential_json(capsys):
    code, out, _ = run(capsys, "superpotential", "--shape", "1,2;4",
                       "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert len(data) == 5
    assert sorted(d["divisor_k"] for d in data) == [1, 2, 3, 4, 5]


def test_divisors(capsys):
    code, out, _ = run(capsys, "divisors", "--shape", "2,4;7")
    assert code == 0
    assert "p_17" in out and out.count("D") == 8


def test_qh_mult(capsys):
    code, out, _ = run(capsys, "qh-mult", "--n", "3", "--u", "213", "--v", "213")
    assert code == 0
    assert "q1" in out and "312" in out


def test_c1_spectrum_json(capsys):
    code, out, _ = run(capsys, "c1-spectrum", "--shape", "2;4", "--q", "1",
                       "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert data["dim"] == 6 and len(data["eigenvalues"]) == 6


def test_crit_and_verify_mirror(capsys):
    code, out, _ = run(capsys, "crit", "--shape", "1;2", "--q", "1", "--seed", "3")
    assert code == 0 and "2 points" in out
    code, out, _ = run(capsys, "verify-mirror", "--shape", "1,2;4",
                       "--q", "1,1", "--seed", "42")
    assert code == 0
    assert out.startswith("PASS")
    assert "12 matched pairs" in out
    assert "-3.000000000" in out


def test_complex_q_parsing(capsys):
    code, out, _ = run(capsys, "c1-spectrum", "--shape", "1;2", "--q", "1+0.2i")
    assert code == 0


def test_verify_identity(capsys):
    code, out, _ = run(capsys, "verify-identity", "--shape", "2,4;7",
                       "--j", "1", "--i", "4")
    assert code == 0 and out.startswith("PASS")
    code, out, _ = run(capsys, "verify-identity", "--sweep-max-n", "4")
    assert code == 0


def test_verify_detformula(capsys):
    code, out, _ = run(capsys, "verify-detformula", "--n", "4")
    assert code == 0 and "14 permutations" in out


def test_usage_errors(capsys):
    assert main(["superpotential"]) == 2  # missing --shape
    assert main(["no-such-command"]) == 2
    code, _, err = run(capsys, "superpotential", "--shape", "nonsense")
    assert code == 2 and "error" in err


def test_cache_dir_flag(tmp_path, capsys):
    import flagmirror.schubring as sr
    sr._monk_memory.pop(6, None)
    code, out, _ = run(capsys, "--cache-dir", str(tmp_path),
                       "qh-mult", "--n", "6", "--u", "213456", "--v", "214356")
    assert code == 0
    assert any(p.name.startswith("monk_n6") for p in tmp_path.iterdir())
    sr._monk_memory.pop(6, None)
