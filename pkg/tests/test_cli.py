import csv
import io
import json

import pytest

from liegrowth.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def rows(text):
    lines = text.splitlines()
    assert lines[0].startswith("# liegrowth-csv v1")
    return list(csv.DictReader(io.StringIO("\n".join(lines[1:]))))


def test_words_complexity(capsys):
    code, out, _ = run(capsys, "words", "complexity", "--source", "fibonacci", "--max", "20")
    assert code == 0
    assert [int(r["c"]) for r in rows(out)] == [n + 1 for n in range(1, 21)]


def test_words_prefix_and_recurrence(capsys):
    assert run(capsys, "words", "prefix", "--source", "thue-morse", "--n", "8")[1] == "01101001\n"
    code, out, _ = run(capsys, "words", "recurrence", "--source", "fibonacci", "--u", "0", "--L", "1000")
    assert code == 0 and json.loads(out)["result"] == 2


def test_words_sigma_bounds(capsys):
    code, out, _ = run(capsys, "words", "sigma-bounds", "--source", "tribonacci", "--max", "6")
    assert code == 0 and all(r["ok"] == "1" for r in rows(out))


def test_lie_quarter(capsys):
    code, out, _ = run(capsys, "lie", "quarter", "--source", "thue-morse", "--max", "10")
    assert code == 0
    table = rows(out)
    assert [int(r["n"]) for r in table] == list(range(3, 11))
    assert all(r["status"] == "pass" for r in table)


def test_lie_proxy_and_dims(capsys):
    assert run(capsys, "lie", "proxy", "--max", "8")[0] == 0
    code, out, _ = run(capsys, "lie", "dims", "--max", "8", "--field", "GF(32003)")
    assert code == 0 and [int(r["commutator_dim"]) for r in rows(out)] == [0, 1, 3, 4, 5, 6, 8, 8]


def test_monomial(capsys):
    code, out, _ = run(capsys, "monomial", "--source", "periodic:01", "--max", "4", "--center-max", "4")
    assert code == 0
    assert int(rows(out)[1]["center"]) >= 1


def test_groupoid_commands(capsys):
    code, out, _ = run(capsys, "groupoid", "phi", "--word", "00")
    assert code == 0 and json.loads(out)["dump"][0].startswith("2 | window")
    assert run(capsys, "groupoid", "inject", "--max", "5")[0] == 0
    assert run(capsys, "groupoid", "commutators", "--max", "5")[0] == 0
    code, out, _ = run(capsys, "groupoid", "growth", "--max", "5")
    assert code == 0 and rows(out)[0]["dim"] == "4"  # 1, D_0, D_1, T, T^-1 with D_0 + D_1 = 1


def test_growth_commands(capsys, tmp_path):
    path = tmp_path / "f.csv"
    assert run(capsys, "growth", "table", "--formula", "n_pow_ln", "--range", "1..40", "-o", str(path))[0] == 0
    code, out, _ = run(capsys, "growth", "submult", "--series", str(path), "--range", "6..20")
    assert code == 0 and json.loads(out)["result"]["count"] == 0
    code, out, _ = run(capsys, "growth", "preceq", "--formula", "power:k=2", "--g-formula", "power:k=2,c=3",
                       "--range", "1..100")
    assert json.loads(out)["result"] == [1, 1]
    code, out, _ = run(capsys, "growth", "conditions", "--formula", "n_pow_ln", "--t", "1")
    assert code == 0 and json.loads(out)["result"]["c_stabilized"]


def test_qdim_series(capsys, tmp_path):
    path = tmp_path / "g.csv"
    main(["growth", "table", "--formula", "phi:q=3,sigma=0.5", "--kmax", "30", "-o", str(path)])
    capsys.readouterr()
    code, out, _ = run(capsys, "qdim", "--level", "3", "--series", str(path))
    res = json.loads(out)["result"]
    assert code == 0 and abs(res["Dim"] - 0.5) < 0.05
    assert {"alpha_hat", "Dim", "Dimsup", "window"} <= set(res)


def test_qdim_alpha_round_trip(capsys):
    code, out, _ = run(capsys, "qdim", "--level", "4", "--alpha", "2", "--kmax", "40")
    assert code == 0 and json.loads(out)["result"]["max_relative_error"] < 1e-9


def test_qdim_verify_exit_codes(capsys):
    assert run(capsys, "qdim", "--level", "2", "--verify")[0] == 0


def test_exit_codes(capsys, tmp_path):
    assert run(capsys, "words", "complexity", "--source", "nonsense")[0] == 1
    assert run(capsys, "lie", "quarter", "--max", "many")[0] == 1
    assert run(capsys, "frobnicate")[0] == 1
    assert run(capsys, "--help")[0] == 0
    assert run(capsys, "pipeline", "--L", "5", "--out", str(tmp_path / "x"))[0] == 1
    # horizon too short for the growth search
    code, _, err = run(capsys, "groupoid", "growth", "--max", "10", "--budget", "3")
    assert code == 2 and "budget" in err
    # a false invariant gives 3: 000 is not a Thue-Morse factor, so the
    # prefix is not stable when the explicit word ends early
    code, _, _ = run(capsys, "words", "complexity", "--source", "explicit:0110100110010110", "--max", "4",
                     "--L", "16")
    assert code == 3
