import json
import subprocess
import sys

import pytest

from stdlaplace.cli import run


def invoke(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_decompose_json_golden(capsys):
    code, out, _ = invoke(capsys, "decompose", "--algebra", "G2", "--hw", "1,0", "--hw2", "0,1",
                          "--format", "json")
    doc = json.loads(out)
    assert code == 0
    assert (doc["schema_version"], doc["subcommand"], doc["seed"]) == (1, "decompose", 0)
    assert doc["result"]["summands"] == [
        {"hw": [1, 0], "mult": 1, "dim": 7},
        {"hw": [1, 1], "mult": 1, "dim": 64},
        {"hw": [2, 0], "mult": 1, "dim": 27},
    ]


def test_decompose_text(capsys):
    code, out, _ = invoke(capsys, "decompose", "--algebra", "G2", "--hw", "1,0", "--hw2", "1,0")
    assert code == 0
    assert out.splitlines() == ["# stdlaplace decompose seed=0",
                                "G2: [1, 0] x [1, 0] = [0,0] + [0,1] + [1,0] + [2,0]  (dim 49)"]


def test_qr_constant_curvature_on_one_forms(capsys):
    code, out, _ = invoke(capsys, "qr", "--context", "so", "--m", "3", "--rep", "lambda:1",
                          "--curvature", "constant:1", "--format", "json")
    doc = json.loads(out)["result"]
    assert code == 0
    assert doc["q"] == [["2/1" if i == j else "0/1" for j in range(3)] for i in range(3)]
    assert doc["ok"]


def test_jet_verify_spec_example(capsys):
    code, out, _ = invoke(capsys, "jet-verify", "--m", "3", "--rep", "t", "--trials", "20",
                          "--seed", "7")
    assert code == 0
    assert out.startswith("# stdlaplace jet-verify seed=7\n")
    assert "FAIL" not in out


def test_weights_and_gradients(capsys):
    code, out, _ = invoke(capsys, "weights", "--context", "g2", "--format", "json")
    doc = json.loads(out)["result"]
    assert code == 0 and doc["ok"] and doc["trace"] == "0/1"
    code, out, _ = invoke(capsys, "gradients", "--m", "4", "--rep", "lambda:2")
    assert code == 0 and "3 gradient targets" in out


def test_failing_check_exits_one(capsys):
    # random curvature has trace-free Ricci, where the displayed constant is off
    code, out, _ = invoke(capsys, "integral", "--m", "3", "--curvature", "random:3")
    assert code == 1
    assert "FAIL" in out


@pytest.mark.parametrize("argv", [
    ["decompose", "--algebra", "G2", "--hw", "1,0"],
    ["decompose", "--algebra", "Q7", "--hw", "1", "--hw2", "1"],
    ["qr", "--m", "3", "--curvature", "bogus"],
    ["qr", "--curvature", "constant:1"],
    ["jet-verify", "--m", "9"],
    ["jet-verify", "--seed", str(2 ** 70)],
    ["commute", "--survey", "rs", "--m", "6"],
    ["nonsense"],
])
def test_usage_errors_exit_two(capsys, argv):
    code, out, err = invoke(capsys, *argv)
    assert code == 2
    assert out == ""
    assert "error" in err


def test_output_is_deterministic(capsys):
    argv = ["commute", "--survey", "qk", "--k", "2", "--a", "1", "--b", "1", "--format", "json"]
    first = invoke(capsys, *argv)
    assert first == invoke(capsys, *argv)
    assert first[0] == 0


def test_out_file(tmp_path, capsys):
    target = tmp_path / "report.json"
    code, out, _ = invoke(capsys, "commute", "--survey", "g2", "--format", "json",
                          "--out", str(target))
    assert code == 0 and out == ""
    assert json.loads(target.read_text())["result"]["conclusion"] == "commutes"


def test_golden_regeneration(tmp_path, capsys):
    code, out, _ = invoke(capsys, "golden", "--only", "g2_table.json", "--write", str(tmp_path))
    assert code == 0 and "PASS  g2_table.json" in out
    from stdlaplace.vanish import load_golden
    assert json.loads((tmp_path / "g2_table.json").read_text()) == load_golden("g2_table.json")


def test_replay_round_trip(tmp_path, capsys, monkeypatch):
    from stdlaplace.holctx import context
    from stdlaplace.jetverify import checks, random_metric_jet, verify_commutator
    from stdlaplace.matmodel import gradient_targets, rep_functor

    real = checks.error_term

    def shifted(ctx, g, dR):
        e = real(ctx, g, dR)
        e.matrix = e.matrix * 3
        return e

    monkeypatch.setattr(checks, "error_term", shifted)
    V = rep_functor(context("so3"), "t")
    rep = verify_commutator(random_metric_jet(3, 4), V, gradient_targets(V), 1, 4)
    monkeypatch.undo()
    dumps = [dict(f, rep_expr="t") for f in rep.failures]
    assert dumps
    path = tmp_path / "dump.json"
    path.write_text(json.dumps(dumps))
    code, out, _ = invoke(capsys, "jet-verify", "--replay", str(path))
    assert code == 0
    assert "DIFFERENT" not in out


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "stdlaplace", "decompose", "--algebra", "A1",
                           "--hw", "1", "--hw2", "1"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert "[0] + [2]" in proc.stdout
