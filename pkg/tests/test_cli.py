import hashlib
import io
import json
import subprocess
import sys

import pytest

from hyperfn import cli, inflation
from hyperfn.switches import Node, SwitchExpr


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = cli.run(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def test_hyper_eval_step():
    code, out, err = run("hyper", "eval", "--term", "step:0", "--x", "5")
    assert code == 0
    assert out == "1\n"
    assert err.startswith("manifest: ")


def test_hyper_eval_terms_and_numeric():
    code, out, _ = run("hyper", "eval", "--term", "3*interval:0:1", "--term", "const:2",
                       "--x", "0.5", "--x", "4")
    assert code == 0 and out.split() == ["5", "2"]
    code, out, _ = run("hyper", "eval", "--term", "delta:0", "--x", "0")
    assert out == "singular\n"
    code, out, _ = run("hyper", "eval", "--numeric", "--term", "step:0", "--x", "-2")
    assert code == 0 and abs(complex(out.strip().replace("+-", "-"))) < 1e-9


def test_hyper_eval_file(tmp_path):
    from hyperfn import core

    hf = core.Hyperfunction.of(core.interval(0, 2, 4.0))
    f = tmp_path / "h.json"
    f.write_text(hf.to_json())
    code, out, _ = run("hyper", "eval", "--file", str(f), "--x", "1")
    assert code == 0 and out == "4\n"


def test_usage_errors_exit_2_single_line():
    for argv in (["hyper", "eval", "--x", "1", "--bogus"], ["nope"], [],
                 ["hyper", "eval", "--term", "wat:1", "--x", "1"],
                 ["hyper", "eval", "--term", "interval:2:1", "--x", "1"]):
        code, out, err = run(*argv)
        assert code == 2, argv
        assert err.count("\n") == 1 and err.startswith("error: "), err
        assert out == ""


def test_validation_error_code_is_printed():
    code, _, err = run("hyper", "eval", "--term", "interval:2:1", "--x", "1")
    assert err.startswith("error: INVALID_TERM: ")


def test_io_error_exit_3(tmp_path):
    code, _, err = run("pref", "choose", "--spec", str(tmp_path / "missing.json"), "--pair", "1,2")
    assert code == 3 and err.startswith("error: IO: ")


def test_switch_eval(tmp_path):
    e = tmp_path / "e.json"
    e.write_text(json.dumps(SwitchExpr(Node.INTERVAL, ("x", [0.0], "x", [1.0])).to_dict()))
    i = tmp_path / "i.json"
    i.write_text(json.dumps({"x": 0.5}))
    assert run("switch", "eval", "--expr", str(e), "--inputs", str(i))[1] == "1\n"
    assert run("switch", "eval", "--expr", str(e), "--inputs", str(i), "--via-hyperfunctions")[1] == "1\n"
    i.write_text(json.dumps({}))
    assert run("switch", "eval", "--expr", str(e), "--inputs", str(i))[0] == 2


def test_pref_choose(tmp_path):
    f = tmp_path / "s.json"
    f.write_text(json.dumps({"impulses": [{"r_lo": 0, "r_hi": 1, "weight": 1},
                                          {"r_lo": 2, "r_hi": 3, "weight": 5}], "rho": 0.05}))
    assert run("pref", "choose", "--spec", str(f), "--pair", "0.5,2.5")[1] == "2.5\n"
    assert run("pref", "choose", "--spec", str(f), "--pair", "7,8")[1] == "tie\n"
    assert run("pref", "choose", "--spec", str(f), "--pair", "7")[0] == 2


def _graph_file(tmp_path):
    g = {
        "tasks": [
            {"label": 1, "order": 1, "coefficients": [{"k": 0, "p": 0, "r": 1, "psi": 3}], "cross_section": 2},
            {"label": 2, "order": 2, "coefficients": [{"k": 0, "p": 0, "r": 0.5, "psi": 2}],
             "specificity": 4, "cross_section": 0.9},
        ],
        "edges": [[2, 1]],
        "interval": [0, 1],
        "path": [2, 1],
    }
    f = tmp_path / "g.json"
    f.write_text(json.dumps(g))
    return f


def test_prod_triangle_csv(tmp_path):
    f = _graph_file(tmp_path)
    code, out, _ = run("prod", "triangle", "--graph", str(f), "--bins", "1,2,3")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "#schema=hyperfn.triangle/1"
    assert lines[1] == "order_bin,frequency"
    assert lines[2:] == ["[1;2),3", "[2;3),1"]
    assert run("prod", "triangle", "--graph", str(f), "--bins", "3,2")[0] == 2


def test_prod_abandon_csv(tmp_path):
    f = _graph_file(tmp_path)
    code, out, _ = run("prod", "abandon", "--graph", str(f), "--rates", "0.05,0.2,0.5")
    assert code == 0
    lines = out.splitlines()
    assert lines[1] == "rank,label,abandon_rate"
    assert lines[2] == "1,2,0.2"


def test_inflate_sweep(tmp_path):
    cfg = inflation.demo_config_path()
    code, out, _ = run("inflate", "sweep", "--config", cfg, "--epsilons", "0")
    assert code == 0
    rows = out.splitlines()
    assert rows[1] == "epsilon,welfare,drop_ratio,nonproportional_flag"
    assert all(r.split(",")[2] == "0" for r in rows[2:])

    reports = tmp_path / "reports.json"
    csv = tmp_path / "sweep.csv"
    man = tmp_path / "manifest.json"
    code, out, err = run("inflate", "sweep", "--config", cfg, "--epsilons", "0,0.001,0.01",
                         "--out", str(csv), "--reports", str(reports), "--manifest", str(man))
    assert code == 0 and out == "" and err == ""
    body = csv.read_text().splitlines()
    assert body[3].split(",")[3] == "1"
    doc = json.loads(reports.read_text())
    assert [p["epsilon"] for p in doc] == [0, 0.001, 0.01]
    assert "exchange_count" in doc[0]["rounds"][0]
    m = json.loads(man.read_text())
    assert m["seed"] == 20261016 and m["outputs"] == [str(csv), str(reports)]


def test_byte_identical_and_digest(tmp_path):
    cfg = inflation.demo_config_path()
    argv = ["inflate", "sweep", "--config", cfg, "--epsilons", "0,0.005,0.03"]
    a, b = run(*argv), run(*argv)
    assert a == b
    man = json.loads(a[2].split("manifest: ", 1)[1])
    with open(cfg, encoding="utf-8") as fh:
        text = fh.read()
    h = hashlib.sha256()
    h.update("\0".join(argv).encode())
    h.update(b"\0" + cfg.encode() + b"\0" + text.encode())
    assert man["config_digest"] == "sha256:" + h.hexdigest()
    assert man["command"] == "inflate sweep" and man["tool_version"]


def test_risk_project(tmp_path):
    model = {"base_terms": [{"gate": {"node": "STEP_WEAK_ONE", "args": ["x", [1.0]]},
                             "amount": 100, "time": 2}], "rate": 0, "event_deltas": []}
    m = tmp_path / "m.json"
    m.write_text(json.dumps(model))
    d = tmp_path / "d.json"
    d.write_text(json.dumps({"x": 3}))
    code, out, _ = run("risk", "project", "--model", str(m), "--data", str(d), "--rate", "0.05")
    assert code == 0
    lo, hi = map(float, out.splitlines()[2].split(","))
    assert lo == hi == pytest.approx(90.48374180359595)
    assert run("risk", "project", "--model", str(m), "--data", str(d), "--rate", "0")[0] == 2
    d.write_text("{not json")
    code, _, err = run("risk", "project", "--model", str(m), "--data", str(d), "--rate", "0.05")
    assert code == 2 and err.startswith("error: USAGE: ")


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "hyperfn.cli", "hyper", "eval", "--term", "step:0", "--x", "5"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout == "1\n"
    proc = subprocess.run([sys.executable, "-m", "hyperfn.cli", "--bogus"], capture_output=True, text=True)
    assert proc.returncode == 2
