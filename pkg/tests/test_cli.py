import json
import subprocess
import sys

import pytest

from numberwall.cli import main, selftest_checks


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_figure_wall(tmp_path, capsys):
    ppm = tmp_path / "w.ppm"
    code, out, _ = run(capsys, "wall", "--field", "5^1", "--seq", "1,1,3,2,1,0,0,0,2,0,2,0",
                       "--render", str(ppm))
    assert code == 0
    rep = json.loads(out)
    assert rep["r"] == 12 and rep["depth"] == 5
    assert {"l": 3, "m": 0, "n": 6} in [{k: w[k] for k in "lmn"} for w in rep["windows"]]
    assert ppm.read_bytes().startswith(b"P6\n")


def test_contain_full_example(capsys):
    code, out, _ = run(capsys, "census", "--experiment", "contain-full", "--field", "2^1",
                       "--params", "r=5,l=1,n=2,m=0")
    rep = json.loads(out)
    assert code == 0 and rep["verdict"] == "match" and rep["enumerated_value"] == 16


@pytest.mark.parametrize("argv", [
    ["wall", "--field", "2^1", "--seq", ""],
    ["wall", "--field", "6^1", "--seq", "1,0"],
    ["wall", "--field", "2^1"],
    ["census", "--experiment", "rect", "--field", "2^1", "--params", "r=x"],
    ["census", "--experiment", "nope"],
])
def test_usage_errors(argv, capsys):
    code, out, err = run(capsys, *argv)
    assert code == 2 and err


def test_violation_exit_code(capsys):
    code, out, _ = run(capsys, "check-lc", "--field", "3^1", "--pf", "1:50", "--l", "2")
    assert code == 1 and json.loads(out)["verdict"] == "violation"
    code, out, _ = run(capsys, "check-lc", "--field", "3^1", "--pf", "1:50", "--l", "6")
    assert code == 0


def test_reports_round_trip(capsys):
    for argv in (["search", "--field", "3^1", "--target-window", "1", "--max-len", "8"],
                 ["transfer", "--field", "2^1", "--random", "3", "--length", "40",
                  "--p", "t^2+t+1", "--D", "3"]):
        code, out, _ = run(capsys, *argv)
        assert code == 0
        obj = json.loads(out)
        assert json.loads(json.dumps(obj, sort_keys=True)) == obj
        assert obj["config"]["command"] == argv[0]


def test_repeat_runs_are_byte_identical(tmp_path, capsys):
    outs = []
    for i in range(2):
        d = tmp_path / str(i)
        d.mkdir()
        argv = ["wall", "--field", "3^1", "--random", "7", "--length", "60",
                "--csv", str(d / "w.csv"), "--windows", str(d / "w.json"), "--render", str(d / "w.ppm")]
        code, out, _ = run(capsys, *argv)
        assert code == 0
        outs.append([out.replace(str(d), "")] + [(d / f).read_bytes() for f in ("w.csv", "w.json", "w.ppm")])
    assert outs[0] == outs[1]


def test_jobs_setting_does_not_change_output(capsys):
    argv = ["census", "--experiment", "rect", "--field", "2^1", "--params", "r=9"]
    _, a, _ = run(capsys, "--jobs", "1", *argv)
    _, b, _ = run(capsys, "--jobs", "3", *argv)
    assert a == b and len(a.splitlines()) > 5


def test_config_replay(tmp_path, capsys):
    code, out, _ = run(capsys, "census", "--experiment", "two-window", "--field", "3^1",
                       "--params", "r=7,pairs=5,seed=2")
    first = out.splitlines()[0]
    cfg = tmp_path / "cfg.json"
    cfg.write_text(first)
    code2, out2, _ = run(capsys, "--config", str(cfg))
    assert code2 == code and out2 == out


def test_out_flag(tmp_path, capsys):
    dest = tmp_path / "r.jsonl"
    code, out, _ = run(capsys, "--out", str(dest), "census", "--experiment", "q-table",
                       "--field", "3^1", "--params", "m=1,seeds=5")
    assert code == 0 and not out
    assert all(json.loads(x)["verdict"] == "match" for x in dest.read_text().splitlines())


def test_selftest():
    results = list(selftest_checks())
    assert len(results) >= 8 and all(ok for _, ok, _ in results)


def test_module_entry_point():
    p = subprocess.run([sys.executable, "-m", "numberwall", "selftest"], capture_output=True, text=True)
    assert p.returncode == 0 and "PASS" in p.stdout and "FAIL" not in p.stdout
