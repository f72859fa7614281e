import io
import json
import re

import pytest

from fedosphere import cli
from fedosphere.suites import all_check_ids


@pytest.fixture(autouse=True)
def home(tmp_path, monkeypatch):
    monkeypatch.setenv("HOME", str(tmp_path))
    monkeypatch.delenv("FEDOSPHERE_SEED", raising=False)
    monkeypatch.delenv("FEDOSPHERE_POINTS", raising=False)
    return tmp_path


def run(*argv):
    out = io.StringIO()
    code = cli.run(list(argv), out)
    return code, out.getvalue()


def test_comm_xhat_lhat():
    assert run("comm", "XHAT1", "LHAT2", "--jet", "2") == (0, "XHAT3\n")


def test_eval():
    code, out = run("eval", "comm(S1, K1)", "--jet", "2")
    assert code == 0 and out == "1 - X1^2\n"


@pytest.mark.parametrize(
    "argv",
    [
        ("verify", "--suite", "nope"),
        ("verify", "--points", "0"),
        ("verify", "--jet", "1"),
        ("frobnicate",),
        (),
        ("eval", "X +"),
        ("eval", "X * P"),
        ("comm", "X", "P"),
    ],
)
def test_usage_errors_exit_2(argv, capsys):
    code, _ = run(*argv)
    assert code == 2
    assert capsys.readouterr().err


def test_arithmetic_error_exits_1():
    assert run("eval", "1/(SS - SS)", "--jet", "2")[0] == 1


def test_report_without_cache_exits_2():
    assert run("report")[0] == 2


def test_bad_env_seed(monkeypatch):
    monkeypatch.setenv("FEDOSPHERE_SEED", "abc")
    assert run("verify", "--suite", "omega")[0] == 2


def test_verify_json_and_report(home):
    code, out = run("verify", "--suite", "omega", "--format", "json")
    assert code == 0
    d = json.loads(out)
    assert d["mode"] == "symbolic" and d["points"] == 0
    assert [s["name"] for s in d["suites"]] == ["omega"]
    assert all(c["status"] == "pass" for c in d["suites"][0]["checks"])
    assert (home / ".cache" / "fedosphere" / "last_report.json").exists()
    code, again = run("report", "--format", "json")
    assert code == 0 and json.loads(again) == d
    code, md = run("report", "--format", "md")
    assert code == 0 and md.startswith("# Verification report")


def test_deterministic_under_seed():
    args = ("verify", "--suite", "omega", "--mode", "points", "--points", "3", "--seed", "11", "--format", "json")
    a, b = run(*args)[1], run(*args)[1]
    mask = re.compile(r'"elapsed_ms": [0-9.e+-]+')
    assert mask.sub("", a) == mask.sub("", b)
    d = json.loads(a)
    assert d["seed"] == 11 and d["points"] == 3


def test_env_overrides(monkeypatch):
    monkeypatch.setenv("FEDOSPHERE_SEED", "9")
    monkeypatch.setenv("FEDOSPHERE_POINTS", "2")
    d = json.loads(run("verify", "--suite", "omega", "--mode", "points", "--format", "json")[1])
    assert d["seed"] == 9 and d["points"] == 2


def test_injected_failure_exits_1():
    code, out = run("verify", "--suite", "omega", "--inject-failure", "--format", "json")
    assert code == 1
    d = json.loads(out)
    probe = [c for s in d["suites"] for c in s["checks"] if c["id"] == "r.probe.r0_only"]
    assert probe and probe[0]["status"] == "fail" and probe[0]["detail"]


def test_out_file(tmp_path):
    target = tmp_path / "r.md"
    code, out = run("verify", "--suite", "omega", "--format", "md", "--out", str(target))
    assert code == 0 and out == ""
    assert target.read_text().startswith("# Verification report")
    assert run("verify", "--suite", "omega", "--out", str(tmp_path / "missing" / "r.txt"))[0] == 1


def test_check_index_is_complete():
    from pathlib import Path

    doc = (Path(__file__).resolve().parents[1] / "docs" / "check_ids.md").read_text()
    listed = set(re.findall(r"^\| `([^`]+)` \|", doc, re.M))
    assert set(all_check_ids()) <= listed
