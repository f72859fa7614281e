import json

import pytest

from fedosphere.report import Check, SuiteResult, VerificationReport, emit_report
from fedosphere.suites import Context, broken_probe, run_check, run_suites


def _report():
    return VerificationReport(
        mode="symbolic",
        seed=3,
        points=0,
        suites=[
            SuiteResult("b", [Check("b.2", "t", "pass", "ok", 1.0), Check("b.1", "t", "skip", "recorded", 0.5)]),
            SuiteResult("a", [Check("a.1", "u", "fail", "a | b", 2.0)]),
        ],
    )


def test_schema():
    d = _report().to_dict()
    assert set(d) == {"version", "mode", "seed", "points", "suites"}
    assert d["version"] == 1
    for s in d["suites"]:
        assert set(s) == {"name", "checks"}
        for c in s["checks"]:
            assert set(c) == {"id", "paper_tag", "status", "detail", "elapsed_ms"}
    # checks are sorted by id within a suite; suite order is preserved
    assert [c["id"] for c in d["suites"][0]["checks"]] == ["b.1", "b.2"]
    assert [s["name"] for s in d["suites"]] == ["b", "a"]


def test_json_round_trip():
    r = _report()
    back = VerificationReport.from_dict(json.loads(r.to_json()))
    assert back.to_dict() == r.to_dict()


def test_passed_and_counts():
    r = _report()
    assert not r.passed
    assert r.counts() == {"pass": 1, "fail": 1, "skip": 1}
    assert VerificationReport().passed
    assert VerificationReport(suites=[SuiteResult("empty")]).to_dict()["suites"] == [{"name": "empty", "checks": []}]


def test_invalid_checks_rejected():
    with pytest.raises(ValueError):
        Check("x", "t", "maybe")
    with pytest.raises(ValueError):
        Check("x", "t", "pass", "", -1.0)
    dup = VerificationReport(suites=[SuiteResult("a", [Check("x", "t", "pass"), Check("x", "t", "pass")])])
    with pytest.raises(ValueError):
        dup.to_dict()


def test_renderings():
    r = _report()
    text = emit_report(r, "text").decode()
    assert "FAIL a.1" in text and text.endswith("\n")
    assert "1 passed, 1 failed, 1 skipped" in text
    md = emit_report(r, "md").decode()
    assert "## a" in md and "| id | tag | status | detail | ms |" in md
    assert "a \\| b" in md
    assert json.loads(emit_report(r, "json"))["seed"] == 3
    with pytest.raises(ValueError):
        emit_report(r, "xml")


def test_broken_probe_fails(ctx):
    c = run_check(broken_probe(), ctx)
    assert c.status == "fail"
    assert "nonzero" in c.detail
    assert c.elapsed_ms >= 0


def test_crashing_check_is_a_failure():
    from fedosphere.suites import CheckSpec

    def boom(ctx):
        raise ZeroDivisionError("x")

    c = run_check(CheckSpec("t.boom", "t", boom), Context())
    assert c.status == "fail" and "ZeroDivisionError" in c.detail


def test_points_mode_decides_the_probe(fed):
    ctx = Context(seed=5, points=4, mode="points")
    ctx._cache["fed"] = fed
    assert run_check(broken_probe(), ctx).status == "fail"
    rep = run_suites(["omega"], ctx)
    assert rep.passed and rep.points == 4
