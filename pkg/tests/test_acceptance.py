"""Acceptance criteria 1-11, one printed PASS/FAIL line each.

Criteria 1-10 come from a single run of the `suite` verb, so the aggregation
path of the CLI is exercised as well. The E2(12) conjugation sub-check of
criterion 8 does not hold for the stated cells; it is split out as a strict
xfail and the criterion line reports FAIL.
"""
import io
import json

import pytest

from cellforge.cli import run
from cellforge.suite import CRITERIA, Check, CriterionResult, e2_conjugate_check

from conftest import SYSTEM_KEYS

E2_CHECK = "E2(12) conj(W+) vs W-"


@pytest.fixture(scope="module")
def battery():
    out = io.StringIO()
    code = run(["suite", "--format", "json"], out, io.StringIO())
    results = {}
    for d in json.loads(out.getvalue()):
        checks = [Check(c["name"], c["ok"], c["detail"]) for c in d["checks"]]
        results[d["criterion"]] = CriterionResult(d["criterion"], d["title"], checks, d["seconds"])
    return code, results


def report(capsys, line: str) -> None:
    with capsys.disabled():
        print("\n" + line)


@pytest.mark.parametrize("number", [1, 2, 3, 4, 5, 6, 7, 9, 10])
def test_criterion(number, battery, capsys):
    res = battery[1][number]
    report(capsys, res.line())
    assert res.ok, [(c.name, c.detail) for c in res.failures]


def test_criterion_8(battery, capsys):
    res = battery[1][8]
    report(capsys, res.line())
    others = [c for c in res.failures if c.name != E2_CHECK]
    assert not others, [(c.name, c.detail) for c in others]
    names = {c.name for c in res.checks}
    for needed in ("A(6) re-phasing", "A(8)* W+ vs W-", "E1(12) W+ vs W-", E2_CHECK):
        assert needed in names
    assert sum(c.name.startswith("gauge ") for c in res.checks) == len(SYSTEM_KEYS)


@pytest.mark.xfail(strict=True, reason="E2(12) cells are real with |W+| != |W-| on some triangle, "
                                       "so no gauge maps conj(W+) to W-")
def test_criterion_8_e2_conjugate(capsys):
    c = e2_conjugate_check()
    report(capsys, f"criterion  8 {'PASS' if c.ok else 'FAIL'}  {c.name}: {c.detail}")
    assert c.ok


def test_criterion_11(battery, capsys, tmp_path):
    checks = []
    code, results = battery
    checks.append(Check("suite aggregates 1-10", sorted(results) == sorted(CRITERIA) == list(range(1, 11))
                        and code == (0 if all(r.ok for r in results.values()) else 1), f"exit {code}"))
    for graph, variant in (("E1:12", "minus"), ("D:9", "conj"), ("E24", None)):
        for kind in ("cells", "graph"):
            args = ["export", "--graph", graph, "--kind", kind] + (["--variant", variant] if variant else [])
            first = io.StringIO()
            run(args, first, io.StringIO())
            path = tmp_path / f"{kind}.json"
            path.write_text(first.getvalue(), encoding="utf-8")
            second = io.StringIO()
            rc = run(["import", str(path)], second, io.StringIO())
            checks.append(Check(f"round trip {graph} {kind}", rc == 0 and second.getvalue() == first.getvalue()))
    silent = lambda *a: run(list(a), io.StringIO(), io.StringIO())
    checks.append(Check("verify exit 0", silent("verify", "--graph", "E8") == 0))
    checks.append(Check("verify exit 1 on failure", silent("verify", "--graph", "E8", "--tol", "1e-30") == 1))
    checks.append(Check("usage exit 2", silent("verify", "--graph", "Q:1") == 2))
    checks.append(Check("unsupported exit 3", silent("verify", "--graph", "E4:12") == 3))
    res = CriterionResult(11, "command-line interface", checks)
    report(capsys, res.line())
    assert res.ok, [c.name for c in res.failures]
