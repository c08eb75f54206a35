"""Acceptance gate: one test per criterion, plus runner-policy checks.

Run with -v to get the one-line PASS/FAIL verdict per criterion; each
test also prints the measured detail line.
"""

from __future__ import annotations

import json

import pytest

from gamelab import acceptance
from gamelab._util import BudgetExceeded
from gamelab.cli import main


def _run(number: int) -> None:
    res = acceptance.run_criterion(number)
    print(res.line())
    if res.status == "SKIP":
        pytest.skip(res.detail)
    assert res.status == "PASS", res.detail


class TestCriteria:
    def test_criterion_01_stars_exact(self):
        _run(1)

    def test_criterion_02_odd_cycles(self):
        _run(2)

    def test_criterion_03_forest_bound(self):
        _run(3)

    def test_criterion_04_boxgame_oracle(self):
        _run(4)

    def test_criterion_05_f_recurrence(self):
        _run(5)

    def test_criterion_06_reduction_small(self):
        _run(6)

    def test_criterion_07_reduction_medium(self):
        _run(7)

    def test_criterion_08_pigeonhole_corpus(self):
        _run(8)

    def test_criterion_09_paper_maker_integrity(self):
        _run(9)

    def test_criterion_10_solver_self_consistency(self):
        _run(10)

    def test_criterion_11_determinism(self):
        _run(11)


class TestRunnerPolicy:
    def test_budget_exhaustion_reports_skip_not_fail(self, monkeypatch):
        def starved():
            raise BudgetExceeded(123, what="test")

        monkeypatch.setitem(acceptance.CRITERIA, 1, ("stars-exact", starved))
        res = acceptance.run_criterion(1)
        assert res.status == "SKIP"
        assert "123" in res.detail

    def test_tampered_threshold_fails_boxgame_criterion(self, monkeypatch):
        from gamelab import boxgame

        monkeypatch.setattr(
            acceptance, "box_threshold", lambda s, b: boxgame.box_threshold(s, b) + 1
        )
        res = acceptance.run_criterion(5)
        assert res.status == "FAIL"

    def test_subset_selection(self):
        results = acceptance.run_criteria([5, 4])
        assert [r.number for r in results] == [5, 4]

    def test_results_serialize(self):
        res = acceptance.run_criterion(5)
        doc = json.loads(json.dumps(res.as_dict()))
        assert doc["number"] == 5
        assert doc["status"] in ("PASS", "FAIL", "SKIP")

    def test_accept_subcommand(self, tmp_path, capsys):
        out = tmp_path / "acc.json"
        rc = main(["accept", "--only", "4,5", "--out", str(out)])
        lines = [
            line for line in capsys.readouterr().out.splitlines() if line.strip()
        ]
        assert rc == 0
        assert len(lines) == 2
        assert all(line.startswith("[PASS]") for line in lines)
        doc = json.loads(out.read_text())
        assert [d["number"] for d in doc] == [4, 5]
