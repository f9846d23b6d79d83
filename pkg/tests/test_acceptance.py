"""Acceptance criteria: one PASS/FAIL line per criterion, printed uncaptured."""

import subprocess
import sys

import pytest

from tempered import acceptance


def _report(capsys, line):
    with capsys.disabled():
        print("\n" + line)


@pytest.mark.parametrize("number", [c[0] for c in acceptance.CRITERIA],
                         ids=[f"{c[0]:02d}-{c[1].replace(' ', '_')}" for c in acceptance.CRITERIA])
def test_criterion(number, capsys):
    res = acceptance.run_criterion(number)
    _report(capsys, res.line())
    assert res.passed, res.detail


def test_criterion_11_selftest(capsys):
    proc = subprocess.run([sys.executable, "-m", "tempered", "selftest"],
                          capture_output=True, text=True)
    lines = proc.stdout.strip().splitlines()
    _report(capsys, lines[-1] if lines else f"[FAIL] 11 selftest: no output ({proc.stderr.strip()})")
    assert proc.returncode == 0, proc.stdout + proc.stderr
    assert len(lines) == len(acceptance.CRITERIA) + 1
    assert all(line.startswith("[PASS]") for line in lines)
