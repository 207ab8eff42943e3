"""Acceptance criteria 1-10.

Runs ``python -m f2derived selftest`` once and reports one PASS/FAIL line per
criterion. Criterion 10 is the exit status of that run. Also usable directly:
``python tests/test_acceptance.py``.
"""

import re
import subprocess
import sys

import pytest

SELFTEST = [sys.executable, "-m", "f2derived", "selftest"]
LINE = re.compile(r"^\[(PASS|FAIL)\] (\d+)\. ")


@pytest.fixture(scope="module")
def selftest():
    proc = subprocess.run(SELFTEST, capture_output=True, text=True, timeout=3600)
    lines = {}
    for line in proc.stdout.splitlines():
        m = LINE.match(line)
        if m:
            lines[int(m.group(2))] = (m.group(1), line)
    return proc, lines


@pytest.mark.parametrize("number", range(1, 10))
def test_criterion(selftest, capsys, number):
    proc, lines = selftest
    assert number in lines, f"no line for criterion {number}; stderr:\n{proc.stderr[-2000:]}"
    verdict, line = lines[number]
    with capsys.disabled():
        print("\n" + line)
    assert verdict == "PASS", line


def test_criterion_10_selftest_exit_status(selftest, capsys):
    proc, _ = selftest
    verdict = "PASS" if proc.returncode == 0 else "FAIL"
    with capsys.disabled():
        print(f"\n[{verdict}] 10. selftest exits 0: exit status {proc.returncode}")
    assert proc.returncode == 0


if __name__ == "__main__":
    sys.exit(subprocess.call(SELFTEST))
