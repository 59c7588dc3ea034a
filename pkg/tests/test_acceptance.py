"""Acceptance criteria at their pinned tolerances.

Runs ``reclab selftest --seed 0`` through the CLI (which evaluates criteria
1-11 twice from cold caches and compares the rendered reports), prints one
PASS/FAIL line per criterion, and checks each criterion separately.  A
second CLI invocation checks that the saved reports are byte-identical.
"""

import pytest

from reclab import acceptance, cli


@pytest.fixture(scope="module")
def selftest_run(tmp_path_factory):
    path = tmp_path_factory.mktemp("selftest") / "report.txt"
    code = cli.run(["selftest", "--seed", "0", "--out", str(path)])
    text = path.read_text()
    print("\n" + text, end="")
    return code, path, text


def _line(text, number):
    for line in text.splitlines():
        if line[7:].lstrip().startswith(f"{number} "):
            return line
    raise AssertionError(f"criterion {number} missing from report")


@pytest.mark.parametrize("number", range(1, 12))
def test_criterion(selftest_run, number):
    _, _, text = selftest_run
    line = _line(text, number)
    assert line.startswith("[PASS]"), line


def test_criterion_12_reproducible(selftest_run, tmp_path):
    code, first_path, text = selftest_run
    assert _line(text, 12).startswith("[PASS]")
    second = tmp_path / "again.txt"
    assert cli.run(["selftest", "--seed", "0", "--out", str(second)]) == code
    same = first_path.read_bytes() == second.read_bytes()
    print(acceptance.criterion_12(first_path.read_text(), second.read_text()).line())
    assert same


def test_selftest_exit_code(selftest_run):
    code, _, text = selftest_run
    assert code == 0
    assert text.count("[PASS]") == 12
