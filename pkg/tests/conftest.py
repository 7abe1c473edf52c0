import pytest

from acceptance_log import RESULTS


def pytest_terminal_summary(terminalreporter):
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(RESULTS):
        ok, secs, note = RESULTS[k]
        line = f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  ({secs:.2f} s)"
        if note:
            line += f"  {note}"
        terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def d13():
    from setgrading import grading_from_design, pg2_f3

    return grading_from_design(pg2_f3())
