import pytest

ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    """One line per acceptance criterion, after the normal report."""
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for crit in sorted(ACCEPTANCE):
        ok, n, secs = ACCEPTANCE[crit]
        terminalreporter.write_line(
            f"criterion {crit:2d}: {'PASS' if ok else 'FAIL'} ({n} instances, {secs:.1f}s)")


@pytest.fixture(scope="session")
def acceptance_log():
    return ACCEPTANCE
