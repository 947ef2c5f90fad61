import pytest

_LINES = pytest.StashKey[dict]()


@pytest.fixture
def record(request):
    """Log one PASS/FAIL line for an acceptance criterion; printed in the terminal summary."""
    lines = request.config.stash.setdefault(_LINES, {})

    def _record(number, title, passed, detail):
        line = f"{'PASS' if passed else 'FAIL'}  [{number:>2}] {title}: {detail}"
        lines[number] = line
        print(line)
        return passed

    return _record


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(_LINES, {})
    if lines:
        terminalreporter.section("acceptance criteria")
        for number in sorted(lines):
            terminalreporter.write_line(lines[number])
