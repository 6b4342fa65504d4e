import pytest

_LINES_KEY = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[_LINES_KEY] = []


@pytest.fixture
def verdict(request):
    """Record one PASS/FAIL line per acceptance criterion and fail on FAIL."""
    lines = request.config.stash[_LINES_KEY]

    def report(number: int, checks: list[tuple[bool, str]]):
        ok = all(c for c, _ in checks)
        bad = [msg for c, msg in checks if not c]
        detail = "; ".join(bad) if bad else f"{len(checks)} checks"
        line = f"{'PASS' if ok else 'FAIL'} criterion {number}: {detail}"
        lines.append((number, line))
        print(line)
        assert ok, line

    return report


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(_LINES_KEY, [])
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for _, line in sorted(lines):
        terminalreporter.write_line(line)
