import pytest

_LINES = pytest.StashKey[list]()


@pytest.fixture
def acceptance_line(request):
    """Record a check result so the run ends with one line per criterion."""

    def record(result):
        request.config.stash.setdefault(_LINES, []).append(result.line())
        print(result.line())
        return result

    return record


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(_LINES, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
