import pytest

_LINES_KEY = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[_LINES_KEY] = []


@pytest.fixture
def acceptance(request):
    """Record one ``PASS``/``FAIL`` line for an acceptance criterion."""
    lines = request.config.stash[_LINES_KEY]

    def record(number: int, passed: bool, detail: str) -> None:
        line = f"[{'PASS' if passed else 'FAIL'}] criterion {number:>2}: {detail}"
        lines.append((number, line))
        print(line)

    return record


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash[_LINES_KEY]
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for _, line in sorted(lines, key=lambda item: item[0]):
        terminalreporter.write_line(line)
