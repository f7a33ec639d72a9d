import pytest

_criterion_lines = []


@pytest.fixture
def criterion_line():
    """Collector for the one-line acceptance verdicts."""
    return _criterion_lines.append


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if _criterion_lines:
        terminalreporter.section("acceptance criteria")
        for line in _criterion_lines:
            terminalreporter.write_line(line)
