import warnings

import pytest

from dfcw_golay.chips import AliasingWarning

VERDICTS = []


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance: acceptance gate criterion")


@pytest.fixture
def verdict():
    """Record one acceptance line, then assert it."""

    def record(number, title, passed, detail):
        line = f"[{'PASS' if passed else 'FAIL'}] criterion {number:>2}: {title} | {detail}"
        VERDICTS.append((number, line))
        print(line)
        assert passed, line

    return record


@pytest.fixture
def quiet_aliasing():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", AliasingWarning)
        yield


def pytest_terminal_summary(terminalreporter):
    if not VERDICTS:
        return
    terminalreporter.section("acceptance criteria")
    for _, line in sorted(VERDICTS):
        terminalreporter.write_line(line)
    passed = sum(line.startswith("[PASS]") for _, line in VERDICTS)
    terminalreporter.write_line(f"{passed}/{len(VERDICTS)} criteria pass")
