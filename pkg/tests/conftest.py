import time

import pytest

CRITERIA: dict[int, tuple[str, float]] = {}


@pytest.fixture
def criterion(request):
    """Times one acceptance criterion and records its outcome for the summary."""
    number = request.node.get_closest_marker("criterion").args[0]
    start = time.perf_counter()
    CRITERIA[number] = ("FAIL", 0.0)
    yield start
    CRITERIA[number] = ("PASS" if not getattr(request.node, "_failed", False) else "FAIL",
                        time.perf_counter() - start)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call" and rep.failed:
        item._failed = True


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number")


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(CRITERIA):
        status, secs = CRITERIA[n]
        terminalreporter.write_line(f"criterion {n}: {status} ({secs:.2f} s)")
