import numpy as np
import pytest

# Filled by tests/test_acceptance.py: criterion number -> (name, passed, detail).
ACCEPTANCE_RESULTS = {}


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE_RESULTS):
        name, passed, detail = ACCEPTANCE_RESULTS[number]
        status = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"[{status}] {number}. {name}: {detail}")
