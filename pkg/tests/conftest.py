import itertools

import pytest

from catchall.model import StructuralParams

THETAS = (0.1, 0.3, 0.5, 0.7, 0.9)
NOISE_RATIOS = (0.1, 1.0, 10.0)


def grid_params():
    """theta grid x noise-to-signal innovation ratios, sigma2_eps fixed at 1."""
    return [StructuralParams(t, 1.0, r) for t, r in itertools.product(THETAS, NOISE_RATIOS)]


@pytest.fixture
def dgp():
    return StructuralParams(0.9, 1.0, 1.0)


# acceptance criteria register (criterion, passed, detail) here for the terminal summary
ACCEPTANCE_RESULTS = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in sorted(ACCEPTANCE_RESULTS, key=lambda r: r[0]):
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")
