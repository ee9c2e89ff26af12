import numpy as np
import pytest

from powerlaw_sr.imaging import degrade
from powerlaw_sr.synth import gen_colored_noise

ACCEPTANCE_RESULTS = []


@pytest.fixture
def rng():
    return np.random.default_rng(20240531)


@pytest.fixture(scope="session")
def noise256():
    return gen_colored_noise(256, 256, 1.7, seed=0)


@pytest.fixture(scope="session")
def lr64(noise256):
    return degrade(noise256, 4)


@pytest.fixture
def report():
    """Record one acceptance line; printed in the terminal summary."""
    def record(name, passed, detail):
        ACCEPTANCE_RESULTS.append((name, bool(passed), detail))
        return passed
    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, passed, detail in ACCEPTANCE_RESULTS:
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'}  {name}: {detail}")
