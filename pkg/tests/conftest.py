import numpy as np
import pytest

from hyperfilt.checks import random_band_limited

ACCEPTANCE_LINES = []


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def band_limited():
    """Factory: random band-limited SampledFunction on a grid."""

    def make(grid, band, rng, per_degree=3):
        return random_band_limited(grid, band, rng, per_degree)

    return make


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
