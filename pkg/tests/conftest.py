import numpy as np
import pytest

from nlcascade import PRESETS, coefficients

PRESET_NAMES = sorted(PRESETS)


@pytest.fixture(scope="session")
def preset_coeffs():
    """Coefficient vectors of every preset, built once."""
    return {name: coefficients(p.config.field, p.config.eps) for name, p in PRESETS.items()}


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
