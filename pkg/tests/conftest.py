import numpy as np
import pytest
from hypothesis import settings

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def direct_synthesis(coeffs, max_index, t):
    """O(N M) evaluation of a Fourier series, independent of the FFT path."""
    n = np.arange(-max_index, max_index + 1)
    return np.exp(2j * np.pi * np.outer(t, n)) @ coeffs


_ACCEPTANCE = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[_ACCEPTANCE] = []


@pytest.fixture
def criterion(request):
    """Record one pass/fail line for an acceptance criterion and assert it."""

    def report(number, passed, detail):
        line = f"{'PASS' if passed else 'FAIL'} criterion {number}: {detail}"
        print(line)
        request.config.stash[_ACCEPTANCE].append((number, line))
        assert passed, line

    return report


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(_ACCEPTANCE, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(lines):
            terminalreporter.write_line(line)
