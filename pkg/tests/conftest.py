import numpy as np
import pytest

from rarestab import GasParams, RiemannData, solve_shock_free
from rarestab.fv import available_backends, get_backend


@pytest.fixture
def gas():
    return GasParams(1.5)


@pytest.fixture
def rarefaction_data():
    return RiemannData.from_triples((1.0, 1.0, 0.0), (1.0, 1.0, 0.5))


@pytest.fixture
def rarefaction(rarefaction_data, gas):
    return solve_shock_free(rarefaction_data, gas)


@pytest.fixture(params=available_backends())
def kernels(request):
    return get_backend(request.param)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    from tests.acceptance_log import LINES

    if LINES:
        terminalreporter.section("acceptance criteria")
        for line in LINES:
            terminalreporter.write_line(line)
