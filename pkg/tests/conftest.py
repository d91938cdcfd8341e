import numpy as np
import pytest

from lifelike_crypt.cipher import CipherParams
from lifelike_crypt.grid import Grid
from lifelike_crypt.rules import parse_rule


def pytest_addoption(parser):
    parser.addoption('--runslow', action='store_true', default=False,
                     help='run long statistical acceptance tests')


def pytest_collection_modifyitems(config, items):
    if config.getoption('--runslow'):
        return
    skip_slow = pytest.mark.skip(reason='need --runslow option to run')
    for item in items:
        if 'slow' in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture
def life():
    return parse_rule('B3/S23', name='Life')


@pytest.fixture
def fredkin():
    return parse_rule('B1357/S02468', name='Fredkin')


@pytest.fixture
def password() -> bytes:
    return bytes(range(16))


@pytest.fixture
def make_grid():
    """Build m x n dead grid with given alive cells"""
    def w(m, n, alive=()):
        cells = np.zeros((m, n), dtype=np.uint8)
        for row, col in alive:
            cells[row, col] = 1
        return Grid(cells)

    return w


@pytest.fixture
def blinker(make_grid):
    """Vertical blinker in the middle of 8x8 grid"""
    return make_grid(8, 8, [(3, 4), (4, 4), (5, 4)])


@pytest.fixture
def block(make_grid):
    """2x2 block still life on 8x8 grid"""
    return make_grid(8, 8, [(1, 1), (1, 2), (2, 1), (2, 2)])


@pytest.fixture
def small_params(fredkin):
    return CipherParams(rule=fredkin, m=16, n=16, rho=2, alpha=100)
