"""Transformation of a 128-bit password into the initial CA grid.

The password is read as a little-endian base-256 number, normalized
into [0, 0.5) and used as the start point of the logistic map orbit.
After a transient the orbit values are binarized one per cell.

All arithmetic here is scalar binary64 in a fixed evaluation order,
so seed grids are bit-identical on every platform.

Only the ~53 most significant bits of the normalized password value
survive the conversion to binary64. For random 16-byte passwords this
means the low-order bytes do not influence the seed grid.
"""
__all__ = [
    'SeedConfig',
    'LogisticOrbit',
    'check_mu',
    'logistic_next',
    'password_to_omega',
    'password_from_text',
    'password_from_hex',
    'initial_grid'
]

import binascii
import logging
from itertools import islice
from typing import Iterator

import numpy as np

from lifelike_crypt import flags
from lifelike_crypt.exceptions import SeedError
from lifelike_crypt.grid import Grid
from lifelike_crypt.utils import Slotinit

log = logging.getLogger('lifelike-crypt')

# Omega = sum(pi_i * 2^(8(i-1))) / 2^(8*16 + 1)
_OMEGA_NORMALIZER = 2 ** (8 * flags.PASSWORD_LENGTH + 1)


def _check_password(password: bytes):
    if not isinstance(password, (bytes, bytearray)):
        raise SeedError(f'Password must be bytes, got {type(password).__name__}')
    if len(password) != flags.PASSWORD_LENGTH:
        raise SeedError(f'Password must be exactly {flags.PASSWORD_LENGTH} bytes, '
                        f'got {len(password)}')


def check_mu(mu: float):
    if not flags.MU_MIN <= mu <= flags.MU_MAX:
        raise SeedError(f'mu must be in [{flags.MU_MIN}, {flags.MU_MAX}], got {mu!r}')


class SeedConfig(Slotinit):
    """Password and logistic map parameters

    * password -- 16 bytes
    * mu -- logistic map parameter, in [3.9, 4.0]
    * alpha -- number of transient orbit values to discard
    * epsilon -- offset added to the password value, in (0, 2^-40)
    """
    __slots__ = ('password', 'mu', 'alpha', 'epsilon')
    defaults = {
        'mu': flags.DEFAULT_MU,
        'alpha': flags.DEFAULT_ALPHA,
        'epsilon': flags.DEFAULT_EPSILON
    }
    secret_slots = ('password', )

    def __init__(self, **kwargs):
        super().__init__(**kwargs)
        _check_password(self.password)
        self.password = bytes(self.password)
        check_mu(self.mu)
        if isinstance(self.alpha, bool) or not isinstance(self.alpha, int) or self.alpha < 0:
            raise SeedError(f'alpha must be a non-negative integer, got {self.alpha!r}')
        if not 0.0 < self.epsilon < flags.EPSILON_MAX:
            raise SeedError(f'epsilon must be in (0, 2^-40), got {self.epsilon!r}')


def logistic_next(x: float, mu: float) -> float:
    """
    One logistic map iteration mu*x*(1-x), evaluated as
    t1 = 1-x; t2 = mu*x; t2*t1 in binary64. The result is capped at
    1.0 against the last-place rounding overshoot near x=0.5
    :param x: value in [0, 1]
    :param mu: parameter in [3.9, 4.0]
    :raises SeedError: on domain violation
    :return: next orbit value in [0, 1]
    """
    if not 0.0 <= x <= 1.0:
        raise SeedError(f'Logistic map argument must be in [0, 1], got {x!r}')
    check_mu(mu)

    t1 = 1.0 - x
    t2 = mu * x
    return min(t2 * t1, 1.0)


class LogisticOrbit:
    """Iterator over logistic map orbit values X_1, X_2, ...

    If an orbit value lands exactly on 0 or 1 (absorbing for the map)
    it is moved inside the interval by epsilon once, i.e. 0 becomes
    epsilon and 1 becomes 1-epsilon
    """
    def __init__(self, x0: float, mu: float, epsilon: float):
        if not 0.0 <= x0 <= 1.0:
            raise SeedError(f'Orbit start must be in [0, 1], got {x0!r}')
        check_mu(mu)
        self.x = x0
        self.h = 0
        self.mu = mu
        self.epsilon = epsilon

    def __iter__(self) -> Iterator[float]:
        return self

    def __next__(self) -> float:
        x = logistic_next(self.x, self.mu)
        if x == 0.0:
            log.debug('Orbit hit 0.0 at step %d, perturbed', self.h + 1)
            x = self.epsilon
        elif x == 1.0:
            log.debug('Orbit hit 1.0 at step %d, perturbed', self.h + 1)
            x = 1.0 - self.epsilon
        self.x = x
        self.h += 1
        return x


def password_to_omega(password: bytes) -> float:
    """
    Normalized password value: bytes read as little-endian base-256
    integer (first byte is the least significant) divided by 2^129
    :param password: exactly 16 bytes
    :raises SeedError: on wrong length
    :return: value in [0, 0.5)
    """
    _check_password(password)
    # int / int is correctly rounded to binary64
    return int.from_bytes(bytes(password), 'little') / _OMEGA_NORMALIZER


def password_from_text(text: str) -> bytes:
    """
    UTF-8 encoded text, zero-padded to 16 bytes
    :param text:
    :raises SeedError: if encoded text is longer than 16 bytes
    :return: 16-byte password
    """
    raw = text.encode('utf-8')
    if len(raw) > flags.PASSWORD_LENGTH:
        raise SeedError(f'Text key is {len(raw)} bytes long, maximum is '
                        f'{flags.PASSWORD_LENGTH} bytes')
    return raw.ljust(flags.PASSWORD_LENGTH, b'\x00')


def password_from_hex(text: str) -> bytes:
    """16-byte password from exactly 32 hex characters"""
    text = text.strip()
    if len(text) != 2 * flags.PASSWORD_LENGTH:
        raise SeedError(f'Hex key must be {2 * flags.PASSWORD_LENGTH} characters long, '
                        f'got {len(text)}')
    try:
        return binascii.unhexlify(text)
    except (binascii.Error, ValueError) as e:
        raise SeedError('Hex key contains non-hex characters') from e


def initial_grid(config: SeedConfig, m: int, n: int) -> Grid:
    """
    Build generation 0 grid. Start from X_0 = omega + epsilon, drop
    first `alpha` orbit values, then fill cells row by row: cell (i, j)
    (1-based) consumes X_(n(i-1)+j+alpha) and is alive if it is < 0.5
    :param config: seed configuration
    :param m: rows
    :param n: cols
    :return: seed grid
    """
    if m < 1 or n < 1:
        raise SeedError(f'Grid dimensions must be positive, got {m}x{n}')

    x0 = password_to_omega(config.password) + config.epsilon
    x0 = min(x0, 1.0 - config.epsilon)
    orbit = LogisticOrbit(x0, config.mu, config.epsilon)

    for _ in islice(orbit, config.alpha):
        pass

    values = np.fromiter(islice(orbit, m * n), dtype=np.float64, count=m * n)
    cells = (values < 0.5).astype(np.uint8).reshape(m, n)

    log.debug('Seed grid %dx%d built after %d transient iterations', m, n, config.alpha)
    return Grid(cells)
