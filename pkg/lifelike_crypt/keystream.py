__all__ = [
    'KeystreamState',
    'serialize_generation',
    'pack_byte',
    'generation_bytes',
    'compose_block',
    'compose_blocks',
    'raw_stream',
    'next_bytes'
]

import logging
from typing import Iterator, Optional, Sequence

import numpy as np

from lifelike_crypt.exceptions import KeystreamError
from lifelike_crypt.grid import Grid, step
from lifelike_crypt.rules import Rule, format_rule
from lifelike_crypt.seeding import SeedConfig, initial_grid

log = logging.getLogger('lifelike-crypt')


def serialize_generation(grid: Grid) -> np.ndarray:
    """
    Bits of one generation in serialization order. The row index runs
    fastest: bit (i-1) + (j-1)*m holds cell (i, j), 1-based
    :param grid:
    :return: uint8 array of m*n bits
    """
    return grid.cells.ravel(order='F')


def pack_byte(bits: Sequence[int]) -> int:
    """Pack 8 bits least significant first: sum(2^(j-1) * bit_j)"""
    bits = np.asarray(bits, dtype=np.uint8)
    if bits.shape != (8, ):
        raise KeystreamError(f'Exactly 8 bits are required, got {bits.size}')
    return int(np.packbits(bits, bitorder='little')[0])


def generation_bytes(grid: Grid) -> np.ndarray:
    """Raw bytes of one generation, 8 bits per byte LSB first"""
    if grid.size % 8:
        raise KeystreamError(f'Grid {grid.rows}x{grid.cols} has {grid.size} cells, '
                             f'which is not a multiple of 8')
    return np.packbits(serialize_generation(grid), bitorder='little')


def compose_block(raw: Sequence[int]) -> int:
    """XOR of rho consecutive raw bytes"""
    raw = np.asarray(raw, dtype=np.uint8)
    if raw.size == 0:
        raise KeystreamError('Block must contain at least one byte')
    return int(np.bitwise_xor.reduce(raw))


def compose_blocks(raw: np.ndarray, rho: int) -> np.ndarray:
    """
    Compose consecutive disjoint runs of `rho` raw bytes into one byte
    each: Y_1 from B_1..B_rho, Y_2 from B_(rho+1)..B_2rho and so on
    :param raw: raw bytes, length is multiple of rho
    :param rho: block size
    :return: composed bytes
    """
    if rho < 1:
        raise KeystreamError(f'rho must be positive, got {rho}')
    raw = np.asarray(raw, dtype=np.uint8)
    if raw.size % rho:
        raise KeystreamError(f'{raw.size} raw bytes could not be split into blocks of {rho}')
    if raw.size == 0:
        return np.zeros(0, dtype=np.uint8)
    return np.bitwise_xor.reduce(raw.reshape(-1, rho), axis=1)


def raw_stream(grid: Grid, rule: Rule) -> Iterator[np.ndarray]:
    """Raw bytes of generations 1, 2, ... one chunk per generation.
    Generation 0 (the seed) is never emitted
    """
    while True:
        grid = step(grid, rule)
        yield generation_bytes(grid)


class KeystreamState:
    """Keystream generator cursor.

    Holds the current CA generation and the raw bytes of it which are
    not consumed yet. A state is single-owner, `next_bytes` advances it
    """
    def __init__(self, grid: Grid, rule: Rule, rho: int):
        """
        :param grid: seed grid (generation 0), m*n must be multiple of 8
        :param rule: CA rule without B0
        :param rho: raw bytes per keystream byte, positive
        """
        if rho < 1:
            raise KeystreamError(f'rho must be positive, got {rho}')
        if grid.size % 8:
            raise KeystreamError(f'Grid {grid.rows}x{grid.cols} has {grid.size} cells, '
                                 f'which is not a multiple of 8')
        if 0 in rule.birth:
            raise KeystreamError(f'Rule {format_rule(rule)} contains B0')

        self.grid = grid
        self.rule = rule
        self.rho = rho
        self.byte_buffer = np.zeros(0, dtype=np.uint8)
        #: Number of generations after which the CA came back to the
        #: seed grid, None until that happens
        self.cycle_length: Optional[int] = None
        self._seed = grid

    @classmethod
    def from_seed(cls, config: SeedConfig, rule: Rule, m: int, n: int, rho: int):
        """State started from the logistic map seed grid"""
        return cls(initial_grid(config, m, n), rule, rho)

    @property
    def bytes_per_generation(self) -> int:
        return self.grid.size // 8

    @property
    def bit_cursor(self) -> int:
        """Position within the current generation's bit sequence"""
        return (self.bytes_per_generation - self.byte_buffer.size) * 8 % self.grid.size

    def copy(self) -> 'KeystreamState':
        res = KeystreamState(self.grid, self.rule, self.rho)
        res.byte_buffer = self.byte_buffer.copy()
        res.cycle_length = self.cycle_length
        res._seed = self._seed
        return res

    def _check_cycle(self):
        if self.cycle_length is not None or not self.grid.cells_equal(self._seed):
            return
        # Raw stream repeats from here on, e.g. the linear B1357/S02468
        # rule on a 2^k x 2^k torus returns after 2^(k-1) generations
        self.cycle_length = self.grid.generation - self._seed.generation
        log.warning('CA came back to its seed grid after %d generations, keystream repeats '
                    'every %d raw bytes', self.cycle_length,
                    self.cycle_length * self.bytes_per_generation)

    def next_raw(self, count: int) -> np.ndarray:
        """Next `count` raw (not composed) bytes"""
        if count < 0:
            raise KeystreamError(f'Bytes count must be non-negative, got {count}')

        chunks = []
        needed = count
        generations = 0
        while needed > 0:
            if self.byte_buffer.size == 0:
                self.grid = step(self.grid, self.rule)
                self.byte_buffer = generation_bytes(self.grid)
                generations += 1
                self._check_cycle()
            chunk = self.byte_buffer[:needed]
            self.byte_buffer = self.byte_buffer[needed:]
            chunks.append(chunk)
            needed -= chunk.size

        if generations:
            log.debug('Keystream evolved %d generations, now at t=%d',
                      generations, self.grid.generation)
        return np.concatenate(chunks) if chunks else np.zeros(0, dtype=np.uint8)

    def next_bytes(self, count: int) -> bytes:
        """Next `count` keystream bytes, each composed of rho raw bytes"""
        if count < 0:
            raise KeystreamError(f'Bytes count must be non-negative, got {count}')
        return compose_blocks(self.next_raw(count * self.rho), self.rho).tobytes()

    def __repr__(self):
        return (f'<KeystreamState({format_rule(self.rule)}, {self.grid.rows}x{self.grid.cols}, '
                f'rho={self.rho}, t={self.grid.generation}, bit_cursor={self.bit_cursor})>')


def next_bytes(state: KeystreamState, count: int) -> bytes:
    """Draw `count` keystream bytes from the state, advancing it"""
    return state.next_bytes(count)
