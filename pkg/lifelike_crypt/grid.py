__all__ = [
    'Grid',
    'PopulationStats',
    'neighbor_counts',
    'step',
    'evolve',
    'iter_generations',
    'population',
    'xor_grids',
    'translate',
    'random_grid',
    'density_trace'
]

import logging
from typing import Iterator, List, NamedTuple, Optional

import numpy as np

from lifelike_crypt.exceptions import GridError
from lifelike_crypt.rules import MAX_NEIGHBORS, Rule, format_rule

log = logging.getLogger('lifelike-crypt')

# Offsets of the 8 Moore neighbors, center excluded
_MOORE_OFFSETS = tuple((dy, dx) for dy in (-1, 0, 1) for dx in (-1, 0, 1) if dy or dx)


class Grid:
    """Binary m x n cell lattice on a torus with a generation counter.

    Cells are kept in a read-only uint8 numpy array, so a Grid is
    immutable and may be shared freely
    """
    __slots__ = ('_cells', '_generation')

    def __init__(self, cells, generation: int = 0):
        """
        :param cells: 2D array-like of 0/1 values
        :param generation: generation number, non-negative
        """
        arr = np.array(cells, dtype=np.uint8)
        if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
            raise GridError(f'Grid must be a non-empty 2D array, got shape {arr.shape}')
        if np.any(arr > 1):
            raise GridError('Grid cells must be 0 or 1')
        if generation < 0:
            raise GridError(f'Generation must be non-negative, got {generation}')

        arr.setflags(write=False)
        self._cells = arr
        self._generation = int(generation)

    @classmethod
    def dead(cls, m: int, n: int) -> 'Grid':
        if m < 1 or n < 1:
            raise GridError(f'Grid dimensions must be positive, got {m}x{n}')
        return cls(np.zeros((m, n), dtype=np.uint8))

    @property
    def cells(self) -> np.ndarray:
        return self._cells

    @property
    def generation(self) -> int:
        return self._generation

    @property
    def rows(self) -> int:
        return self._cells.shape[0]

    @property
    def cols(self) -> int:
        return self._cells.shape[1]

    @property
    def shape(self):
        return self._cells.shape

    @property
    def size(self) -> int:
        return self._cells.size

    def with_generation(self, generation: int) -> 'Grid':
        return Grid(self._cells, generation)

    def flip(self, row: int, col: int) -> 'Grid':
        """Copy of the grid with one cell inverted"""
        if not (0 <= row < self.rows and 0 <= col < self.cols):
            raise GridError(f'Cell ({row}, {col}) is outside of {self.rows}x{self.cols} grid')
        cells = self._cells.copy()
        cells[row, col] ^= 1
        return Grid(cells, self._generation)

    def cells_equal(self, other: 'Grid') -> bool:
        return self.shape == other.shape and np.array_equal(self._cells, other._cells)

    @classmethod
    def from_text(cls, text: str) -> 'Grid':
        """
        Parse grid text: first line "m n t", then m lines of n
        characters '0'/'1'
        :param text:
        :raises GridError: if text is malformed
        :return:
        """
        lines = [line.strip() for line in text.strip().splitlines()]
        if not lines:
            raise GridError('Grid text is empty')
        try:
            m, n, t = (int(x) for x in lines[0].split())
        except ValueError as e:
            raise GridError(f'Malformed grid header {lines[0]!r}, expected "m n t"') from e

        rows = lines[1:]
        if len(rows) != m:
            raise GridError(f'Grid header declares {m} rows, got {len(rows)}')
        for i, row in enumerate(rows):
            if len(row) != n or set(row) - {'0', '1'}:
                raise GridError(f'Row {i} must have {n} characters of "0"/"1": {row!r}')

        cells = np.array([[int(c) for c in row] for row in rows], dtype=np.uint8).reshape(m, n)
        return cls(cells, t)

    def to_text(self) -> str:
        lines = [f'{self.rows} {self.cols} {self.generation}']
        lines.extend(''.join('1' if c else '0' for c in row) for row in self._cells)
        return '\n'.join(lines) + '\n'

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, Grid):
            return False
        return self._generation == other._generation and self.cells_equal(other)

    def __ne__(self, other):
        return not self.__eq__(other)

    def __hash__(self):
        return hash((self.shape, self._generation, self._cells.tobytes()))

    def __repr__(self):
        return f'<Grid({self.rows}x{self.cols}, t={self.generation}, alive={int(self._cells.sum())})>'


class PopulationStats(NamedTuple):
    alive_count: int
    density: float


def _rule_tables(rule: Rule, allow_b0: bool = False):
    if 0 in rule.birth and not allow_b0:
        raise GridError(f'Rule {format_rule(rule)} contains B0, which makes the dead '
                        f'background non-quiescent')
    birth = np.zeros(MAX_NEIGHBORS + 1, dtype=np.uint8)
    survival = np.zeros(MAX_NEIGHBORS + 1, dtype=np.uint8)
    birth[sorted(rule.birth)] = 1
    survival[sorted(rule.survival)] = 1
    return birth, survival


def neighbor_counts(cells: np.ndarray) -> np.ndarray:
    """Number of alive cells among the 8 toroidal Moore neighbors of
    every cell. On small tori the same cell may be counted several
    times, e.g. on 1x1 grid every neighbor is the cell itself
    """
    counts = np.zeros(cells.shape, dtype=np.uint8)
    for dy, dx in _MOORE_OFFSETS:
        counts += np.roll(cells, (dy, dx), axis=(0, 1))
    return counts


def _step_cells(cells: np.ndarray, birth: np.ndarray, survival: np.ndarray) -> np.ndarray:
    counts = neighbor_counts(cells)
    return np.where(cells == 1, survival[counts], birth[counts]).astype(np.uint8)


def step(grid: Grid, rule: Rule, allow_b0: bool = False) -> Grid:
    """
    Apply the rule once. A dead cell with k alive neighbors is born if
    k is in birth set, an alive cell survives if k is in survival set
    :param grid: current generation, left untouched
    :param rule: Life-Like rule
    :param allow_b0: accept B0 rules. Cipher code never does, analysis
     code may measure them on the finite torus
    :raises GridError: if rule contains B0 and it is not allowed
    :return: next generation
    """
    birth, survival = _rule_tables(rule, allow_b0)
    return Grid(_step_cells(grid.cells, birth, survival), grid.generation + 1)


def evolve(grid: Grid, rule: Rule, steps: int, allow_b0: bool = False) -> Grid:
    """Apply the rule `steps` times"""
    if steps < 0:
        raise GridError(f'Steps count must be non-negative, got {steps}')

    birth, survival = _rule_tables(rule, allow_b0)
    cells = grid.cells
    for _ in range(steps):
        cells = _step_cells(cells, birth, survival)

    return Grid(cells, grid.generation + steps)


def iter_generations(grid: Grid, rule: Rule, allow_b0: bool = False) -> Iterator[np.ndarray]:
    """Endless iterator over cell arrays of generations 1, 2, ...
    Arrays are fresh and may be kept by the caller
    """
    birth, survival = _rule_tables(rule, allow_b0)
    cells = grid.cells
    while True:
        cells = _step_cells(cells, birth, survival)
        yield cells


def population(grid: Grid) -> PopulationStats:
    alive = int(np.count_nonzero(grid.cells))
    return PopulationStats(alive_count=alive, density=alive / grid.size)


def xor_grids(a: Grid, b: Grid) -> Grid:
    """Cellwise XOR (damage vector); generation is taken from `a`"""
    if a.shape != b.shape:
        raise GridError(f'Grid dimensions differ: {a.rows}x{a.cols} and {b.rows}x{b.cols}')
    return Grid(np.bitwise_xor(a.cells, b.cells), a.generation)


def translate(grid: Grid, dy: int, dx: int) -> Grid:
    """Cyclic shift of the grid by dy rows and dx columns"""
    return Grid(np.roll(grid.cells, (dy, dx), axis=(0, 1)), grid.generation)


def random_grid(m: int, n: int, density: float,
                rng: Optional[np.random.Generator] = None) -> Grid:
    """
    Grid where every cell is alive independently with given
    probability
    :param m: rows
    :param n: cols
    :param density: probability of alive cell, in [0, 1]
    :param rng: numpy random generator. Fresh unseeded one by default
    :return: generation 0 grid
    """
    if not 0.0 <= density <= 1.0:
        raise GridError(f'Density must be in [0, 1], got {density}')
    if m < 1 or n < 1:
        raise GridError(f'Grid dimensions must be positive, got {m}x{n}')
    if rng is None:
        rng = np.random.default_rng()

    return Grid((rng.random((m, n)) < density).astype(np.uint8))


def density_trace(grid: Grid, rule: Rule, steps: int, allow_b0: bool = False) -> List[float]:
    """Alive density of generations 0..steps"""
    if steps < 0:
        raise GridError(f'Steps count must be non-negative, got {steps}')

    birth, survival = _rule_tables(rule, allow_b0)
    cells = grid.cells
    res = [np.count_nonzero(cells) / cells.size]
    for _ in range(steps):
        cells = _step_cells(cells, birth, survival)
        res.append(np.count_nonzero(cells) / cells.size)

    log.debug('Density trace of %s over %d steps: %.4f -> %.4f',
              format_rule(rule), steps, res[0], res[-1])
    return res
