"""Chaos measures of Life-Like rules and rule ranking.

* entropy -- binary entropy (base 2) of the alive density, averaged
  over generations 1..T
* Lyapunov exponent -- growth rate (natural log) of the damage caused
  by flipping a single cell, (1/T) * ln(damage at T)
* Hamming distance -- fraction of cells which change between
  consecutive generations, averaged over T transitions
* Max -- product of the three, used to rank rules

Damage which dies out gives minus infinity instead of an error, such
rules are ranked last.
"""
__all__ = [
    'NEG_INF',
    'Horizons',
    'LyapunovRegime',
    'ChaosReport',
    'binary_entropy',
    'state_entropy',
    'avg_entropy',
    'lyapunov_exponent',
    'avg_hamming',
    'max_score',
    'classify_lyapunov',
    'evaluate_rule',
    'rank_rules',
    'CSV_HEADER'
]

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from enum import Enum
from functools import partial
from itertools import islice
from typing import List, NamedTuple, Optional, Tuple

import numpy as np

from lifelike_crypt import flags
from lifelike_crypt.exceptions import AnalysisError
from lifelike_crypt.grid import Grid, evolve, iter_generations, random_grid, xor_grids
from lifelike_crypt.rules import Rule, RuleCatalog, format_rule

log = logging.getLogger('lifelike-crypt')

#: Sentinel of extinguished damage
NEG_INF = float('-inf')

CSV_HEADER = ('rule', 'name', 'entropy', 'lyapunov', 'hamming', 'max')


class Horizons(NamedTuple):
    """Iteration counts used per metric"""
    entropy: int = flags.DEFAULT_ENTROPY_HORIZON
    lyapunov: int = flags.DEFAULT_LYAPUNOV_HORIZON
    hamming: int = flags.DEFAULT_HAMMING_HORIZON


class LyapunovRegime(Enum):
    stable = 'stable'
    neutral = 'neutral'
    chaotic = 'chaotic'


def _fmt(value: float) -> str:
    return '-inf' if value == NEG_INF else repr(float(value))


class ChaosReport(NamedTuple):
    rule: Rule
    entropy: float
    lyapunov: float
    hamming: float
    max_score: float
    horizons: Horizons
    trials: int = 1

    @property
    def name(self) -> str:
        return self.rule.name or ''

    def to_csv_row(self) -> Tuple[str, ...]:
        """Row matching CSV_HEADER, minus infinity as "-inf" string"""
        return (format_rule(self.rule), self.name, _fmt(self.entropy), _fmt(self.lyapunov),
                _fmt(self.hamming), _fmt(self.max_score))


def _check_iterations(value: int, what: str):
    if value < 1:
        raise AnalysisError(f'{what} must be at least 1, got {value}')


def binary_entropy(p: float) -> float:
    """-(p*log2(p) + (1-p)*log2(1-p)), zero at p in {0, 1}"""
    res = 0.0
    for q in (p, 1.0 - p):
        if 0.0 < q < 1.0:
            res -= q * math.log2(q)
    return res


def _cells_entropy(cells: np.ndarray) -> float:
    return binary_entropy(np.count_nonzero(cells) / cells.size)


def state_entropy(grid: Grid) -> float:
    """Binary entropy of the grid alive density, in [0, 1]"""
    return _cells_entropy(grid.cells)


def avg_entropy(seed: Grid, rule: Rule, iterations: int) -> float:
    """Mean state entropy of generations 1..iterations"""
    _check_iterations(iterations, 'Entropy horizon')
    total = sum(_cells_entropy(c)
                for c in islice(iter_generations(seed, rule, allow_b0=True), iterations))
    return total / iterations


def lyapunov_exponent(seed: Grid,
                      rule: Rule,
                      horizon: int,
                      perturbed_cell: Optional[Tuple[int, int]] = None) -> float:
    """
    Damage spreading exponent. The seed and its copy with one flipped
    cell are evolved `horizon` steps, the exponent is
    (1/horizon) * ln(number of differing cells)
    :param seed: initial grid
    :param rule: CA rule
    :param horizon: number of steps T
    :param perturbed_cell: (row, col) of the flipped cell, grid
     center by default
    :return: exponent or NEG_INF if damage died out
    """
    _check_iterations(horizon, 'Lyapunov horizon')
    if perturbed_cell is None:
        perturbed_cell = (seed.rows // 2, seed.cols // 2)

    perturbed = seed.flip(*perturbed_cell)
    damage = xor_grids(evolve(seed, rule, horizon, allow_b0=True),
                       evolve(perturbed, rule, horizon, allow_b0=True))
    count = int(np.count_nonzero(damage.cells))
    if count == 0:
        return NEG_INF

    # Initial damage is exactly one cell
    return math.log(count) / horizon


def avg_hamming(seed: Grid, rule: Rule, iterations: int) -> float:
    """Mean fraction of cells changed between generations t and t+1,
    t = 0..iterations-1
    """
    _check_iterations(iterations, 'Hamming horizon')
    prev = seed.cells
    changed = 0
    for cells in islice(iter_generations(seed, rule, allow_b0=True), iterations):
        changed += int(np.count_nonzero(prev != cells))
        prev = cells
    return changed / (iterations * seed.size)


def max_score(lyapunov: float, entropy: float, hamming: float) -> float:
    """Combined measure lambda * H * D_H. Extinguished damage stays
    minus infinity regardless of other factors
    """
    if lyapunov == NEG_INF:
        return NEG_INF
    return lyapunov * entropy * hamming


def classify_lyapunov(value: float) -> LyapunovRegime:
    if value > 0:
        return LyapunovRegime.chaotic
    if value == 0:
        return LyapunovRegime.neutral
    return LyapunovRegime.stable


def _trajectory_means(seed: Grid, rule: Rule, horizons: Horizons) -> Tuple[float, float]:
    """Average entropy and Hamming distance in one pass over the
    trajectory, same values as avg_entropy and avg_hamming
    """
    steps = max(horizons.entropy, horizons.hamming)
    entropy_sum = 0.0
    changed = 0
    prev = seed.cells
    generations = islice(iter_generations(seed, rule, allow_b0=True), steps)
    for t, cells in enumerate(generations, start=1):
        if t <= horizons.entropy:
            entropy_sum += _cells_entropy(cells)
        if t <= horizons.hamming:
            changed += int(np.count_nonzero(prev != cells))
        prev = cells
    return entropy_sum / horizons.entropy, changed / (horizons.hamming * seed.size)


def evaluate_rule(rule: Rule,
                  m: int,
                  n: int,
                  horizons: Horizons = Horizons(),
                  trials: int = flags.DEFAULT_TRIALS,
                  trial_seed: int = flags.DEFAULT_TRIAL_SEED,
                  site: Optional[Tuple[int, int]] = None) -> ChaosReport:
    """
    Measure a rule on `trials` random seeds of 50% density. Trial
    seeds depend only on `trial_seed` and trial number, so all rules
    are measured on the same initial grids.

    Lyapunov exponent is averaged over trials where damage survived,
    it is NEG_INF only if damage died out in every trial
    :param rule:
    :param m: rows
    :param n: cols
    :param horizons: iteration counts per metric
    :param trials: number of random seeds
    :param trial_seed: seed of trial seeds generator
    :param site: perturbed cell for Lyapunov exponent, center by
     default
    :return: report averaged over trials
    """
    _check_iterations(trials, 'Trials count')
    for name, value in horizons._asdict().items():
        _check_iterations(value, f'{name.capitalize()} horizon')

    entropies, hammings, lyapunovs = [], [], []
    for seq in np.random.SeedSequence(trial_seed).spawn(trials):
        seed = random_grid(m, n, 0.5, np.random.default_rng(seq))
        entropy, hamming = _trajectory_means(seed, rule, horizons)
        entropies.append(entropy)
        hammings.append(hamming)
        lyapunovs.append(lyapunov_exponent(seed, rule, horizons.lyapunov, site))

    finite = [x for x in lyapunovs if x != NEG_INF]
    lyapunov = sum(finite) / len(finite) if finite else NEG_INF
    entropy = sum(entropies) / trials
    hamming = sum(hammings) / trials

    report = ChaosReport(rule=rule, entropy=entropy, lyapunov=lyapunov, hamming=hamming,
                         max_score=max_score(lyapunov, entropy, hamming),
                         horizons=horizons, trials=trials)
    log.debug('%s: H=%.6f lambda=%s D_H=%.6f Max=%s', rule, entropy, _fmt(lyapunov), hamming,
              _fmt(report.max_score))
    return report


def rank_rules(rule_catalog: RuleCatalog,
               m: int,
               n: int,
               horizons: Horizons = Horizons(),
               trials: int = flags.DEFAULT_TRIALS,
               trial_seed: int = flags.DEFAULT_TRIAL_SEED,
               site: Optional[Tuple[int, int]] = None,
               workers: int = 1) -> List[ChaosReport]:
    """
    Evaluate every catalog rule and order them by Max score,
    descending. Ties are ordered by rule notation so the result does
    not depend on catalog order
    :param rule_catalog: rules to rank
    :param m: rows
    :param n: cols
    :param horizons: iteration counts per metric
    :param trials: random seeds per rule
    :param trial_seed: seed of trial seeds generator
    :param site: perturbed cell for Lyapunov exponent
    :param workers: number of worker processes, 1 means no pool
    :return: reports, the most chaotic rule first
    """
    if workers < 1:
        raise AnalysisError(f'Workers count must be at least 1, got {workers}')

    rules = [entry.rule for entry in rule_catalog]
    evaluate = partial(evaluate_rule, m=m, n=n, horizons=horizons, trials=trials,
                       trial_seed=trial_seed, site=site)
    log.info('Ranking %d rules on %dx%d grid, %d trials each', len(rules), m, n, trials)

    if workers > 1 and len(rules) > 1:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            reports = list(executor.map(evaluate, rules))
    else:
        reports = [evaluate(rule) for rule in rules]

    return sorted(reports, key=lambda r: (-r.max_score, format_rule(r.rule)))
