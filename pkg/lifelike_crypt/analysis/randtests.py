"""ENT-like statistical battery over byte streams and raw keystream
export for external test suites (DIEHARD, dieharder)
"""
__all__ = [
    'EntReport',
    'PValueVerdict',
    'ENT_MIN_BYTES',
    'ENT_CSV_HEADER',
    'ent_battery',
    'export_raw',
    'SweepRow',
    'SWEEP_METRICS',
    'SWEEP_CSV_HEADER',
    'sweep_passwords',
    'rho_sweep',
    'pvalue_verdict',
    'pass_rate',
    'render_report',
    'report_to_csv'
]

import logging
import math
from enum import Enum
from pathlib import Path
from typing import BinaryIO, Iterable, List, NamedTuple, Tuple

import numpy as np
from jinja2 import Environment
from scipy.stats import chi2

from lifelike_crypt import flags
from lifelike_crypt.exceptions import AnalysisError, KeystreamError
from lifelike_crypt.keystream import KeystreamState
from lifelike_crypt.rules import Rule
from lifelike_crypt.seeding import SeedConfig
from lifelike_crypt.sink_tracer import SinkTracer

log = logging.getLogger('lifelike-crypt')

#: One Monte Carlo point takes 6 bytes
ENT_MIN_BYTES = 6

ENT_CSV_HEADER = ('bytes', 'entropy', 'chi_square', 'chi_square_pvalue', 'mean',
                  'monte_carlo_pi', 'pi_error_percent', 'serial_correlation', 'scc_degenerate')

_MONTE_CARLO_GROUP = 6
# Coordinates are 24-bit, point is inside if x^2 + y^2 < (2^24)^2
_MONTE_CARLO_RADIUS2 = (1 << 24) ** 2

# Bytes drawn from keystream per write during export
_EXPORT_CHUNK = 64 * 1024


class EntReport(NamedTuple):
    entropy_bits_per_byte: float
    chi_square: float
    chi_square_pvalue: float
    arithmetic_mean: float
    monte_carlo_pi: float
    pi_error_percent: float
    serial_correlation: float
    byte_count: int
    #: Serial correlation is undefined for zero-variance streams, it is
    #: reported as 1.0 with this flag set
    scc_degenerate: bool = False


class PValueVerdict(Enum):
    PASS = 'pass'
    FAIL = 'fail'


def _entropy(counts: np.ndarray, total: int) -> float:
    q = counts[counts > 0] / total
    return float(-np.sum(q * np.log2(q)))


def _chi_square(counts: np.ndarray, total: int) -> Tuple[float, float]:
    expected = total / 256
    value = float(np.sum((counts - expected) ** 2) / expected)
    return value, float(chi2.sf(value, 255))


def _monte_carlo_pi(data: np.ndarray) -> float:
    points = data.size // _MONTE_CARLO_GROUP
    groups = data[:points * _MONTE_CARLO_GROUP].reshape(points, _MONTE_CARLO_GROUP).astype(np.int64)
    x = (groups[:, 0] << 16) | (groups[:, 1] << 8) | groups[:, 2]
    y = (groups[:, 3] << 16) | (groups[:, 4] << 8) | groups[:, 5]
    inside = int(np.count_nonzero(x * x + y * y < _MONTE_CARLO_RADIUS2))
    return 4.0 * inside / points


def _serial_correlation(data: np.ndarray) -> Tuple[float, bool]:
    a = data[:-1].astype(np.float64)
    b = data[1:].astype(np.float64)
    if a.std() == 0.0 or b.std() == 0.0:
        return 1.0, True
    value = float(np.corrcoef(a, b)[0, 1])
    return min(max(value, -1.0), 1.0), False


def ent_battery(stream: bytes) -> EntReport:
    """
    Run the five ENT tests over a byte stream:

    * entropy of byte value frequencies, bits per byte
    * chi-square of byte counts against uniform distribution, p-value
      from chi-square distribution with 255 degrees of freedom
    * arithmetic mean of bytes
    * Monte Carlo Pi: consecutive non-overlapping 6-byte groups give
      24-bit big-endian coordinates (x, y), point is inside if
      x^2 + y^2 < 2^48; trailing bytes which do not fill a group are
      ignored
    * serial correlation of every byte with the next one, without
      wrapping the last byte to the first
    :param stream: bytes or uint8 array
    :raises AnalysisError: if stream is shorter than 6 bytes
    :return:
    """
    data = np.frombuffer(bytes(stream), dtype=np.uint8)
    total = data.size
    if total < ENT_MIN_BYTES:
        raise AnalysisError(f'ENT battery needs at least {ENT_MIN_BYTES} bytes, got {total}')
    if total < flags.ENT_RECOMMENDED_BYTES:
        log.warning('ENT battery runs on %d bytes, at least %d bytes are recommended',
                    total, flags.ENT_RECOMMENDED_BYTES)

    counts = np.bincount(data, minlength=256)
    chi_square, pvalue = _chi_square(counts, total)
    pi = _monte_carlo_pi(data)
    scc, degenerate = _serial_correlation(data)
    if degenerate:
        log.warning('Serial correlation is undefined for a zero-variance stream, reported as 1.0')

    return EntReport(
        entropy_bits_per_byte=_entropy(counts, total),
        chi_square=chi_square,
        chi_square_pvalue=pvalue,
        arithmetic_mean=float(np.sum(data, dtype=np.int64)) / total,
        monte_carlo_pi=pi,
        pi_error_percent=abs(pi - math.pi) / math.pi * 100.0,
        serial_correlation=scc,
        byte_count=total,
        scc_degenerate=degenerate
    )


def export_raw(state: KeystreamState, byte_count: int, sink: BinaryIO):
    """
    Write exactly `byte_count` keystream bytes to a binary sink without
    any framing. The state is advanced, so the bytes are the same as
    `state.next_bytes(byte_count)` would return
    :param state: keystream state
    :param byte_count: number of bytes, positive
    :param sink: writable binary file-like object
    :raises KeystreamError: if byte_count is not positive or sink
     write fails
    """
    if byte_count < 1:
        raise KeystreamError(f'Export bytes count must be positive, got {byte_count}')

    tracer = SinkTracer(sink, name=getattr(sink, 'name', 'sink'))
    left = byte_count
    while left:
        chunk = min(left, _EXPORT_CHUNK)
        tracer.write(state.next_bytes(chunk))
        left -= chunk
    tracer.flush()

    if tracer.written != byte_count:
        raise KeystreamError(f'Exported {tracer.written} bytes instead of {byte_count}')
    log.info('Exported %d keystream bytes', byte_count)


#: Report fields averaged over samples by the rho sweep
SWEEP_METRICS = ('entropy_bits_per_byte', 'chi_square', 'chi_square_pvalue', 'arithmetic_mean',
                 'monte_carlo_pi', 'pi_error_percent', 'serial_correlation')

SWEEP_CSV_HEADER = ('rho', 'samples', 'bytes') + tuple(
    f'{field}_{stat}' for field in ENT_CSV_HEADER[1:-1] for stat in ('mean', 'std')
)


class SweepRow(NamedTuple):
    """ENT results of one block size averaged over random passwords.
    `mean` and `std` are indexed like SWEEP_METRICS
    """
    rho: int
    samples: int
    byte_count: int
    mean: Tuple[float, ...]
    std: Tuple[float, ...]

    def metric(self, name: str) -> Tuple[float, float]:
        """(mean, std) of one report field"""
        idx = SWEEP_METRICS.index(name)
        return self.mean[idx], self.std[idx]

    def to_csv_row(self) -> Tuple[str, ...]:
        """Row matching SWEEP_CSV_HEADER"""
        pairs = (repr(v) for pair in zip(self.mean, self.std) for v in pair)
        return (str(self.rho), str(self.samples), str(self.byte_count)) + tuple(pairs)


def sweep_passwords(samples: int, trial_seed: int = flags.DEFAULT_TRIAL_SEED) -> List[bytes]:
    """Random passwords, one per independent child of the trial seed"""
    if samples < 1:
        raise AnalysisError(f'Samples count must be positive, got {samples}')
    return [
        np.random.default_rng(seq).integers(0, 256, flags.PASSWORD_LENGTH, dtype=np.uint8).tobytes()
        for seq in np.random.SeedSequence(trial_seed).spawn(samples)
    ]


def rho_sweep(rule: Rule,
              m: int,
              n: int,
              rhos: Iterable[int] = range(1, 11),
              byte_count: int = flags.ENT_RECOMMENDED_BYTES,
              samples: int = flags.DEFAULT_SWEEP_SAMPLES,
              trial_seed: int = flags.DEFAULT_TRIAL_SEED,
              mu: float = flags.DEFAULT_MU,
              alpha: int = flags.DEFAULT_ALPHA) -> List[SweepRow]:
    """
    ENT battery over keystreams built with different block sizes. Every
    block size is tested on the same `samples` random passwords, the
    report fields are summarized by mean and population standard
    deviation
    :param rule: CA rule
    :param m: rows
    :param n: cols
    :param rhos: block sizes to try
    :param byte_count: stream length per keystream
    :param samples: random passwords per block size
    :param trial_seed: seed of the passwords generator
    :param mu: logistic map parameter
    :param alpha: logistic map transient length
    :return: one row per block size in `rhos` order
    """
    configs = [SeedConfig(password=p, mu=mu, alpha=alpha)
               for p in sweep_passwords(samples, trial_seed)]
    res = []
    for rho in rhos:
        log.debug('ENT sweep: rho=%d, %d samples of %d bytes', rho, samples, byte_count)
        values = np.array([
            [getattr(report, name) for name in SWEEP_METRICS]
            for report in (ent_battery(KeystreamState.from_seed(c, rule, m, n, rho)
                                       .next_bytes(byte_count)) for c in configs)
        ])
        res.append(SweepRow(
            rho=rho,
            samples=samples,
            byte_count=byte_count,
            mean=tuple(float(x) for x in values.mean(axis=0)),
            std=tuple(float(x) for x in values.std(axis=0))
        ))
    return res


def pvalue_verdict(p: float) -> PValueVerdict:
    """p-values of exactly 0 or 1 (and out of range ones) mean the test
    failed, as DIEHARD reports read
    """
    if math.isnan(p) or not 0.0 < p < 1.0:
        return PValueVerdict.FAIL
    return PValueVerdict.PASS


def pass_rate(pvalues: Iterable[float]) -> float:
    """Fraction of passing p-values"""
    verdicts = [pvalue_verdict(p) for p in pvalues]
    if not verdicts:
        raise AnalysisError('No p-values given')
    return sum(v is PValueVerdict.PASS for v in verdicts) / len(verdicts)


def render_report(report: EntReport) -> str:
    """Human-readable aligned text of the report"""
    env = Environment(keep_trailing_newline=True)
    tpl_path = Path(__file__).parent.parent / 'report_template.tpl'
    tpl = env.from_string(tpl_path.read_text())
    return tpl.render({'report': report, 'pi': math.pi})


def report_to_csv(report: EntReport) -> Tuple[str, ...]:
    """Row matching ENT_CSV_HEADER"""
    return (
        str(report.byte_count),
        repr(report.entropy_bits_per_byte),
        repr(report.chi_square),
        repr(report.chi_square_pvalue),
        repr(report.arithmetic_mean),
        repr(report.monte_carlo_pi),
        repr(report.pi_error_percent),
        repr(report.serial_correlation),
        '1' if report.scc_degenerate else '0'
    )
