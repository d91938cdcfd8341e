#!/usr/bin/env python3
import csv
import functools
import io
import logging
import sys
import traceback
from pathlib import Path
from typing import Iterable, List, Optional, Sequence

import click
import numpy as np

import lifelike_crypt.flags as flags
from lifelike_crypt.analysis.imaging import (
    encrypt_image,
    histogram,
    load_pgm,
    power_spectrum,
    save_pgm,
    spectrum_flatness,
    spectrum_to_image
)
from lifelike_crypt.analysis.metrics import CSV_HEADER, Horizons, rank_rules
from lifelike_crypt.analysis.randtests import (
    ENT_CSV_HEADER,
    SWEEP_CSV_HEADER,
    ent_battery,
    export_raw,
    render_report,
    report_to_csv,
    rho_sweep
)
from lifelike_crypt.cipher import CipherParams, CiphertextEnvelope, open_envelope, seal
from lifelike_crypt.exceptions import LifelikeCryptError
from lifelike_crypt.grid import density_trace, random_grid
from lifelike_crypt.rules import catalog, format_rule, resolve_rule
from lifelike_crypt.seeding import password_from_hex, password_from_text
from lifelike_crypt.utils import atomic_write, parse_size

log = logging.getLogger('lifelike-crypt')

_handler: Optional[logging.Handler] = None


def setup_logger(log_level: str):
    """Install the stderr handler. Repeated calls replace it, so the
    handler always writes to the current sys.stderr
    """
    global _handler
    if _handler is not None:
        log.removeHandler(_handler)

    fmt = logging.Formatter('[%(levelname)s] %(message)s')
    _handler = logging.StreamHandler(sys.stderr)
    _handler.setFormatter(fmt)
    log.addHandler(_handler)

    log.setLevel(log_level.upper())


def error_handler(func):
    """Function decorator which handles LifelikeCryptError and OSError
    exceptions. Depending on current log level either reraise those
    exception or print error to logger and exit with error code 2
    """
    @functools.wraps(func)
    def w(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except (LifelikeCryptError, OSError) as e:
            if log.level == logging.DEBUG:
                raise

            log.error('%s: %s (use `--log-level=debug` argument to get more info)',
                      e.__class__.__name__,
                      str(e))
            sys.exit(2)
    return w


def _apply(f, decorators):
    for decorator in reversed(decorators):
        f = decorator(f)
    return f


def _size_callback(ctx, param, value):
    try:
        return parse_size(value)
    except ValueError as e:
        raise click.BadParameter(str(e)) from e


def _site_callback(ctx, param, value):
    if value is None:
        return None
    try:
        row, col = (int(x) for x in value.split(','))
    except ValueError as e:
        raise click.BadParameter(f'Cell must look like ROW,COL, got {value!r}') from e
    return row, col


def cli_options(f):
    decorators = [
        click.option(
            '--log-level',
            type=click.Choice(['DEBUG', 'INFO', 'WARNING', 'ERROR'], case_sensitive=False),
            default='INFO',
            envvar="LIFELIKE_CRYPT_LOG_LEVEL",
            metavar='LOG_LEVEL',
            help="Logging verbosity level",
            show_default=True
        )
    ]
    return _apply(f, decorators)


def key_options(f):
    decorators = [
        click.option(
            '-k',
            '--key',
            envvar="LIFELIKE_CRYPT_KEY",
            metavar='TEXT',
            help="Text password, up to 16 bytes in UTF-8, zero-padded"
        ),
        click.option(
            '--key-hex',
            envvar="LIFELIKE_CRYPT_KEY_HEX",
            metavar='HEX',
            help="Password as exactly 32 hex characters"
        )
    ]
    return _apply(f, decorators)


def cipher_options(f):
    decorators = [
        click.option(
            '-r',
            '--rule',
            default=flags.DEFAULT_RULE,
            metavar='RULE',
            help="Ciphering rule, catalog name or B/S notation",
            show_default=True
        ),
        click.option(
            '-s',
            '--size',
            default='x'.join(str(x) for x in flags.DEFAULT_GRID_SIZE),
            callback=_size_callback,
            metavar='MxN',
            help="Grid size, rows x cols",
            show_default=True
        ),
        click.option(
            '--rho',
            type=click.IntRange(1, 255),
            default=flags.DEFAULT_RHO,
            help="Raw bytes XOR-composed into one keystream byte",
            show_default=True
        ),
        click.option(
            '--alpha',
            type=click.IntRange(0, 0xFFFFFFFF),
            default=flags.DEFAULT_ALPHA,
            help="Logistic map transient length",
            show_default=True
        ),
        click.option(
            '--mu',
            type=float,
            default=flags.DEFAULT_MU,
            help=f"Logistic map parameter, in [{flags.MU_MIN}, {flags.MU_MAX}]",
            show_default=True
        )
    ]
    return _apply(f, decorators)


def trial_options(f):
    decorators = [
        click.option(
            '--trial-seed',
            type=int,
            default=flags.DEFAULT_TRIAL_SEED,
            help="Seed of random trial grids",
            show_default=True
        )
    ]
    return _apply(f, decorators)


def _password(key: Optional[str], key_hex: Optional[str]) -> bytes:
    if (key is None) == (key_hex is None):
        raise click.UsageError('Exactly one of --key or --key-hex is required')
    if key is not None:
        return password_from_text(key)
    return password_from_hex(key_hex)


def _cipher_params(rule, size, rho, alpha, mu) -> CipherParams:
    m, n = size
    return CipherParams(rule=resolve_rule(rule), m=m, n=n, rho=rho, alpha=alpha, mu=mu)


def _csv_text(header: Sequence[str], rows: Iterable[Sequence[str]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator='\n')
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _emit(text: str, output: Optional[str]):
    """Print text or atomically write it to a file"""
    if output is None:
        click.echo(text, nl=False)
        return
    with atomic_write(output) as f:
        f.write(text.encode('utf-8'))


@click.group()
@cli_options
def cli(log_level):
    setup_logger(log_level)


@click.command(short_help='Encrypt a file into a ciphertext container')
@click.argument('input_file', type=click.Path(exists=True, dir_okay=False))
@click.argument('output_file', type=click.Path(dir_okay=False))
@key_options
@cipher_options
@error_handler
def encrypt(input_file, output_file, key, key_hex, rule, size, rho, alpha, mu):
    password = _password(key, key_hex)
    params = _cipher_params(rule, size, rho, alpha, mu)
    envelope = seal(Path(input_file).read_bytes(), password, params)
    with atomic_write(output_file) as f:
        f.write(envelope.to_bytes())
    log.info('Encrypted %d bytes with %s', envelope.plaintext_length, format_rule(params.rule))


@click.command(short_help='Decrypt a ciphertext container')
@click.argument('input_file', type=click.Path(exists=True, dir_okay=False))
@click.argument('output_file', type=click.Path(dir_okay=False))
@key_options
@error_handler
def decrypt(input_file, output_file, key, key_hex):
    password = _password(key, key_hex)
    envelope = CiphertextEnvelope.from_bytes(Path(input_file).read_bytes())
    plaintext = open_envelope(envelope, password)
    with atomic_write(output_file) as f:
        f.write(plaintext)
    log.info('Decrypted %d bytes', len(plaintext))


@click.command(short_help='Export raw keystream bytes for external test suites')
@click.argument('output_file', type=click.Path(dir_okay=False, allow_dash=True))
@click.option('-n', '--bytes', 'byte_count', type=click.IntRange(min=1), required=True,
              help="Number of keystream bytes")
@key_options
@cipher_options
@error_handler
def keystream(output_file, byte_count, key, key_hex, rule, size, rho, alpha, mu):
    """Write keystream bytes to OUTPUT_FILE, `-` means standard output"""
    password = _password(key, key_hex)
    state = _cipher_params(rule, size, rho, alpha, mu).keystream(password)
    if output_file == '-':
        export_raw(state, byte_count, click.get_binary_stream('stdout'))
        return
    with atomic_write(output_file) as f:
        export_raw(state, byte_count, f)


@click.command(short_help='Rank rules by chaos measures')
@click.option('-s', '--size', default='128x128', callback=_size_callback, metavar='MxN',
              help="Grid size, rows x cols", show_default=True)
@click.option('--rules', 'rule_names', multiple=True, metavar='NAME',
              help="Catalog rule to rank, may be repeated. All rules by default")
@click.option('--entropy-horizon', type=click.IntRange(min=1),
              default=flags.DEFAULT_ENTROPY_HORIZON, show_default=True)
@click.option('--lyapunov-horizon', type=click.IntRange(min=1),
              default=flags.DEFAULT_LYAPUNOV_HORIZON, show_default=True)
@click.option('--hamming-horizon', type=click.IntRange(min=1),
              default=flags.DEFAULT_HAMMING_HORIZON, show_default=True)
@click.option('--trials', type=click.IntRange(min=1), default=flags.DEFAULT_TRIALS,
              help="Random seeds per rule", show_default=True)
@click.option('--site', callback=_site_callback, metavar='ROW,COL',
              help="Perturbed cell for Lyapunov exponent, grid center by default")
@click.option('--workers', type=click.IntRange(min=1), default=1,
              help="Worker processes", show_default=True)
@click.option('-o', '--output', type=click.Path(dir_okay=False), help="CSV file instead of stdout")
@trial_options
@error_handler
def rank(size, rule_names, entropy_horizon, lyapunov_horizon, hamming_horizon, trials, site,
         workers, output, trial_seed):
    rule_catalog = catalog()
    if rule_names:
        rule_catalog = rule_catalog.subset(rule_names)
    horizons = Horizons(entropy=entropy_horizon, lyapunov=lyapunov_horizon,
                        hamming=hamming_horizon)
    reports = rank_rules(rule_catalog, *size, horizons=horizons, trials=trials,
                         trial_seed=trial_seed, site=site, workers=workers)
    _emit(_csv_text(CSV_HEADER, (r.to_csv_row() for r in reports)), output)


@click.command(short_help='Run ENT battery over a file or a generated keystream')
@click.argument('input_file', required=False, type=click.Path(exists=True, dir_okay=False))
@click.option('-n', '--bytes', 'byte_count', type=click.IntRange(min=1),
              default=flags.ENT_RECOMMENDED_BYTES, show_default=True,
              help="Keystream bytes to generate when no file is given")
@click.option('--csv', 'csv_file', type=click.Path(dir_okay=False),
              help="Write the report as CSV to this file")
@click.option('--sweep', is_flag=True, default=False,
              help="Test keystreams of random passwords with rho 1..10 and print mean and "
                   "standard deviation per rho as CSV")
@click.option('--samples', type=click.IntRange(min=1), default=flags.DEFAULT_SWEEP_SAMPLES,
              show_default=True, help="Random passwords per rho in --sweep")
@key_options
@cipher_options
@trial_options
@error_handler
def enttest(input_file, byte_count, csv_file, sweep, samples, key, key_hex, rule, size, rho,
            alpha, mu, trial_seed):
    if input_file is not None and sweep:
        raise click.UsageError('--sweep generates keystreams and does not take a file')

    if sweep:
        if key is not None or key_hex is not None:
            log.warning('--sweep draws random passwords, the given key is ignored')
        params = _cipher_params(rule, size, rho, alpha, mu)
        rows = rho_sweep(params.rule, params.m, params.n, byte_count=byte_count,
                         samples=samples, trial_seed=trial_seed, mu=params.mu,
                         alpha=params.alpha)
        text = _csv_text(SWEEP_CSV_HEADER, (r.to_csv_row() for r in rows))
        click.echo(text, nl=False)
        if csv_file is not None:
            _emit(text, csv_file)
        return

    if input_file is not None:
        data = Path(input_file).read_bytes()
    else:
        state = _cipher_params(rule, size, rho, alpha, mu).keystream(_password(key, key_hex))
        data = state.next_bytes(byte_count)

    report = ent_battery(data)
    click.echo(render_report(report), nl=False)
    if csv_file is not None:
        _emit(_csv_text(ENT_CSV_HEADER, [report_to_csv(report)]), csv_file)


@click.command(short_help='Histogram, power spectrum and cipherimage of a PGM image')
@click.argument('image_file', type=click.Path(exists=True, dir_okay=False))
@click.option('--histogram', 'histogram_file', type=click.Path(dir_okay=False),
              help="Write value,count CSV")
@click.option('--spectrum', 'spectrum_file', type=click.Path(dir_okay=False),
              help="Write log-scaled power spectrum as PGM")
@click.option('--flatness', is_flag=True, default=False, help="Print spectral flatness")
@click.option('--pad', is_flag=True, default=False,
              help="Zero-pad image to power of two dimensions before the transform")
@click.option('--encrypt-to', type=click.Path(dir_okay=False),
              help="Write cipherimage PGM, requires a key")
@key_options
@cipher_options
@error_handler
def analyze(image_file, histogram_file, spectrum_file, flatness, pad, encrypt_to, key, key_hex,
            rule, size, rho, alpha, mu):
    image = load_pgm(Path(image_file).read_bytes())

    # Nothing is written until every requested result is computed
    outputs = []
    if histogram_file is not None:
        counts = histogram(image)
        text = _csv_text(('value', 'count'), ((str(v), str(c)) for v, c in enumerate(counts)))
        outputs.append((histogram_file, text.encode('utf-8')))

    flatness_res = None
    if spectrum_file is not None or flatness:
        spectrum = power_spectrum(image, pad=pad)
        if spectrum_file is not None:
            outputs.append((spectrum_file, save_pgm(spectrum_to_image(spectrum))))
        if flatness:
            flatness_res = spectrum_flatness(spectrum)

    if encrypt_to is not None:
        params = _cipher_params(rule, size, rho, alpha, mu)
        cipherimage = encrypt_image(image, _password(key, key_hex), params)
        outputs.append((encrypt_to, save_pgm(cipherimage)))

    for path, data in outputs:
        with atomic_write(path) as f:
            f.write(data)

    if flatness_res is not None:
        if flatness_res.degenerate:
            log.warning('Spectrum has no energy outside DC, flatness is degenerate')
        click.echo(f'{flatness_res.value:.6f}')


@click.command(short_help='List catalog rules')
@error_handler
def catalog_command():
    for entry in catalog():
        click.echo(f'{entry.name}\t{format_rule(entry.rule)}')


@click.command(short_help='Print alive density over time for random seeds')
@click.option('-r', '--rule', default=flags.DEFAULT_RULE, metavar='RULE', show_default=True,
              help="Catalog name or B/S notation")
@click.option('-s', '--size', default='64x64', callback=_size_callback, metavar='MxN',
              show_default=True)
@click.option('-d', '--density', 'densities', type=click.FloatRange(0.0, 1.0), multiple=True,
              default=(0.1, 0.5, 0.9), show_default=True,
              help="Initial density, may be repeated")
@click.option('--steps', type=click.IntRange(min=0), default=1000, show_default=True)
@click.option('-o', '--output', type=click.Path(dir_okay=False), help="CSV file instead of stdout")
@trial_options
@error_handler
def trace(rule, size, densities, steps, output, trial_seed):
    rule_obj = resolve_rule(rule)
    traces: List[List[float]] = []
    for density, seq in zip(densities, np.random.SeedSequence(trial_seed).spawn(len(densities))):
        seed = random_grid(*size, density, np.random.default_rng(seq))
        traces.append(density_trace(seed, rule_obj, steps, allow_b0=True))

    rows = ((str(t), ) + tuple(f'{tr[t]:.6f}' for tr in traces) for t in range(steps + 1))
    _emit(_csv_text(('step', ) + tuple(str(d) for d in densities), rows), output)


cli.add_command(encrypt)
cli.add_command(decrypt)
cli.add_command(keystream)
cli.add_command(rank)
cli.add_command(enttest)
cli.add_command(analyze)
cli.add_command(catalog_command, name='catalog')
cli.add_command(trace)


def run(argv: Sequence[str]) -> int:
    """
    Run command line and return exit status: 0 on success, 1 on usage
    error, 2 on data or format error
    :param argv: arguments without program name
    :return:
    """
    try:
        res = cli.main(args=list(argv), prog_name='lifelike_crypt', standalone_mode=False)
    except click.ClickException as e:
        e.show()
        return 1
    except click.Abort:
        click.echo('Aborted!', err=True)
        return 1
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 1
    except (LifelikeCryptError, OSError):
        # Reraised by error_handler on debug level
        traceback.print_exc()
        return 2

    return res if isinstance(res, int) else 0


def main():
    sys.exit(run(sys.argv[1:]))


if __name__ == '__main__':
    main()
