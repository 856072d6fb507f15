# Copyright (c) 2024, fronthaullib contributors
#
# Permission to use, copy, modify, and/or distribute this software for any
# purpose with or without fee is hereby granted, provided that the above
# copyright notice and this permission notice appear in all copies.
#
# THE SOFTWARE IS PROVIDED "AS IS" AND THE AUTHOR DISCLAIMS ALL WARRANTIES
# WITH REGARD TO THIS SOFTWARE INCLUDING ALL IMPLIED WARRANTIES OF
# MERCHANTABILITY AND FITNESS. IN NO EVENT SHALL THE AUTHOR BE LIABLE FOR
# ANY SPECIAL, DIRECT, INDIRECT, OR CONSEQUENTIAL DAMAGES OR ANY DAMAGES
# WHATSOEVER RESULTING FROM LOSS OF USE, DATA OR PROFITS, WHETHER IN AN
# ACTION OF CONTRACT, NEGLIGENCE OR OTHER TORTIOUS ACTION, ARISING OUT OF
# OR IN CONNECTION WITH THE USE OR PERFORMANCE OF THIS SOFTWARE.

import argparse
import csv
import logging
import os
import sys
from pathlib import Path
from typing import List
from typing import Optional

from fronthaullib.checks import run_checks
from fronthaullib.compression.scalar import default_noise_grid
from fronthaullib.compression.scalar import scalar_curves
from fronthaullib.exceptions import FronthaulException
from fronthaullib.exceptions import InvalidConfigurationException
from fronthaullib.exceptions import ReportException
from fronthaullib.exceptions import SpecLoaderException
from fronthaullib.experiment import ExperimentSpec
from fronthaullib.experiment import desk_scale
from fronthaullib.experiment import run_experiment
from fronthaullib.report import FORMATS
from fronthaullib.report import emit_report
from fronthaullib.specLoader import SpecLoader
from fronthaullib.specLoader import figure_preset

logger = logging.getLogger(__name__)
logger.setLevel(logging.INFO)

if not len(logger.handlers):
    handler = logging.StreamHandler(sys.stdout)
    handler.setLevel(logging.DEBUG)
    logger.addHandler(handler)

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_SPEC_ERROR = 2
EXIT_INFEASIBLE = 3
EXIT_REPORT_ERROR = 4
EXIT_RUNTIME_ERROR = 5

OUTPUT_DIR_ENV = 'FRONTHAUL_OUTPUT_DIR'


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog='fronthaul',
                                     description='Cell-free massive MIMO with sequential fronthaul and limited AP memory')
    subparsers = parser.add_subparsers(dest='command', required=True)

    def add_run_options(sub):
        sub.add_argument('--set', dest='overrides', action='append', default=list(), metavar='KEY=VALUE',
                         help='override a spec field, repeatable')
        sub.add_argument('-o', '--output', help=f'output file, relative paths resolve against ${OUTPUT_DIR_ENV}')
        sub.add_argument('--format', choices=FORMATS, default='csv')
        sub.add_argument('--desk', action='store_true', help='scale the spec down to desktop size')
        sub.add_argument('--trials', type=int, help='number of Monte-Carlo trials')
        sub.add_argument('--seed', type=int, help='base seed')
        sub.add_argument('--jobs', type=int, default=1, help='worker processes')

    run = subparsers.add_parser('run', help='run an experiment spec file')
    run.add_argument('-c', '--config', required=True, help='experiment spec file')
    add_run_options(run)

    figure = subparsers.add_parser('figure', help='run a figure preset')
    figure.add_argument('name', help='preset name, e.g. Fig3, or Fig2 for the test-channel curves')
    figure.add_argument('-c', '--config', help='spec file echoed by the Custom preset')
    add_run_options(figure)

    check = subparsers.add_parser('check', help='run the numerical self-checks')
    check.add_argument('--seed', type=int, default=0)
    check.add_argument('--only', action='append', help='run only the named check, repeatable')

    return parser


def resolve_output(output: Optional[str], default_name: str) -> Path:
    """
    Relative outputs land in $FRONTHAUL_OUTPUT_DIR when it is set, the working directory otherwise
    """
    path = Path(output or default_name)
    if path.is_absolute():
        return path

    return Path(os.environ.get(OUTPUT_DIR_ENV, '.')) / path


def _overrides(args: argparse.Namespace) -> List[str]:
    overrides = list(args.overrides)
    if args.trials is not None:
        overrides.append(f'trials={args.trials}')

    if args.seed is not None:
        overrides.append(f'seed={args.seed}')

    return overrides


def _run_and_emit(spec: ExperimentSpec, args: argparse.Namespace) -> int:
    extension = 'csv' if args.format == 'csv' else 'dat'
    output = resolve_output(args.output, f'{spec.name}.{extension}')

    report = run_experiment(spec, jobs=max(1, args.jobs))
    emit_report(report, output, args.format)

    infeasible = sum(1 for row in report.rows if not row.feasible)
    logger.info(f'Wrote {len(report.rows)} rows to {output}' + (f' ({infeasible} infeasible)' if infeasible else ''))

    return EXIT_OK


def _command_run(args: argparse.Namespace) -> int:
    loader = SpecLoader()
    spec = loader.load_spec_from_path(args.config, _overrides(args))
    if args.desk:
        spec = desk_scale(spec).validate()

    return _run_and_emit(spec, args)


def _write_test_channels(args: argparse.Namespace) -> int:
    output = resolve_output(args.output, 'fig2.csv')
    try:
        with output.open('w', newline='', encoding='utf-8') as fh:
            writer = csv.writer(fh)
            writer.writerow(('q', 'additive_bits', 'optimal_bits'))
            for q, additive, optimal in scalar_curves(default_noise_grid()):
                writer.writerow((repr(q), repr(additive), repr(optimal)))

    except OSError as oe:
        raise ReportException(f'Could not write report to {output}: {oe}')

    logger.info(f'Wrote test-channel curves to {output}')
    return EXIT_OK


def _command_figure(args: argparse.Namespace) -> int:
    if args.name.strip().lower() == 'fig2':
        return _write_test_channels(args)

    custom = None
    if args.config:
        custom = SpecLoader().load_spec_from_path(args.config, _overrides(args))
        if args.desk:
            custom = desk_scale(custom).validate()

    spec = figure_preset(args.name, desk=args.desk, custom=custom, overrides=_overrides(args))

    return _run_and_emit(spec, args)


def _command_check(args: argparse.Namespace) -> int:
    results = run_checks(seed=args.seed, names=args.only)
    for result in results:
        status = 'PASS' if result.passed else 'FAIL'
        print(f'{result.name:40}{status:6}{result.seconds:8.1f}s  {result.detail}')

    return EXIT_OK if all(r.passed for r in results) else EXIT_CHECK_FAILED


COMMANDS = {
    'run': _command_run,
    'figure': _command_figure,
    'check': _command_check,
}


def main(argv: Optional[List[str]] = None) -> int:
    """
    Entry point of the fronthaul command

    :param argv: command line arguments, sys.argv by default
    :return: process exit status
    """
    args = build_parser().parse_args(argv)

    if os.environ.get('FRONTHAUL_DEBUG', False):
        logging.getLogger('fronthaullib').setLevel(logging.DEBUG)

    try:
        return COMMANDS[args.command](args)

    except SpecLoaderException as sle:
        logger.error(f'Spec error: {sle}')
        return EXIT_SPEC_ERROR

    except InvalidConfigurationException as ice:
        logger.error(f'Infeasible configuration: {ice}')
        return EXIT_INFEASIBLE

    except ReportException as re:
        logger.error(f'Report error: {re}')
        return EXIT_REPORT_ERROR

    except FronthaulException as fe:
        logger.error(f'{type(fe).__name__}: {fe}')
        return EXIT_RUNTIME_ERROR


if __name__ == '__main__':
    sys.exit(main())
