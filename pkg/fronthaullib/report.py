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

import csv
import logging
import math
from collections import OrderedDict
from pathlib import Path
from typing import List
from typing import Union

import yaml
from jinja2 import Environment
from jinja2 import FileSystemLoader
from jinja2 import TemplateError

from fronthaullib.exceptions import ReportException
from fronthaullib.experiment import SEReport
from fronthaullib.experiment import SERow

logger = logging.getLogger(__name__)

CSV_COLUMNS = ('sweep_param', 'sweep_value', 'option', 'memory_scheme', 'capacity_bits', 'topology', 'K', 'M',
               'mean_se', 'std_se', 'trials', 'seed')

FORMATS = ('csv', 'plotdata')

ASSETS_DIR = Path(__file__).parent / 'assets'


class ReportYamlDumper(yaml.SafeDumper):
    # the metadata echo reuses lists, never write anchors for them
    def ignore_aliases(self, data):
        return True


ReportYamlDumper.add_representer(OrderedDict, lambda dumper, data: dumper.represent_dict(data.items()))


def _format_float(value: float) -> str:
    # repr round-trips every double
    return repr(float(value))


def _csv_record(row: SERow) -> List[str]:
    return [
        row.sweep_param,
        str(row.sweep_value),
        row.option,
        row.memory_scheme,
        'inf' if row.capacity_bits is None else str(row.capacity_bits),
        row.topology,
        str(row.num_users),
        str(row.total_antennas),
        _format_float(row.mean_se),
        _format_float(row.std_se),
        str(row.trials),
        str(row.seed),
    ]


def _parse_sweep_value(text: str):
    for cast in (int, float):
        try:
            return cast(text)

        except ValueError:
            continue

    return text


def read_report_csv(path: Union[str, Path]) -> List[SERow]:
    """
    Parses a CSV written by emit_report back into rows

    :param path: CSV file
    :return: list of SERow
    """
    path = Path(path)
    try:
        with path.open('r', newline='', encoding='utf-8') as fh:
            reader = csv.DictReader(fh)
            if tuple(reader.fieldnames or ()) != CSV_COLUMNS:
                raise ReportException(f'{path}: unexpected columns {reader.fieldnames}')

            rows = list()
            for record in reader:
                mean_se = float(record['mean_se'])
                rows.append(SERow(
                    sweep_param=record['sweep_param'],
                    sweep_value=_parse_sweep_value(record['sweep_value']),
                    option=record['option'],
                    memory_scheme=record['memory_scheme'],
                    capacity_bits=None if record['capacity_bits'] == 'inf' else int(record['capacity_bits']),
                    topology=record['topology'],
                    num_users=int(record['K']),
                    total_antennas=int(record['M']),
                    mean_se=mean_se,
                    std_se=float(record['std_se']),
                    trials=int(record['trials']),
                    seed=int(record['seed']),
                    feasible=not math.isnan(mean_se),
                ))

            return rows

    except OSError as oe:
        raise ReportException(f'Could not read report {path}: {oe}')


def _curve_label(rows: List[SERow]) -> str:
    first = rows[0]
    parts = [f'K={first.num_users}', f'M={first.total_antennas}']
    parts.extend(f'{k}={v}' for k, v in first.variant.items() if k not in ('num_users', 'total_antennas'))
    parts.extend([first.memory_label, first.topology, first.option])

    return ' '.join(parts)


def render_plotdata(report: SEReport) -> str:
    environment = Environment(loader=FileSystemLoader(str(ASSETS_DIR)), trim_blocks=True, lstrip_blocks=True,
                              keep_trailing_newline=True)
    environment.filters['fmt'] = _format_float

    curves = [{'label': _curve_label(rows), 'rows': rows} for rows in report.curves().values()]
    sweep_param = report.rows[0].sweep_param if report.rows else report.metadata.get('spec', {}).get('sweep', {}).get(
        'param', '')

    try:
        template = environment.get_template('plotdata.j2')
        return template.render(name=report.metadata.get('name', 'report'), version=report.metadata.get('version', ''),
                               sweep_param=sweep_param, curves=curves)

    except TemplateError as te:
        raise ReportException(f'Could not render plot data: {te}')


def metadata_path(path: Union[str, Path]) -> Path:
    path = Path(path)
    return path.with_name(f'{path.name}.meta.yaml')


def emit_report(report: SEReport, path: Union[str, Path], fmt: str = 'csv') -> Path:
    """
    Writes the report as CSV or as plot data, plus a YAML side-car holding the metadata

    :param report: report to write
    :param path: output file
    :param fmt: 'csv' or 'plotdata'
    :return: path written
    """
    if fmt not in FORMATS:
        raise ReportException(f'Unknown report format {fmt!r}, expected one of {FORMATS}')

    path = Path(path)

    try:
        if fmt == 'csv':
            with path.open('w', newline='', encoding='utf-8') as fh:
                writer = csv.writer(fh)
                writer.writerow(CSV_COLUMNS)
                for row in report.rows:
                    writer.writerow(_csv_record(row))

        else:
            path.write_text(render_plotdata(report), encoding='utf-8')

        if report.metadata:
            with metadata_path(path).open('w', encoding='utf-8') as fh:
                yaml.dump(report.metadata, fh, Dumper=ReportYamlDumper, default_flow_style=False, sort_keys=False)

    except OSError as oe:
        raise ReportException(f'Could not write report to {path}: {oe}')

    logger.debug(f'Wrote {len(report.rows)} rows to {path}')

    return path
