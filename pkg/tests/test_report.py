import csv
import math
from pathlib import Path

import oyaml
import pytest

from fronthaullib.exceptions import ReportException
from fronthaullib.experiment import SEReport
from fronthaullib.experiment import SERow
from fronthaullib.experiment import run_experiment
from fronthaullib.report import CSV_COLUMNS
from fronthaullib.report import emit_report
from fronthaullib.report import metadata_path
from fronthaullib.report import read_report_csv
from fronthaullib.report import render_plotdata
from fronthaullib.specLoader import SpecLoader
from fronthaullib.utils.testing_utils import setup_dir

setup_dir()


def make_row(**changes) -> SERow:
    row = SERow(
        sweep_param='num_aps',
        sweep_value=8,
        option='vc',
        memory_scheme='fap',
        capacity_bits=64 * 8192,
        topology='daisy_chain',
        num_users=4,
        total_antennas=128,
        mean_se=7.123456789012345,
        std_se=0.1 + 0.2,
        trials=500,
        seed=3,
    )
    for key, value in changes.items():
        setattr(row, key, value)

    return row


def test_empty_report_is_header_only(tmp_path: Path):
    path = emit_report(SEReport(), tmp_path / 'empty.csv')

    with path.open() as fh:
        assert list(csv.reader(fh)) == [list(CSV_COLUMNS)]

    assert not metadata_path(path).exists()


def test_csv_round_trip(tmp_path: Path):
    rows = [
        make_row(),
        make_row(option='none', memory_scheme='inf', capacity_bits=None, mean_se=1 / 3),
        make_row(sweep_value=3, topology='binary_tree', mean_se=math.nan, std_se=math.nan, feasible=False),
    ]
    path = emit_report(SEReport(rows, {'name': 'unit'}), tmp_path / 'rows.csv')
    parsed = read_report_csv(path)

    assert len(parsed) == 3
    assert parsed[0].mean_se == rows[0].mean_se
    assert parsed[0].std_se == rows[0].std_se
    assert parsed[0].capacity_bits == 64 * 8192
    assert parsed[1].capacity_bits is None
    assert parsed[1].mean_se == 1 / 3
    assert math.isnan(parsed[2].mean_se)
    assert not parsed[2].feasible
    assert parsed[2].sweep_value == 3


def test_metadata_side_car(tmp_path: Path):
    spec = SpecLoader().load_spec_from_path('../example_specs/small_chain', ['L=2', 'trials=1'])
    report = run_experiment(spec)
    path = emit_report(report, tmp_path / 'small.csv')

    with metadata_path(path).open() as fh:
        metadata = oyaml.safe_load(fh)

    assert metadata['name'] == 'small_chain'
    assert metadata['spec']['sweep']['values'] == [2]
    assert metadata['spec']['memory'] == ['inf', 'fap:256']

    # the echoed config reproduces the run
    loader = SpecLoader()
    echoed = loader.create_spec(loader.normalize_spec_dict(metadata['spec']))
    again = run_experiment(echoed)
    assert [r.mean_se for r in again.rows] == [r.mean_se for r in report.rows]


def test_plotdata_groups_curves(tmp_path: Path):
    spec = SpecLoader().load_spec_from_path('../example_specs/pilot_contamination')
    report = run_experiment(spec)

    text = render_plotdata(report)
    labels = [line for line in text.splitlines() if line.startswith('# curve:')]

    assert len(labels) == 4
    assert any('pilot_length=1' in label for label in labels)
    assert text.startswith('# pilot_contamination')

    path = emit_report(report, tmp_path / 'curves.dat', 'plotdata')
    assert path.read_text() == text


def test_report_errors(tmp_path: Path):
    with pytest.raises(ReportException):
        emit_report(SEReport(), tmp_path / 'rows.csv', 'xlsx')

    with pytest.raises(ReportException):
        emit_report(SEReport([make_row()]), tmp_path / 'missing' / 'rows.csv')

    with pytest.raises(ReportException):
        read_report_csv(tmp_path / 'nothing.csv')


if __name__ == '__main__':
    import tempfile

    with tempfile.TemporaryDirectory() as tmp:
        test_csv_round_trip(Path(tmp))
