import csv
from pathlib import Path

import pytest

from fronthaullib.cli import EXIT_CHECK_FAILED
from fronthaullib.cli import EXIT_INFEASIBLE
from fronthaullib.cli import EXIT_OK
from fronthaullib.cli import EXIT_REPORT_ERROR
from fronthaullib.cli import EXIT_RUNTIME_ERROR
from fronthaullib.cli import EXIT_SPEC_ERROR
from fronthaullib.cli import OUTPUT_DIR_ENV
from fronthaullib.cli import main
from fronthaullib.cli import resolve_output
from fronthaullib.exceptions import SolverException
from fronthaullib.report import CSV_COLUMNS
from fronthaullib.report import metadata_path
from fronthaullib.report import read_report_csv
from fronthaullib.utils.testing_utils import setup_dir

setup_dir()


def test_run_writes_csv(tmp_path: Path):
    output = tmp_path / 'small.csv'
    status = main(['run', '-c', '../example_specs/small_chain', '--set', 'L=2', '--trials', '2', '-o', str(output)])

    assert status == EXIT_OK
    rows = read_report_csv(output)
    assert len(rows) == 5
    assert {r.trials for r in rows} == {2}
    assert metadata_path(output).exists()


def test_run_exit_codes(tmp_path: Path):
    output = str(tmp_path / 'rows.csv')

    assert main(['run', '-c', '../example_specs/unknown_key', '-o', output]) == EXIT_SPEC_ERROR
    assert main(['run', '-c', '../example_specs/missing', '-o', output]) == EXIT_SPEC_ERROR
    assert main(['run', '-c', '../example_specs/bad_type', '-o', output]) == EXIT_SPEC_ERROR
    assert main(['run', '-c', '../example_specs/small_chain', '--set', 'L=3', '-o', output]) == EXIT_INFEASIBLE
    assert main(['run', '-c', '../example_specs/small_chain', '--set', 'L=2', '--trials', '1',
                 '-o', str(tmp_path / 'missing' / 'rows.csv')]) == EXIT_REPORT_ERROR


def test_library_errors_exit_nonzero(tmp_path: Path, monkeypatch):
    def failing_run(spec, jobs=1):
        raise SolverException('Multiplier search did not converge')

    monkeypatch.setattr('fronthaullib.cli.run_experiment', failing_run)

    status = main(['run', '-c', '../example_specs/small_chain', '-o', str(tmp_path / 'rows.csv')])
    assert status == EXIT_RUNTIME_ERROR
    assert not (tmp_path / 'rows.csv').exists()


def test_plotdata_format(tmp_path: Path):
    output = tmp_path / 'curves.dat'
    status = main(['run', '-c', '../example_specs/pilot_contamination', '--format', 'plotdata', '-o', str(output)])

    assert status == EXIT_OK
    assert '# curve:' in output.read_text()


def test_output_dir_from_environment(tmp_path: Path, monkeypatch):
    monkeypatch.setenv(OUTPUT_DIR_ENV, str(tmp_path))

    assert resolve_output(None, 'fig2.csv') == tmp_path / 'fig2.csv'
    assert resolve_output(str(tmp_path / 'x.csv'), 'fig2.csv') == tmp_path / 'x.csv'

    assert main(['figure', 'Fig2']) == EXIT_OK
    with (tmp_path / 'fig2.csv').open() as fh:
        records = list(csv.reader(fh))

    assert records[0] == ['q', 'additive_bits', 'optimal_bits']
    assert len(records) == 201
    for q, additive, optimal in records[1:]:
        assert float(additive) > float(optimal) >= 0.0


def test_default_output_name(tmp_path: Path, monkeypatch):
    monkeypatch.setenv(OUTPUT_DIR_ENV, str(tmp_path))

    assert main(['run', '-c', '../example_specs/pilot_contamination', '--seed', '3']) == EXIT_OK
    with (tmp_path / 'pilot_contamination.csv').open() as fh:
        header = next(csv.reader(fh))

    assert tuple(header) == CSV_COLUMNS


def test_unknown_preset(tmp_path: Path):
    assert main(['figure', 'Fig4', '-o', str(tmp_path / 'fig4.csv')]) == EXIT_SPEC_ERROR


def test_check_command(capsys):
    assert main(['check', '--only', 'resource_arithmetic', '--only', 'test_channel_ordering']) == EXIT_OK

    out = capsys.readouterr().out
    assert 'resource_arithmetic' in out
    assert 'FAIL' not in out

    assert main(['check', '--only', 'no_such_check']) == EXIT_CHECK_FAILED


def test_subcommand_is_required():
    with pytest.raises(SystemExit):
        main([])


if __name__ == '__main__':
    main(['check', '--only', 'resource_arithmetic'])
