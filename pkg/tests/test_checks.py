import numpy as np

from fronthaullib.checks import CHECKS
from fronthaullib.checks import check_budget
from fronthaullib.checks import check_hadamard
from fronthaullib.checks import check_pca_vc
from fronthaullib.checks import check_rls_batch_equivalence
from fronthaullib.checks import check_sylvester
from fronthaullib.checks import check_waterfill_optimality
from fronthaullib.checks import run_checks


def test_rls_batch_equivalence():
    passed, detail = check_rls_batch_equivalence(np.random.default_rng(1), instances=20)
    assert passed, detail


def test_waterfill_against_grid_oracle():
    passed, detail = check_waterfill_optimality(np.random.default_rng(2), spectra=5)
    assert passed, detail


def test_budget_is_met():
    passed, detail = check_budget(np.random.default_rng(3), instances=20)
    assert passed, detail


def test_matrix_identities():
    rng = np.random.default_rng(4)
    for check in (check_sylvester, check_hadamard):
        passed, detail = check(rng, instances=50)
        assert passed, detail


def test_pca_matches_vector_wise():
    passed, detail = check_pca_vc(np.random.default_rng(5), realizations=20)
    assert passed, detail


def test_run_checks_subset():
    results = run_checks(seed=7, names=['test_channel_ordering', 'resource_arithmetic'])

    assert [r.name for r in results] == ['test_channel_ordering', 'resource_arithmetic']
    assert all(r.passed for r in results)
    assert all(r.seconds >= 0.0 for r in results)


def test_unknown_check_fails_without_raising():
    results = run_checks(names=['no_such_check'])

    assert len(results) == 1
    assert not results[0].passed
    assert 'KeyError' in results[0].detail


def test_every_check_is_registered():
    assert len(CHECKS) == 8


if __name__ == '__main__':
    test_run_checks_subset()
