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

"""
Numerical self-checks run by `fronthaul check`: every property compares the library against an independent
closed form, a brute-force oracle or a matrix identity on random instances.
"""

import logging
import math
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable
from typing import Dict
from typing import List
from typing import Optional
from typing import Tuple

import numpy as np
from scipy import optimize

from fronthaullib.compression import TestChannel
from fronthaullib.compression import mutual_info_scalar
from fronthaullib.compression import pca_transform
from fronthaullib.compression import solve_ec
from fronthaullib.compression import solve_pca_ec
from fronthaullib.compression import solve_vc
from fronthaullib.compression.base import achieved_bits
from fronthaullib.compression.waterfill import compression_objective
from fronthaullib.compression.waterfill import waterfill
from fronthaullib.estimation import SequentialEstimator
from fronthaullib.estimation import batch_ls_oracle
from fronthaullib.estimation import noise_precision
from fronthaullib.estimation import sum_se_exact
from fronthaullib.estimation import sum_se_upper
from fronthaullib.resources import KB
from fronthaullib.resources import MB
from fronthaullib.resources import bits_per_vector
from fronthaullib.resources import build_topology
from fronthaullib.resources import fronthaul_rate_bound
from fronthaullib.resources.memory import FixedPerApMemory
from fronthaullib.resources.memory import FixedTotalLinearMemory
from fronthaullib.utils.testing_utils import random_complex
from fronthaullib.utils.testing_utils import random_instance
from fronthaullib.utils.testing_utils import random_observations
from fronthaullib.utils.testing_utils import random_spectrum

logger = logging.getLogger(__name__)


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0


def _relative(a: np.ndarray, b: np.ndarray) -> float:
    scale = max(np.linalg.norm(a), np.linalg.norm(b), 1e-300)
    return float(np.linalg.norm(a - b) / scale)


def check_rls_batch_equivalence(rng: np.random.Generator, instances: int = 1000) -> Tuple[bool, str]:
    worst_estimate = worst_gamma = 0.0
    worst_monotone = 0.0

    for _ in range(instances):
        blocks, covariances, tx_power = random_instance(rng)
        precisions = [noise_precision(z) for z in covariances]
        observations = random_observations(rng, blocks, covariances, tx_power, samples=2)

        estimator = SequentialEstimator(blocks[0].shape[1], tx_power, num_samples=2)
        for h, precision, y in zip(blocks, precisions, observations):
            estimator.step(h, precision, y)

        estimates, gamma = batch_ls_oracle(blocks, precisions, np.vstack(observations), tx_power)

        worst_estimate = max(worst_estimate, _relative(estimator.state.estimates, estimates))
        worst_gamma = max(worst_gamma, _relative(estimator.state.gamma, gamma))

        history = estimator.gamma_history
        for before, after in zip(history, history[1:]):
            worst_monotone = min(worst_monotone, float(np.min(np.linalg.eigvalsh(before - after))))

    passed = worst_estimate < 1e-9 and worst_gamma < 1e-9 and worst_monotone > -1e-10
    return passed, (f'{instances} instances, worst relative error {max(worst_estimate, worst_gamma):.2e}, '
                    f'smallest information gain {worst_monotone:.2e}')


def _bit_objective(bits: np.ndarray, spectrum: np.ndarray, noise_floor: float) -> np.ndarray:
    """
    Objective as a function of the bit split, for grid oracles; bits has the modes on its last axis
    """
    lambdas = np.expm1(bits * math.log(2)) / spectrum
    return np.sum(bits - np.log2(lambdas * noise_floor + 1), axis=-1)


def _grid_oracle(spectrum: np.ndarray, noise_floor: float, budget: float) -> float:
    modes = spectrum.size
    step = {2: 1e-3, 3: 2e-2}.get(modes, 0.1)
    axis = np.arange(0.0, budget + step / 2, step)

    grids = np.meshgrid(*([axis] * (modes - 1)), indexing='ij')
    free = np.stack([g.ravel() for g in grids], axis=-1)
    last = budget - free.sum(axis=1)
    feasible = last >= 0
    splits = np.column_stack([free[feasible], last[feasible]])

    values = _bit_objective(splits, spectrum, noise_floor)
    best = splits[int(np.argmax(values))]
    best_value = float(np.max(values))

    refined = optimize.minimize(
        lambda b: -float(_bit_objective(np.asarray(b), spectrum, noise_floor)),
        best,
        method='SLSQP',
        bounds=[(0.0, budget)] * modes,
        constraints=[{'type': 'eq', 'fun': lambda b: float(np.sum(b)) - budget}],
    )
    if refined.success and abs(np.sum(refined.x) - budget) < 1e-9 and np.all(refined.x >= -1e-12):
        best_value = max(best_value, -float(refined.fun))

    return best_value


def check_waterfill_optimality(rng: np.random.Generator, spectra: int = 100) -> Tuple[bool, str]:
    worst_gap = -math.inf
    worst_budget = 0.0

    for _ in range(spectra):
        modes = int(rng.integers(2, 5))
        noise_floor = float(rng.uniform(0.5, 2.0))
        spectrum = random_spectrum(rng, modes, noise_floor)
        budget = float(rng.uniform(0.5, 8.0))

        result = waterfill(spectrum, noise_floor, budget)
        solver_value = compression_objective(result.lambdas, spectrum, noise_floor)
        oracle_value = _grid_oracle(spectrum, noise_floor, budget)

        worst_gap = max(worst_gap, oracle_value - solver_value)
        worst_budget = max(worst_budget, abs(result.achieved_bits - budget))

    passed = worst_gap < 1e-4 and worst_budget <= 1e-6
    return passed, f'{spectra} spectra, oracle beats solver by at most {worst_gap:.2e}, budget error {worst_budget:.2e}'


def check_budget(rng: np.random.Generator, instances: int = 200) -> Tuple[bool, str]:
    worst = 0.0
    for _ in range(instances):
        antennas = int(rng.integers(1, 9))
        users = int(rng.integers(1, 9))
        h = random_complex(rng, (antennas, users))
        budget = float(rng.uniform(0.0, 64.0))

        for solver in (solve_vc, solve_ec):
            solution = solver(h, 1.0, 0.1, budget)
            worst = max(worst, abs(achieved_bits(solution, h, 1.0, 0.1) - budget))

    return worst <= 1e-6, f'{instances} channels, worst budget error {worst:.2e} bits'


def check_sylvester(rng: np.random.Generator, instances: int = 1000) -> Tuple[bool, str]:
    worst = 0.0
    for _ in range(instances):
        rows = int(rng.integers(1, 9))
        cols = int(rng.integers(1, 9))
        g = random_complex(rng, (rows, cols))
        d = np.diag(rng.uniform(0.0, 2.0, size=rows))

        _, left = np.linalg.slogdet(np.eye(rows) + g @ g.conj().T @ d)
        _, right = np.linalg.slogdet(np.eye(cols) + g.conj().T @ d @ g)
        worst = max(worst, abs(left - right) / max(1.0, abs(right)))

    return worst < 1e-10, f'{instances} pairs, worst relative log-det difference {worst:.2e}'


def check_hadamard(rng: np.random.Generator, instances: int = 1000) -> Tuple[bool, str]:
    worst = math.inf
    for _ in range(instances):
        blocks, covariances, tx_power = random_instance(rng)
        precisions = [noise_precision(z) for z in covariances]

        exact = sum_se_exact(blocks, precisions, tx_power)
        upper = sum_se_upper(blocks, precisions, tx_power)
        worst = min(worst, (upper - exact) / max(1.0, exact))

    return worst > -1e-10, f'{instances} instances, smallest relative slack {worst:.2e}'


def check_pca_vc(rng: np.random.Generator, realizations: int = 500) -> Tuple[bool, str]:
    worst = 0.0
    for _ in range(realizations):
        num_aps = int(rng.integers(1, 5))
        antennas = int(rng.integers(1, 5))
        users = int(rng.integers(1, 7))
        tx_power, noise_power = 1.0, float(rng.uniform(0.05, 1.0))

        vc_blocks, vc_precisions, pca_blocks, pca_precisions = list(), list(), list(), list()
        for ap in range(num_aps):
            h = random_complex(rng, (antennas, users))
            budget = 0.0 if ap == 0 else float(rng.uniform(0.0, 30.0))

            vc = solve_vc(h, tx_power, noise_power, budget, ap)
            pca = solve_pca_ec(pca_transform(h, tx_power, noise_power), noise_power, budget, ap)

            nonzero = vc.noise_inverse_eigenvalues[vc.noise_inverse_eigenvalues > 0]
            mapped = pca.noise_inverse_eigenvalues[pca.noise_inverse_eigenvalues > 0]
            if nonzero.size != mapped.size or _relative(np.sort(nonzero), np.sort(mapped)) > 1e-10:
                return False, f'allocations differ: {nonzero} against {mapped}'

            vc_blocks.append(h)
            vc_precisions.append(vc.noise_precision())
            pca_blocks.append(pca.effective_channel(h))
            pca_precisions.append(pca.noise_precision())

        vc_se = sum_se_exact(vc_blocks, vc_precisions, tx_power)
        pca_se = sum_se_exact(pca_blocks, pca_precisions, tx_power)
        worst = max(worst, abs(vc_se - pca_se) / max(abs(vc_se), 1e-12))

    return worst < 1e-9, f'{realizations} realizations, worst relative SE difference {worst:.2e}'


def check_test_channels(rng: np.random.Generator) -> Tuple[bool, str]:
    grid = np.logspace(-4, 2, 500)
    ordered = all(mutual_info_scalar(q, TestChannel.ADDITIVE) > mutual_info_scalar(q, TestChannel.OPTIMAL)
                  for q in grid)
    anchors = (math.isclose(mutual_info_scalar(1.0), 1.0)
               and mutual_info_scalar(1.0, TestChannel.OPTIMAL) == 0.0
               and math.isclose(mutual_info_scalar(1 / 3), 2.0))

    return ordered and anchors, 'additive above optimal on 500 points, anchors at Q=1 and Q=1/3'


def check_resource_arithmetic(rng: np.random.Generator) -> Tuple[bool, str]:
    chain = build_topology('daisy_chain', 32)
    fap = bits_per_vector(FixedPerApMemory(256 * KB), chain, 4096)[31]
    linear = bits_per_vector(FixedTotalLinearMemory(8 * MB), chain, 4096)[1]
    rate = fronthaul_rate_bound(4, 4096, 16, [8], Fraction(4096, 10 ** 8))

    passed = (fap == Fraction(512, 31)
              and linear == Fraction(2 * 8 * MB, 32 * 31 * 4096)
              and rate.alpha == 25
              and rate.rate == 10 ** 10)

    return passed, f'FAP {float(fap):.3f} bits, FT-LA {float(linear):.3f} bits, rate {float(rate.rate):.3e} bit/s'


CHECKS: Dict[str, Callable[[np.random.Generator], Tuple[bool, str]]] = {
    'rls_batch_equivalence': check_rls_batch_equivalence,
    'waterfill_optimality': check_waterfill_optimality,
    'waterfill_budget': check_budget,
    'sylvester_identity': check_sylvester,
    'hadamard_bound': check_hadamard,
    'pca_vc_equivalence': check_pca_vc,
    'test_channel_ordering': check_test_channels,
    'resource_arithmetic': check_resource_arithmetic,
}


def run_checks(seed: int = 0, names: Optional[List[str]] = None) -> List[CheckResult]:
    """
    Runs the named checks (all of them by default), each from its own seeded stream

    :param seed: base seed
    :param names: subset of CHECKS to run
    :return: list of CheckResult
    """
    results = list()
    selected = names or list(CHECKS)

    for index, name in enumerate(selected):
        rng = np.random.default_rng([seed, index])
        start = time.perf_counter()

        try:
            passed, detail = CHECKS[name](rng)

        except Exception as ex:
            logger.debug(f'{name} raised', exc_info=True)
            passed, detail = False, f'{type(ex).__name__}: {ex}'

        results.append(CheckResult(name, bool(passed), detail, time.perf_counter() - start))

    return results
