import os
import pathlib
from typing import List
from typing import Tuple

import numpy as np


def setup_dir():
    current_path = pathlib.Path('.').resolve().name
    if current_path != 'tests' and pathlib.Path('./tests').is_dir():
        os.chdir('./tests')


def random_complex(rng: np.random.Generator, shape) -> np.ndarray:
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)


def random_covariance(rng: np.random.Generator, size: int, floor: float = 0.1) -> np.ndarray:
    """
    Hermitian positive definite matrix with eigenvalues at least floor
    """
    a = random_complex(rng, (size, size))
    return a @ a.conj().T / size + floor * np.eye(size)


def random_instance(rng: np.random.Generator, max_aps: int = 8, max_antennas: int = 4,
                    max_users: int = 6) -> Tuple[List[np.ndarray], List[np.ndarray], float]:
    """
    Random per-AP channels and finite noise covariances of a small network

    :return: tuple of (channel blocks, noise covariances, tx power)
    """
    num_aps = int(rng.integers(1, max_aps + 1))
    antennas = int(rng.integers(1, max_antennas + 1))
    users = int(rng.integers(1, max_users + 1))
    tx_power = float(rng.uniform(0.5, 2.0))

    blocks = [random_complex(rng, (antennas, users)) for _ in range(num_aps)]
    covariances = [random_covariance(rng, antennas, float(rng.uniform(0.1, 1.0))) for _ in range(num_aps)]

    return blocks, covariances, tx_power


def random_observations(rng: np.random.Generator, blocks: List[np.ndarray], covariances: List[np.ndarray],
                        tx_power: float, samples: int = 1) -> List[np.ndarray]:
    """
    Received vectors y_l = H_l s + z_l with s ~ CN(0, p I) and z_l ~ CN(0, Z_l)
    """
    users = blocks[0].shape[1]
    signal = np.sqrt(tx_power) * random_complex(rng, (users, samples))

    observations = list()
    for h, z in zip(blocks, covariances):
        noise = np.linalg.cholesky(z) @ random_complex(rng, (z.shape[0], samples))
        observations.append(h @ signal + noise)

    return observations


def random_spectrum(rng: np.random.Generator, modes: int, noise_floor: float = 1.0) -> np.ndarray:
    """
    Signal eigenvalues above the noise floor, spread over a few orders of magnitude
    """
    return noise_floor * (1 + 10 ** rng.uniform(-1, 2, size=modes))
