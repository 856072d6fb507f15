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

import dataclasses
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Any
from typing import List
from typing import Optional
from typing import Union

import numpy as np

from fronthaullib.exceptions import GeometryException
from fronthaullib.exceptions import InfeasibleParameterException
from fronthaullib.exceptions import InvalidConfigurationException

logger = logging.getLogger(__name__)

# distances below this are clamped, the path loss model is unbounded there
MIN_DISTANCE = 1.0

SeedLike = Union[None, int, np.random.SeedSequence, np.random.Generator]


def dbm_to_watts(dbm: float) -> float:
    return 10 ** (dbm / 10) * 1e-3


@dataclass(frozen=True)
class ScenarioConfig:
    """
    Physical and protocol parameters of one cell-free network. Field names are used verbatim in experiment
    spec files.

    :param num_aps: number of access points L
    :param total_antennas: total antenna count M, split evenly across the APs
    :param num_users: number of single-antenna users K
    :param tx_power: uplink transmit power p in watts
    :param noise_power: receiver noise power sigma^2 in watts
    :param area_side: side length D of the square area in meters
    :param num_subcarriers: number of subcarriers N_sc
    :param bandwidth: bandwidth B in Hz
    :param prelog: fraction of the coherence block used for uplink data, in (0, 1]
    :param pilot_length: pilot length tau_p, or None for perfect CSI
    :param pilot_power: pilot transmit power in watts, defaults to tx_power
    :param rng_seed: seed used when no explicit seed is handed to the sampling functions
    """

    num_aps: int = 32
    total_antennas: int = 128
    num_users: int = 4
    tx_power: float = 0.01
    noise_power: float = dbm_to_watts(-85.0)
    area_side: float = 500.0
    num_subcarriers: int = 4096
    bandwidth: float = 100e6
    prelog: float = 1.0
    pilot_length: Optional[int] = None
    pilot_power: Optional[float] = None
    rng_seed: int = 0

    @property
    def antennas_per_ap(self) -> int:
        return self.total_antennas // self.num_aps

    @property
    def symbol_duration(self) -> Fraction:
        return Fraction(self.num_subcarriers) / Fraction(self.bandwidth)

    @property
    def perfect_csi(self) -> bool:
        return self.pilot_length is None

    def validate(self) -> 'ScenarioConfig':
        """
        Checks every field and raises on the first problem found

        :return: this config, so calls can be chained
        """
        for name in ('num_aps', 'total_antennas', 'num_users', 'num_subcarriers'):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, (int, np.integer)) or value < 1:
                raise InvalidConfigurationException(f'{name} must be a positive integer, got {value!r}')

        if self.total_antennas % self.num_aps != 0:
            raise InvalidConfigurationException(
                f'total_antennas ({self.total_antennas}) must be divisible by num_aps ({self.num_aps})'
            )

        for name in ('tx_power', 'noise_power', 'area_side', 'bandwidth'):
            value = getattr(self, name)
            if not np.isfinite(value) or value <= 0:
                raise InvalidConfigurationException(f'{name} must be positive and finite, got {value!r}')

        if not 0 < self.prelog <= 1:
            raise InvalidConfigurationException(f'prelog must be in (0, 1], got {self.prelog!r}')

        if self.pilot_length is not None:
            if self.pilot_length < 1:
                raise InvalidConfigurationException(f'pilot_length must be at least 1, got {self.pilot_length}')

            if self.pilot_length > self.num_users:
                raise InfeasibleParameterException(
                    f'pilot_length ({self.pilot_length}) exceeds num_users ({self.num_users})'
                )

        if self.pilot_power is not None and self.pilot_power <= 0:
            raise InvalidConfigurationException(f'pilot_power must be positive, got {self.pilot_power!r}')

        return self

    def with_overrides(self, **overrides: Any) -> 'ScenarioConfig':
        try:
            return dataclasses.replace(self, **overrides)

        except TypeError as te:
            raise InvalidConfigurationException(f'Unknown scenario field: {te}')

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


@dataclass
class Geometry:
    ap_positions: np.ndarray
    user_positions: np.ndarray
    distances: np.ndarray

    @property
    def num_aps(self) -> int:
        return self.ap_positions.shape[0]

    @property
    def num_users(self) -> int:
        return self.user_positions.shape[0]


@dataclass
class ChannelRealization:
    """
    Per-AP channel blocks H_l of shape N x K. Under imperfect CSI the blocks hold the channel estimates and
    estimation_error holds the error variances c_kl, already folded into effective_noise_per_ap.
    """

    blocks: List[np.ndarray]
    large_scale: np.ndarray
    effective_noise_per_ap: np.ndarray
    estimation_error: Optional[np.ndarray] = None

    @property
    def num_aps(self) -> int:
        return len(self.blocks)

    @property
    def num_users(self) -> int:
        return self.large_scale.shape[0]

    @property
    def antennas_per_ap(self) -> int:
        return self.blocks[0].shape[0]

    def stacked(self) -> np.ndarray:
        return np.vstack(self.blocks)


def _perimeter_point(offset: float, side: float) -> np.ndarray:
    edge = int(offset // side) % 4
    along = offset - edge * side

    if edge == 0:
        return np.array([along, 0.0])

    elif edge == 1:
        return np.array([side, along])

    elif edge == 2:
        return np.array([side - along, side])

    return np.array([0.0, side - along])


def ap_positions_on_perimeter(num_aps: int, side: float) -> np.ndarray:
    """
    Places APs at equal arc-length offsets along the perimeter of the square, starting at the origin and
    walking counter-clockwise, so that neighbours in the chain are geometric neighbours.
    """
    perimeter = 4 * side
    return np.array([_perimeter_point(i * perimeter / num_aps, side) for i in range(num_aps)])


def compute_distances(user_positions: np.ndarray, ap_positions: np.ndarray) -> np.ndarray:
    """
    K x L distance matrix with the minimum distance clamp applied
    """
    users = np.atleast_2d(np.asarray(user_positions, dtype=float))
    aps = np.atleast_2d(np.asarray(ap_positions, dtype=float))
    distances = np.linalg.norm(users[:, None, :] - aps[None, :, :], axis=2)
    return np.maximum(distances, MIN_DISTANCE)


def build_geometry(config: ScenarioConfig, seed: SeedLike = None) -> Geometry:
    """
    Builds the AP layout and draws user positions uniformly inside the square

    :param config: scenario parameters
    :param seed: seed for the user drop, defaults to config.rng_seed
    :return: Geometry
    """
    rng = np.random.default_rng(config.rng_seed if seed is None else seed)
    side = config.area_side

    ap_positions = ap_positions_on_perimeter(config.num_aps, side)
    user_positions = rng.uniform(0.0, side, size=(config.num_users, 2))

    return Geometry(ap_positions, user_positions, compute_distances(user_positions, ap_positions))


def path_loss_db(distance: Union[float, np.ndarray]) -> Union[float, np.ndarray]:
    """
    Urban microcell path loss, -30.5 - 36.7 log10(d / 1 m)

    :param distance: distance in meters, scalar or array
    :return: path loss in dB with the same shape as distance
    """
    d = np.asarray(distance, dtype=float)

    if np.any(~(d >= MIN_DISTANCE)):
        raise GeometryException(f'Distance below the {MIN_DISTANCE} m clamp: {np.min(d)}')

    loss = -30.5 - 36.7 * np.log10(d)

    if loss.ndim == 0:
        return float(loss)

    return loss


def large_scale_gains(geometry: Geometry) -> np.ndarray:
    return 10 ** (path_loss_db(geometry.distances) / 10)


def draw_channel(large_scale: np.ndarray, antennas_per_ap: int, noise_power: float,
                 seed: SeedLike = None) -> ChannelRealization:
    """
    Draws uncorrelated Rayleigh fading blocks for the given K x L large-scale gains

    :param large_scale: K x L linear power gains beta_kl
    :param antennas_per_ap: antennas N per AP
    :param noise_power: receiver noise power, stored as the effective noise of every AP
    :param seed: seed or generator
    :return: ChannelRealization
    """
    beta = np.atleast_2d(np.asarray(large_scale, dtype=float))
    if np.any(beta < 0):
        raise InvalidConfigurationException('Large-scale gains must be nonnegative')

    rng = np.random.default_rng(seed)
    num_users, num_aps = beta.shape

    blocks = list()
    for ap in range(num_aps):
        fading = (rng.standard_normal((antennas_per_ap, num_users))
                  + 1j * rng.standard_normal((antennas_per_ap, num_users))) / np.sqrt(2)
        blocks.append(fading * np.sqrt(beta[:, ap])[None, :])

    return ChannelRealization(blocks, beta.copy(), np.full(num_aps, float(noise_power)))


def sample_channel(geometry: Geometry, config: ScenarioConfig, seed: SeedLike = None) -> ChannelRealization:
    if geometry.num_aps != config.num_aps or geometry.num_users != config.num_users:
        raise InvalidConfigurationException('Geometry does not match the scenario config')

    return draw_channel(large_scale_gains(geometry), config.antennas_per_ap, config.noise_power,
                        config.rng_seed if seed is None else seed)


def estimate_channel(channel: ChannelRealization, config: ScenarioConfig, pilot_power: Optional[float] = None,
                     seed: SeedLike = None) -> ChannelRealization:
    """
    Replaces the channel by its MMSE estimate from contaminated pilots. User k sends pilot k mod tau_p; the
    estimation error variance inflates the effective noise of every AP by p * sum_k c_kl.

    :param channel: true channel realization
    :param config: scenario, pilot_length must be set
    :param pilot_power: pilot power in watts, defaults to config.pilot_power or the uplink power
    :param seed: seed for the pilot noise
    :return: ChannelRealization carrying the estimates
    """
    tau_p = config.pilot_length
    num_users = channel.num_users

    if tau_p is None:
        raise InvalidConfigurationException('Channel estimation requires a pilot_length')

    if tau_p > num_users:
        raise InfeasibleParameterException(f'pilot_length ({tau_p}) exceeds num_users ({num_users})')

    if pilot_power is None:
        pilot_power = config.pilot_power if config.pilot_power is not None else config.tx_power

    rng = np.random.default_rng(seed)
    noise_power = config.noise_power
    beta = channel.large_scale
    pilots = np.arange(num_users) % tau_p
    gain = pilot_power * tau_p

    # sum of beta over each user's pilot-sharing set
    shared = np.zeros_like(beta)
    for pilot in range(tau_p):
        members = pilots == pilot
        shared[members] = beta[members].sum(axis=0)

    denominator = gain * shared + noise_power
    error_variance = np.clip(beta - gain * beta ** 2 / denominator, 0.0, beta)

    blocks = list()
    for ap, h in enumerate(channel.blocks):
        antennas = h.shape[0]
        noise = np.sqrt(noise_power / 2) * (rng.standard_normal((antennas, tau_p))
                                            + 1j * rng.standard_normal((antennas, tau_p)))
        received = np.empty((antennas, tau_p), dtype=complex)
        for pilot in range(tau_p):
            received[:, pilot] = np.sqrt(gain) * h[:, pilots == pilot].sum(axis=1) + noise[:, pilot]

        weights = np.sqrt(gain) * beta[:, ap] / denominator[:, ap]
        blocks.append(received[:, pilots] * weights[None, :])

    effective_noise = noise_power + config.tx_power * error_variance.sum(axis=0)
    logger.debug(f'Estimated channel with tau_p={tau_p}, max noise inflation {np.max(effective_noise) / noise_power}')

    return ChannelRealization(blocks, beta.copy(), effective_noise, error_variance)
