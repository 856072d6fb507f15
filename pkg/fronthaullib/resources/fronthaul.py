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

from fractions import Fraction
from numbers import Real
from typing import NamedTuple
from typing import Sequence

from fronthaullib.exceptions import ValidationException


class FronthaulRate(NamedTuple):
    alpha: Fraction
    rate: Fraction
    upper_bound: Fraction

    @property
    def bound_applies(self) -> bool:
        return self.upper_bound >= self.rate


def _exact(value: Real, name: str) -> Fraction:
    try:
        exact = Fraction(value)

    except (TypeError, ValueError, OverflowError):
        raise ValidationException(f'{name} must be a finite number, got {value!r}')

    if exact < 0:
        raise ValidationException(f'{name} must be nonnegative, got {value!r}')

    return exact


def fronthaul_rate_bound(num_users: int, num_subcarriers: int, combining_width: Real,
                         element_widths: Sequence[Real], symbol_duration: Real) -> FronthaulRate:
    """
    Rate of the link leaving an AP. The AP forwards K * N_sc combined symbols per OFDM symbol, each alpha bits
    wide, where alpha is the width of a sum of N products of rho-bit weights and gamma_i-bit elements.

    :param num_users: users K
    :param num_subcarriers: subcarriers N_sc
    :param combining_width: width rho of the combining weights in bits
    :param element_widths: widths gamma_i of the compressed elements in bits
    :param symbol_duration: OFDM symbol duration T_s in seconds
    :return: FronthaulRate(alpha, rate, upper_bound), exact when the inputs are
    """
    if not element_widths:
        raise ValidationException('At least one element width is needed')

    rho = _exact(combining_width, 'combining_width')
    gammas = [_exact(g, 'element width') for g in element_widths]
    duration = _exact(symbol_duration, 'symbol_duration')

    if duration == 0:
        raise ValidationException('symbol_duration must be positive')

    symbols = num_users * num_subcarriers
    alpha = max(rho + g for g in gammas) + 1

    return FronthaulRate(alpha, symbols * alpha / duration, symbols * (rho + sum(gammas)) / duration)
