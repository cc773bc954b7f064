# !/usr/bin/env python3
# -*- coding: utf-8 -*-
#
# Copyright 2016-2099 Ailemon.net
#
# This file is part of SINVAR Shape Invariant Spectrum Tool.
#
# SINVAR is free software: you can redistribute it and/or modify
# it under the terms of the GNU General Public License as published by
# the Free Software Foundation, either version 3 of the License, or
# (at your option) any later version.
# SINVAR is distributed in the hope that it will be useful,
# but WITHOUT ANY WARRANTY; without even the implied warranty of
# MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
# GNU General Public License for more details.
#
# You should have received a copy of the GNU General Public License
# along with SINVAR.  If not, see <https://www.gnu.org/licenses/>.
# ============================================================================

# Lanczos approximation with g = 7 and nine coefficients, the same table used by
# the cephes-derived implementations.

"""
SINVAR特殊函数基础库模块，Gamma函数与倒数Gamma函数的实现
"""

import numpy as np

from utils.errors import PoleError

LANCZOS_G = 7.0
LANCZOS_COEFFICIENTS = np.array([
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
])
SQRT_TWO_PI = np.sqrt(2.0 * np.pi)


def is_nonpositive_integer(x):
    """True where x is 0, -1, -2, ..."""
    x = np.asarray(x, dtype=np.float64)
    return (x <= 0.0) & (x == np.floor(x))


def _lanczos_gamma(x):
    """Gamma for x >= 0.5 (array input)."""
    shifted = x - 1.0
    series = np.full(shifted.shape, LANCZOS_COEFFICIENTS[0])
    for index in range(1, LANCZOS_COEFFICIENTS.shape[0]):
        series = series + LANCZOS_COEFFICIENTS[index] / (shifted + index)
    base = shifted + LANCZOS_G + 0.5
    # split the power to keep t^(x+1/2) finite up to x ~ 170
    half_power = base ** ((shifted + 0.5) / 2.0)
    return SQRT_TWO_PI * half_power * (half_power * np.exp(-base)) * series


def _sin_pi(x):
    """sin(pi*x) with exact argument reduction modulo 2."""
    reduced = x - 2.0 * np.floor(x / 2.0)
    return np.sin(np.pi * reduced)


def gamma(x):
    """Compute the Gamma function.

    :param x: real scalar or array, not a non-positive integer.
    :returns: Gamma(x), same shape as the input.
    :raises PoleError: if any element is 0, -1, -2, ...
    """
    scalar_input = np.ndim(x) == 0
    x = np.atleast_1d(np.asarray(x, dtype=np.float64))
    if np.any(is_nonpositive_integer(x)):
        raise PoleError('Gamma has a pole at x = %r' % (x[is_nonpositive_integer(x)][0],))

    result = np.empty_like(x)
    upper = x >= 0.5
    result[upper] = _lanczos_gamma(x[upper])
    lower = ~upper
    if np.any(lower):
        # reflection Gamma(x) Gamma(1-x) = pi / sin(pi x)
        result[lower] = np.pi / (_sin_pi(x[lower]) * _lanczos_gamma(1.0 - x[lower]))
    return result[0] if scalar_input else result


def reciprocal_gamma(x):
    """Compute 1/Gamma(x), an entire function.

    Returns exactly 0 at x = 0, -1, -2, ... and never raises.

    :param x: real scalar or array.
    :returns: 1/Gamma(x), same shape as the input.
    """
    scalar_input = np.ndim(x) == 0
    x = np.atleast_1d(np.asarray(x, dtype=np.float64))
    result = np.zeros_like(x)
    upper = x >= 0.5
    result[upper] = 1.0 / _lanczos_gamma(x[upper])
    lower = (~upper) & (~is_nonpositive_integer(x))
    if np.any(lower):
        result[lower] = _sin_pi(x[lower]) * _lanczos_gamma(1.0 - x[lower]) / np.pi
    return result[0] if scalar_input else result
