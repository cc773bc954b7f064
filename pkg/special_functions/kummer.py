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

"""
SINVAR合流超几何函数 F(a,c;z)（Kummer M 函数）的实现

Evaluation ceiling: the Taylor series is summed for |z| <= z_threshold (default 250,
see sinvar_config.json). Negative arguments are mapped to positive ones by Kummer's
transformation F(a,c;z) = e^z F(c-a,c;-z). Above the threshold the leading asymptotic
term is returned and a warning is logged.

For a < 0 the series alternates and can lose most of its digits. Every element carries
its condition number sum|term_k| / |sum term_k|; elements above specfun.cancellation_limit
are recomputed either by integrating Kummer's equation along the real axis (many arguments
sharing one (a, c), as on a wavefunction grid) or with mpmath at extended precision.
"""

import threading
from dataclasses import dataclass
from enum import Enum

import mpmath
import numpy as np
from mpmath.libmp import NoConvergence
from scipy.integrate import solve_ivp

from special_functions.base import gamma, reciprocal_gamma, is_nonpositive_integer
from utils.config import get_config_value
from utils.errors import PoleError, ConvergenceError, DomainError
from utils.logger import get_logger

logger = get_logger('specfun')

# Kummer 方程在 z=0 处奇异，积分从这里开始
ODE_START_Z = 0.05

# mpmath 的精度设置是全局的
_MPMATH_LOCK = threading.Lock()


class RegimeKind(Enum):
    TAYLOR_SERIES = 'TaylorSeries'
    ASYMPTOTIC_LARGE_Z = 'AsymptoticLargeZ'


@dataclass(frozen=True)
class KummerArgs:
    """
    F(a,c;z) 的参数三元组，a、c、z 可以是标量或可广播的numpy数组

    参数：\\
        a: 上参数 \\
        c: 下参数，不能是0或负整数 \\
        z: 自变量，必须有限
    """
    a: object
    c: object
    z: object

    def __post_init__(self):
        if np.any(is_nonpositive_integer(self.c)):
            raise PoleError('Kummer function has a pole at c = %r' % (self.c,))
        if not np.all(np.isfinite(self.z)):
            raise DomainError('Kummer argument z must be finite, got %r' % (self.z,))


@dataclass(frozen=True)
class EvalRegime:
    """
    求值方式：泰勒级数或大z渐近式
    """
    kind: RegimeKind
    term_count: int
    z_threshold: float

    def __post_init__(self):
        if self.z_threshold <= 0.0 or self.term_count < 1:
            raise DomainError('invalid regime: z_threshold=%r, term_count=%r' % (self.z_threshold, self.term_count))


def default_regime(z=0.0) -> EvalRegime:
    """
    按配置选择求值方式：|z| 不超过 z_threshold 时使用级数
    """
    max_terms = int(get_config_value('specfun', 'max_terms'))
    z_threshold = float(get_config_value('specfun', 'z_threshold'))
    if np.max(np.abs(z)) <= z_threshold:
        return EvalRegime(RegimeKind.TAYLOR_SERIES, max_terms, z_threshold)
    return EvalRegime(RegimeKind.ASYMPTOTIC_LARGE_Z, 1, z_threshold)


def _taylor_series(a, c, z, max_terms: int, tol: float) -> tuple:
    """
    Sum F(a,c;z) = sum_k (a)_k/(c)_k z^k/k! with compensated (Kahan) accumulation.

    An element stops once two consecutive terms fall below tol times the sum of
    absolute terms and the index has passed -a (the alternating part for a < 0).
    Elements are frozen independently, so the result does not depend on what else
    is in the array.

    Returns (sum, sum of absolute terms).
    """
    a, c, z = np.broadcast_arrays(np.asarray(a, dtype=np.float64),
                                  np.asarray(c, dtype=np.float64),
                                  np.asarray(z, dtype=np.float64))
    shape = a.shape
    a, c, z = a.ravel(), c.ravel(), z.ravel()
    term = np.ones_like(z)
    total = np.ones_like(z)
    compensation = np.zeros_like(z)
    abs_total = np.ones_like(z)
    previous_small = np.zeros(z.shape, dtype=bool)
    active = np.ones(z.shape, dtype=bool)
    min_index = np.where(a < 0.0, np.ceil(-a), 0.0)

    for k in range(max_terms):
        term = np.where(active, term * (a + k) * z / ((c + k) * (k + 1.0)), 0.0)
        corrected = term - compensation
        new_total = total + corrected
        compensation = np.where(active, (new_total - total) - corrected, compensation)
        total = np.where(active, new_total, total)
        abs_total = abs_total + np.abs(term)

        small = np.abs(term) <= tol * abs_total
        converged = small & previous_small & (k + 1 >= min_index)
        active = active & ~converged
        previous_small = small
        if not np.any(active):
            return total.reshape(shape), abs_total.reshape(shape)

    raise ConvergenceError('Taylor series for F(a,c;z) did not converge in %d terms' % max_terms)


def series_condition(total, abs_total) -> np.ndarray:
    """
    级数的条件数 sum|term_k| / |sum term_k|，和为0时为无穷大
    """
    total = np.abs(np.asarray(total, dtype=np.float64))
    abs_total = np.asarray(abs_total, dtype=np.float64)
    with np.errstate(divide='ignore'):
        return np.where(total > 0.0, abs_total / np.where(total > 0.0, total, 1.0), np.inf)


def _integrate_kummer_ode(a: float, c: float, z, rtol: float) -> np.ndarray:
    """
    Integrate z w'' + (c - z) w' - a w = 0 from ODE_START_Z outwards, w = F(a,c;z).

    F is the solution regular at the origin and, for z > 0, the dominant one at large z,
    so forward integration is stable. Start values come from the series, which is well
    conditioned that close to the origin.
    """
    targets, inverse = np.unique(np.asarray(z, dtype=np.float64), return_inverse=True)
    start = min(ODE_START_Z, 0.5 * float(targets[0]))
    max_terms = int(get_config_value('specfun', 'max_terms'))
    tol = float(get_config_value('specfun', 'series_tol'))
    value, _ = _taylor_series(a, c, start, max_terms, tol)
    shifted, _ = _taylor_series(a + 1.0, c + 1.0, start, max_terms, tol)
    initial = [float(value), a / c * float(shifted)]

    def rhs(x, w):
        return [w[1], ((x - c) * w[1] + a * w[0]) / x]

    solution = solve_ivp(rhs, (start, float(targets[-1])), initial, method='DOP853',
                         t_eval=targets, rtol=rtol, atol=1e-3 * rtol)
    if not solution.success:
        raise ConvergenceError('integrating the Kummer equation for a=%r, c=%r failed: %s'
                               % (a, c, solution.message))
    return solution.y[0][inverse]


def _mpmath_kummer(a: float, c: float, z: float, dps: int) -> float:
    try:
        with _MPMATH_LOCK, mpmath.workdps(dps):
            value = mpmath.hyp1f1(mpmath.mpf(a), mpmath.mpf(c), mpmath.mpf(z))
            return float(mpmath.re(value))
    except (NoConvergence, ArithmeticError, ValueError) as error:
        raise ConvergenceError('extended precision F(%r,%r;%r) failed: %s' % (a, c, z, error))


def _recompute_ill_conditioned(a, c, z, condition) -> np.ndarray:
    """
    重新计算条件数超过上限的元素（a、c、z、condition 为一维数组）

    同一对 (a, c) 的元素不少于 specfun.ode_min_points 个时积分 Kummer 方程，
    其余元素逐个用 mpmath 求值。specfun.extended_dps 为0时不做补救，抛出 ConvergenceError。
    """
    extended_dps = int(get_config_value('specfun', 'extended_dps'))
    if extended_dps <= 0:
        worst = int(np.argmax(condition))
        raise ConvergenceError('Taylor series for F(%r,%r;%r) lost all accuracy (condition %.3g)'
                               % (a[worst], c[worst], z[worst], condition[worst]))
    ode_min_points = int(get_config_value('specfun', 'ode_min_points'))
    ode_rtol = float(get_config_value('specfun', 'ode_rtol'))

    result = np.empty_like(z)
    pairs, group = np.unique(np.stack([a, c], axis=1), axis=0, return_inverse=True)
    group = np.asarray(group).reshape(-1)
    for index, (pair_a, pair_c) in enumerate(pairs):
        members = np.flatnonzero(group == index)
        if members.shape[0] >= ode_min_points:
            result[members] = _integrate_kummer_ode(float(pair_a), float(pair_c), z[members], ode_rtol)
            continue
        for member in members:
            lost_digits = int(np.ceil(np.log10(min(condition[member], 1e300))))
            result[member] = _mpmath_kummer(float(pair_a), float(pair_c), float(z[member]),
                                            extended_dps + max(lost_digits, 0))
    return result


def kummer_asymptotic(args: KummerArgs):
    """
    大正z时的首项渐近式 F(a,c;z) ~ z^(a-c) e^z Gamma(c)/Gamma(a)

    a为0或负整数时前因子为零，返回0。只用于渐近匹配诊断，不用于谱方程计算。
    """
    a = np.asarray(args.a, dtype=np.float64)
    c = np.asarray(args.c, dtype=np.float64)
    z = np.asarray(args.z, dtype=np.float64)
    result = z ** (a - c) * np.exp(z) * gamma(c) * reciprocal_gamma(a)
    return result[()] if np.ndim(result) == 0 else result


def kummer_m(args: KummerArgs, regime: EvalRegime = None):
    """
    合流超几何函数 F(a,c;z)

    参数：\\
        args: KummerArgs参数 \\
        regime: 求值方式，为None时按配置自动选择

    返回：\\
        F(a,c;z)，标量输入返回标量
    """
    if regime is None:
        regime = default_regime(args.z)
    tol = float(get_config_value('specfun', 'series_tol'))
    cancellation_limit = float(get_config_value('specfun', 'cancellation_limit'))

    a = np.asarray(args.a, dtype=np.float64)
    c = np.asarray(args.c, dtype=np.float64)
    z = np.asarray(args.z, dtype=np.float64)

    if regime.kind == RegimeKind.ASYMPTOTIC_LARGE_Z:
        logger.warning('z = %s above the series threshold, using the leading asymptotic term', np.max(z))
        return kummer_asymptotic(args)

    a, c, z = np.broadcast_arrays(a, c, z)
    negative = z < 0.0
    # F(a,c;z) = e^z F(c-a,c;-z)
    series_a = np.where(negative, c - a, a)
    series_z = np.abs(z)
    result, abs_total = _taylor_series(series_a, c, series_z, regime.term_count, tol)
    condition = series_condition(result, abs_total)
    ill = condition > cancellation_limit
    if np.any(ill):
        logger.debug('recomputing %d ill-conditioned element(s) of F(a,c;z)', int(np.count_nonzero(ill)))
        result = np.array(result, dtype=np.float64)
        result[ill] = _recompute_ill_conditioned(series_a[ill], c[ill], series_z[ill], condition[ill])
    result = np.where(negative, np.exp(z) * result, result)
    return result[()] if np.ndim(result) == 0 else result


def hyp1f1(a, c, z):
    """
    kummer_m 的简写形式，直接接受 a、c、z
    """
    return kummer_m(KummerArgs(a, c, z))


def kummer_m_derivative(args: KummerArgs):
    """
    d/dz F(a,c;z) = (a/c) F(a+1,c+1;z)
    """
    a = np.asarray(args.a, dtype=np.float64)
    c = np.asarray(args.c, dtype=np.float64)
    result = a / c * kummer_m(KummerArgs(a + 1.0, c + 1.0, args.z))
    return result[()] if np.ndim(result) == 0 else result
