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
SINVAR形状不变势模型模块

势函数族 V(x;a) = 2(2a-1)/(3x^(2/3)) - 5/(36x^2) + x^(2/3) 及其超对称伙伴，
两个基本解 Phi1、Phi2，衰减条件给出的组合系数，以及验证用的超荷算符。

x^(2/3) 总是按 (x^2)^(1/3) 计算（偶函数），x^(1/3) 按实立方根计算（奇函数）。
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import NamedTuple

import numpy as np

from special_functions import hyp1f1, reciprocal_gamma, is_nonpositive_integer
from utils.errors import DomainError, SingularPointError
from utils.ops import central_first_derivative, central_second_derivative


@dataclass(frozen=True)
class ModelParams:
    """
    模型参数，c 与 hbar 固定为1

    参数：\\
        a: 形状不变参数，必须大于0
    """
    a: float
    c: float = 1.0
    hbar: float = 1.0
    lambda_: float = field(init=False)
    eta: float = field(init=False)

    def __post_init__(self):
        if not np.isfinite(self.a) or self.a <= 0.0:
            raise DomainError('shape invariance parameter a must be positive, got %r' % (self.a,))
        if self.c != 1.0 or self.hbar != 1.0:
            raise DomainError('only c = 1 and hbar = 1 are supported, got c=%r, hbar=%r' % (self.c, self.hbar))
        lambda_ = -4.0 * np.sqrt(self.a) / np.sqrt(3.0)
        eta = np.sqrt(3.0) * lambda_ / (2.0 * np.sqrt(2.0))
        assert abs(eta + np.sqrt(2.0 * self.a)) <= 1e-12 * (1.0 + abs(eta))
        object.__setattr__(self, 'lambda_', float(lambda_))
        object.__setattr__(self, 'eta', float(eta))

    @classmethod
    def from_eta(cls, eta: float) -> 'ModelParams':
        """由 eta = -sqrt(2a) 构造，eta 必须为负"""
        if eta >= 0.0:
            raise DomainError('eta must be negative, got %r' % (eta,))
        return cls(a=eta * eta / 2.0)

    @property
    def d(self) -> float:
        """形状不变约束中的常数 d(a) = -16a/3"""
        return -16.0 * self.a / 3.0

    @property
    def c0(self) -> float:
        """x^(-2/3) 项的系数 2(2a-1)/3"""
        return 2.0 * (2.0 * self.a - 1.0) / 3.0


@dataclass(frozen=True)
class EnergyPoint:
    """
    能量点：E、标度能量 y = sqrt(3)E/(2sqrt(2))，以及Kummer上参数 alpha = (eta^2 - y^2)/4
    """
    e: float
    y: float
    alpha: float

    @classmethod
    def from_energy(cls, e: float, p: ModelParams) -> 'EnergyPoint':
        y = np.sqrt(3.0) * e / (2.0 * np.sqrt(2.0))
        return cls(float(e), float(y), float((p.eta * p.eta - y * y) / 4.0))

    @classmethod
    def from_y(cls, y: float, p: ModelParams) -> 'EnergyPoint':
        e = 2.0 * np.sqrt(2.0) * y / np.sqrt(3.0)
        return cls(float(e), float(y), float((p.eta * p.eta - y * y) / 4.0))

    @property
    def xi0(self) -> float:
        """原点处的Kummer自变量 3E^2/8 = y^2"""
        return self.y * self.y


class SolutionBranch(Enum):
    PHI1 = 'Phi1'
    PHI2 = 'Phi2'


class SuperchargeDirection(Enum):
    PLUS = 'Plus'
    MINUS = 'Minus'


class DecayKind(Enum):
    MIXED = 'Mixed'
    PURE_BRANCH1 = 'PureBranch1'
    PURE_BRANCH2 = 'PureBranch2'


class DecayRatio(NamedTuple):
    value: float
    kind: DecayKind


def _require_nonzero(x):
    x = np.asarray(x, dtype=np.float64)
    if np.any(x == 0.0):
        raise SingularPointError('the potential is singular at x = 0')
    return x


def _require_positive(x):
    x = _require_nonzero(x)
    if np.any(x < 0.0):
        raise DomainError('x must be positive here, got min(x) = %r' % (float(np.min(x)),))
    return x


def _scalar_or_array(value):
    return value[()] if np.ndim(value) == 0 else value


def cube_root(x):
    """f(x) = x^(1/3)，实立方根，奇函数"""
    return np.cbrt(x)


def cube_root_squared(x):
    """f^2(x) = (x^2)^(1/3)，偶函数"""
    x = np.asarray(x, dtype=np.float64)
    return np.cbrt(x * x)


def potential_v(x, p: ModelParams):
    """
    势函数 V(x;a)

    参数：\\
        x: 坐标，不能为0，可以是numpy数组 \\
        p: 模型参数

    返回：\\
        2(2a-1)/(3x^(2/3)) - 5/(36x^2) + x^(2/3)
    """
    x = _require_nonzero(x)
    t = cube_root_squared(x)
    return _scalar_or_array(p.c0 / t - 5.0 / (36.0 * x * x) + t)


def potential_v_tilde(x, p: ModelParams):
    """
    伙伴势 V~(x;a) = V(x;a+1)
    """
    x = _require_nonzero(x)
    t = cube_root_squared(x)
    return _scalar_or_array(2.0 * (2.0 * p.a + 1.0) / (3.0 * t) - 5.0 / (36.0 * x * x) + t)


def potential_intermediate(x, p: ModelParams):
    """
    中间势 x^(2/3) + 7/(36x^2) + lambda/(3x^(4/3)) + 4a/(3x^(2/3))，只在 x > 0 上定义
    """
    x = _require_positive(x)
    t = cube_root_squared(x)
    return _scalar_or_array(t + 7.0 / (36.0 * x * x) + p.lambda_ / (3.0 * t * t) + 4.0 * p.a / (3.0 * t))


def potential_intermediate_f_form(x, p: ModelParams):
    """
    中间势的f表达式 f^2 - f''/(2f) + (3/4)(f'/f)^2 + lambda^2/(4f^2) + lambda f'/f^2
    """
    x = _require_positive(x)
    f, df, ddf = _f_derivatives(x)
    result = (f * f - ddf / (2.0 * f) + 0.75 * (df / f) ** 2
              + p.lambda_ ** 2 / (4.0 * f * f) + p.lambda_ * df / (f * f))
    return _scalar_or_array(result)


def _f_derivatives(x):
    f = cube_root(x)
    df = 1.0 / (3.0 * f * f)
    ddf = -2.0 / (9.0 * f ** 5)
    return f, df, ddf


def superpotential_w(x, p: ModelParams):
    """
    超势 W = f - (f' + sqrt(-d))/(2f)，sqrt(-d) 取 lambda 分支

    在这个分支下 V - (W^2 - W') 与 V_Int - (W^2 + W') 都等于常数 lambda。
    """
    x = _require_positive(x)
    if -p.d < 0.0:
        raise DomainError('the superpotential requires -d(a) >= 0, got d = %r' % (p.d,))
    f, df, _ = _f_derivatives(x)
    return _scalar_or_array(f - (df + p.lambda_) / (2.0 * f))


def superpotential_w_derivative(x, p: ModelParams):
    """W'(x)"""
    x = _require_positive(x)
    f, df, ddf = _f_derivatives(x)
    result = df - ddf / (2.0 * f) + (df + p.lambda_) * df / (2.0 * f * f)
    return _scalar_or_array(result)


def psi0(x, p: ModelParams):
    """
    Psi0(x,a) = x^(1/6) exp(-(3/4)x^(4/3) + (3 lambda/4) x^(2/3))，归一化使 Psi0/x^(1/6) -> 1
    """
    x = _require_positive(x)
    t = cube_root_squared(x)
    return _scalar_or_array(np.cbrt(np.sqrt(x)) * np.exp(-0.75 * t * t + 0.75 * p.lambda_ * t))


def xi_of_x(x, ep: EnergyPoint):
    """
    Kummer自变量 xi = (3/8)(2f^2(x) - E)^2，x=0 时为 3E^2/8
    """
    t = cube_root_squared(x)
    return _scalar_or_array(0.375 * (2.0 * t - ep.e) ** 2)


def _branch_factor(branch: SolutionBranch, t, ep: EnergyPoint):
    """
    y1 = F(alpha,1/2;xi)，y2 = (2t-E) F(alpha+1/2,3/2;xi)
    """
    xi = 0.375 * (2.0 * t - ep.e) ** 2
    if branch == SolutionBranch.PHI1:
        return hyp1f1(ep.alpha, 0.5, xi)
    return (2.0 * t - ep.e) * hyp1f1(ep.alpha + 0.5, 1.5, xi)


def phi(branch: SolutionBranch, x, ep: EnergyPoint, p: ModelParams):
    """
    基本解 Phi_i(x) = Psi0(x,a) exp((3/4)(E-lambda)f^2) y_i(xi(x))

    参数：\\
        branch: 解的分支 \\
        x: 坐标，必须大于0 \\
        ep: 能量点 \\
        p: 模型参数

    返回：\\
        Phi_i 在 x 处的值
    """
    x = _require_positive(x)
    t = cube_root_squared(x)
    exponent = -0.75 * t * t + 0.75 * p.lambda_ * t + 0.75 * (ep.e - p.lambda_) * t
    result = np.cbrt(np.sqrt(x)) * np.exp(exponent) * _branch_factor(branch, t, ep)
    return _scalar_or_array(result)


def origin_data(branch: SolutionBranch, ep: EnergyPoint, p: ModelParams) -> tuple:
    """
    写成 Phi = x^(1/6) g(t)、t = x^(2/3) 时 g 在 t=0 处的值与导数

    参数：\\
        branch: 解的分支 \\
        ep: 能量点 \\
        p: 模型参数

    返回：\\
        (g(0), g'(0))
    """
    e, alpha, xi0 = ep.e, ep.alpha, ep.xi0
    if branch == SolutionBranch.PHI1:
        value = hyp1f1(alpha, 0.5, xi0)
        slope = 0.75 * e * value - 3.0 * alpha * e * hyp1f1(alpha + 1.0, 1.5, xi0)
        return float(value), float(slope)
    f_b = hyp1f1(alpha + 0.5, 1.5, xi0)
    f_c = hyp1f1(alpha + 1.5, 2.5, xi0)
    value = -e * f_b
    slope = -0.75 * e * e * f_b + 2.0 * f_b + 0.5 * e * e * (2.0 * alpha + 1.0) * f_c
    return float(value), float(slope)


def decay_coefficients(ep: EnergyPoint) -> tuple:
    """
    使 N1 Phi1 + N2 Phi2 在无穷远处衰减的有限系数

    返回：\\
        (N1, N2) = (-sqrt(2/3)/Gamma(alpha+1/2), 1/Gamma(alpha))
    """
    n1 = -np.sqrt(2.0 / 3.0) * reciprocal_gamma(ep.alpha + 0.5)
    n2 = reciprocal_gamma(ep.alpha)
    return float(n1), float(n2)


def decay_ratio_gamma(ep: EnergyPoint) -> DecayRatio:
    """
    衰减条件给出的比值 gamma = N1/N2 = -sqrt(2) Gamma(alpha) / (sqrt(3) Gamma(alpha+1/2))

    alpha 为0或负整数时 N2 = 0，只有 Phi1 衰减，返回带符号的无穷大并标记为 PureBranch1；
    alpha + 1/2 为0或负整数时 gamma = 0，标记为 PureBranch2。
    """
    n1, n2 = decay_coefficients(ep)
    if is_nonpositive_integer(ep.alpha):
        # Gamma(alpha) 从右侧趋于极点的符号为 (-1)^n
        order = int(round(-ep.alpha))
        sign = -np.sign(reciprocal_gamma(ep.alpha + 0.5)) * (-1.0) ** order
        return DecayRatio(float(sign * np.inf), DecayKind.PURE_BRANCH1)
    if n1 == 0.0:
        return DecayRatio(0.0, DecayKind.PURE_BRANCH2)
    return DecayRatio(n1 / n2, DecayKind.MIXED)


def wavefunction(ep: EnergyPoint, p: ModelParams, x) -> tuple:
    """
    衰减解 Psi = N1 Phi1 + N2 Phi2 及其抵消下限 |N1 Phi1| + |N2 Phi2|

    |Psi| 远小于抵消下限的采样点被舍入误差淹没，不能用来判断符号。
    """
    n1, n2 = decay_coefficients(ep)
    part1 = n1 * np.asarray(phi(SolutionBranch.PHI1, x, ep, p))
    part2 = n2 * np.asarray(phi(SolutionBranch.PHI2, x, ep, p))
    return _scalar_or_array(part1 + part2), _scalar_or_array(np.abs(part1) + np.abs(part2))


def _uniform_step(x) -> float:
    x = np.asarray(x, dtype=np.float64)
    step = x[1] - x[0]
    if not np.allclose(np.diff(x), step, rtol=1e-6, atol=0.0):
        raise DomainError('a uniform grid is required')
    return float(step)


def apply_hamiltonian(x, samples, p: ModelParams, partner: bool = False) -> np.ndarray:
    """
    H Psi = -Psi'' + V Psi（partner=True 时用 V~），返回去掉两端各2个点后的内部值
    """
    x = _require_positive(x)
    samples = np.asarray(samples, dtype=np.float64)
    step = _uniform_step(x)
    potential = potential_v_tilde(x, p) if partner else potential_v(x, p)
    return -central_second_derivative(samples, step) + potential[2:-2] * samples[2:-2]


def apply_second_order_supercharge(x, samples, direction: SuperchargeDirection, p: ModelParams) -> np.ndarray:
    """
    二阶超荷算符 Q+ = d^2 - 2f d + b 及其形式伴随 Q- = d^2 + 2f d + 2f' + b

    b = -f' + f^2 - f''/(2f) + (f'/(2f))^2 + d/(4f^2)，满足 H Q+ = Q+ H~，Q- H = H~ Q-。

    参数：\\
        x: 均匀网格，x > 0，至少5个点 \\
        samples: Psi 在网格上的值 \\
        direction: Plus 或 Minus \\
        p: 模型参数

    返回：\\
        Q Psi 在内部点 x[2:-2] 上的值
    """
    x = _require_positive(x)
    samples = np.asarray(samples, dtype=np.float64)
    step = _uniform_step(x)
    first = central_first_derivative(samples, step)
    second = central_second_derivative(samples, step)

    f, df, ddf = _f_derivatives(x[2:-2])
    b = -df + f * f - ddf / (2.0 * f) + (df / (2.0 * f)) ** 2 + p.d / (4.0 * f * f)
    inner = samples[2:-2]
    if direction == SuperchargeDirection.PLUS:
        return second - 2.0 * f * first + b * inner
    return second + 2.0 * f * first + (2.0 * df + b) * inner
