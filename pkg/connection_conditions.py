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
SINVAR连接条件与谱生成方程（SGE）模块

原点处的自伴扩张只考虑 U = -I 与 U = +I 两种。参考模
    phi1 = -(3/4) Psi0(x,a)（奇延拓）
    phi2 = e^(-2a) Phi2(x; E=lambda)（偶延拓）
满足 W[phi1, phi2] = 1，其中 W[u, v] = u'v - uv'。

连接条件 N1 W[Phi1, phi]_{+0} + N2 W[Phi2, phi]_{+0} = 0 除以 Gamma(alpha)Gamma(alpha+1/2)
后得到正则化的谱方程，在 alpha = -k/2 处也有限。
"""

from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple

import numpy as np

from shape_invariant_model import (ModelParams, EnergyPoint, SolutionBranch, phi, origin_data, decay_coefficients)
from special_functions import hyp1f1, reciprocal_gamma
from utils.errors import DomainError, SingularPointError
from utils.ops import central_first_derivative


class ExtensionChoice(Enum):
    MINUS_IDENTITY = 'MinusIdentity'
    PLUS_IDENTITY = 'PlusIdentity'


class ModeKind(Enum):
    MODE1 = 'Mode1'
    MODE2 = 'Mode2'


class Parity(Enum):
    ODD = 'Odd'
    EVEN = 'Even'


@dataclass(frozen=True)
class ReferenceMode:
    which: ModeKind
    parity: Parity

    def __post_init__(self):
        expected = Parity.ODD if self.which == ModeKind.MODE1 else Parity.EVEN
        if self.parity != expected:
            raise DomainError('%s must have %s parity' % (self.which.value, expected.value))


MODE1 = ReferenceMode(ModeKind.MODE1, Parity.ODD)
MODE2 = ReferenceMode(ModeKind.MODE2, Parity.EVEN)

# 每种扩张对应的参考模
EXTENSION_MODES = {
    ExtensionChoice.MINUS_IDENTITY: MODE1,
    ExtensionChoice.PLUS_IDENTITY: MODE2,
}


class SgeTerms(NamedTuple):
    """
    正则化谱方程的两项：value = first - second

    bracket1、bracket2 是去掉倒数Gamma因子之前的两个括号，两者同时为零时的零点是
    alpha = -k/2 处的伪根。
    """
    first: object
    second: object
    bracket1: object
    bracket2: object

    @property
    def value(self):
        return self.first - self.second

    @property
    def relative_residual(self):
        scale = np.abs(self.first) + np.abs(self.second)
        return np.where(scale > 0.0, np.abs(self.first - self.second) / np.where(scale > 0.0, scale, 1.0), 0.0)


def _scalar_or_array(value):
    return value[()] if np.ndim(value) == 0 else value


def _reference_energy_point(p: ModelParams) -> EnergyPoint:
    return EnergyPoint.from_energy(p.lambda_, p)


def mode2_multiplier(p: ModelParams) -> float:
    """phi2 的常数因子 e^(-2a)"""
    return float(np.exp(-2.0 * p.a))


def reference_mode(mode: ReferenceMode, x, p: ModelParams, scale: float = 1.0):
    """
    参考模 phi1 或 phi2 在 x 处的值，x < 0 时按声明的宇称延拓

    参数：\\
        mode: MODE1 或 MODE2 \\
        x: 坐标，不能为0 \\
        p: 模型参数 \\
        scale: 额外的常数因子，用于检验根的位置与参考模归一化无关

    返回：\\
        参考模的值
    """
    x = np.asarray(x, dtype=np.float64)
    if np.any(x == 0.0):
        raise SingularPointError('reference modes are not defined at x = 0')
    magnitude = np.abs(x)
    ep = _reference_energy_point(p)
    if mode.which == ModeKind.MODE1:
        values = -0.75 * np.asarray(phi(SolutionBranch.PHI1, magnitude, ep, p))
        values = np.where(x < 0.0, -values, values)
    else:
        values = mode2_multiplier(p) * np.asarray(phi(SolutionBranch.PHI2, magnitude, ep, p))
    return _scalar_or_array(scale * values)


def reference_origin_data(mode: ReferenceMode, p: ModelParams, scale: float = 1.0) -> tuple:
    """
    参考模写成 x^(1/6) g(t) 时的 (g(0), g'(0))，x -> 0+ 一侧
    """
    value, slope = origin_data(SolutionBranch.PHI1 if mode.which == ModeKind.MODE1 else SolutionBranch.PHI2,
                               _reference_energy_point(p), p)
    factor = -0.75 if mode.which == ModeKind.MODE1 else mode2_multiplier(p)
    return scale * factor * value, scale * factor * slope


def origin_wronskian(u: tuple, v: tuple) -> float:
    """
    由原点数据计算 W[u, v]_{+0} = (2/3)(g_u' g_v - g_u g_v')，x^(1/6) 因子相互抵消
    """
    return 2.0 / 3.0 * (u[1] * v[0] - u[0] * v[1])


def wronskian_at(u, v, x: float, rel_step: float = 1e-3) -> float:
    """
    W[u, v](x) = u'v - uv'，导数用四阶中心差分，步长 x*rel_step

    u、v 为接受numpy数组的函数，x 必须大于 2*x*rel_step。
    """
    step = x * rel_step
    grid = x + step * np.arange(-2.0, 3.0)
    du = central_first_derivative(u(grid), step)[0]
    dv = central_first_derivative(v(grid), step)[0]
    return float(du * v(x) - u(x) * dv)


def wronskian_limit_phi1(ep: EnergyPoint, p: ModelParams) -> float:
    """
    W[Phi1, phi1]_{+0} = (3/4)[(E+lambda)/2 F(alpha,1/2;3E^2/8) + (2alpha-1) E F(alpha,3/2;3E^2/8)]
    """
    e, alpha, xi0 = ep.e, ep.alpha, ep.xi0
    return float(0.75 * (0.5 * (e + p.lambda_) * hyp1f1(alpha, 0.5, xi0)
                         + (2.0 * alpha - 1.0) * e * hyp1f1(alpha, 1.5, xi0)))


def wronskian_limit_phi1_unsimplified(ep: EnergyPoint, p: ModelParams) -> float:
    """
    化简前的形式 -(3/8)[(E-lambda) F(alpha,1/2) - 4 alpha E F(alpha+1,3/2)]，与化简形式由递推关系相联系
    """
    e, alpha, xi0 = ep.e, ep.alpha, ep.xi0
    return float(-0.375 * ((e - p.lambda_) * hyp1f1(alpha, 0.5, xi0)
                           - 4.0 * alpha * e * hyp1f1(alpha + 1.0, 1.5, xi0)))


def wronskian_limit_phi2(ep: EnergyPoint, p: ModelParams) -> float:
    """
    W[Phi2, phi1]_{+0} = (3E(E-lambda)/8) F(alpha+1/2,3/2;3E^2/8) - F(alpha+1/2,1/2;3E^2/8)

    符号按 W[u, v] = u'v - uv' 与 Phi2 = ... (2f^2 - E) F(alpha+1/2,3/2;xi) 的约定确定，
    与数值 Wronskian 一致。
    """
    e, alpha, xi0 = ep.e, ep.alpha, ep.xi0
    return float(0.375 * e * (e - p.lambda_) * hyp1f1(alpha + 0.5, 1.5, xi0) - hyp1f1(alpha + 0.5, 0.5, xi0))


def wronskian_limit_phi2_unsimplified(ep: EnergyPoint, p: ModelParams) -> float:
    e, alpha, xi0 = ep.e, ep.alpha, ep.xi0
    f_b = hyp1f1(alpha + 0.5, 1.5, xi0)
    return float(0.375 * e * (e - p.lambda_) * f_b - f_b
                 - 0.25 * e * e * (2.0 * alpha + 1.0) * hyp1f1(alpha + 1.5, 2.5, xi0))


def _check_eta(eta: float):
    if eta >= 0.0:
        raise DomainError('eta = -sqrt(2a) must be negative, got %r' % (eta,))


def sge_minus_terms(y, eta: float) -> SgeTerms:
    """
    U = -I 时正则化谱方程的两项，y 可以是numpy数组

    first = [(2alpha-1) y F(alpha,3/2;y^2) + (1/2)(y+eta) F(alpha,1/2;y^2)] / Gamma(alpha+1/2) \\
    second = [y(y-eta) F(alpha+1/2,3/2;y^2) - F(alpha+1/2,1/2;y^2)] / Gamma(alpha)
    """
    _check_eta(eta)
    y = np.asarray(y, dtype=np.float64)
    alpha = (eta * eta - y * y) / 4.0
    z = y * y
    bracket1 = (2.0 * alpha - 1.0) * y * hyp1f1(alpha, 1.5, z) + 0.5 * (y + eta) * hyp1f1(alpha, 0.5, z)
    bracket2 = y * (y - eta) * hyp1f1(alpha + 0.5, 1.5, z) - hyp1f1(alpha + 0.5, 0.5, z)
    first = reciprocal_gamma(alpha + 0.5) * bracket1
    second = reciprocal_gamma(alpha) * bracket2
    return SgeTerms(_scalar_or_array(first), _scalar_or_array(second),
                    _scalar_or_array(bracket1), _scalar_or_array(bracket2))


def sge_minus(y, eta: float):
    """
    U = -I 的正则化谱方程左端，零点是能谱候选值
    """
    return _scalar_or_array(np.asarray(sge_minus_terms(y, eta).value))


def sge_plus_terms(y, eta: float) -> SgeTerms:
    """
    U = +I 时谱方程的两项，D = F(1,3/2;-eta^2)

    first = {[eta(eta+y) F(alpha,1/2) + 2 y eta (2alpha-1) F(alpha,3/2)] D - F(alpha,1/2)} / Gamma(alpha+1/2) \\
    second = 2 {[eta y (y-eta) F(alpha+1/2,3/2) - eta F(alpha+1/2,1/2)] D + y F(alpha+1/2,3/2)} / Gamma(alpha)
    """
    _check_eta(eta)
    y = np.asarray(y, dtype=np.float64)
    alpha = (eta * eta - y * y) / 4.0
    z = y * y
    d_factor = hyp1f1(1.0, 1.5, -eta * eta)
    f_a_half = hyp1f1(alpha, 0.5, z)
    f_b_half = hyp1f1(alpha + 0.5, 1.5, z)
    bracket1 = ((eta * (eta + y) * f_a_half + 2.0 * y * eta * (2.0 * alpha - 1.0) * hyp1f1(alpha, 1.5, z)) * d_factor
                - f_a_half)
    bracket2 = ((eta * y * (y - eta) * f_b_half - eta * hyp1f1(alpha + 0.5, 0.5, z)) * d_factor + y * f_b_half)
    first = reciprocal_gamma(alpha + 0.5) * bracket1
    second = 2.0 * reciprocal_gamma(alpha) * bracket2
    return SgeTerms(_scalar_or_array(first), _scalar_or_array(second),
                    _scalar_or_array(bracket1), _scalar_or_array(bracket2))


def sge_plus(y, eta: float):
    """
    U = +I 的谱方程左端
    """
    return _scalar_or_array(np.asarray(sge_plus_terms(y, eta).value))


def sge_terms(ext: ExtensionChoice, y, eta: float) -> SgeTerms:
    if ext == ExtensionChoice.MINUS_IDENTITY:
        return sge_minus_terms(y, eta)
    return sge_plus_terms(y, eta)


def connection_residual(ext: ExtensionChoice, ep: EnergyPoint, p: ModelParams, mode_scale: float = 1.0) -> float:
    """
    连接条件残差 N1 W[Phi1, phi]_{+0} + N2 W[Phi2, phi]_{+0}

    直接由原点数据组装，不经过谱方程的闭式，用来交叉检验。使用有限系数
    (N1, N2) = (-sqrt(2/3)/Gamma(alpha+1/2), 1/Gamma(alpha))，N2 = 0 的纯 Phi1 情形不需要特殊处理。
    在这一归一化下 U=-I 的残差等于 -sge_minus，U=+I 的残差等于 -(4 sqrt(2)/(3 sqrt(3))) sge_plus。

    参数：\\
        ext: 扩张类型 \\
        ep: 能量点 \\
        p: 模型参数 \\
        mode_scale: 参考模的常数因子

    返回：\\
        残差
    """
    mode = EXTENSION_MODES[ext]
    reference = reference_origin_data(mode, p, mode_scale)
    n1, n2 = decay_coefficients(ep)
    w1 = origin_wronskian(origin_data(SolutionBranch.PHI1, ep, p), reference)
    w2 = origin_wronskian(origin_data(SolutionBranch.PHI2, ep, p), reference)
    return float(n1 * w1 + n2 * w2)
