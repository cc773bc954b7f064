#!/usr/bin/env python3
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
SINVAR不变量校验套件

每一项检查给出实测误差与容差，verify 子命令按套件运行并汇总结果。
"""

from enum import Enum
from typing import NamedTuple

import numpy as np
from scipy import integrate

from connection_conditions import (ExtensionChoice, MODE1, MODE2, reference_mode, wronskian_at,
                                   wronskian_limit_phi1, wronskian_limit_phi2, sge_minus, sge_plus,
                                   connection_residual)
from shape_invariant_model import (ModelParams, EnergyPoint, SolutionBranch, SuperchargeDirection, potential_v,
                                   potential_v_tilde, psi0, phi, apply_hamiltonian, apply_second_order_supercharge)
from special_functions import gamma, hyp1f1, kummer_m, kummer_m_derivative, kummer_asymptotic, KummerArgs
from spectrum import ScanConfig, scan_roots, refine_root
from utils.logger import get_logger
from utils.ops import format_float

logger = get_logger('verify')

SAMPLE_SEED = 20160101
PLUS_RESIDUAL_FACTOR = -4.0 * np.sqrt(2.0) / (3.0 * np.sqrt(3.0))


class VerifySuite(Enum):
    SPECFUN = 'specfun'
    MODEL = 'model'
    SGE = 'sge'
    ALL = 'all'


class CheckResult(NamedTuple):
    suite: str
    name: str
    measured: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return bool(np.isfinite(self.measured)) and self.measured <= self.tolerance

    def to_text(self) -> str:
        return '[%s] %s.%s: measured %s (tolerance %s)' % ('PASS' if self.passed else 'FAIL', self.suite, self.name,
                                                          format_float(self.measured, 3),
                                                          format_float(self.tolerance, 3))


def _relative_to_terms(residual, *terms) -> float:
    scale = sum(np.abs(term) for term in terms)
    return float(np.max(np.abs(residual) / np.maximum(scale, 1e-300)))


def check_recurrence_a(rng) -> CheckResult:
    """2a F(a+1,3/2;z) - (2a-1) F(a,3/2;z) - F(a,1/2;z) = 0"""
    alpha = rng.uniform(-5.0, 5.0, 200)
    z = rng.uniform(1e-6, 40.0, 200)
    first = 2.0 * alpha * hyp1f1(alpha + 1.0, 1.5, z)
    second = (2.0 * alpha - 1.0) * hyp1f1(alpha, 1.5, z)
    third = hyp1f1(alpha, 0.5, z)
    return CheckResult('specfun', 'recurrence_a', _relative_to_terms(first - second - third, first, second, third),
                       1e-9)


def check_recurrence_b(rng) -> CheckResult:
    """E^2 F(a+3/2,5/2;z) - 4[F(a+3/2,3/2;z) - F(a+1/2,3/2;z)] = 0，其中 3E^2/8 = z"""
    alpha = rng.uniform(-5.0, 5.0, 200)
    z = rng.uniform(1e-6, 40.0, 200)
    e_squared = 8.0 * z / 3.0
    first = e_squared * hyp1f1(alpha + 1.5, 2.5, z)
    second = 4.0 * hyp1f1(alpha + 1.5, 1.5, z)
    third = 4.0 * hyp1f1(alpha + 0.5, 1.5, z)
    return CheckResult('specfun', 'recurrence_b', _relative_to_terms(first - second + third, first, second, third),
                       1e-9)


def check_reflection() -> CheckResult:
    x = np.linspace(0.01, 0.99, 99)
    measured = np.max(np.abs(gamma(x) * gamma(1.0 - x) * np.sin(np.pi * x) / np.pi - 1.0))
    return CheckResult('specfun', 'gamma_reflection', float(measured), 1e-10)


def check_kummer_origin(rng) -> CheckResult:
    a = rng.uniform(-10.0, 10.0, 50)
    c = rng.uniform(0.1, 10.0, 50)
    measured = np.max(np.abs(kummer_m(KummerArgs(a, c, np.zeros(50))) - 1.0))
    return CheckResult('specfun', 'kummer_at_origin', float(measured), 0.0)


def check_kummer_derivative(rng) -> CheckResult:
    a = rng.uniform(-3.0, 3.0, 20)
    c = rng.uniform(0.5, 3.0, 20)
    z = rng.uniform(0.5, 10.0, 20)
    step = 1e-4
    numeric = (8.0 * (hyp1f1(a, c, z + step) - hyp1f1(a, c, z - step))
               - (hyp1f1(a, c, z + 2.0 * step) - hyp1f1(a, c, z - 2.0 * step))) / (12.0 * step)
    closed = kummer_m_derivative(KummerArgs(a, c, z))
    measured = np.max(np.abs(numeric - closed) / np.maximum(np.abs(closed), 1.0))
    return CheckResult('specfun', 'kummer_derivative', float(measured), 1e-6)


def check_kummer_asymptotic() -> CheckResult:
    args = KummerArgs(2.0, 1.5, 60.0)
    series = kummer_m(args)
    return CheckResult('specfun', 'kummer_asymptotic_z60', float(abs(series - kummer_asymptotic(args)) / series),
                       1e-2)


def check_shape_invariance() -> CheckResult:
    """
    V(x;a+1) = V~(x;a)，残差按 1 + |V~| 归一化

    不用绝对界 1e-12：x = 1e-3 附近 |V| 约为 1e5，一个ulp就有约 3e-11，绝对残差达不到该界。
    """
    x = np.logspace(-3.0, 1.0, 500)
    measured = 0.0
    for a in [0.5, 1.0, 2.0, 3.0, 4.5]:
        lower = potential_v_tilde(x, ModelParams(a=a))
        upper = potential_v(x, ModelParams(a=a + 1.0))
        measured = max(measured, float(np.max(np.abs(upper - lower) / (1.0 + np.abs(lower)))))
    return CheckResult('model', 'shape_invariance', measured, 1e-12)


def check_evenness() -> CheckResult:
    x = np.logspace(-2.0, 1.0, 100)
    p = ModelParams(a=1.0)
    return CheckResult('model', 'potential_evenness', float(np.max(np.abs(potential_v(x, p) - potential_v(-x, p)))),
                       0.0)


def check_psi0_quadrature() -> CheckResult:
    """Psi0 的闭式与 exp(积分) 形式之比为常数"""
    p = ModelParams(a=1.0)

    def integrand(s):
        f = np.cbrt(s)
        return (-2.0 * f * f + 1.0 / (3.0 * f * f) + p.lambda_) / (2.0 * f)

    ratios = []
    for x in np.linspace(0.01, 5.0, 25):
        value, _ = integrate.quad(integrand, 1.0, x, epsabs=1e-13, epsrel=1e-13, limit=200)
        ratios.append(psi0(x, p) / np.exp(value))
    ratios = np.array(ratios)
    return CheckResult('model', 'psi0_quadrature', float(np.max(np.abs(ratios / ratios[0] - 1.0))), 1e-8)


def check_ode_residual(rng) -> CheckResult:
    """两个分支在 [0.05, 3] 上满足 -Phi'' + V Phi = E Phi"""
    p = ModelParams(a=2.0)
    x = np.linspace(0.05, 3.0, 2951)
    measured = 0.0
    for e in rng.uniform(-10.0, 10.0, 10):
        ep = EnergyPoint.from_energy(e, p)
        for branch in SolutionBranch:
            values = phi(branch, x, ep, p)
            h_values = apply_hamiltonian(x, values, p)
            scale = np.max(np.abs(h_values) + np.abs(e * values[2:-2]))
            measured = max(measured, float(np.max(np.abs(h_values - e * values[2:-2])) / scale))
    return CheckResult('model', 'ode_residual', measured, 1e-6)


def check_origin_exponent() -> CheckResult:
    p = ModelParams(a=2.0)
    ep = EnergyPoint.from_energy(0.9, p)
    x = 1e-9
    ratio = phi(SolutionBranch.PHI1, 1.001 * x, ep, p) / phi(SolutionBranch.PHI1, x, ep, p)
    return CheckResult('model', 'origin_exponent', float(abs(np.log(ratio) / np.log(1.001) - 1.0 / 6.0)), 1e-3)


def check_intertwining() -> CheckResult:
    """H Q+ = Q+ H~ 在光滑试探函数上的差分残差"""
    p = ModelParams(a=1.5)
    x = np.linspace(1.0, 3.0, 201)
    samples = np.exp(-(x - 2.0) ** 2)
    charged = apply_second_order_supercharge(x, samples, SuperchargeDirection.PLUS, p)
    left = apply_hamiltonian(x[2:-2], charged, p)
    partner = apply_hamiltonian(x, samples, p, partner=True)
    right = apply_second_order_supercharge(x[2:-2], partner, SuperchargeDirection.PLUS, p)
    return CheckResult('model', 'intertwining', float(np.linalg.norm(left - right) / np.linalg.norm(samples)), 1e-4)


def check_reference_wronskian() -> CheckResult:
    p = ModelParams(a=2.0)
    measured = max(abs(wronskian_at(lambda s: reference_mode(MODE1, s, p), lambda s: reference_mode(MODE2, s, p), x)
                       - 1.0) for x in [0.01, 0.1, 1.0])
    return CheckResult('sge', 'reference_wronskian', float(measured), 1e-7)


def check_wronskian_limits() -> CheckResult:
    """闭式 Wronskian 极限与 x = 1e-4 处外推的数值结果比较，20个 (y, eta) 点"""
    measured = 0.0
    x = 1e-4
    for eta in [-2.0, -3.0]:
        p = ModelParams.from_eta(eta)
        for y in np.linspace(-1.8, 1.8, 10):
            ep = EnergyPoint.from_y(y, p)
            for branch, closed_form in [(SolutionBranch.PHI1, wronskian_limit_phi1),
                                        (SolutionBranch.PHI2, wronskian_limit_phi2)]:
                def u(s):
                    return phi(branch, s, ep, p)

                def v(s):
                    return reference_mode(MODE1, s, p)

                numeric = wronskian_at(u, v, x) - (p.lambda_ - ep.e) * 0.75 * x * u(x) * v(x)
                expected = closed_form(ep, p)
                measured = max(measured, abs(numeric - expected) / max(abs(expected), 1.0))
    return CheckResult('sge', 'wronskian_limits', float(measured), 1e-5)


def check_connection_residual() -> CheckResult:
    """由原点数据组装的残差与谱方程闭式成比例"""
    measured = 0.0
    for eta in [-2.0, -3.0]:
        p = ModelParams.from_eta(eta)
        for y in [-1.3, -0.2, 0.7, 2.1]:
            ep = EnergyPoint.from_y(y, p)
            for ext, closed_form in [(ExtensionChoice.MINUS_IDENTITY, lambda value: -sge_minus(value, eta)),
                                     (ExtensionChoice.PLUS_IDENTITY,
                                      lambda value: PLUS_RESIDUAL_FACTOR * sge_plus(value, eta))]:
                expected = closed_form(y)
                residual = connection_residual(ext, ep, p)
                measured = max(measured, abs(residual - expected) / max(abs(expected), 1.0))
    return CheckResult('sge', 'connection_residual', float(measured), 1e-9)


def check_ground_state() -> CheckResult:
    """U = -I 的最低根 y1 = eta"""
    measured = 0.0
    for eta in [-2.0, -3.0]:
        cfg = ScanConfig.from_config(eta, y_max=eta + 1.0)
        brackets = [bracket for bracket in scan_roots(lambda y: sge_minus(y, eta), cfg) if not bracket.even_order]
        if not brackets:
            return CheckResult('sge', 'ground_state', float('inf'), 1e-8)
        measured = max(measured, abs(refine_root(lambda y: sge_minus(y, eta), brackets[0]) - eta))
    return CheckResult('sge', 'ground_state', float(measured), 1e-8)


def run_suite(suite: VerifySuite) -> list:
    """
    运行一个校验套件

    参数：\\
        suite: 套件名，ALL 依次运行全部套件

    返回：\\
        CheckResult 列表
    """
    rng = np.random.default_rng(SAMPLE_SEED)
    checks = {
        VerifySuite.SPECFUN: [lambda: check_recurrence_a(rng), lambda: check_recurrence_b(rng), check_reflection,
                              lambda: check_kummer_origin(rng), lambda: check_kummer_derivative(rng),
                              check_kummer_asymptotic],
        VerifySuite.MODEL: [check_shape_invariance, check_evenness, check_psi0_quadrature,
                            lambda: check_ode_residual(rng), check_origin_exponent, check_intertwining],
        VerifySuite.SGE: [check_reference_wronskian, check_wronskian_limits, check_connection_residual,
                          check_ground_state],
    }
    suites = [VerifySuite.SPECFUN, VerifySuite.MODEL, VerifySuite.SGE] if suite == VerifySuite.ALL else [suite]
    results = []
    for name in suites:
        for check in checks[name]:
            result = check()
            if not result.passed:
                logger.warning('check %s.%s failed', result.suite, result.name)
            results.append(result)
    return results
