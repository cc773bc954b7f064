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
SINVAR有限差分本征值求解器，作为谱方程结果的独立参照

半直线问题在 t = x^(2/3) 中离散化：令 Psi = x^(1/6) g(t)，
-Psi'' + V Psi = E Psi 变为正则的广义本征问题
    -(4/9) g'' + (t^2 + c0) g = E t g,    c0 = 2(2a-1)/3
原点一侧的边界条件由 g'(0)/g(0) 给出，通过局部级数解在 t = eps^(2/3) 处消去虚点，
x_max 处为Dirichlet条件。本模块不依赖谱方程的代数形式。
"""

from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple

import numpy as np
from scipy.linalg import eigh_tridiagonal, LinAlgError

from shape_invariant_model import ModelParams, EnergyPoint, SolutionBranch, origin_data
from utils.config import get_config_value
from utils.errors import ConvergenceError, CountMismatch, DomainError
from utils.logger import get_logger
from utils.ops import sign_change_indices, format_float

logger = get_logger('oracle')

# t 坐标下网格右端超出最高能级外侧转折点的距离
TURNING_MARGIN = 4.0


@dataclass(frozen=True)
class GridSpec:
    """
    网格参数

    参数：\\
        eps: 原点截断，大于0 \\
        x_max: 右端点 \\
        n_points: 网格点数，不少于100
    """
    eps: float
    x_max: float
    n_points: int

    def __post_init__(self):
        if not 0.0 < self.eps < self.x_max:
            raise DomainError('grid requires 0 < eps < x_max, got eps=%r, x_max=%r' % (self.eps, self.x_max))
        if self.n_points < 100:
            raise DomainError('grid requires at least 100 points, got %r' % (self.n_points,))

    @classmethod
    def from_config(cls, section: str = 'oracle_grid') -> 'GridSpec':
        values = get_config_value(section)
        return cls(float(values['eps']), float(values['x_max']), int(values['n_points']))

    def refined(self, factor: int = 2) -> 'GridSpec':
        return GridSpec(self.eps, self.x_max, self.n_points * factor)

    def covering(self, energy: float, p: ModelParams, margin: float = TURNING_MARGIN) -> 'GridSpec':
        """
        右端点在 t 坐标下至少超出能量 energy 的外侧转折点 t+ = (E + sqrt(E^2 - 4 c0))/2 一个 margin，
        加长网格时保持步长不变；已经足够长时返回自身
        """
        t_low, t_high = self.t_bounds
        t_needed = 0.5 * (energy + np.sqrt(max(energy * energy - 4.0 * p.c0, 0.0))) + margin
        if t_needed <= t_high:
            return self
        n_points = int(np.ceil(self.n_points * (t_needed - t_low) / (t_high - t_low)))
        return GridSpec(self.eps, float(t_needed ** 1.5), n_points)

    @property
    def t_bounds(self) -> tuple:
        return float(np.cbrt(self.eps * self.eps)), float(np.cbrt(self.x_max * self.x_max))


class BoundaryKind(Enum):
    MATCH_X16 = 'MatchX16'
    MATCH_MODE2 = 'MatchMode2'


@dataclass(frozen=True)
class BoundaryRule:
    """
    原点边界条件

    MatchX16: Psi 与 phi1 的局部分支成比例，g'(0)/g(0) = 3 lambda/4（U = -I）\\
    MatchMode2: Psi 与 phi2 的原点数据成比例（U = +I），由 Phi2(x; E=lambda) 的闭式给出
    """
    kind: BoundaryKind

    def log_derivative(self, p: ModelParams) -> float:
        """g'(0)/g(0)"""
        if self.kind == BoundaryKind.MATCH_X16:
            return 0.75 * p.lambda_
        value, slope = origin_data(SolutionBranch.PHI2, EnergyPoint.from_energy(p.lambda_, p), p)
        return slope / value

    def local_solution(self, p: ModelParams, t, energy: float = None, order: int = 6):
        """
        原点附近的局部级数解 g(t) = sum_k g_k t^k，g0 = 1，g1 = g'(0)/g(0)

        系数满足 (4/9)(k+2)(k+1) g_{k+2} = c0 g_k + g_{k-2} - E g_{k-1}。
        energy 为None时只保留与能量无关的前三项。
        """
        t = np.asarray(t, dtype=np.float64)
        coefficients = [1.0, self.log_derivative(p)]
        if energy is None:
            coefficients.append(9.0 / 8.0 * p.c0)
        else:
            for k in range(order - 1):
                previous = coefficients[k - 2] if k >= 2 else 0.0
                lower = coefficients[k - 1] if k >= 1 else 0.0
                coefficients.append(9.0 / (4.0 * (k + 2) * (k + 1))
                                    * (p.c0 * coefficients[k] + previous - energy * lower))
        return np.polynomial.polynomial.polyval(t, coefficients)


MATCH_X16 = BoundaryRule(BoundaryKind.MATCH_X16)
MATCH_MODE2 = BoundaryRule(BoundaryKind.MATCH_MODE2)


@dataclass
class TridiagonalSystem:
    """
    广义本征问题 A g = E W g，A 为对称三对角矩阵，W 为正的对角权重

    参数：\\
        diagonal: A 的对角元 \\
        off_diagonal: A 的次对角元 \\
        weight: W 的对角元 \\
        nodes: 网格点坐标 \\
        coordinate: 'x' 或 't'
    """
    diagonal: np.ndarray
    off_diagonal: np.ndarray
    weight: np.ndarray
    nodes: np.ndarray
    coordinate: str

    def symmetric_form(self) -> tuple:
        """C = W^(-1/2) A W^(-1/2) 的对角元与次对角元"""
        scale = 1.0 / np.sqrt(self.weight)
        return self.diagonal * scale * scale, self.off_diagonal * scale[:-1] * scale[1:]

    def to_dense(self) -> np.ndarray:
        return np.diag(self.diagonal) + np.diag(self.off_diagonal, 1) + np.diag(self.off_diagonal, -1)


class OracleLevel(NamedTuple):
    n: int
    e: float
    y: float
    nodes: int


class OperatorMeta:
    """
    SINVAR中所有有限差分算符类的基类
    """

    def assemble(self) -> TridiagonalSystem:
        raise NotImplementedError('[SINVAR] `assemble()` method is not implemented.')


class HalfLineOperator(OperatorMeta):
    """
    t 空间中的半直线算符，单元中心网格 t_i = t_b + (i + 1/2) h

    原点一侧的虚点用局部解之比消去：g_{-1} = g_0 * g(t_b - h/2)/g(t_b + h/2)；
    右端用 g_n = -g_{n-1}（Dirichlet）。给定 energy 时局部解包含与能量有关的高阶项。
    """

    def __init__(self, p: ModelParams, grid: GridSpec, rule: BoundaryRule, energy: float = None):
        self.p = p
        self.grid = grid
        self.rule = rule
        self.energy = energy

    def assemble(self) -> TridiagonalSystem:
        t_b, t_max = self.grid.t_bounds
        count = self.grid.n_points
        step = (t_max - t_b) / count
        nodes = t_b + (np.arange(count) + 0.5) * step
        kinetic = 4.0 / 9.0 / (step * step)

        diagonal = 2.0 * kinetic + nodes * nodes + self.p.c0
        ghost, first = self.rule.local_solution(self.p, [t_b - 0.5 * step, t_b + 0.5 * step], self.energy)
        diagonal[0] -= kinetic * ghost / first
        diagonal[-1] += kinetic
        off_diagonal = np.full(count - 1, -kinetic)
        return TridiagonalSystem(diagonal, off_diagonal, nodes.copy(), nodes, 't')


class DirichletOperator(OperatorMeta):
    """
    x 空间中 -d^2/dx^2 + V(x) 的三点差分，两端Dirichlet条件，只用于基准检验（方势阱、谐振子）
    """

    def __init__(self, potential, x_min: float, x_max: float, n_points: int):
        if x_min >= x_max or n_points < 3:
            raise DomainError('invalid Dirichlet grid [%r, %r] with %r points' % (x_min, x_max, n_points))
        self.potential = potential
        self.x_min = x_min
        self.x_max = x_max
        self.n_points = n_points

    def assemble(self) -> TridiagonalSystem:
        step = (self.x_max - self.x_min) / (self.n_points + 1)
        nodes = self.x_min + step * np.arange(1, self.n_points + 1)
        kinetic = 1.0 / (step * step)
        diagonal = 2.0 * kinetic + np.asarray(self.potential(nodes), dtype=np.float64)
        off_diagonal = np.full(self.n_points - 1, -kinetic)
        return TridiagonalSystem(diagonal, off_diagonal, np.ones(self.n_points), nodes, 'x')


def discretize(p: ModelParams, grid: GridSpec, rule: BoundaryRule, energy: float = None) -> TridiagonalSystem:
    """
    势 V(x;a) 在半直线 (eps, x_max) 上的离散化，energy 用于边界行的局部解
    """
    return HalfLineOperator(p, grid, rule, energy).assemble()


def _solve(system: TridiagonalSystem, first: int, last: int) -> list:
    diagonal, off_diagonal = system.symmetric_form()
    try:
        values, vectors = eigh_tridiagonal(diagonal, off_diagonal, select='i', select_range=(first, last))
    except LinAlgError as ex:
        raise ConvergenceError('tridiagonal eigensolver failed: %s' % (ex,))
    vectors = vectors / np.sqrt(system.weight)[:, None]
    return [(float(values[index]), vectors[:, index]) for index in range(values.shape[0])]


def lowest_eigenvalues(system: TridiagonalSystem, k: int) -> list:
    """
    最小的 k 个本征对

    参数：\\
        system: 三对角系统 \\
        k: 本征对个数，不超过网格点数的1/10

    返回：\\
        [(本征值, 本征向量), ...]，本征值升序，本征向量是 g（或 Psi）在网格点上的值
    """
    count = system.diagonal.shape[0]
    if k < 1 or k > count // 10:
        raise DomainError('k must be between 1 and n_points/10 = %d, got %r' % (count // 10, k))
    return _solve(system, 0, k - 1)


def corrected_eigenpairs(p: ModelParams, grid: GridSpec, rule: BoundaryRule, k: int) -> list:
    """
    先用与能量无关的边界行求出最低 k 个本征值，再对每一级用该能量重建边界行，取对应序号的本征对
    """
    estimates = lowest_eigenvalues(discretize(p, grid, rule), k)
    pairs = []
    for index, (estimate, _) in enumerate(estimates):
        pairs.extend(_solve(discretize(p, grid, rule, estimate), index, index))
    return pairs


def count_vector_nodes(vector) -> int:
    """本征向量的符号变化次数，忽略尾部幅度低于最大值1e-8的点"""
    vector = np.asarray(vector)
    mask = np.abs(vector) > 1e-8 * np.max(np.abs(vector))
    return len(sign_change_indices(vector, mask))


def richardson_eigenvalues(p: ModelParams, grid: GridSpec, rule: BoundaryRule, k: int) -> np.ndarray:
    """
    两套网格（n 与 2n 个点）上的本征值外推 (4 E_2n - E_n)/3
    """
    coarse = np.array([value for value, _ in corrected_eigenpairs(p, grid, rule, k)])
    fine = np.array([value for value, _ in corrected_eigenpairs(p, grid.refined(), rule, k)])
    return (4.0 * fine - coarse) / 3.0


def oracle_levels(p: ModelParams, rule: BoundaryRule, k: int, grid: GridSpec = None,
                  richardson: bool = True) -> list:
    """
    最低 k 个能级，节点数取自（细）网格的本征向量

    grid 为None时使用配置中的网格，并按第一次求得的最高能级加长到其转折点之外。

    返回：\\
        OracleLevel 列表，n 从1开始
    """
    if grid is None:
        grid = GridSpec.from_config()
        top_estimate, _ = lowest_eigenvalues(discretize(p, grid, rule), k)[-1]
        grid = grid.covering(top_estimate, p)
    logger.info('solving %s oracle for a=%s on %d points', rule.kind.value, format_float(p.a), grid.n_points)
    if richardson:
        coarse = corrected_eigenpairs(p, grid, rule, k)
        fine = corrected_eigenpairs(p, grid.refined(), rule, k)
        energies = [(4.0 * fine_value - coarse_value) / 3.0
                    for (coarse_value, _), (fine_value, _) in zip(coarse, fine)]
        vectors = [vector for _, vector in fine]
    else:
        pairs = corrected_eigenpairs(p, grid, rule, k)
        energies = [value for value, _ in pairs]
        vectors = [vector for _, vector in pairs]

    levels = []
    for index, (energy, vector) in enumerate(zip(energies, vectors)):
        y = EnergyPoint.from_energy(energy, p).y
        levels.append(OracleLevel(index + 1, float(energy), float(y), count_vector_nodes(vector)))
    return levels


class ValidationRow(NamedTuple):
    n: int
    y_sge: float
    y_oracle: float
    deviation: float


@dataclass
class ValidationReport:
    """
    谱方程结果与有限差分结果的逐级比较
    """
    rows: list
    rel_tol: float

    @property
    def max_deviation(self) -> float:
        return max([row.deviation for row in self.rows], default=0.0)

    @property
    def passed(self) -> bool:
        return len(self.rows) > 0 and self.max_deviation <= self.rel_tol

    def to_text(self) -> str:
        lines = []
        for row in self.rows:
            status = 'PASS' if row.deviation <= self.rel_tol else 'FAIL'
            lines.append('level %d: y_sge=%s y_oracle=%s deviation=%s %s'
                         % (row.n, format_float(row.y_sge), format_float(row.y_oracle),
                            format_float(row.deviation, 3), status))
        lines.append('cross-validation %s: max deviation %s (tolerance %s)'
                     % ('PASS' if self.passed else 'FAIL', format_float(self.max_deviation, 3),
                        format_float(self.rel_tol, 3)))
        return '\n'.join(lines)


def relative_deviation(value: float, reference: float) -> float:
    """|value - reference| / max(|reference|, 1)"""
    return abs(value - reference) / max(abs(reference), 1.0)


def cross_validate(sge_spectrum, oracle_spectrum: list, rel_tol: float) -> ValidationReport:
    """
    按顺序配对两组能级并比较 y

    参数：\\
        sge_spectrum: 谱方程得到的能谱，带有 levels 属性，每个能级有 y \\
        oracle_spectrum: OracleLevel 列表 \\
        rel_tol: 允许的相对偏差

    返回：\\
        ValidationReport
    """
    sge_values = [level.y for level in sge_spectrum.levels]
    oracle_values = [level.y for level in oracle_spectrum]
    if len(sge_values) == 0 or len(oracle_values) == 0:
        raise CountMismatch('cannot compare an empty level list (sge %d, oracle %d)'
                            % (len(sge_values), len(oracle_values)))

    window_top = min(sge_values[-1], oracle_values[-1])
    margin = rel_tol * max(abs(window_top), 1.0)
    sge_count = sum(1 for value in sge_values if value <= window_top + margin)
    oracle_count = sum(1 for value in oracle_values if value <= window_top + margin)
    if sge_count != oracle_count:
        raise CountMismatch('level counts differ below y=%s: sge %d, oracle %d'
                            % (format_float(window_top), sge_count, oracle_count))

    rows = [ValidationRow(index + 1, sge_values[index], oracle_values[index],
                          relative_deviation(sge_values[index], oracle_values[index]))
            for index in range(sge_count)]
    report = ValidationReport(rows, rel_tol)
    logger.info('cross-validation over %d levels: max deviation %s', len(rows), format_float(report.max_deviation, 3))
    return report


def boundary_residual(p: ModelParams, grid: GridSpec, rule: BoundaryRule, energy: float) -> float:
    """
    把原点附近的局部解代入第一行差分方程得到的残差，用于检验边界行的构造（量级 O(h^2)）
    """
    system = discretize(p, grid, rule, energy)
    local = rule.local_solution(p, system.nodes[:2], energy)
    row = system.diagonal[0] * local[0] + system.off_diagonal[0] * local[1] - energy * system.weight[0] * local[0]
    return float(abs(row))
