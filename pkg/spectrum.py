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
SINVAR能谱模块：扫描谱方程的变号区间、精化根、计算节点数并组装离散谱
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from connection_conditions import ExtensionChoice, sge_terms
from eigen_oracle import GridSpec
from shape_invariant_model import ModelParams, EnergyPoint, wavefunction
from utils.config import get_config_value, get_worker_count
from utils.errors import BracketInvalid, DomainError, EmptySpectrumError, GridTooCoarse
from utils.logger import get_logger
from utils.ops import sign_change_indices, format_float
from utils.thread import parallel_map

logger = get_logger('spectrum')

# 节点计数时，|Psi| 低于 NOISE_FLOOR * (|N1 Phi1| + |N2 Phi2|) 的采样点被视为舍入噪声
NOISE_FLOOR = 1e-12
MIN_NODE_SEPARATION = 4


@dataclass(frozen=True)
class ScanConfig:
    y_min: float
    y_max: float
    step: float
    refine_tol: float
    accept_tol: float

    def __post_init__(self):
        if not self.y_min < self.y_max:
            raise DomainError('scan requires y_min < y_max, got [%r, %r]' % (self.y_min, self.y_max))
        if self.step <= 0.0 or self.refine_tol <= 0.0 or self.accept_tol <= 0.0:
            raise DomainError('scan step and tolerances must be positive')

    @classmethod
    def from_config(cls, eta: float, **overrides) -> 'ScanConfig':
        """
        按配置文件构造，y_min = eta + y_min_offset
        """
        values = get_config_value('scan')
        config = {
            'y_min': eta + float(values['y_min_offset']),
            'y_max': float(values['y_max']),
            'step': float(values['step']),
            'refine_tol': float(values['refine_tol']),
            'accept_tol': float(values['accept_tol']),
        }
        config.update({key: value for key, value in overrides.items() if value is not None})
        return cls(**config)

    def samples(self) -> np.ndarray:
        count = int(np.floor((self.y_max - self.y_min) / self.step + 1e-9)) + 1
        return self.y_min + self.step * np.arange(count)


@dataclass(frozen=True)
class Bracket:
    """
    变号区间 [lower, upper]；lower == upper 表示采样点恰好是零点。
    even_order 为True表示没有变号的近零极小值（可能的偶数重根），不会被精化。
    """
    lower: float
    upper: float
    f_lower: float = None
    f_upper: float = None
    even_order: bool = False


@dataclass(frozen=True)
class LevelRecord:
    n: int
    y: float
    e: float
    nodes: int
    residual: float


@dataclass
class SpectrumResult:
    eta: float
    extension: ExtensionChoice
    levels: list = field(default_factory=list)

    def level(self, n: int) -> LevelRecord:
        for record in self.levels:
            if record.n == n:
                return record
        return None


def _evaluate(f, samples: np.ndarray) -> np.ndarray:
    """按线程数把采样点分块求值，结果按原顺序拼接"""
    chunks = np.array_split(samples, max(1, min(get_worker_count(), samples.shape[0] // 64)))
    values = parallel_map(lambda chunk: np.asarray(f(chunk), dtype=np.float64), chunks)
    return np.concatenate(values)


def _is_touch(left: float, middle: float, right: float) -> bool:
    """三个同号采样点中间为 |f| 的极小值，且抛物线拟合的顶点接近或越过零"""
    if not (np.sign(left) == np.sign(middle) == np.sign(right)) or middle == 0.0:
        return False
    if abs(middle) > abs(left) or abs(middle) > abs(right):
        return False
    curvature = 0.5 * (left - 2.0 * middle + right)
    if curvature == 0.0:
        return False
    slope = 0.5 * (right - left)
    vertex = middle - slope * slope / (4.0 * curvature)
    return vertex * middle <= 0.0 or abs(vertex) <= 1e-2 * max(abs(left), abs(right))


def scan_roots(f, cfg: ScanConfig) -> list:
    """
    在 [y_min, y_max] 上按步长采样并寻找变号区间

    参数：\\
        f: 接受numpy数组的实函数 \\
        cfg: 扫描配置

    返回：\\
        Bracket 列表，按 y 升序
    """
    samples = cfg.samples()
    values = _evaluate(f, samples)
    finite = np.isfinite(values)
    brackets = []

    for index in np.flatnonzero(finite & (values == 0.0)):
        neighbours = [values[j] for j in (index - 1, index + 1) if 0 <= j < values.shape[0] and finite[j]]
        even = len(neighbours) == 2 and neighbours[0] * neighbours[1] > 0.0
        brackets.append(Bracket(float(samples[index]), float(samples[index]), 0.0, 0.0, even))

    for lower, upper in sign_change_indices(values, finite):
        if np.any(values[lower + 1:upper] == 0.0):
            continue
        brackets.append(Bracket(float(samples[lower]), float(samples[upper]),
                                float(values[lower]), float(values[upper])))

    for index in range(1, values.shape[0] - 1):
        if finite[index - 1] and finite[index] and finite[index + 1] and \
                _is_touch(values[index - 1], values[index], values[index + 1]):
            logger.warning('possible even-order root near y=%s', format_float(samples[index]))
            brackets.append(Bracket(float(samples[index - 1]), float(samples[index + 1]),
                                    float(values[index - 1]), float(values[index + 1]), True))

    return sorted(brackets, key=lambda bracket: (bracket.lower, bracket.upper))


def refine_root(f, bracket: Bracket, xtol: float = 1e-12) -> float:
    """
    在变号区间内精化根（Brent方法）

    区间端点的函数值优先取扫描时记录的值，端点处不再重新求值。

    参数：\\
        f: 实函数 \\
        bracket: 变号区间 \\
        xtol: 区间宽度容差

    返回：\\
        根的位置
    """
    if bracket.lower == bracket.upper:
        return bracket.lower
    f_lower = float(f(bracket.lower)) if bracket.f_lower is None else bracket.f_lower
    f_upper = float(f(bracket.upper)) if bracket.f_upper is None else bracket.f_upper
    if f_lower == 0.0:
        return bracket.lower
    if f_upper == 0.0:
        return bracket.upper
    if not f_lower * f_upper < 0.0:
        raise BracketInvalid('f has the same sign at both ends of [%s, %s]'
                             % (format_float(bracket.lower), format_float(bracket.upper)))

    def pinned(y):
        if y == bracket.lower:
            return f_lower
        if y == bracket.upper:
            return f_upper
        return float(f(y))

    return float(brentq(pinned, bracket.lower, bracket.upper, xtol=xtol, maxiter=200))


def node_grid_points(grid: GridSpec, energy: float = None) -> np.ndarray:
    """
    节点计数网格：靠近原点按对数分布，之后均匀分布到 max(x_max, (|E|+3)^1.5)，energy 为None时到 x_max
    """
    x_max = grid.x_max if energy is None else max(grid.x_max, (abs(energy) + 3.0) ** 1.5)
    switch = min(1.0, x_max / 4.0)
    log_count = grid.n_points // 5
    near = np.geomspace(grid.eps, switch, log_count, endpoint=False)
    far = np.linspace(switch, x_max, grid.n_points - log_count)
    return np.concatenate([near, far])


def count_nodes(ep: EnergyPoint, ext: ExtensionChoice, p: ModelParams, grid: GridSpec = None) -> int:
    """
    衰减解 Psi 在 (eps, x_max) 上的严格变号次数

    两种扩张下 x > 0 一侧的 Psi 相同，ext 只决定向 x < 0 延拓的宇称，不影响半直线上的计数。
    被舍入噪声淹没的采样点不参与计数。

    参数：\\
        ep: 能量点（已接受的根） \\
        ext: 扩张类型 \\
        p: 模型参数 \\
        grid: 节点计数网格，为None时使用配置 node_grid

    返回：\\
        节点数
    """
    if grid is None:
        grid = GridSpec.from_config('node_grid')
    x = node_grid_points(grid, ep.e)
    psi, floor = wavefunction(ep, p, x)
    mask = np.abs(psi) > NOISE_FLOOR * floor
    changes = sign_change_indices(psi, mask)
    positions = [upper for _, upper in changes]
    if any(second - first < MIN_NODE_SEPARATION for first, second in zip(positions, positions[1:])):
        raise GridTooCoarse('adjacent nodes of the %s level at E=%s are closer than %d grid points'
                            % (ext.value, format_float(ep.e), MIN_NODE_SEPARATION))
    return len(changes)


def root_residual(ext: ExtensionChoice, eta: float, y: float, bracket: Bracket) -> float:
    """
    根处谱方程的相对残差 |first - second|，以根及区间端点处 |first| + |second| 的最大值为尺度

    基态 y = eta 处两项同时趋于零，只用根处两项的大小作尺度会失去意义。
    """
    terms = sge_terms(ext, np.array([bracket.lower, bracket.upper, y]), eta)
    scale = float(np.max(np.abs(terms.first) + np.abs(terms.second)))
    if scale == 0.0:
        return 0.0
    return float(abs(terms.value[2]) / scale)


def build_spectrum(eta: float, ext: ExtensionChoice, cfg: ScanConfig, p: ModelParams, n_levels: int = None,
                   mode_scale: float = 1.0, node_grid: GridSpec = None) -> SpectrumResult:
    """
    扫描谱方程、精化所有根、剔除 alpha = -k/2 处的伪根、计算节点数并组装能谱

    参数：\\
        eta: eta = -sqrt(2a) \\
        ext: 扩张类型 \\
        cfg: 扫描配置 \\
        p: 模型参数，必须与 eta 一致 \\
        n_levels: 最多保留的能级数，为None时保留窗口内的全部能级 \\
        mode_scale: 参考模的常数因子，不影响根的位置 \\
        node_grid: 节点计数网格

    返回：\\
        SpectrumResult
    """
    if abs(eta - p.eta) > 1e-12 * abs(eta):
        raise DomainError('eta=%r is inconsistent with a=%r (eta should be %r)' % (eta, p.a, p.eta))
    if mode_scale == 0.0:
        raise DomainError('reference mode scale must be nonzero')

    def equation(y):
        return mode_scale * np.asarray(sge_terms(ext, y, eta).value)

    brackets = scan_roots(equation, cfg)
    candidates = [bracket for bracket in brackets if not bracket.even_order]
    logger.info('eta=%s %s: %d sign-change brackets in [%s, %s]', format_float(eta), ext.value, len(candidates),
                format_float(cfg.y_min), format_float(cfg.y_max))
    roots = parallel_map(lambda bracket: refine_root(equation, bracket), candidates)

    accepted = []
    for bracket, y in zip(candidates, roots):
        terms = sge_terms(ext, y, eta)
        if abs(terms.bracket1) + abs(terms.bracket2) <= cfg.accept_tol:
            logger.warning('rejected artifact root at y=%s (alpha=%s)', format_float(y),
                           format_float((eta * eta - y * y) / 4.0))
            continue
        residual = root_residual(ext, eta, y, bracket)
        if residual > cfg.accept_tol:
            logger.warning('rejected root at y=%s with residual %s', format_float(y), format_float(residual, 3))
            continue
        if accepted and y - accepted[-1][0] <= cfg.refine_tol:
            continue
        accepted.append((y, residual))

    if n_levels is not None:
        if len(accepted) < n_levels:
            logger.warning('only %d of %d requested levels found below y=%s', len(accepted), n_levels,
                           format_float(cfg.y_max))
        accepted = accepted[:n_levels]

    levels = []
    for index, (y, residual) in enumerate(accepted):
        ep = EnergyPoint.from_y(y, p)
        levels.append(LevelRecord(index + 1, y, ep.e, count_nodes(ep, ext, p, node_grid), residual))

    if not levels and ext == ExtensionChoice.MINUS_IDENTITY:
        raise EmptySpectrumError('no level found for eta=%s in [%s, %s]'
                                 % (format_float(eta), format_float(cfg.y_min), format_float(cfg.y_max)))
    return SpectrumResult(eta, ext, levels)
