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
一些常用操作函数的定义：差分模板、符号变化计数、数值格式化
"""

import numpy as np

from utils.errors import GridTooSmall

# 四阶中心差分模板
_FIRST_DERIVATIVE_STENCIL = np.array([1.0, -8.0, 0.0, 8.0, -1.0]) / 12.0
_SECOND_DERIVATIVE_STENCIL = np.array([-1.0, 16.0, -30.0, 16.0, -1.0]) / 12.0


def _apply_stencil(values, stencil, step: float, power: int) -> np.ndarray:
    values = np.asarray(values, dtype=np.float64)
    if values.shape[0] < 5:
        raise GridTooSmall('at least 5 grid points are required, got %d' % values.shape[0])
    count = values.shape[0] - 4
    result = np.zeros(count, dtype=np.float64)
    for offset, weight in enumerate(stencil):
        if weight != 0.0:
            result += weight * values[offset:offset + count]
    return result / step ** power


def central_first_derivative(values, step: float) -> np.ndarray:
    """
    均匀网格上的四阶中心差分一阶导数，返回去掉两端各2个点后的内部值
    """
    return _apply_stencil(values, _FIRST_DERIVATIVE_STENCIL, step, 1)


def central_second_derivative(values, step: float) -> np.ndarray:
    """
    均匀网格上的四阶中心差分二阶导数，返回去掉两端各2个点后的内部值
    """
    return _apply_stencil(values, _SECOND_DERIVATIVE_STENCIL, step, 2)


def sign_change_indices(values, mask=None) -> list:
    """
    计算序列中严格符号变化的位置

    参数：\\
        values: 采样值序列 \\
        mask: 可选的布尔序列，为False的采样点被跳过（例如被舍入噪声淹没的点）

    返回：\\
        列表，每个元素 (i, j) 表示 values[i] 与 values[j] 异号，且两者之间没有其他有效点
    """
    values = np.asarray(values, dtype=np.float64)
    if mask is None:
        mask = np.ones(values.shape, dtype=bool)
    changes = []
    last_index = None
    for index in np.flatnonzero(np.asarray(mask) & (values != 0.0)):
        if last_index is not None and values[index] * values[last_index] < 0.0:
            changes.append((int(last_index), int(index)))
        last_index = index
    return changes


def format_float(value: float, precision: int = 12) -> str:
    """
    按有效数字格式化浮点数，与locale无关
    """
    if value is None:
        return ''
    return '%.*g' % (precision, float(value))
