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
SINVAR异常类型定义
"""


class SinvarError(Exception):
    """
    SINVAR所有异常的基类
    """

    def __init__(self, message: str):
        super().__init__('[SINVAR] ' + message)


class PoleError(SinvarError):
    """Gamma函数或Kummer函数参数落在极点上"""


class ConvergenceError(SinvarError):
    """级数或迭代在给定项数内未达到精度"""


class SingularPointError(SinvarError):
    """在奇点 x = 0 处求值"""


class DomainError(SinvarError):
    """参数超出定义域，例如 a <= 0"""


class GridTooSmall(SinvarError):
    """网格点数不足以使用差分模板"""


class GridTooCoarse(SinvarError):
    """网格无法分辨相邻的节点"""


class BracketInvalid(SinvarError):
    """求根区间两端函数值同号"""


class CountMismatch(SinvarError):
    """两组能级在重叠窗口内的个数不一致"""


class LevelNotFound(SinvarError):
    """请求的能级不在已计算的谱中"""


class EmptySpectrumError(SinvarError):
    """U=-I 时扫描窗口内没有找到任何能级"""
