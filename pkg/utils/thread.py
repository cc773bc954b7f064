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
SINVAR多线程辅助函数：按输入顺序合并结果的并行映射
"""

from concurrent import futures

from utils.config import get_worker_count


def parallel_map(func, items, max_workers: int = None) -> list:
    """
    在线程池中对每个元素调用 func，结果按输入顺序返回

    参数：\\
        func: 单参数函数，不能修改共享状态 \\
        items: 输入序列 \\
        max_workers: 最大线程数，为None时使用 get_worker_count()

    返回：\\
        结果列表，与 items 一一对应
    """
    items = list(items)
    if max_workers is None:
        max_workers = get_worker_count()
    if max_workers <= 1 or len(items) <= 1:
        return [func(item) for item in items]
    with futures.ThreadPoolExecutor(max_workers=min(max_workers, len(items))) as executor:
        return list(executor.map(func, items))
