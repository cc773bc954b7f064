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
日志输出，格式与 [SINVAR Info] 风格的提示保持一致
"""

import logging
import sys

LOG_FORMAT = '[SINVAR %(levelname)s] %(name)s: %(message)s'


def get_logger(name: str, level: int = logging.INFO) -> logging.Logger:
    """
    获取带有统一格式的logger，同名logger只挂载一次handler

    参数：\\
        name: logger名称，一般为模块名 \\
        level: 日志级别

    返回：\\
        logging.Logger实例
    """
    logger = logging.getLogger('sinvar.' + name)
    if not logger.handlers:
        handler = logging.StreamHandler(sys.stderr)
        handler.setFormatter(logging.Formatter(LOG_FORMAT))
        logger.addHandler(handler)
        logger.setLevel(level)
        logger.propagate = False
    return logger
