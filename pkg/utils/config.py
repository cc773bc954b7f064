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
加载SINVAR配置文件相关
"""

import json
import os

DEFAULT_CONFIG_FILENAME = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))),
                                       'sinvar_config.json')
THREADS_ENV_NAME = 'SINVAR_THREADS'

# 配置文件缺少某一项时使用的默认值
_DEFAULTS = {
    'version': '1.0.0',
    'specfun': {'z_threshold': 250.0, 'max_terms': 500, 'series_tol': 1e-16, 'cancellation_limit': 1e2,
                'extended_dps': 40, 'ode_min_points': 64, 'ode_rtol': 1e-12},
    'scan': {'y_min_offset': -0.5, 'y_max': 10.0, 'step': 0.02, 'refine_tol': 1e-10, 'accept_tol': 1e-8},
    'node_grid': {'eps': 1e-4, 'x_max': 6.0, 'n_points': 20000},
    'oracle_grid': {'eps': 1e-3, 'x_max': 64.0, 'n_points': 16000},
    'output': {'precision': 12, 'schema_version': '1.0'},
}

_config_dict = None


def load_config_file(filename: str = DEFAULT_CONFIG_FILENAME) -> dict:
    """
    加载json配置文件

    参数：\\
        filename: 文件名

    返回：\\
        配置信息字典
    """
    global _config_dict
    if _config_dict is not None:
        return _config_dict

    if os.path.exists(filename):
        with open(filename, 'r', encoding="utf-8") as file_pointer:
            _config_dict = json.load(file_pointer)
    else:
        _config_dict = dict()
    return _config_dict


def get_config_value(section: str, key: str = None):
    """
    读取一个配置项，配置文件中没有时返回内置默认值

    参数：\\
        section: 配置段名称，例如 'scan' \\
        key: 配置项名称，为None时返回整段（顶层标量项也用这种方式读取）
    """
    config = load_config_file()
    if key is None:
        value = config.get(section, _DEFAULTS[section])
        if isinstance(value, dict):
            merged = dict(_DEFAULTS[section])
            merged.update(value)
            return merged
        return value
    return config.get(section, dict()).get(key, _DEFAULTS[section][key])


def get_worker_count() -> int:
    """
    工作线程数，受环境变量 SINVAR_THREADS 限制
    """
    default_count = os.cpu_count() or 1
    env_value = os.environ.get(THREADS_ENV_NAME)
    if env_value is None:
        return default_count
    try:
        return max(1, min(default_count, int(env_value)))
    except ValueError:
        return default_count
