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
pytest公共夹具：按 eta 缓存谱方程能谱与有限差分能级，供多个测试文件复用
"""

import pytest

from connection_conditions import ExtensionChoice
from eigen_oracle import MATCH_X16, MATCH_MODE2, oracle_levels
from shape_invariant_model import ModelParams
from spectrum import ScanConfig, build_spectrum

EXTENSION_RULES = {
    ExtensionChoice.MINUS_IDENTITY: MATCH_X16,
    ExtensionChoice.PLUS_IDENTITY: MATCH_MODE2,
}


class _Cache:
    def __init__(self, factory):
        self._factory = factory
        self._values = {}

    def __call__(self, *key):
        if key not in self._values:
            self._values[key] = self._factory(*key)
        return self._values[key]


@pytest.fixture(scope='session')
def spectrum_for():
    """spectrum_for(eta, ext) -> 默认扫描配置下的 SpectrumResult（最多8级）"""
    def factory(eta, ext):
        return build_spectrum(eta, ext, ScanConfig.from_config(eta), ModelParams.from_eta(eta), n_levels=8)
    return _Cache(factory)


@pytest.fixture(scope='session')
def oracle_for():
    """oracle_for(eta, ext, k) -> Richardson外推后的最低 k 个有限差分能级"""
    def factory(eta, ext, k):
        return oracle_levels(ModelParams.from_eta(eta), EXTENSION_RULES[ext], k)
    return _Cache(factory)
