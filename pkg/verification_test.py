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
verification.py单元测试
"""

import numpy as np

from shape_invariant_model import ModelParams, potential_v_tilde
from verification import (CheckResult, VerifySuite, run_suite, check_ground_state, check_wronskian_limits,
                          check_shape_invariance)


class TestCheckResult:
    def test_1(self):
        result = CheckResult('specfun', 'recurrence_a', 3.2e-13, 1e-9)
        assert result.passed
        assert result.to_text() == '[PASS] specfun.recurrence_a: measured 3.2e-13 (tolerance 1e-09)'

    def test_2(self):
        assert not CheckResult('sge', 'ground_state', 1e-6, 1e-8).passed
        assert not CheckResult('sge', 'ground_state', np.inf, 1e-8).passed
        assert CheckResult('model', 'potential_evenness', 0.0, 0.0).passed


class TestSuites:
    def test_1(self):
        results = run_suite(VerifySuite.SPECFUN)
        names = [result.name for result in results]
        assert 'recurrence_a' in names and 'recurrence_b' in names
        assert all(result.passed for result in results), '\n'.join(result.to_text() for result in results)

    def test_2(self):
        results = run_suite(VerifySuite.MODEL)
        shape = [result for result in results if result.name == 'shape_invariance'][0]
        assert shape.measured < 1e-12
        assert all(result.passed for result in results), '\n'.join(result.to_text() for result in results)

    def test_3(self):
        results = run_suite(VerifySuite.SGE)
        assert all(result.passed for result in results), '\n'.join(result.to_text() for result in results)

    def test_4(self):
        assert check_ground_state().measured <= 1e-8
        assert check_wronskian_limits().passed

    def test_5(self):
        # 固定种子，结果可重复
        first = [result.measured for result in run_suite(VerifySuite.SPECFUN)]
        second = [result.measured for result in run_suite(VerifySuite.SPECFUN)]
        assert first == second

    def test_6(self):
        # 残差按 1 + |V~| 归一化；x = 1e-3 处一个ulp已超过绝对界 1e-12
        result = check_shape_invariance()
        assert result.passed and result.tolerance == 1e-12
        magnitude = abs(potential_v_tilde(1e-3, ModelParams(a=4.5)))
        assert magnitude * np.finfo(np.float64).eps > 1e-12
