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
spectrum.py单元测试
"""

import dataclasses

import numpy as np
import pytest

import spectrum
from connection_conditions import ExtensionChoice, sge_minus
from eigen_oracle import GridSpec, MATCH_X16, cross_validate, oracle_levels
from shape_invariant_model import ModelParams, EnergyPoint, SolutionBranch, phi, decay_coefficients, wavefunction
from spectrum import ScanConfig, Bracket, scan_roots, refine_root, count_nodes, build_spectrum, node_grid_points
from utils.errors import BracketInvalid, DomainError, GridTooCoarse

MINUS = ExtensionChoice.MINUS_IDENTITY
PLUS = ExtensionChoice.PLUS_IDENTITY


def _config(y_min, y_max, step):
    return ScanConfig(y_min, y_max, step, 1e-10, 1e-8)


def _decay_window(ep: EnergyPoint, p: ModelParams) -> np.ndarray:
    """最外侧经典转折点之后、Psi 仍高于舍入噪声的一段 x"""
    e = ep.e
    t_turn = 0.0
    if e > 0.0 and e * e >= 4.0 * p.c0:
        t_turn = 0.5 * (e + np.sqrt(e * e - 4.0 * p.c0))
    t_low = max(np.cbrt(9.0), t_turn + 0.5)
    return np.linspace(t_low, t_low + 1.5, 61) ** 1.5


class TestScanConfig:
    def test_1(self):
        cfg = ScanConfig.from_config(-2.0)
        assert cfg.y_min == pytest.approx(-2.5)
        assert cfg.y_max == pytest.approx(10.0)
        assert cfg.step == pytest.approx(0.02)

    def test_2(self):
        with pytest.raises(DomainError):
            _config(1.0, 1.0, 0.1)
        with pytest.raises(DomainError):
            _config(0.0, 1.0, -0.1)

    def test_3(self):
        cfg = ScanConfig.from_config(-3.0, y_min=-6.0)
        assert cfg.y_min == -6.0
        assert cfg.samples()[0] == -6.0


class TestScanRoots:
    def test_1(self):
        brackets = scan_roots(lambda y: y - 1.0, _config(0.0, 2.0, 0.1))
        assert len(brackets) == 1
        assert brackets[0].lower <= 1.0 <= brackets[0].upper
        assert brackets[0].upper - brackets[0].lower <= 0.1 + 1e-12
        assert not brackets[0].even_order

    def test_2(self):
        # 偶数重根不变号，只被标记
        for step in [0.1, 0.15]:
            brackets = scan_roots(lambda y: (y - 1.0) ** 2, _config(0.0, 2.0, step))
            assert len(brackets) >= 1
            assert all(bracket.even_order for bracket in brackets)
            assert any(bracket.lower <= 1.0 <= bracket.upper for bracket in brackets)

    def test_3(self):
        brackets = scan_roots(np.sin, _config(0.5, 10.0, 0.1))
        assert len(brackets) == 3
        for bracket, root in zip(brackets, [np.pi, 2.0 * np.pi, 3.0 * np.pi]):
            assert bracket.lower < root < bracket.upper

    def test_4(self):
        brackets = scan_roots(lambda y: sge_minus(y, -2.0), _config(-2.5, 8.0, 0.02))
        assert len([bracket for bracket in brackets if not bracket.even_order]) >= 6

    def test_5(self):
        cfg = _config(-2.5, 8.0, 0.02)
        assert scan_roots(lambda y: sge_minus(y, -2.0), cfg) == scan_roots(lambda y: sge_minus(y, -2.0), cfg)


class TestRefineRoot:
    def test_1(self):
        assert refine_root(lambda y: y * y - 2.0, Bracket(1.0, 2.0)) == pytest.approx(np.sqrt(2.0), abs=1e-12)

    def test_2(self):
        assert refine_root(np.sin, Bracket(3.0, 4.0)) == pytest.approx(np.pi, abs=1e-12)

    def test_3(self):
        with pytest.raises(BracketInvalid):
            refine_root(lambda y: y * y - 2.0, Bracket(2.0, 3.0))

    def test_4(self):
        assert refine_root(lambda y: y - 0.5, Bracket(0.5, 0.5, 0.0, 0.0)) == 0.5

    def test_5(self):
        # eta = -3 的基态 y1 = eta
        brackets = scan_roots(lambda y: sge_minus(y, -3.0), ScanConfig.from_config(-3.0))
        first = [bracket for bracket in brackets if not bracket.even_order][0]
        assert refine_root(lambda y: sge_minus(y, -3.0), first) == pytest.approx(-3.0, abs=1e-9)

    def test_6(self):
        # 记录的端点值优先于重新求值
        bracket = Bracket(0.0, 2.0, -1.0, 1.0)
        assert refine_root(lambda y: y - 1.0, bracket) == pytest.approx(1.0, abs=1e-12)


class TestCountNodes:
    def test_1(self):
        p = ModelParams.from_eta(-2.0)
        assert count_nodes(EnergyPoint.from_y(-2.0, p), MINUS, p) == 0

    def test_2(self):
        grid = GridSpec(1e-4, 6.0, 1000)
        x = node_grid_points(grid, 10.0)
        assert x.shape[0] == 1000
        assert x[0] == pytest.approx(1e-4)
        assert x[-1] == pytest.approx(13.0 ** 1.5)
        assert np.all(np.diff(x) > 0.0)

    def test_3(self, monkeypatch):
        monkeypatch.setattr(spectrum, 'wavefunction', lambda ep, p, x: (np.sin(50.0 * x), np.ones_like(x)))
        p = ModelParams.from_eta(-2.0)
        with pytest.raises(GridTooCoarse):
            count_nodes(EnergyPoint.from_y(-2.0, p), MINUS, p, GridSpec(1e-4, 6.0, 100))

    def test_4(self, monkeypatch):
        # 低于噪声下限的点不计入节点
        monkeypatch.setattr(spectrum, 'wavefunction',
                            lambda ep, p, x: (np.where(x < 2.0, np.cos(x), 1e-14 * np.sin(40.0 * x)), np.ones_like(x)))
        p = ModelParams.from_eta(-2.0)
        assert count_nodes(EnergyPoint.from_y(-2.0, p), MINUS, p) == 1


class TestBuildSpectrum:
    def test_1(self, spectrum_for):
        # 基态 y1 = eta
        for eta in [-2.0, -3.0]:
            result = spectrum_for(eta, MINUS)
            assert result.levels[0].y == pytest.approx(eta, abs=1e-8)
            assert result.levels[0].nodes == 0
            assert result.levels[0].n == 1

    def test_2(self, spectrum_for):
        result = spectrum_for(-2.0, MINUS)
        assert [level.nodes for level in result.levels[:4]] == [0, 1, 2, 3]
        assert all(level.nodes == level.n - 1 for level in result.levels)

    def test_3(self, spectrum_for):
        for eta in [-2.0, -3.0]:
            result = spectrum_for(eta, MINUS)
            ys = [level.y for level in result.levels]
            assert np.all(np.diff(ys) > 0.0)
            for level in result.levels:
                assert level.e == 2.0 * np.sqrt(2.0) * level.y / np.sqrt(3.0)
                assert level.residual <= 1e-8

    def test_4(self, spectrum_for, oracle_for):
        # 最低6个能级与有限差分结果一致
        for eta in [-2.0, -3.0]:
            report = cross_validate(spectrum_for(eta, MINUS), oracle_for(eta, MINUS, 6), 1e-3)
            assert len(report.rows) == 6
            assert report.passed, report.to_text()

    def test_5(self, spectrum_for, oracle_for):
        # U=+I 的能谱由 MatchMode2 边界条件检验
        result = spectrum_for(-2.0, PLUS)
        assert len(result.levels) >= 4
        report = cross_validate(result, oracle_for(-2.0, PLUS, 4), 1e-3)
        assert len(report.rows) == 4
        assert report.passed, report.to_text()

    def test_6(self):
        # 基态以下没有深能级
        eta = -2.0
        cfg = ScanConfig.from_config(eta, y_min=eta - 3.0, y_max=eta + 0.5)
        result = build_spectrum(eta, MINUS, cfg, ModelParams.from_eta(eta))
        assert all(level.y >= eta - 1e-6 for level in result.levels)
        assert result.levels[0].y == pytest.approx(eta, abs=1e-8)

    def test_7(self, spectrum_for):
        # 参考模乘以常数不改变根
        eta = -2.0
        cfg = ScanConfig.from_config(eta, y_max=4.0)
        scaled = build_spectrum(eta, MINUS, cfg, ModelParams.from_eta(eta), mode_scale=7.0)
        reference = spectrum_for(eta, MINUS)
        for level in scaled.levels:
            assert level.y == pytest.approx(reference.levels[level.n - 1].y, abs=cfg.refine_tol)

    def test_8(self, spectrum_for):
        # gamma 组合在转折点之外衰减，gamma 偏离10%时出现增长
        p = ModelParams.from_eta(-2.0)
        for level in spectrum_for(-2.0, MINUS).levels[:3]:
            ep = EnergyPoint.from_y(level.y, p)
            x = _decay_window(ep, p)
            psi, _ = wavefunction(ep, p, x)
            assert np.all(np.diff(np.abs(psi)) < 0.0)
        for level in spectrum_for(-2.0, MINUS).levels[1:3]:
            ep = EnergyPoint.from_y(level.y, p)
            x = _decay_window(ep, p)
            n1, n2 = decay_coefficients(ep)
            perturbed = 1.1 * n1 * phi(SolutionBranch.PHI1, x, ep, p) + n2 * phi(SolutionBranch.PHI2, x, ep, p)
            assert abs(perturbed[-1]) > abs(perturbed[0])

    def test_9(self, spectrum_for):
        eta = -2.0
        cfg = ScanConfig.from_config(eta)
        second = build_spectrum(eta, MINUS, cfg, ModelParams.from_eta(eta), n_levels=8)
        assert second.levels == spectrum_for(eta, MINUS).levels

    def test_10(self):
        with pytest.raises(DomainError):
            build_spectrum(-2.0, MINUS, ScanConfig.from_config(-2.0), ModelParams.from_eta(-3.0))

    def test_11(self):
        # 整个默认扫描窗口内的所有能级都与有限差分结果一致，没有伪根
        eta = -2.0
        p = ModelParams.from_eta(eta)
        result = build_spectrum(eta, MINUS, ScanConfig.from_config(eta), p)
        assert len(result.levels) >= 8
        assert result.levels[-1].y <= 10.0
        assert all(level.nodes == level.n - 1 for level in result.levels)
        report = cross_validate(result, oracle_levels(p, MATCH_X16, len(result.levels)), 1e-3)
        assert len(report.rows) == len(result.levels)
        assert report.passed, report.to_text()

    def test_12(self, spectrum_for):
        # SpectrumResult 只有 eta、extension 与 levels，按 n 查找能级
        result = spectrum_for(-2.0, MINUS)
        assert [item.name for item in dataclasses.fields(result)] == ['eta', 'extension', 'levels']
        assert result.level(1) is result.levels[0]
        assert result.level(len(result.levels) + 1) is None
