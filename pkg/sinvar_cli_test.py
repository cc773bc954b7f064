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
sinvar_cli.py单元测试
"""

import json
import logging

import numpy as np
import pytest
from scipy.integrate import simpson

from connection_conditions import ExtensionChoice
from sinvar_cli import main, EXIT_OK, EXIT_USAGE
from utils.ops import sign_change_indices
from utils.config import get_config_value


class _RecordingHandler(logging.Handler):
    def __init__(self):
        super().__init__()
        self.messages = []

    def emit(self, record):
        self.messages.append(record.getMessage())


@pytest.fixture
def cli_messages():
    handler = _RecordingHandler()
    logger = logging.getLogger('sinvar.cli')
    logger.addHandler(handler)
    yield handler.messages
    logger.removeHandler(handler)


def _run(tmp_path, *argv):
    out = tmp_path / 'out.txt'
    status = main(list(argv) + ['--out', str(out)])
    text = out.read_text(encoding='utf-8') if out.exists() else ''
    return status, text


def _csv_rows(text):
    lines = [line for line in text.splitlines() if not line.startswith('#')]
    return lines[0].split(','), [line.split(',') for line in lines[1:]]


class TestPotential:
    def test_1(self, tmp_path):
        status, text = _run(tmp_path, 'potential', '--a', '1', '--x-min', '0.05', '--x-max', '4', '--n', '200',
                            '--format', 'csv')
        assert status == EXIT_OK
        columns, rows = _csv_rows(text)
        assert columns == ['x', 'V', 'V_tilde', 'V_int']
        assert len(rows) == 200
        assert '# schema_version=1.0' in text
        assert '# a=1' in text

    def test_2(self, tmp_path):
        status, text = _run(tmp_path, 'potential', '--a', '1', '--x-min', '1', '--x-max', '1', '--n', '1')
        assert status == EXIT_OK
        _, rows = _csv_rows(text)
        assert rows[0][1] == '1.52777777778'

    def test_3(self, tmp_path):
        # a=2 时 x > 0 上只有一个极小值
        status, text = _run(tmp_path, 'potential', '--a', '2', '--x-min', '0.05', '--x-max', '4', '--n', '400',
                            '--format', 'json')
        assert status == EXIT_OK
        document = json.loads(text)
        v = np.array([row[1] for row in document['rows']])
        minima = np.sum((v[1:-1] < v[:-2]) & (v[1:-1] < v[2:]))
        assert minima == 1

    def test_4(self, tmp_path, cli_messages):
        status, _ = _run(tmp_path, 'potential', '--a', '0')
        assert status == EXIT_USAGE
        assert any('must be positive' in message for message in cli_messages)

    def test_5(self, tmp_path):
        status, _ = _run(tmp_path, 'potential', '--a', '1', '--x-min', '-1', '--x-max', '1', '--n', '3')
        assert status == EXIT_USAGE

    def test_6(self, tmp_path):
        status, text = _run(tmp_path, 'potential', '--a', '1', '--x-min', '-2', '--x-max', '-1', '--n', '5')
        assert status == EXIT_OK
        _, rows = _csv_rows(text)
        assert all(row[3] == '' for row in rows)


class TestSgeScan:
    def test_1(self, tmp_path):
        status, text = _run(tmp_path, 'sge-scan', '--eta', '-2', '--y-min', '-2.5', '--y-max', '6', '--n', '86',
                            '--format', 'json')
        assert status == EXIT_OK
        document = json.loads(text)
        assert len(document['rows']) == 86
        assert document['extension'] == 'MinusIdentity'
        y, value = document['rows'][5]
        assert y == -2.0
        assert abs(value) < 1e-8

    def test_2(self, tmp_path, spectrum_for):
        # 扫描表的变号位置与能谱的根相差不超过一个网格步长
        status, text = _run(tmp_path, 'sge-scan', '--eta', '-2', '--y-min', '-1.9', '--y-max', '6', '--n', '791',
                            '--format', 'json')
        assert status == EXIT_OK
        rows = np.array(json.loads(text)['rows'])
        crossings = [0.5 * (rows[i, 0] + rows[j, 0]) for i, j in sign_change_indices(rows[:, 1])]
        roots = [level.y for level in spectrum_for(-2.0, ExtensionChoice.MINUS_IDENTITY).levels if -1.9 < level.y < 6]
        crossings = [crossing for crossing in crossings if crossing <= roots[-1] + 0.01]
        assert len(crossings) == len(roots)
        for crossing, root in zip(crossings, roots):
            assert abs(crossing - root) <= 0.01


class TestSpectrum:
    def test_1(self, tmp_path):
        status, text = _run(tmp_path, 'spectrum', '--eta', '-2', '--extension', 'minus', '--n-levels', '5',
                            '--with-oracle', '--format', 'json')
        assert status == EXIT_OK
        document = json.loads(text)
        for key in ['a', 'eta', 'extension', 'schema_version', 'tool_version', 'scan']:
            assert key in document
        assert document['a'] == 2.0
        assert document['oracle']['passed'] is True
        levels = [dict(zip(document['columns'], row)) for row in document['rows']]
        assert levels[0]['y'] == pytest.approx(-2.0, abs=1e-8)
        assert [level['nodes'] for level in levels[:4]] == [0, 1, 2, 3]
        assert all(level['deviation'] <= 1e-3 for level in levels)

    def test_2(self, tmp_path):
        status, text = _run(tmp_path, 'spectrum', '--eta', '-3', '--n-levels', '2')
        assert status == EXIT_OK
        columns, rows = _csv_rows(text)
        assert columns == ['n', 'y', 'E', 'nodes', 'residual']
        assert rows[0][0] == '1' and rows[1][0] == '2'

    def test_3(self, tmp_path):
        status, _ = _run(tmp_path, 'spectrum', '--eta', '2')
        assert status == EXIT_USAGE


class TestWavefunction:
    def _table(self, tmp_path, *extra):
        status, text = _run(tmp_path, 'wavefunction', '--eta', '-2', '--format', 'json', *extra)
        assert status == EXIT_OK
        document = json.loads(text)
        rows = np.array(document['rows'])
        return document, rows[:, 0], rows[:, 1]

    def test_1(self, tmp_path):
        document, x, psi = self._table(tmp_path, '--level', '1')
        assert document['level']['nodes'] == 0
        assert np.all(psi[x < 6.0] > 0.0)
        assert simpson(psi * psi, x=x) == pytest.approx(1.0, abs=1e-6)

    def test_2(self, tmp_path):
        document, x, psi = self._table(tmp_path, '--level', '3')
        assert len(sign_change_indices(psi)) == 2 == document['level']['nodes']
        assert simpson(psi * psi, x=x) == pytest.approx(1.0, abs=1e-6)

    def test_3(self, tmp_path):
        # U = -I 时向 x < 0 奇延拓
        document, x, psi = self._table(tmp_path, '--level', '2', '--full-line')
        assert document['parity'] == 'Odd'
        half = x.shape[0] // 2
        assert np.array_equal(x[:half], -x[half:][::-1])
        assert np.array_equal(psi[:half], -psi[half:][::-1])

    def test_4(self, tmp_path):
        status, _ = _run(tmp_path, 'wavefunction', '--eta', '-2', '--level', '30', '--y-max', '0')
        assert status == EXIT_USAGE

    def test_5(self, tmp_path):
        # 离原点最近的非零采样点为正，各能级一致
        for level in ['1', '2', '3']:
            _, _, psi = self._table(tmp_path, '--level', level)
            assert psi[np.flatnonzero(psi)[0]] > 0.0


class TestVerify:
    def test_1(self, tmp_path):
        status, text = _run(tmp_path, 'verify', '--suite', 'specfun')
        assert status == EXIT_OK
        _, rows = _csv_rows(text)
        names = [row[1] for row in rows]
        assert 'recurrence_a' in names and 'recurrence_b' in names
        assert all(row[4] == 'PASS' for row in rows)

    def test_2(self, tmp_path):
        with pytest.raises(SystemExit) as info:
            main(['verify', '--suite', 'nothing'])
        assert info.value.code == 2

    def test_3(self, tmp_path):
        status, text = _run(tmp_path, 'verify', '--suite', 'specfun', '--format', 'json')
        assert status == EXIT_OK
        document = json.loads(text)
        for key in ['a', 'eta', 'extension']:
            assert key in document and document[key] is None
        assert sorted(document['scan']) == sorted(get_config_value('scan'))
        assert document['suite'] == 'specfun' and document['passed'] is True
        assert document['schema_version'] == str(get_config_value('output', 'schema_version'))
