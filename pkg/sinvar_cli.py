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
SINVAR命令行程序：势函数表、谱方程扫描表、能谱、波函数与不变量校验

退出码：0 成功，1 校验或交叉验证失败，2 参数错误
"""

import csv
import json
import sys
from argparse import ArgumentParser, ArgumentDefaultsHelpFormatter
from enum import Enum

import numpy as np
from scipy.integrate import simpson

from connection_conditions import ExtensionChoice, EXTENSION_MODES, Parity, sge_terms
from eigen_oracle import GridSpec, MATCH_X16, MATCH_MODE2, oracle_levels, cross_validate
from shape_invariant_model import (ModelParams, EnergyPoint, potential_v, potential_v_tilde,
                                   potential_intermediate, wavefunction)
from spectrum import ScanConfig, build_spectrum, node_grid_points, NOISE_FLOOR
from utils.config import get_config_value
from utils.errors import SinvarError, DomainError, PoleError, SingularPointError, LevelNotFound, GridTooSmall
from utils.logger import get_logger
from utils.ops import format_float
from verification import VerifySuite, run_suite

logger = get_logger('cli')

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2

EXTENSION_ARGS = {
    'minus': ExtensionChoice.MINUS_IDENTITY,
    'plus': ExtensionChoice.PLUS_IDENTITY,
}
BOUNDARY_RULES = {
    ExtensionChoice.MINUS_IDENTITY: MATCH_X16,
    ExtensionChoice.PLUS_IDENTITY: MATCH_MODE2,
}
ORACLE_REL_TOL = 1e-3

# 输入参数有误时的异常，映射为退出码2
USAGE_ERRORS = (DomainError, PoleError, SingularPointError, LevelNotFound, GridTooSmall)


class OutputFormat(Enum):
    CSV = 'csv'
    JSON = 'json'


class OutputRecord:
    """
    一份输出文档：可复现性头信息、列名与数据行

    参数：\\
        header: 头信息字典 \\
        columns: 列名列表 \\
        rows: 数据行，每行与 columns 对应
    """

    def __init__(self, header: dict, columns: list, rows: list):
        self.header = header
        self.columns = columns
        self.rows = rows

    @staticmethod
    def _cell(value, precision: int):
        if isinstance(value, dict):
            return {key: OutputRecord._cell(item, precision) for key, item in value.items()}
        if isinstance(value, (float, np.floating)):
            return float(format_float(value, precision))
        if isinstance(value, np.integer):
            return int(value)
        return value

    def to_json(self, precision: int) -> str:
        document = self._cell(self.header, precision)
        document['columns'] = self.columns
        document['rows'] = [[self._cell(value, precision) for value in row] for row in self.rows]
        return json.dumps(document, sort_keys=True, indent=2)

    def write_csv(self, stream, precision: int):
        for key in sorted(self.header):
            value = self.header[key]
            if isinstance(value, dict):
                for sub_key in sorted(value):
                    stream.write('# %s.%s=%s\n' % (key, sub_key, self._text(value[sub_key], precision)))
            else:
                stream.write('# %s=%s\n' % (key, self._text(value, precision)))
        writer = csv.writer(stream, lineterminator='\n')
        writer.writerow(self.columns)
        for row in self.rows:
            writer.writerow([self._text(value, precision) for value in row])

    @staticmethod
    def _text(value, precision: int) -> str:
        if value is None:
            return ''
        if isinstance(value, (float, np.floating)):
            return format_float(value, precision)
        return str(value)


def _scan_header(cfg: ScanConfig) -> dict:
    return {'y_min': cfg.y_min, 'y_max': cfg.y_max, 'step': cfg.step,
            'refine_tol': cfg.refine_tol, 'accept_tol': cfg.accept_tol}


def make_header(p: ModelParams = None, ext: ExtensionChoice = None, cfg: ScanConfig = None) -> dict:
    """
    可复现性头信息：a、eta、扩张类型、数据格式版本、程序版本与扫描配置

    p 为None时（verify 的检查跨越多组参数）a、eta 为空，scan 给出配置文件中的原始扫描段。
    """
    if p is None:
        scan = dict(get_config_value('scan'))
    else:
        scan = _scan_header(ScanConfig.from_config(p.eta) if cfg is None else cfg)
    return {
        'a': p.a if p is not None else None,
        'eta': p.eta if p is not None else None,
        'extension': ext.value if ext is not None else None,
        'schema_version': str(get_config_value('output', 'schema_version')),
        'tool_version': str(get_config_value('version')),
        'scan': scan,
    }


def cmd_potential(args) -> tuple:
    """V、V~ 与 V_Int 的采样表，V_Int 只在 x > 0 上给出"""
    p = ModelParams(a=args.a)
    if args.n < 1:
        raise DomainError('--n must be at least 1, got %r' % (args.n,))
    x = np.linspace(args.x_min, args.x_max, args.n)
    v = potential_v(x, p)
    v_tilde = potential_v_tilde(x, p)
    positive = x > 0.0
    v_int = np.full(x.shape, np.nan)
    if np.any(positive):
        v_int[positive] = potential_intermediate(x[positive], p)
    rows = [[x[i], v[i], v_tilde[i], v_int[i] if positive[i] else None] for i in range(x.shape[0])]
    return OutputRecord(make_header(p), ['x', 'V', 'V_tilde', 'V_int'], rows), EXIT_OK


def cmd_sge_scan(args) -> tuple:
    """正则化谱方程左端在 y 网格上的取值"""
    p = ModelParams.from_eta(args.eta)
    ext = EXTENSION_ARGS[args.extension]
    y_min = args.eta - 0.5 if args.y_min is None else args.y_min
    y_max = float(get_config_value('scan', 'y_max')) if args.y_max is None else args.y_max
    if not y_min < y_max or args.n < 2:
        raise DomainError('sge-scan needs y_min < y_max and n >= 2, got [%r, %r], n=%r' % (y_min, y_max, args.n))
    y = np.linspace(y_min, y_max, args.n)
    values = np.asarray(sge_terms(ext, y, args.eta).value)
    rows = [[y[i], values[i]] for i in range(y.shape[0])]
    return OutputRecord(make_header(p, ext), ['y', 'sge'], rows), EXIT_OK


def cmd_spectrum(args) -> tuple:
    """
    能谱表，--with-oracle 时附加有限差分结果与相对偏差，交叉验证失败时退出码为1
    """
    p = ModelParams.from_eta(args.eta)
    ext = EXTENSION_ARGS[args.extension]
    cfg = ScanConfig.from_config(args.eta, y_max=args.y_max)
    result = build_spectrum(args.eta, ext, cfg, p, n_levels=args.n_levels)
    header = make_header(p, ext, cfg)
    columns = ['n', 'y', 'E', 'nodes', 'residual']
    rows = [[level.n, level.y, level.e, level.nodes, level.residual] for level in result.levels]
    status = EXIT_OK

    if args.with_oracle:
        oracle = oracle_levels(p, BOUNDARY_RULES[ext], len(result.levels))
        report = cross_validate(result, oracle, ORACLE_REL_TOL)
        columns += ['y_oracle', 'deviation']
        for row, level in zip(rows, oracle):
            row += [level.y, None]
        for validation_row in report.rows:
            rows[validation_row.n - 1][-1] = validation_row.deviation
        header['oracle'] = {'rel_tol': ORACLE_REL_TOL, 'passed': report.passed,
                            'max_deviation': report.max_deviation}
        for line in report.to_text().split('\n'):
            logger.info(line)
        if not report.passed:
            status = EXIT_FAILED
    return OutputRecord(header, columns, rows), status


def normalized_wavefunction(ep: EnergyPoint, p: ModelParams, x) -> np.ndarray:
    """
    归一化的衰减解，舍入噪声下的采样点置零，半直线上 simpson 积分的 L2 范数为1

    符号约定：离原点最近的非零采样点为正。
    """
    psi, floor = wavefunction(ep, p, x)
    psi = np.where(np.abs(psi) > NOISE_FLOOR * floor, psi, 0.0)
    norm = np.sqrt(simpson(psi * psi, x=x))
    if not norm > 0.0:
        raise DomainError('wavefunction vanishes on the requested grid')
    first = np.flatnonzero(psi)[0]
    if psi[first] < 0.0:
        norm = -norm
    return psi / norm


def cmd_wavefunction(args) -> tuple:
    """
    第 level 级的归一化波函数表，--full-line 时按扩张的宇称延拓到 x < 0
    """
    p = ModelParams.from_eta(args.eta)
    ext = EXTENSION_ARGS[args.extension]
    if args.level < 1:
        raise DomainError('--level is 1-based, got %r' % (args.level,))
    cfg = ScanConfig.from_config(args.eta, y_max=args.y_max)
    result = build_spectrum(args.eta, ext, cfg, p, n_levels=args.level)
    record = result.level(args.level)
    if record is None:
        raise LevelNotFound('level %d not found below y=%s (%d levels found)'
                            % (args.level, format_float(cfg.y_max), len(result.levels)))

    base = GridSpec.from_config('node_grid')
    grid = GridSpec(base.eps, base.x_max if args.x_max is None else args.x_max, args.n)
    ep = EnergyPoint.from_y(record.y, p)
    x = node_grid_points(grid, ep.e if args.x_max is None else None)
    psi = normalized_wavefunction(ep, p, x)

    header = make_header(p, ext, cfg)
    header['level'] = {'n': record.n, 'y': record.y, 'E': record.e, 'nodes': record.nodes}
    parity = EXTENSION_MODES[ext].parity
    header['parity'] = parity.value
    if args.full_line:
        sign = -1.0 if parity == Parity.ODD else 1.0
        x = np.concatenate([-x[::-1], x])
        psi = np.concatenate([sign * psi[::-1], psi])
    rows = [[x[i], psi[i]] for i in range(x.shape[0])]
    return OutputRecord(header, ['x', 'psi'], rows), EXIT_OK


def cmd_verify(args) -> tuple:
    """不变量校验，全部通过时退出码为0"""
    results = run_suite(VerifySuite(args.suite))
    passed = all(result.passed for result in results)
    header = make_header()
    header['suite'] = args.suite
    header['passed'] = passed
    rows = [[result.suite, result.name, result.measured, result.tolerance, 'PASS' if result.passed else 'FAIL']
            for result in results]
    for result in results:
        logger.info(result.to_text())
    return (OutputRecord(header, ['suite', 'check', 'measured', 'tolerance', 'status'], rows),
            EXIT_OK if passed else EXIT_FAILED)


def _add_common(parser: ArgumentParser, with_extension: bool = True):
    parser.add_argument('--format', default='csv', choices=[item.value for item in OutputFormat],
                        help='output format')
    parser.add_argument('--out', default=None, help='output file, stdout when omitted')
    if with_extension:
        parser.add_argument('--eta', type=float, default=-2.0, help='eta = -sqrt(2a), must be negative')
        parser.add_argument('--extension', default='minus', choices=sorted(EXTENSION_ARGS),
                            help='self-adjoint extension U = -I (minus) or U = +I (plus)')


def build_parser() -> ArgumentParser:
    parser = ArgumentParser(description='SINVAR Shape Invariant Spectrum Tool',
                            formatter_class=ArgumentDefaultsHelpFormatter)
    commands = parser.add_subparsers(dest='command', required=True)

    potential = commands.add_parser('potential', help='sample V, V~ and V_Int',
                                    formatter_class=ArgumentDefaultsHelpFormatter)
    potential.add_argument('--a', type=float, default=1.0, help='shape invariance parameter, a > 0')
    potential.add_argument('--x-min', type=float, default=0.05, help='left end of the x grid')
    potential.add_argument('--x-max', type=float, default=4.0, help='right end of the x grid')
    potential.add_argument('--n', type=int, default=200, help='number of samples')
    _add_common(potential, with_extension=False)
    potential.set_defaults(handler=cmd_potential)

    scan = commands.add_parser('sge-scan', help='tabulate the regularized spectral equation',
                               formatter_class=ArgumentDefaultsHelpFormatter)
    scan.add_argument('--y-min', type=float, default=None, help='lower end of the y grid, eta - 0.5 when omitted')
    scan.add_argument('--y-max', type=float, default=None, help='upper end of the y grid')
    scan.add_argument('--n', type=int, default=500, help='number of samples')
    _add_common(scan)
    scan.set_defaults(handler=cmd_sge_scan)

    spectrum = commands.add_parser('spectrum', help='solve the spectral equation for the discrete levels',
                                   formatter_class=ArgumentDefaultsHelpFormatter)
    spectrum.add_argument('--n-levels', type=int, default=None, help='maximum number of levels')
    spectrum.add_argument('--y-max', type=float, default=None, help='upper end of the scan window')
    spectrum.add_argument('--with-oracle', action='store_true', help='cross-validate against the finite-difference solver')
    _add_common(spectrum)
    spectrum.set_defaults(handler=cmd_spectrum)

    wave = commands.add_parser('wavefunction', help='tabulate the normalized wavefunction of one level',
                               formatter_class=ArgumentDefaultsHelpFormatter)
    wave.add_argument('--level', type=int, default=1, help='1-based level index')
    wave.add_argument('--y-max', type=float, default=None, help='upper end of the scan window')
    wave.add_argument('--x-max', type=float, default=None, help='right end of the grid, chosen from E when omitted')
    wave.add_argument('--n', type=int, default=2000, help='number of samples on the half-line')
    wave.add_argument('--full-line', action='store_true', help='extend to x < 0 with the parity of the extension')
    _add_common(wave)
    wave.set_defaults(handler=cmd_wavefunction)

    verify = commands.add_parser('verify', help='run the invariant suites',
                                 formatter_class=ArgumentDefaultsHelpFormatter)
    verify.add_argument('--suite', default='all', choices=[item.value for item in VerifySuite], help='suite to run')
    _add_common(verify, with_extension=False)
    verify.set_defaults(handler=cmd_verify)
    return parser


def write_output(record: OutputRecord, output_format: OutputFormat, out: str = None):
    precision = int(get_config_value('output', 'precision'))
    stream = sys.stdout if out is None else open(out, 'w', encoding='utf-8', newline='')
    try:
        if output_format == OutputFormat.JSON:
            stream.write(record.to_json(precision))
            stream.write('\n')
        else:
            record.write_csv(stream, precision)
    finally:
        if out is not None:
            stream.close()


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        record, status = args.handler(args)
    except USAGE_ERRORS as error:
        logger.error(str(error))
        return EXIT_USAGE
    except SinvarError as error:
        logger.error(str(error))
        return EXIT_FAILED
    write_output(record, OutputFormat(args.format), args.out)
    return status


if __name__ == '__main__':
    sys.exit(main())
