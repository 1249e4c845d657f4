"""
テキスト形式の入出力

JordanVector:
    jordan-v1 <kind> d=<d|-> n=<n|-> cols=<c>
    weights: w1 ... wn          （spin で重みが既定以外のときのみ）
    <パック座標1行ぶん、列を半角スペース区切り>
    ...

ResidualReport:
    residual-v1 <identity> <kind> d=<d|-> n=<n|-> trials=<t> seed=<s|->
    max_abs: <x>
    <試行ごとの最大値を1行ずつ>

実数は最短の往復可能な10進表記（repr）。整数値は末尾の ".0" を省く。
"""

import logging
import math

import numpy as np

from jordan_elements import AlgebraShape, JordanVector, Kind
from jordan_errors import ParseError, ShapeError, ValidationError
from residual_report import ResidualReport

logger = logging.getLogger(__name__)

VECTOR_MAGIC = 'jordan-v1'
REPORT_MAGIC = 'residual-v1'


def format_real(value):
    """最短往復表記（非有限値は拒否）"""
    value = float(value)
    if not math.isfinite(value):
        raise ValidationError(f"非有限値は書き出せません: {value}")
    text = repr(value)
    if text.endswith('.0'):
        text = text[:-2]
    return text


def _parse_real(token, line_number):
    try:
        value = float(token)
    except ValueError:
        raise ParseError(f"数値ではありません: '{token}'", line_number=line_number)
    if not math.isfinite(value):
        raise ParseError(f"非有限値は読み込めません: '{token}'", line_number=line_number)
    return value


def _shape_fields(shape):
    d = '-' if shape.d is None else str(shape.d)
    n = '-' if shape.n is None else str(shape.n)
    return f"d={d} n={n}"


def render(v):
    """JordanVector をテキストにする"""
    shape = v.shape
    lines = [f"{VECTOR_MAGIC} {shape.kind.value} {_shape_fields(shape)} cols={v.n_columns}"]
    if shape.kind is Kind.SPIN and any(w != 1.0 for w in shape.ip_weights):
        lines.append('weights: ' + ' '.join(format_real(w) for w in shape.ip_weights))
    for row in v.block:
        lines.append(' '.join(format_real(value) for value in row))
    return '\n'.join(lines) + '\n'


def _field(token, name, line_number, optional=True):
    prefix = f"{name}="
    if not token.startswith(prefix):
        raise ParseError(f"'{name}=' が必要です: '{token}'", line_number=line_number)
    raw = token[len(prefix):]
    if raw == '-' and optional:
        return None
    try:
        return int(raw)
    except ValueError:
        raise ParseError(f"{name} が整数ではありません: '{raw}'", line_number=line_number)


def _parse_shape(kind_token, d_token, n_token, line_number, weights=None):
    d = _field(d_token, 'd', line_number)
    n = _field(n_token, 'n', line_number)
    try:
        return AlgebraShape(Kind.parse(kind_token), d=d, n=n, ip_weights=weights)
    except ShapeError as e:
        raise ParseError(str(e), line_number=line_number)


def parse(text):
    """テキストから JordanVector を読み込む"""
    lines = text.splitlines()
    if not lines:
        raise ParseError("空の入力です", line_number=1)
    header = lines[0].split(' ')
    if len(header) != 5 or header[0] != VECTOR_MAGIC:
        raise ParseError(f"ヘッダーが不正です: '{lines[0]}'", line_number=1)
    cols = _field(header[4], 'cols', 1, optional=False)
    if cols < 1:
        raise ParseError(f"cols は 1 以上が必要です: {cols}", line_number=1)

    body_start = 1
    weights = None
    if len(lines) > 1 and lines[1].startswith('weights:'):
        weights = [_parse_real(tok, 2) for tok in lines[1][len('weights:'):].split()]
        body_start = 2
    shape = _parse_shape(header[1], header[2], header[3], 1, None)
    if weights is not None:
        shape = _parse_shape(header[1], header[2], header[3], 2, weights)

    rows = lines[body_start:]
    while rows and rows[-1] == '':
        rows.pop()
    expected = shape.packed_length
    if len(rows) != expected:
        raise ParseError(f"行数が一致しません: {len(rows)} 行（期待値 {expected} 行）",
                         line_number=body_start + len(rows) + 1, expected=expected)

    block = np.empty((expected, cols))
    for offset, row in enumerate(rows):
        line_number = body_start + offset + 1
        tokens = row.split(' ')
        if len(tokens) != cols:
            raise ParseError(f"列数が一致しません: {len(tokens)} 列（期待値 {cols} 列）",
                             line_number=line_number, expected=cols)
        block[offset] = [_parse_real(tok, line_number) for tok in tokens]
    logger.debug(f"Parsed {shape.label()} vector with {cols} columns")
    return JordanVector(shape, block)


def render_report(report):
    """ResidualReport をテキストにする"""
    seed = '-' if report.seed is None else str(report.seed)
    lines = [f"{REPORT_MAGIC} {report.identity_name} {report.kind.value} {_shape_fields(report.shape)} "
             f"trials={report.trials} seed={seed}",
             f"max_abs: {format_real(report.max_abs)}"]
    lines.extend(format_real(v) for v in report.per_trial_max)
    return '\n'.join(lines) + '\n'


def parse_report(text):
    """テキストから ResidualReport を読み込む（集計値のみ）"""
    lines = [line for line in text.splitlines()]
    while lines and lines[-1] == '':
        lines.pop()
    if not lines:
        raise ParseError("空の入力です", line_number=1)
    header = lines[0].split(' ')
    if len(header) != 7 or header[0] != REPORT_MAGIC:
        raise ParseError(f"ヘッダーが不正です: '{lines[0]}'", line_number=1)
    shape = _parse_shape(header[2], header[3], header[4], 1)
    trials = _field(header[5], 'trials', 1, optional=False)
    seed = _field(header[6], 'seed', 1)
    if len(lines) < 2 or not lines[1].startswith('max_abs: '):
        raise ParseError("'max_abs: ' 行が必要です", line_number=2)
    max_abs = _parse_real(lines[1][len('max_abs: '):], 2)
    values = lines[2:]
    if len(values) != trials:
        raise ParseError(f"行数が一致しません: {len(values)} 行（期待値 {trials} 行）",
                         line_number=3 + len(values), expected=trials)
    per_trial = tuple(_parse_real(tok, i + 3) for i, tok in enumerate(values))
    try:
        return ResidualReport(shape=shape, identity_name=header[1], trials=trials, max_abs=max_abs,
                              per_trial_max=per_trial, seed=seed)
    except ShapeError as e:
        raise ParseError(str(e), line_number=2)
