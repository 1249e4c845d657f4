#!/usr/bin/env python3
"""
cli_verify のテスト（プロセス内で main を呼び、出力と終了コードを確認する）
"""

import io
import json
import os
import sys
import tempfile
import time
from contextlib import redirect_stderr

import pandas as pd

from cli_verify import EXIT_FAILED, EXIT_OK, EXIT_USAGE, main
from random_gen import rrsm
from serialization import parse

JSON_FIELDS = ['identity', 'kind', 'd', 'n', 'trials', 'seed', 'max_abs', 'threshold', 'verdict',
               'expect', 'evidence', 'note']


def run_cli(*argv):
    out = io.StringIO()
    with redirect_stderr(io.StringIO()):
        status = main(['--no-log-file'] + list(argv), out=out)
    return status, out.getvalue()


def _records(text):
    return [json.loads(line) for line in text.splitlines()]


def test_single_suite_json_lines():
    status, text = run_cli('verify', '--kind', 'qhm', '--identity', 'jordan', '--trials', '3', '--seed', '1',
                           '--format', 'json-lines')
    assert status == EXIT_OK
    records = _records(text)
    assert len(records) == 1
    record = records[0]
    assert list(record) == JSON_FIELDS
    assert record['kind'] == 'qhm'
    assert record['d'] == 5
    assert record['n'] is None
    assert record['trials'] == 3
    assert record['verdict'] == 'pass'
    assert record['max_abs'] <= record['threshold']


def test_same_seed_is_byte_identical():
    args = ('verify', '--kind', 'spin', '--identity', 'all', '--trials', '2', '--seed', '5')
    first = run_cli(*args)
    second = run_cli(*args)
    assert first == second
    json_args = args + ('--format', 'json-lines')
    assert run_cli(*json_args) == run_cli(*json_args)


def test_expected_failures_are_success():
    status, text = run_cli('verify', '--kind', 'rsm', '--identity', 'associate', '--trials', '5',
                           '--format', 'json-lines')
    assert status == EXIT_OK
    assert _records(text)[0]['verdict'] == 'expected_failure_confirmed'

    status, text = run_cli('verify', '--kind', 'albert', '--identity', 'g8', '--trials', '1', '--seed', '1',
                           '--format', 'json-lines')
    assert status == EXIT_OK
    record = _records(text)[0]
    assert record['verdict'] == 'expected_failure_confirmed'
    assert record['max_abs'] > 1.0


def test_oherm_jordan_failure():
    status, text = run_cli('verify', '--kind', 'oherm', '--identity', 'jordan', '--trials', '5',
                           '--format', 'json-lines')
    assert status == EXIT_OK
    record = _records(text)[0]
    assert record['d'] == 4
    assert record['verdict'] == 'expected_failure_confirmed'


def test_all_runs_every_kind_in_order():
    status, text = run_cli('verify', '--identity', 'all', '--trials', '2', '--format', 'json-lines')
    assert status == EXIT_OK
    records = _records(text)
    assert len(records) == 6 * 7 - 3
    kinds = [r['kind'] for r in records]
    assert kinds == sorted(kinds, key=['rsm', 'chm', 'qhm', 'albert', 'spin', 'oherm'].index)
    assert [r['identity'] for r in records[:7]] == ['commute', 'distribute', 'associate', 'jordan',
                                                    'jacobson', 'g8', 'g9']
    pairs = {(r['kind'], r['identity']): r for r in records}
    assert pairs[('albert', 'g9')]['verdict'] == 'expected_failure_confirmed'
    assert pairs[('oherm', 'jordan')]['verdict'] == 'expected_failure_confirmed'
    assert pairs[('spin', 'g9')]['evidence'] == 'unverified-by-paper'
    assert ('oherm', 'g8') not in pairs


def test_full_run_within_time_budget():
    """全種類・全恒等式の 100 試行が 10 秒以内に終わる"""
    started = time.perf_counter()
    status, text = run_cli('verify', '--identity', 'all', '--format', 'json-lines')
    elapsed = time.perf_counter() - started
    assert status == EXIT_OK
    records = _records(text)
    assert len(records) == 6 * 7 - 3
    assert all(r['trials'] == 100 for r in records)
    assert elapsed < 10.0, f"{elapsed:.1f} s"


def test_text_report():
    status, text = run_cli('verify', '--kind', 'chm', '--d', '3', '--identity', 'jacobson', '--trials', '2')
    assert status == EXIT_OK
    assert 'Polarity table:' in text
    assert 'Results:' in text
    assert 'PASS: jacobson chm d=3 (pass)' in text
    assert '成功: 1/1' in text


def test_missing_expected_failure_exits_one():
    """期待される失敗が観測されなければ終了コード 1"""
    config = {
        'failure_floors': {'commute': 1e-6},
        'polarity': [{'identity': 'commute', 'kinds': ['rsm'], 'expect': 'fail', 'evidence': 'derived'}],
    }
    with tempfile.TemporaryDirectory() as tmp:
        path = os.path.join(tmp, 'config.json')
        with open(path, 'w', encoding='utf-8') as f:
            json.dump(config, f)
        status, text = run_cli('--config', path, 'verify', '--kind', 'rsm', '--identity', 'commute',
                               '--trials', '2', '--format', 'json-lines')
    assert status == EXIT_FAILED
    assert _records(text)[0]['verdict'] == 'expected_failure_missing'


def test_usage_errors_exit_two():
    bad_invocations = [
        ('verify', '--kind', 'spin', '--d', '3'),
        ('verify', '--kind', 'rsm', '--spin-n', '4'),
        ('verify', '--kind', 'albert', '--d', '4'),
        ('verify', '--kind', 'sedenion'),
        ('verify', '--trials', '0'),
        ('verify', '--seed', '-1'),
        ('verify', '--kind', 'oherm', '--identity', 'jacobson'),
        ('--config', '/nonexistent/config.json', 'polarity'),
        (),
    ]
    for argv in bad_invocations:
        status, _ = run_cli(*argv)
        assert status == EXIT_USAGE, f"{argv}: {status}"


def test_save_csv():
    with tempfile.TemporaryDirectory() as tmp:
        path = os.path.join(tmp, 'outcomes.csv')
        status, _ = run_cli('verify', '--kind', 'spin', '--identity', 'commute', '--trials', '2',
                            '--save-csv', path)
        assert status == EXIT_OK
        frame = pd.read_csv(path, encoding='utf-8-sig')
    assert list(frame.columns) == JSON_FIELDS
    assert frame.loc[0, 'verdict'] == 'pass'


def test_polarity_command():
    status, text = run_cli('polarity')
    assert status == EXIT_OK
    assert 'unverified-by-paper' in text
    assert 'oherm' in text


def test_random_command_round_trips():
    status, text = run_cli('random', '--kind', 'rsm', '--d', '2', '--cols', '1')
    assert status == EXIT_OK
    assert text.startswith('jordan-v1 rsm d=2 n=- cols=1\n')
    assert parse(text) == rrsm(n=1, d=2, seed=0)


def test_demo():
    status, text = run_cli('demo')
    assert status == EXIT_OK
    assert 'Vector of real symmetric matrices with entries' in text
    assert '[15,]' in text
    assert '[3]' in text
    assert 'Vector of Albert matrices with entries' in text
    assert 'kl(o3)' in text
    assert 'Jacobson on albert' in text
    assert 'G9 on albert' in text
    lines = text.splitlines()
    start = lines.index('> x*(y+z) - (x*y + x*z)')
    residual_line = next(line for line in lines[start:] if line.startswith('max abs residual: '))
    assert float(residual_line.split(': ')[1]) <= 1e-13
    assert run_cli('demo') == (status, text)


def run_all_tests():
    """全テストを実行"""
    print("*** cli_verify - テスト開始 ***")
    print("=" * 50)

    tests = [
        ("json-lines の1スイート", test_single_suite_json_lines),
        ("同じシードの再現性", test_same_seed_is_byte_identical),
        ("期待される失敗", test_expected_failures_are_success),
        ("oherm のジョルダン恒等式", test_oherm_jordan_failure),
        ("all の実行順", test_all_runs_every_kind_in_order),
        ("全スイートの所要時間", test_full_run_within_time_budget),
        ("テキストのレポート", test_text_report),
        ("期待される失敗の欠落", test_missing_expected_failure_exits_one),
        ("使い方の誤り", test_usage_errors_exit_two),
        ("CSV 保存", test_save_csv),
        ("polarity コマンド", test_polarity_command),
        ("random コマンド", test_random_command_round_trips),
        ("demo コマンド", test_demo),
    ]

    passed = 0
    for test_name, test_func in tests:
        try:
            test_func()
            print(f"✅ PASS {test_name}")
            passed += 1
        except Exception as e:
            print(f"❌ FAIL {test_name}: {e}")

    print(f"\n🏆 成功: {passed}/{len(tests)}")
    return passed == len(tests)


if __name__ == "__main__":
    success = run_all_tests()
    sys.exit(0 if success else 1)
