#!/usr/bin/env python3
"""
ジョルダン代数検証ツール - 簡単テストスクリプト
依存パッケージ・設定ファイル・極性表の確認を行います
"""

import json
import os
import sys

from app_config import (CONFIG_FILE, DEFAULT_CONFIG, IDENTITY_NAMES, KIND_NAMES, REQUIRED_KEYS,
                        get_config, load_config, lookup_polarity)
from jordan_errors import ConfigError, UnsupportedCombinationError

BASE_DIR = os.path.dirname(os.path.abspath(__file__))


def test_dependencies():
    """依存関係テスト"""
    print("📦 依存パッケージテスト...")

    required_packages = [
        ('numpy', 'numpy'),
        ('pandas', 'pandas'),
        ('flask', 'Flask'),
        ('hypothesis', 'hypothesis'),
    ]

    missing_packages = []
    for package, display_name in required_packages:
        try:
            __import__(package)
            print(f"✅ パッケージ確認: {display_name}")
        except ImportError:
            print(f"❌ パッケージ不足: {display_name}")
            missing_packages.append(display_name)

    assert not missing_packages, f"pip install {' '.join(missing_packages)}"


def test_config_loading():
    """設定ファイルの読み込みテスト"""
    print(">> 設定ファイル読み込みテスト...")

    assert os.path.exists(CONFIG_FILE), "config.jsonが見つかりません"
    with open(CONFIG_FILE, 'r', encoding='utf-8') as f:
        config = json.load(f)

    for key in REQUIRED_KEYS:
        assert key in config, f"必要なキー '{key}' が設定ファイルにありません"

    # 同梱の config.json は組み込みの既定値と同じ内容
    assert config == DEFAULT_CONFIG
    print(f"✅ 設定ファイル読み込み成功 - 極性規則数: {len(config['polarity'])}")


def test_config_fallback_and_errors():
    """設定ファイルが無いときの既定値とエラー"""
    missing = os.path.join(BASE_DIR, 'no_such_config.json')
    assert load_config(missing) is None

    try:
        get_config(missing)
    except ConfigError:
        pass
    else:
        raise AssertionError("明示したファイルが無いのにエラーになりません")


def test_config_templates():
    """テンプレートは既定値に重ねて有効な設定になる"""
    template_dir = os.path.join(BASE_DIR, 'config_templates')
    names = sorted(os.listdir(template_dir))
    assert names == ['rounded_display.json', 'strict_tolerances.json']
    for name in names:
        config = get_config(os.path.join(template_dir, name))
        for key in REQUIRED_KEYS:
            assert key in config
    display = get_config(os.path.join(template_dir, 'rounded_display.json'))
    assert display['defaults']['distribution'] == 'rounded_normal_2dp'
    assert display['defaults']['oherm_d'] == 4
    strict = get_config(os.path.join(template_dir, 'strict_tolerances.json'))
    assert strict['tolerances']['jordan'] < DEFAULT_CONFIG['tolerances']['jordan']


def test_polarity_table():
    """極性表の期待値"""
    print("🧭 極性表テスト...")

    expectations = [
        ('commute', 'albert', 3, 'hold'),
        ('distribute', 'oherm', 4, 'hold'),
        ('associate', 'rsm', 5, 'fail'),
        ('associate', 'rsm', 1, 'hold'),
        ('associate', 'spin', 5, 'fail'),
        ('jordan', 'qhm', 5, 'hold'),
        ('jordan', 'albert', 3, 'hold'),
        ('jordan', 'oherm', 3, 'hold'),
        ('jordan', 'oherm', 4, 'fail'),
        ('jacobson', 'albert', 3, 'hold'),
        ('g8', 'spin', 5, 'hold'),
        ('g8', 'albert', 3, 'fail'),
        ('g9', 'qhm', 5, 'hold'),
        ('g9', 'albert', 3, 'fail'),
    ]
    for identity, kind, dim, expect in expectations:
        rule = lookup_polarity(identity, kind, dim)
        assert rule.expect == expect, f"{identity}/{kind}/{dim}: {rule.expect} != {expect}"

    g9_spin = lookup_polarity('g9', 'spin', 5)
    assert g9_spin.expect == 'hold'
    assert g9_spin.evidence == 'unverified-by-paper'

    for identity in ('jacobson', 'g8', 'g9'):
        try:
            lookup_polarity(identity, 'oherm', 4)
        except UnsupportedCombinationError:
            continue
        raise AssertionError(f"{identity} は oherm で未対応のはずです")


def test_polarity_covers_default_dims():
    """既定の次元では全種類に commute〜jordan の規則がある"""
    dims = {'rsm': 5, 'chm': 5, 'qhm': 5, 'albert': 3, 'spin': 5, 'oherm': 4}
    for kind in KIND_NAMES:
        for identity in IDENTITY_NAMES[:4]:
            lookup_polarity(identity, kind, dims[kind])


def run_all_tests():
    """全テストを実行"""
    print("*** ジョルダン代数検証ツール - テスト開始 ***")
    print("=" * 50)

    tests = [
        ("依存関係", test_dependencies),
        ("設定ファイル", test_config_loading),
        ("設定の既定値", test_config_fallback_and_errors),
        ("設定テンプレート", test_config_templates),
        ("極性表", test_polarity_table),
        ("極性表の網羅", test_polarity_covers_default_dims),
    ]

    results = []
    for test_name, test_func in tests:
        print(f"\n🧪 {test_name}テスト実行中...")
        try:
            test_func()
            results.append((test_name, True))
        except Exception as e:
            print(f"❌ {test_name}テストでエラー: {e}")
            results.append((test_name, False))

    print("\n" + "=" * 50)
    print("📊 テスト結果サマリー")
    print("=" * 50)

    passed = 0
    for test_name, result in results:
        print(f"{'✅ PASS' if result else '❌ FAIL'} {test_name}")
        if result:
            passed += 1

    print(f"\n🏆 成功: {passed}/{len(results)}")
    return passed == len(results)


if __name__ == "__main__":
    success = run_all_tests()
    sys.exit(0 if success else 1)
