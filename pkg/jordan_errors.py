"""
ジョルダン代数ライブラリ - 例外定義
"""


class JordanError(Exception):
    """ライブラリ共通の基底例外"""


class ShapeError(JordanError, ValueError):
    """形状・長さの不一致"""

    def __init__(self, message, expected=None, actual=None):
        super().__init__(message)
        self.expected = expected
        self.actual = actual


class ValidationError(JordanError, ValueError):
    """入力値の検証エラー（非エルミート、非有限値など）"""


class UnsupportedKindError(JordanError, TypeError):
    """この代数の種類では定義されていない操作"""


class UnsupportedCombinationError(JordanError):
    """極性表に存在しない (種類, 恒等式) の組み合わせ"""


class ConfigError(JordanError, ValueError):
    """設定・フラグの不整合"""


class ParseError(JordanError, ValueError):
    """テキスト形式の読み込みエラー"""

    def __init__(self, message, line_number=None, expected=None):
        if line_number is not None:
            message = f"{line_number}行目: {message}"
        super().__init__(message)
        self.line_number = line_number
        self.expected = expected
