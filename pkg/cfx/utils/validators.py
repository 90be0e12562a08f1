"""
输入验证模块
"""
from typing import Iterable, Tuple


def validate_alphabet(text: str) -> Tuple[bool, str]:
    """
    验证字母表字符串，例如 "xyz"

    Returns:
        (is_valid, message)
    """
    symbols = [ch for ch in text if not ch.isspace() and ch != ","]
    if not symbols:
        return False, "字母表不能为空"

    for ch in symbols:
        if not (ch.isalpha() or ch == "_"):
            return False, f"字母表只能包含字母，发现：{ch!r}"

    if len(set(symbols)) != len(symbols):
        return False, "字母表中存在重复符号"

    return True, "验证通过"


def validate_word(word: str, alphabet: Iterable[str]) -> Tuple[bool, str]:
    """
    验证单词中的每个符号都属于字母表

    Returns:
        (is_valid, message)
    """
    allowed = set(alphabet)
    unknown = sorted({ch for ch in word if ch not in allowed})
    if unknown:
        return False, f"单词包含字母表之外的符号：{', '.join(unknown)}"

    return True, "验证通过"


def validate_fuel(fuel: int) -> Tuple[bool, str]:
    """验证求值步数上限"""
    if fuel <= 0:
        return False, "--fuel 必须为正整数"

    return True, "验证通过"
