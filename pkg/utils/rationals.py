# ==========================================
# utils/rationals.py - 정확한 유리수 표기
# ==========================================

from fractions import Fraction
from typing import Any, Union

import numpy as np

Number = Union[int, Fraction]


def to_fraction(value: Any) -> Fraction:
    """int / Fraction / "a/b" 문자열을 Fraction 으로 변환 (float 금지)"""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise ValueError("bool 은 유리수로 쓸 수 없습니다")
    if isinstance(value, int):
        return Fraction(value, 1)
    if isinstance(value, str):
        return parse_fraction(value)
    raise ValueError(f"정확한 유리수가 아닙니다: {value!r}")


def render_fraction(q: Number) -> str:
    """항상 "num/den" 형식 (정수도 "1/1")"""
    q = to_fraction(q)
    return f"{q.numerator}/{q.denominator}"


def parse_fraction(text: str) -> Fraction:
    text = text.strip()
    if "/" in text:
        num, den = text.split("/", 1)
        if int(den) == 0:
            raise ValueError(f"분모가 0 입니다: {text}")
        return Fraction(int(num), int(den))
    return Fraction(int(text), 1)


def pow2_inverse(c: int) -> Fraction:
    """2^(-c)"""
    return Fraction(1, 2 ** c) if c >= 0 else Fraction(2 ** (-c), 1)


def jsonify(value: Any) -> Any:
    """리포트 직렬화용: Fraction 은 "num/den", 컨테이너는 재귀 처리"""
    if isinstance(value, Fraction):
        return render_fraction(value)
    if isinstance(value, dict):
        return {str(k): jsonify(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonify(v) for v in value]
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.ndarray):
        return [jsonify(v) for v in value.tolist()]
    return value
