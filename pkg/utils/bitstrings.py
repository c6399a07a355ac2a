# ==========================================
# utils/bitstrings.py - 비트열 인코딩 유틸리티
# ==========================================

from typing import Iterator, List, Optional, Tuple

EMPTY = ""


def string_to_index(s: str) -> int:
    """길이-사전식 번호 (ε↔0, 0↔1, 1↔2, 00↔3, ...)"""
    if any(ch not in "01" for ch in s):
        raise ValueError(f"비트열이 아닙니다: {s!r}")
    return int("1" + s, 2) - 1


def index_to_string(n: int) -> str:
    """번호 → 비트열 (string_to_index 의 역함수)"""
    if n < 0:
        raise ValueError(f"음수 번호: {n}")
    return bin(n + 1)[3:]


def strings_of_length(n: int) -> Iterator[str]:
    """길이 n 비트열을 사전식으로 생성"""
    if n == 0:
        yield EMPTY
        return
    for i in range(2 ** n):
        yield format(i, f"0{n}b")


def iter_strings(max_len: int) -> Iterator[str]:
    """길이 max_len 이하 모든 비트열 (길이-사전식)"""
    for length in range(max_len + 1):
        yield from strings_of_length(length)


def count_strings(max_len: int) -> int:
    return 2 ** (max_len + 1) - 1


def length_lex_key(s: str) -> Tuple[int, str]:
    return (len(s), s)


def is_prefix(a: str, b: str) -> bool:
    return len(a) <= len(b) and b.startswith(a)


def gamma_encode(n: int) -> str:
    """Elias-gamma 부호 (n >= 1)"""
    if n < 1:
        raise ValueError(f"gamma 부호는 1 이상만 가능: {n}")
    body = bin(n)[2:]
    return "0" * (len(body) - 1) + body


def gamma_decode(bits: str, pos: int = 0) -> Optional[Tuple[int, int]]:
    """pos 위치에서 gamma 부호 하나를 읽음. 불완전하면 None

    Returns:
        (값, 다음 위치)
    """
    zeros = 0
    while pos + zeros < len(bits) and bits[pos + zeros] == "0":
        zeros += 1
    start = pos + zeros
    end = start + zeros + 1
    if end > len(bits):
        return None
    return int(bits[start:end], 2), end


def pair_strings(u: int, q: str) -> str:
    """조건 문자열 ⟨u, q⟩ = gamma(u+1) · q"""
    return gamma_encode(u + 1) + q


def unpair_string(s: str) -> Optional[Tuple[int, str]]:
    decoded = gamma_decode(s)
    if decoded is None:
        return None
    value, end = decoded
    return value - 1, s[end:]


def encode_sequence(terms: List[str]) -> str:
    """유한 지지 수열 → 비트열

    끝쪽의 빈 항은 잘라내고 각 항의 길이-사전식 번호+1 을 gamma 부호로 이어 붙인다.
    """
    trimmed = list(terms)
    while trimmed and trimmed[-1] == EMPTY:
        trimmed.pop()
    return "".join(gamma_encode(string_to_index(t) + 1) for t in trimmed)


def decode_sequence(s: str) -> List[str]:
    """비트열 → 유한 지지 수열 (전함수, encode_sequence 의 왼쪽 역)"""
    terms: List[str] = []
    pos = 0
    while pos < len(s):
        decoded = gamma_decode(s, pos)
        if decoded is None:
            break
        value, pos = decoded
        terms.append(index_to_string(value - 1))
    while terms and terms[-1] == EMPTY:
        terms.pop()
    return terms


def sequence_term(s: str, u: int) -> str:
    """s 가 나타내는 수열의 u 번째 항 (범위 밖이면 ε)"""
    terms = decode_sequence(s)
    return terms[u] if 0 <= u < len(terms) else EMPTY


def render_bits(s: str) -> str:
    """리포트용 표기 (빈 문자열은 '-')"""
    return s if s else "-"


def parse_bits(text: str) -> str:
    text = text.strip()
    if text in ("-", "ε", "''", '""'):
        return EMPTY
    if any(ch not in "01" for ch in text):
        raise ValueError(f"비트열 형식 오류: {text!r}")
    return text
