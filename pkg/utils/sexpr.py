# ==========================================
# utils/sexpr.py - S-식 읽기/쓰기 (명제, 유도, 전략 트리 직렬화)
# ==========================================

from typing import List, Union

import pyparsing as pp

pp.ParserElement.enablePackrat()

SExpr = Union[str, List['SExpr']]

_LPAR, _RPAR = map(pp.Suppress, '()')
_QUOTED = pp.QuotedString('"', esc_char='\\', unquote_results=True)
_BARE = pp.Word(pp.printables, exclude_chars='()"')
_EXPR = pp.Forward()
_EXPR <<= _QUOTED | _BARE | pp.Group(_LPAR + pp.ZeroOrMore(_EXPR) + _RPAR)
_DOCUMENT = pp.ZeroOrMore(_EXPR)
_DOCUMENT.ignore(pp.Literal(';') + pp.rest_of_line)


def _needs_quote(token: str) -> bool:
    if not token or not token.isascii():
        return True
    return any(ch.isspace() or ch in '()"\\;' for ch in token)


def format_sexpr(expr: SExpr) -> str:
    """한 줄 S-식 문자열"""
    if isinstance(expr, (list, tuple)):
        return '(' + ' '.join(format_sexpr(item) for item in expr) + ')'
    token = str(expr)
    if _needs_quote(token):
        return '"' + token.replace('\\', '\\\\').replace('"', '\\"') + '"'
    return token


def parse_sexpr(text: str) -> SExpr:
    """S-식 하나를 중첩 리스트로"""
    items = parse_sexprs(text)
    if len(items) != 1:
        raise ValueError(f"S-식이 정확히 하나가 아닙니다 ({len(items)}개)")
    return items[0]


def parse_sexprs(text: str) -> List[SExpr]:
    try:
        result = _DOCUMENT.parse_string(text, parse_all=True)
    except pp.ParseException as e:
        raise ValueError(f"S-식 구문 오류 (위치 {e.loc}): {e.msg}") from e
    return [item.as_list() if isinstance(item, pp.ParseResults) else item for item in result]
