# ==========================================
# core/sumcheck.py - QBF 산술화와 대화형 증명을 전략 트리로 컴파일
# ==========================================

import functools
import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
import pyparsing as pp
import sympy as sp

from core.errors import FieldTooSmallError, QbfSyntaxError, UnboundVariableError, WorkCeilingError
from core.logic import (
    HOLE, DerivationBuilder, FieldElements, FinitizedModel, FracForall, Implies, Statement,
    Theory, decode_int, extra, frac_forall_certify, register_axiom_schema, register_statement,
    rule, standard_base,
)
from core.strategy import (
    StrategyBuilder, StrategyNode, StrategyTree, extract_deterministic, prove_probability,
    tree_depth, tree_size,
)
from utils.rationals import render_fraction

logger = logging.getLogger(__name__)

pp.ParserElement.enablePackrat()

FORALL = 'forall'
EXISTS = 'exists'
LINEARIZE = 'linearize'

SUMCHECK_SCHEMAS = ('matrix-eval', 'round-check', 'arith-link')
DEFAULT_WORK_CEILING = 50_000_000
DEFAULT_TREE_CEILING = 200_000

# (라운드, 현재 점, 주장값) -> 메시지 계수 (낮은 차수부터)
ProverStrategy = Callable[[int, Tuple[int, ...], int], Sequence[int]]


# ------------------------------------------
# QBF 구문 트리
# ------------------------------------------

@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Const:
    value: bool


@dataclass(frozen=True)
class Neg:
    arg: object


@dataclass(frozen=True)
class Conj:
    left: object
    right: object


@dataclass(frozen=True)
class Disj:
    left: object
    right: object


@dataclass(frozen=True)
class Qbf:
    """앞쪽 양화사 목록 (바깥부터) + 행렬"""
    prefix: Tuple[Tuple[str, str], ...]
    matrix: object

    @property
    def variables(self) -> List[str]:
        return [name for _, name in self.prefix]


def _fold_binary(cls):
    def action(tokens):
        items = tokens[0]
        result = items[0]
        for index in range(2, len(items), 2):
            result = cls(result, items[index])
        return result
    return action


def _build_grammar():
    keywords = pp.MatchFirst([pp.Keyword(k) for k in ('and', 'or', 'not', 'true', 'false', 'forall', 'exists')])
    var = (~keywords + pp.Regex(r'[a-z][a-z0-9]*')).set_parse_action(lambda t: Var(t[0]))
    const = (pp.one_of('1 ⊤') | pp.Keyword('true')).set_parse_action(lambda: Const(True)) | \
            (pp.one_of('0 ⊥') | pp.Keyword('false')).set_parse_action(lambda: Const(False))
    neg = pp.one_of('¬ ~ !') | pp.Keyword('not')
    conj = pp.one_of('∧ & /\\') | pp.Keyword('and')
    disj = pp.one_of('∨ | \\/') | pp.Keyword('or')
    matrix = pp.infix_notation(const | var, [
        (neg, 1, pp.OpAssoc.RIGHT, lambda t: Neg(t[0][1])),
        (conj, 2, pp.OpAssoc.LEFT, _fold_binary(Conj)),
        (disj, 2, pp.OpAssoc.LEFT, _fold_binary(Disj)),
    ])
    quantifier = pp.Regex(r'(?P<q>∀|∃|forall|exists)_?\s*(?P<v>[a-z][a-z0-9]*)\s*[.:]?')
    quantifier.set_parse_action(
        lambda t: [(FORALL if t['q'] in ('∀', 'forall') else EXISTS, t['v'])])
    return pp.Group(pp.ZeroOrMore(quantifier)) + matrix


_GRAMMAR = _build_grammar()


def _matrix_vars(node) -> set:
    if isinstance(node, Var):
        return {node.name}
    if isinstance(node, Const):
        return set()
    if isinstance(node, Neg):
        return _matrix_vars(node.arg)
    return _matrix_vars(node.left) | _matrix_vars(node.right)


def parse_qbf(text: str, max_vars: int = 8) -> Qbf:
    """앞쪽 양화사 + 중위 행렬 문법의 QBF 파싱"""
    try:
        result = _GRAMMAR.parse_string(text, parse_all=True)
    except pp.ParseException as e:
        raise QbfSyntaxError(f"QBF 구문 오류 (위치 {e.loc}): {e.msg}", {'position': e.loc, 'text': text}) from e
    prefix = tuple(tuple(item) for item in result[0])
    names = [name for _, name in prefix]
    if len(set(names)) != len(names):
        raise QbfSyntaxError("같은 변수가 두 번 양화되었습니다", {'variables': names})
    if len(names) > max_vars:
        raise ValueError(f"변수 수 {len(names)} 가 한도 {max_vars} 를 넘습니다")
    matrix = result[1]
    unbound = sorted(_matrix_vars(matrix) - set(names))
    if unbound:
        raise UnboundVariableError(f"양화되지 않은 변수: {', '.join(unbound)}", {'variables': unbound})
    return Qbf(prefix, matrix)


_SYMBOLS = {
    True: {FORALL: '∀', EXISTS: '∃', 'not': '¬', 'and': ' ∧ ', 'or': ' ∨ ', 'sep': ''},
    False: {FORALL: 'forall ', EXISTS: 'exists ', 'not': '~', 'and': ' & ', 'or': ' | ', 'sep': ''},
}


def _format_matrix(node, unicode: bool) -> str:
    symbols = _SYMBOLS[unicode]
    if isinstance(node, Var):
        return node.name
    if isinstance(node, Const):
        return '1' if node.value else '0'
    if isinstance(node, Neg):
        return symbols['not'] + _format_matrix(node.arg, unicode)
    op = symbols['and'] if isinstance(node, Conj) else symbols['or']
    return f"({_format_matrix(node.left, unicode)}{op}{_format_matrix(node.right, unicode)})"


def format_qbf(qbf: Qbf, unicode: bool = True) -> str:
    symbols = _SYMBOLS[unicode]
    prefix = ' '.join(f"{symbols[kind]}{name}" for kind, name in qbf.prefix)
    matrix = _format_matrix(qbf.matrix, unicode)
    return f"{prefix} {matrix}" if prefix else matrix


def _eval_matrix(node, assignment: Dict[str, bool]) -> bool:
    if isinstance(node, Var):
        return assignment[node.name]
    if isinstance(node, Const):
        return node.value
    if isinstance(node, Neg):
        return not _eval_matrix(node.arg, assignment)
    if isinstance(node, Conj):
        return _eval_matrix(node.left, assignment) and _eval_matrix(node.right, assignment)
    return _eval_matrix(node.left, assignment) or _eval_matrix(node.right, assignment)


def evaluate_qbf(qbf: Qbf) -> bool:
    """전수 불 대입으로 참/거짓"""
    def go(index: int, assignment: Dict[str, bool]) -> bool:
        if index == len(qbf.prefix):
            return _eval_matrix(qbf.matrix, assignment)
        kind, name = qbf.prefix[index]
        values = (go(index + 1, {**assignment, name: b}) for b in (False, True))
        return all(values) if kind == FORALL else any(values)
    return go(0, {})


# ------------------------------------------
# 산술화
# ------------------------------------------

@dataclass(frozen=True)
class FieldPoly:
    """F_p 계수 다항식 (단항식 -> 계수)"""
    p: int
    nvars: int
    terms: Tuple[Tuple[Tuple[int, ...], int], ...]
    degree_bounds: Tuple[int, ...]

    @classmethod
    def from_integer_poly(cls, poly: sp.Poly, p: int) -> 'FieldPoly':
        terms = []
        for monomial, coeff in poly.terms():
            reduced = int(coeff) % p
            if reduced:
                terms.append((tuple(int(e) for e in monomial), reduced))
        nvars = len(poly.gens)
        bounds = tuple(max((m[i] for m, _ in terms), default=0) for i in range(nvars))
        return cls(p, nvars, tuple(sorted(terms)), bounds)

    def evaluate(self, values: Sequence[int]) -> int:
        total = 0
        for monomial, coeff in self.terms:
            term = coeff
            for value, exponent in zip(values, monomial):
                if exponent:
                    term = term * pow(value, exponent, self.p) % self.p
            total = (total + term) % self.p
        return total

    def restrict(self, var: int, values: Sequence[int], degree: int) -> List[int]:
        """var 를 제외한 좌표를 고정한 일변수 다항식의 계수 (낮은 차수부터)"""
        coeffs = [0] * (degree + 1)
        for monomial, coeff in self.terms:
            term = coeff
            for index, (value, exponent) in enumerate(zip(values, monomial)):
                if index != var and exponent:
                    term = term * pow(value, exponent, self.p) % self.p
            coeffs[monomial[var]] = (coeffs[monomial[var]] + term) % self.p
        return coeffs


@dataclass(frozen=True)
class Operation:
    kind: str   # forall | exists | linearize
    var: int


def _strip(coeffs: Sequence[int]) -> Tuple[int, ...]:
    items = list(coeffs)
    while items and items[-1] == 0:
        items.pop()
    return tuple(items)


def eval_univariate(coeffs: Sequence[int], x: int, p: int) -> int:
    total = 0
    for coeff in reversed(coeffs):
        total = (total * x + coeff) % p
    return total


def check_value(kind: str, s0: int, s1: int, a: int, p: int) -> int:
    """라운드 검사식: ∀ 는 곱, ∃ 는 1-(1-a)(1-b), 선형화는 (1-a)s(0)+a·s(1)"""
    if kind == FORALL:
        return s0 * s1 % p
    if kind == EXISTS:
        return (1 - (1 - s0) * (1 - s1)) % p
    return ((1 - a) * s0 + a * s1) % p


@dataclass
class Arithmetization:
    """polys[0] = 행렬, ops[j] 가 polys[j] 를 polys[j+1] 로 바꿈"""
    qbf: Qbf
    p: int
    symbols: Tuple[sp.Symbol, ...]
    polys: List[sp.Poly]
    ops: List[Operation]
    free_vars: List[Tuple[int, ...]]
    degrees: List[int]
    field_polys: List[FieldPoly] = field(default_factory=list)

    @property
    def tag(self) -> str:
        return f"{format_qbf(self.qbf, unicode=False)}@{self.p}"

    @property
    def rounds(self) -> int:
        return len(self.ops)

    @property
    def degree_bound(self) -> int:
        return sum(self.degrees)

    @property
    def capital(self) -> Fraction:
        return Fraction(self.degree_bound, self.p)

    def op_for_round(self, k: int) -> int:
        """라운드 k (바깥부터) 가 검사하는 연산 번호"""
        return self.rounds - 1 - k

    def final_value(self) -> int:
        return self.field_polys[-1].evaluate([0] * len(self.symbols))

    def evaluate(self, level: int, point: Sequence[int]) -> int:
        return self.field_polys[level].evaluate(self.full_point(level, point))

    def full_point(self, level: int, point: Sequence[int]) -> List[int]:
        values = [0] * len(self.symbols)
        for var, value in zip(self.free_vars[level], point):
            values[var] = value % self.p
        return values

    def message(self, j: int, point: Sequence[int]) -> List[int]:
        """연산 j 의 정직한 메시지: polys[j] 를 라운드 변수에 대해 제한"""
        op = self.ops[j]
        full = self.full_point(j, point)
        return self.field_polys[j].restrict(op.var, full, self.degrees[j])

    def var_position(self, j: int) -> int:
        return self.free_vars[j].index(self.ops[j].var)


def _integer_degrees(poly: sp.Poly, symbols) -> List[int]:
    if poly.is_zero:
        return [0] * len(symbols)
    return [max(0, int(poly.degree(s))) for s in symbols]


def _to_poly(expr, symbols) -> sp.Poly:
    # 양화사 없는 식도 상수 다항식으로 다루도록 생성원 하나를 둠
    gens = symbols or (sp.Symbol("_unit"),)
    return sp.Poly(sp.expand(expr), *gens, domain="ZZ")


def _matrix_expr(node, table):
    if isinstance(node, Var):
        return table[node.name]
    if isinstance(node, Const):
        return sp.Integer(1 if node.value else 0)
    if isinstance(node, Neg):
        return 1 - _matrix_expr(node.arg, table)
    a, b = _matrix_expr(node.left, table), _matrix_expr(node.right, table)
    return a * b if isinstance(node, Conj) else a + b - a * b


def _apply(kind: str, poly: sp.Poly, symbol, symbols) -> sp.Poly:
    expr = poly.as_expr()
    a, b = expr.subs(symbol, 0), expr.subs(symbol, 1)
    if kind == FORALL:
        return _to_poly(a * b, symbols)
    if kind == EXISTS:
        return _to_poly(1 - (1 - a) * (1 - b), symbols)
    return _to_poly((1 - symbol) * a + symbol * b, symbols)


@functools.lru_cache(maxsize=256)
def _integer_schedule(qbf: Qbf):
    """p 와 무관한 정수 다항식 연산열과 라운드 차수"""
    names = qbf.variables
    symbols = tuple(sp.Symbol(name) for name in names)
    table = dict(zip(names, symbols))
    polys = [_to_poly(_matrix_expr(qbf.matrix, table), symbols)]
    ops: List[Operation] = []
    degrees: List[int] = []
    free = [tuple(range(len(names)))]

    def push(kind: str, var: int):
        current = polys[-1]
        degrees.append(_integer_degrees(current, symbols)[var])
        ops.append(Operation(kind, var))
        polys.append(_apply(kind, current, symbols[var], symbols))
        free.append(free[-1] if kind == LINEARIZE else tuple(v for v in free[-1] if v != var))

    def linearize_all(variables):
        for var in variables:
            if _integer_degrees(polys[-1], symbols)[var] > 1:
                push(LINEARIZE, var)

    linearize_all(range(len(names)))
    for index in reversed(range(len(names))):
        push(qbf.prefix[index][0], index)
        linearize_all(range(index))
    return symbols, tuple(polys), tuple(ops), tuple(free), tuple(degrees)


def default_prime(qbf: Qbf) -> int:
    """2D 보다 큰 가장 작은 소수"""
    _, _, _, _, degrees = _integer_schedule(qbf)
    return int(sp.nextprime(2 * sum(degrees)))


def arithmetize(qbf: Qbf, p: Optional[int] = None) -> Arithmetization:
    """산술화 연산열을 만들고 F_p 로 내림"""
    symbols, polys, ops, free, degrees = _integer_schedule(qbf)
    bound = sum(degrees)
    minimum = int(sp.nextprime(2 * bound))
    if p is None:
        p = minimum
    if not sp.isprime(p):
        raise ValueError(f"p={p} 는 소수가 아닙니다")
    if p <= 2 * bound:
        raise FieldTooSmallError(f"p={p} 는 2D={2 * bound} 보다 커야 합니다 (최소 {minimum})",
                                 {'p': p, 'degree_bound': bound, 'minimum_prime': minimum})
    arith = Arithmetization(qbf, p, symbols, list(polys), list(ops), list(free), list(degrees))
    arith.field_polys = [FieldPoly.from_integer_poly(poly, p) for poly in polys]
    return arith


@functools.lru_cache(maxsize=256)
def arithmetization_for_tag(tag: str) -> Arithmetization:
    text, _, prime = tag.rpartition('@')
    return arithmetize(parse_qbf(text), int(prime))


# ------------------------------------------
# 프로토콜 명제와 공리 도식
# ------------------------------------------

def _ints(items) -> List[str]:
    return [str(v) for v in items]


@register_statement('poly-claim')
@dataclass(frozen=True)
class PolyClaim(Statement):
    """polys[level](point) = value (mod p)"""
    tag: str
    level: int
    point: Tuple[int, ...]
    value: int

    def holds(self, model: FinitizedModel) -> bool:
        arith = arithmetization_for_tag(self.tag)
        return arith.evaluate(self.level, self.point) == self.value % arith.p

    def to_sexpr(self):
        return [self.HEAD, self.tag, str(self.level), _ints(self.point), str(self.value)]

    @classmethod
    def from_sexpr(cls, args):
        return cls(args[0], int(args[1]), tuple(int(v) for v in args[2]), int(args[3]))


def _insert(others: Sequence[int], position: int, value: int) -> Tuple[int, ...]:
    items = list(others)
    items.insert(position, value)
    return tuple(items)


@register_statement('challenge-claim')
@dataclass(frozen=True)
class ChallengeClaim(Statement):
    """템플릿: r 을 넣으면 PolyClaim(level, point[r], s(r))"""
    tag: str
    level: int
    position: int
    others: Tuple[int, ...]
    coeffs: Tuple[int, ...]
    slot: object = HOLE

    def instantiate(self, filler) -> Statement:
        if self.slot is not HOLE:
            return self
        p = arithmetization_for_tag(self.tag).p
        r = int(filler) % p
        return PolyClaim(self.tag, self.level, _insert(self.others, self.position, r),
                         eval_univariate(self.coeffs, r, p))

    def has_hole(self) -> bool:
        return self.slot is HOLE

    def holds(self, model: FinitizedModel) -> bool:
        raise ValueError("빈 자리가 있는 challenge-claim 은 평가할 수 없습니다")

    def to_sexpr(self):
        return [self.HEAD, self.tag, str(self.level), str(self.position), _ints(self.others),
                _ints(self.coeffs), '_']

    @classmethod
    def from_sexpr(cls, args):
        return cls(args[0], int(args[1]), int(args[2]), tuple(int(v) for v in args[3]),
                   tuple(int(v) for v in args[4]), decode_int(args[5]))


@register_statement('message-correct')
@dataclass(frozen=True)
class MessageCorrect(Statement):
    """메시지 s 가 polys[level] 의 라운드 변수 제한과 같음"""
    tag: str
    level: int
    position: int
    others: Tuple[int, ...]
    coeffs: Tuple[int, ...]

    def holds(self, model: FinitizedModel) -> bool:
        arith = arithmetization_for_tag(self.tag)
        point = _insert(self.others, self.position, 0)
        full = arith.full_point(self.level, point)
        var = arith.free_vars[self.level][self.position]
        degree = max(arith.field_polys[self.level].degree_bounds[var], len(self.coeffs) - 1)
        actual = arith.field_polys[self.level].restrict(var, full, degree)
        return _strip(actual) == _strip(c % arith.p for c in self.coeffs)

    def to_sexpr(self):
        return [self.HEAD, self.tag, str(self.level), str(self.position), _ints(self.others),
                _ints(self.coeffs)]

    @classmethod
    def from_sexpr(cls, args):
        return cls(args[0], int(args[1]), int(args[2]), tuple(int(v) for v in args[3]),
                   tuple(int(v) for v in args[4]))


@register_statement('qbf-true')
@dataclass(frozen=True)
class QbfTrue(Statement):
    tag: str

    def holds(self, model: FinitizedModel) -> bool:
        return evaluate_qbf(arithmetization_for_tag(self.tag).qbf)

    def to_sexpr(self):
        return [self.HEAD, self.tag]

    @classmethod
    def from_sexpr(cls, args):
        return cls(args[0])


@register_axiom_schema('matrix-eval')
def _matrix_eval_schema(statement: Statement, model: FinitizedModel) -> bool:
    """행렬 다항식의 직접 계산"""
    return isinstance(statement, PolyClaim) and statement.level == 0 and statement.holds(model)


@register_axiom_schema('round-check')
def _round_check_schema(statement: Statement, model: FinitizedModel) -> bool:
    """MessageCorrect(j) → PolyClaim(j+1): 메시지가 라운드 검사식을 통과하면 참"""
    if not isinstance(statement, Implies):
        return False
    message, claim = statement.left, statement.right
    if not isinstance(message, MessageCorrect) or not isinstance(claim, PolyClaim):
        return False
    if message.tag != claim.tag or claim.level != message.level + 1:
        return False
    arith = arithmetization_for_tag(message.tag)
    j = message.level
    if j >= arith.rounds or message.position != arith.var_position(j):
        return False
    if len(_strip(message.coeffs)) > arith.degrees[j] + 1:
        return False
    op = arith.ops[j]
    p = arith.p
    a = 0
    if op.kind == LINEARIZE:
        if len(claim.point) != len(message.others) + 1:
            return False
        a = claim.point[message.position]
        if _insert(message.others, message.position, a) != claim.point:
            return False
    elif tuple(message.others) != tuple(claim.point):
        return False
    s0 = eval_univariate(message.coeffs, 0, p)
    s1 = eval_univariate(message.coeffs, 1, p)
    return check_value(op.kind, s0, s1, a, p) == claim.value % p


@register_axiom_schema('arith-link')
def _arith_link_schema(statement: Statement, model: FinitizedModel) -> bool:
    """polys[m]() = 1 → QBF 참 (산술화의 정확성)"""
    if not isinstance(statement, Implies):
        return False
    claim, target = statement.left, statement.right
    if not isinstance(claim, PolyClaim) or not isinstance(target, QbfTrue) or claim.tag != target.tag:
        return False
    arith = arithmetization_for_tag(claim.tag)
    if claim.level != arith.rounds or claim.point != () or claim.value != 1:
        return False
    return arith.final_value() == (1 if evaluate_qbf(arith.qbf) else 0)


def sumcheck_base(model: Optional[FinitizedModel] = None):
    return standard_base(model or FinitizedModel.tableless(), SUMCHECK_SCHEMAS, name='toy-arith+sumcheck')


# ------------------------------------------
# 정직한 전략 컴파일
# ------------------------------------------

@dataclass
class CompiledProtocol:
    arith: Arithmetization
    tree: StrategyTree
    target: QbfTrue

    @property
    def epsilon(self) -> Fraction:
        return self.tree.epsilon


def _round_template(arith: Arithmetization, j: int, others: Tuple[int, ...], coeffs: Tuple[int, ...]) -> Implies:
    position = arith.var_position(j)
    return Implies(ChallengeClaim(arith.tag, j, position, others, coeffs),
                   MessageCorrect(arith.tag, j, position, others, coeffs))


def _others_for(arith: Arithmetization, j: int, point: Tuple[int, ...]) -> Tuple[int, ...]:
    """polys[j+1] 의 점에서 라운드 변수 좌표를 뺀 나머지"""
    if arith.ops[j].kind == LINEARIZE:
        position = arith.var_position(j)
        return point[:position] + point[position + 1:]
    return point


def estimate_tree_size(arith: Arithmetization) -> int:
    leaves = arith.p ** arith.rounds
    return leaves * (3 * arith.rounds + 3)


def compile_honest_strategy(qbf: Qbf, p: Optional[int] = None,
                            tree_ceiling: int = DEFAULT_TREE_CEILING) -> CompiledProtocol:
    """정직한 증명자의 프로토콜을 모방하는 확률적 전략 트리"""
    if not evaluate_qbf(qbf):
        raise ValueError("정직한 전략은 참인 QBF 에만 컴파일됩니다")
    arith = arithmetize(qbf, p)
    estimate = estimate_tree_size(arith)
    if estimate > tree_ceiling:
        raise WorkCeilingError(f"전략 트리 크기 추정 {estimate} 가 한도 {tree_ceiling} 를 넘습니다",
                               {'estimate': estimate, 'ceiling': tree_ceiling})
    base = sumcheck_base()
    builder = StrategyBuilder(base)
    tag = arith.tag
    target = QbfTrue(tag)
    p = arith.p

    def mp_derivation(theory: Theory, premise: Statement, implication: Implies):
        out = DerivationBuilder()
        a = out.include(builder.statement_derivation(theory, premise))
        b = out.include(builder.statement_derivation(theory, implication))
        out.add(implication.right, rule('modus_ponens', a, b))
        return out.build()

    def chain(theory: Theory, capital, additions: List[Tuple[Statement, Optional[Implies], Optional[Statement]]]):
        # (추가 명제, 함의 또는 None, 전제 또는 None) 를 차례로 결정적 노드로
        if not additions:
            return builder.leaf(theory, capital)
        statement, implication, premise = additions[0]
        if implication is None:
            derivation = builder.statement_derivation(theory, statement)
        else:
            derivation = mp_derivation(theory, premise, implication)
        return builder.deterministic(theory, capital, statement, derivation,
                                     lambda child_theory, c: chain(child_theory, c, additions[1:]))

    def leaf_chain(history: List[Tuple[int, Tuple[int, ...], int, Tuple[int, ...], Tuple[int, ...], int]]):
        # history: (j, claim_point, claim_value, others, coeffs, r) 바깥 라운드부터
        additions = []
        j_last, _, _, others_last, coeffs_last, r_last = history[-1]
        position = arith.var_position(j_last)
        bottom = PolyClaim(tag, 0, _insert(others_last, position, r_last),
                           eval_univariate(coeffs_last, r_last, p))
        additions.append((bottom, None, None))
        current = bottom
        for j, claim_point, claim_value, others, coeffs, r in reversed(history):
            template = _round_template(arith, j, others, coeffs)
            instance = template.instantiate(r)
            message = instance.right
            additions.append((message, instance, current))
            claim = PolyClaim(tag, j + 1, claim_point, claim_value)
            additions.append((claim, Implies(message, claim), message))
            current = claim
        additions.append((target, Implies(current, target), current))
        return additions

    def round_node(k: int, theory: Theory, capital, point: Tuple[int, ...], value: int, history):
        if k == arith.rounds:
            if not history:
                # 양화사 없는 QBF: 행렬 자체를 직접 계산
                claim = PolyClaim(tag, 0, (), value)
                return chain(theory, capital, [(claim, None, None),
                                               (target, Implies(claim, target), claim)])
            return chain(theory, capital, leaf_chain(history))
        j = arith.op_for_round(k)
        others = _others_for(arith, j, point)
        position = arith.var_position(j)
        coeffs = tuple(arith.message(j, _insert(others, position, 0)))
        degree = arith.degrees[j]
        certificate = frac_forall_certify(Fraction(degree, p), FieldElements(p),
                                          _round_template(arith, j, others, coeffs), base.model)
        branching = certificate.statement

        def branch(prob_theory, prob_capital):
            def child(r, child_theory, child_capital):
                next_point = _insert(others, position, r)
                return round_node(k + 1, child_theory, child_capital, next_point,
                                  eval_univariate(coeffs, r, p),
                                  history + [(j, point, value, others, coeffs, r)])
            return builder.probabilistic(prob_theory, prob_capital, branching,
                                         builder.statement_derivation(prob_theory, branching), child)

        return builder.deterministic(theory, capital, branching, certificate.derivation, branch)

    root = round_node(0, builder.root_theory(), arith.capital, (), 1, [])
    tree = StrategyTree(root)
    logger.info(f"✅ 정직한 전략 컴파일: {format_qbf(qbf)} p={p} 라운드 {arith.rounds}, "
                f"ε={render_fraction(arith.capital)}")
    return CompiledProtocol(arith, tree, target)


# ------------------------------------------
# 정확한 수용 확률
# ------------------------------------------

@functools.lru_cache(maxsize=64)
def _message_space(p: int, degree: int) -> Tuple[np.ndarray, np.ndarray]:
    """차수 <= degree 인 모든 메시지와 F_p 위의 값"""
    coeffs = np.array(list(itertools.product(range(p), repeat=degree + 1)), dtype=np.int64)
    powers = np.array([[pow(r, e, p) for r in range(p)] for e in range(degree + 1)], dtype=np.int64)
    values = (coeffs @ powers) % p
    return coeffs, values


def _check_vector(kind: str, coeffs: np.ndarray, values: np.ndarray, a: int, p: int) -> np.ndarray:
    s0 = values[:, 0]
    s1 = values[:, 1]
    if kind == FORALL:
        return (s0 * s1) % p
    if kind == EXISTS:
        return (1 - (1 - s0) * (1 - s1)) % p
    return ((1 - a) * s0 + a * s1) % p


def estimate_game_work(arith: Arithmetization) -> int:
    p = arith.p
    work = 0
    for k in range(arith.rounds):
        j = arith.op_for_round(k)
        work += p ** len(arith.free_vars[j + 1]) * p ** (arith.degrees[j] + 2)
    return work


class AdversarialGame:
    """(라운드, 점, 주장값) 에 대한 메모이즈된 최적 속임수 증명자 게임

    값은 p^(R-k) 배 한 정수로 저장한다. 참인 주장은 정직하게 이어 가면 되므로 1.
    """

    def __init__(self, arith: Arithmetization, work_ceiling: int = DEFAULT_WORK_CEILING):
        self.arith = arith
        self.p = arith.p
        self.rounds = arith.rounds
        work = estimate_game_work(arith)
        if work > work_ceiling or self.p ** self.rounds > 2 ** 62:
            raise WorkCeilingError(f"게임 트리 계산량 추정 {work} 가 한도 {work_ceiling} 를 넘습니다",
                                   {'estimate': work, 'ceiling': work_ceiling})
        self._tables: Dict[Tuple[int, Tuple[int, ...]], np.ndarray] = {}
        self.logger = logging.getLogger(__name__)

    def _scores(self, k: int, point: Tuple[int, ...]):
        arith = self.arith
        j = arith.op_for_round(k)
        op = arith.ops[j]
        position = arith.var_position(j)
        others = _others_for(arith, j, point)
        a = point[position] if op.kind == LINEARIZE else 0
        coeffs, values = _message_space(self.p, arith.degrees[j])
        next_tables = np.stack([self.table(k + 1, _insert(others, position, r)) for r in range(self.p)])
        scores = next_tables[np.arange(self.p)[None, :], values].sum(axis=1)
        checks = _check_vector(op.kind, coeffs, values, a, self.p)
        return coeffs, scores, checks

    def table(self, k: int, point: Tuple[int, ...]) -> np.ndarray:
        """주장값 c 별 정수 점수 (p^(R-k) 배)"""
        key = (k, point)
        if key in self._tables:
            return self._tables[key]
        arith = self.arith
        result = np.zeros(self.p, dtype=np.int64)
        if k == self.rounds:
            result[arith.evaluate(0, point)] = 1
        else:
            _, scores, checks = self._scores(k, point)
            np.maximum.at(result, checks, scores)
            result[arith.evaluate(arith.op_for_round(k) + 1, point)] = self.p ** (self.rounds - k)
        self._tables[key] = result
        return result

    def value(self) -> Fraction:
        numerator = int(self.table(0, ())[1])
        return Fraction(numerator, self.p ** self.rounds)

    def best_message(self, k: int, point: Tuple[int, ...], claimed: int) -> Optional[Tuple[int, ...]]:
        """주장값을 통과하는 메시지 중 점수가 가장 큰 것 (없으면 None)"""
        coeffs, scores, checks = self._scores(k, point)
        candidates = np.flatnonzero(checks == claimed % self.p)
        if candidates.size == 0:
            return None
        best = candidates[np.argmax(scores[candidates])]
        return tuple(int(c) for c in coeffs[best])


def max_adversarial_acceptance(qbf: Qbf, p: Optional[int] = None,
                               work_ceiling: int = DEFAULT_WORK_CEILING) -> Fraction:
    """모든 증명자 메시지에 대한 최대 수용 확률 (정확한 유리수)"""
    arith = arithmetize(qbf, p)
    if arith.rounds == 0:
        return Fraction(1 if arith.final_value() == 1 else 0)
    return AdversarialGame(arith, work_ceiling).value()


def honest_prover(arith: Arithmetization) -> ProverStrategy:
    """주장값과 무관하게 polys[j] 의 제한을 보내는 증명자"""
    def prover(k: int, point: Tuple[int, ...], claimed: int) -> Tuple[int, ...]:
        j = arith.op_for_round(k)
        others = _others_for(arith, j, point)
        return tuple(arith.message(j, _insert(others, arith.var_position(j), 0)))
    return prover


def prover_acceptance(arith: Arithmetization, prover: ProverStrategy,
                      work_ceiling: int = DEFAULT_WORK_CEILING) -> Fraction:
    """결정적 증명자 전략의 정확한 수용 확률

    모든 도전값 경로에서 검증자를 실제로 실행한다. (라운드, 점, 주장값) 단위로 메모한다.
    """
    p = arith.p
    work = sum(p ** (len(arith.free_vars[arith.op_for_round(k) + 1]) + 2) for k in range(arith.rounds))
    if work > work_ceiling:
        raise WorkCeilingError(f"검증자 경로 계산량 추정 {work} 가 한도 {work_ceiling} 를 넘습니다",
                               {'estimate': work, 'ceiling': work_ceiling})
    memo: Dict[Tuple[int, Tuple[int, ...], int], Fraction] = {}

    def accept(k: int, point: Tuple[int, ...], claimed: int) -> Fraction:
        key = (k, point, claimed)
        if key in memo:
            return memo[key]
        if k == arith.rounds:
            result = Fraction(1 if arith.evaluate(0, point) == claimed else 0)
        else:
            j = arith.op_for_round(k)
            op = arith.ops[j]
            position = arith.var_position(j)
            others = _others_for(arith, j, point)
            message = tuple(int(c) % p for c in prover(k, point, claimed))
            a = point[position] if op.kind == LINEARIZE else 0
            if len(_strip(message)) > arith.degrees[j] + 1:
                result = Fraction(0)
            elif check_value(op.kind, eval_univariate(message, 0, p), eval_univariate(message, 1, p),
                             a, p) != claimed:
                result = Fraction(0)
            else:
                total = sum(accept(k + 1, _insert(others, position, r), eval_univariate(message, r, p))
                            for r in range(p))
                result = total / p
        memo[key] = result
        return result

    return accept(0, (), 1)


def honest_acceptance(qbf: Qbf, p: Optional[int] = None,
                      work_ceiling: int = DEFAULT_WORK_CEILING) -> Fraction:
    """정직한 증명자를 모든 도전값에 대해 실행한 수용 확률 (참인 QBF 면 정확히 1)"""
    arith = arithmetize(qbf, p)
    return prover_acceptance(arith, honest_prover(arith), work_ceiling)


def protocol_capital(qbf: Qbf, p: Optional[int] = None) -> Fraction:
    return arithmetize(qbf, p).capital


# ------------------------------------------
# 대화록
# ------------------------------------------

@dataclass
class ProtocolRound:
    round: int
    operation: str
    variable: str
    claimed_value: int
    message: Tuple[int, ...]
    challenge: Optional[int]
    check_passed: bool
    cost: Fraction


@dataclass
class ProtocolTranscript:
    qbf: str
    p: int
    prover: str
    rounds: List[ProtocolRound]
    final_check: Optional[bool]
    accepted: bool
    capital: Fraction

    def to_dict(self) -> Dict:
        return {
            'qbf': self.qbf,
            'p': self.p,
            'prover': self.prover,
            'capital': render_fraction(self.capital),
            'rounds': [{
                'round': r.round,
                'operation': r.operation,
                'variable': r.variable,
                'claimed_value': r.claimed_value,
                'message': list(r.message),
                'challenge': r.challenge,
                'check_passed': r.check_passed,
                'cost': render_fraction(r.cost),
            } for r in self.rounds],
            'final_check': self.final_check,
            'accepted': self.accepted,
        }


def run_protocol(qbf: Qbf, p: Optional[int] = None, seed: int = 0,
                 work_ceiling: int = DEFAULT_WORK_CEILING) -> ProtocolTranscript:
    """참이면 정직한 증명자, 거짓이면 최적 속임수 증명자로 한 번 실행"""
    arith = arithmetize(qbf, p)
    truth = evaluate_qbf(qbf)
    game = None if truth or arith.rounds == 0 else AdversarialGame(arith, work_ceiling)
    rng = np.random.default_rng(seed)
    p = arith.p

    rounds: List[ProtocolRound] = []
    point: Tuple[int, ...] = ()
    claimed = 1
    for k in range(arith.rounds):
        j = arith.op_for_round(k)
        op = arith.ops[j]
        position = arith.var_position(j)
        others = _others_for(arith, j, point)
        honest = arith.evaluate(j + 1, point) == claimed % p
        if honest:
            message = tuple(arith.message(j, _insert(others, position, 0)))
        else:
            message = game.best_message(k, point, claimed)
        cost = Fraction(arith.degrees[j], p)
        name = arith.qbf.variables[op.var]
        if message is None:
            rounds.append(ProtocolRound(k, op.kind, name, claimed, (), None, False, cost))
            return ProtocolTranscript(format_qbf(qbf), p, 'honest' if truth else 'cheating',
                                      rounds, None, False, arith.capital)
        a = point[position] if op.kind == LINEARIZE else 0
        passed = check_value(op.kind, eval_univariate(message, 0, p), eval_univariate(message, 1, p),
                             a, p) == claimed % p
        r = int(rng.integers(p))
        rounds.append(ProtocolRound(k, op.kind, name, claimed, message, r, passed, cost))
        if not passed:
            return ProtocolTranscript(format_qbf(qbf), p, 'honest' if truth else 'cheating',
                                      rounds, None, False, arith.capital)
        point = _insert(others, position, r)
        claimed = eval_univariate(message, r, p)

    final = arith.evaluate(0, point) == claimed % p
    return ProtocolTranscript(format_qbf(qbf), p, 'honest' if truth else 'cheating',
                              rounds, final, final, arith.capital)


# ------------------------------------------
# 묶음 실험
# ------------------------------------------

SUITE_SEEDS = (
    '∀x ∃y (x ∨ y)',
    '∃x (x)',
    '∀x (x ∨ ¬x)',
    '∃x ∀y (x ∨ y)',
    '∀x (x)',
    '∃x (x ∧ ¬x)',
    '∀x ∀y (x ∨ y)',
    '∃x ∃y (x ∧ ¬x)',
)


def _random_matrix(rng: np.random.Generator, names: Sequence[str], size: int):
    if size == 0:
        node = Var(names[int(rng.integers(len(names)))])
        return Neg(node) if rng.random() < 0.3 else node
    left_size = int(rng.integers(size))
    left = _random_matrix(rng, names, left_size)
    right = _random_matrix(rng, names, size - 1 - left_size)
    return Conj(left, right) if rng.random() < 0.5 else Disj(left, right)


def qbf_suite(seed: int, true_count: int = 20, false_count: int = 20, max_vars: int = 3,
              max_connectives: int = 2, work_ceiling: int = DEFAULT_WORK_CEILING) -> List[Qbf]:
    """참 QBF true_count 개, 거짓 QBF false_count 개 (양화사 3개 이하)

    게임 계산량 추정이 work_ceiling 을 넘는 식은 뽑지 않는다.
    """
    rng = np.random.default_rng(seed)
    true_items: List[Qbf] = []
    false_items: List[Qbf] = []
    seen = set()

    def offer(qbf: Qbf):
        key = format_qbf(qbf)
        if key in seen or estimate_game_work(arithmetize(qbf)) > work_ceiling:
            return
        bucket = true_items if evaluate_qbf(qbf) else false_items
        limit = true_count if bucket is true_items else false_count
        if len(bucket) < limit:
            seen.add(key)
            bucket.append(qbf)

    for text in SUITE_SEEDS:
        offer(parse_qbf(text))
    names_pool = ('x', 'y', 'z', 'u', 'v', 'w')[:max(1, min(max_vars, 6))]
    attempts = 0
    while (len(true_items) < true_count or len(false_items) < false_count) and attempts < 10000:
        attempts += 1
        count = int(rng.integers(1, len(names_pool) + 1))
        names = names_pool[:count]
        prefix = tuple((FORALL if rng.random() < 0.5 else EXISTS, name) for name in names)
        matrix = _random_matrix(rng, names, int(rng.integers(max_connectives + 1)))
        offer(Qbf(prefix, matrix))
    return true_items + false_items


def suite_report(seed: int, work_ceiling: int = DEFAULT_WORK_CEILING, **suite_args) -> Dict:
    """묶음 전체의 완전성/건전성 검사"""
    rows = []
    for qbf in qbf_suite(seed, work_ceiling=work_ceiling, **suite_args):
        arith = arithmetize(qbf)
        truth = evaluate_qbf(qbf)
        honest = honest_acceptance(qbf, arith.p, work_ceiling)
        adversarial = max_adversarial_acceptance(qbf, arith.p, work_ceiling)
        rows.append({
            'qbf': format_qbf(qbf),
            'true': truth,
            'p': arith.p,
            'rounds': arith.rounds,
            'degree_bound': arith.degree_bound,
            'capital': arith.capital,
            'honest_acceptance': honest,
            'max_adversarial_acceptance': adversarial,
            'ok': (honest == 1) if truth else (adversarial <= arith.capital),
        })
    return {
        'seed': seed,
        'true': sum(1 for r in rows if r['true']),
        'false': sum(1 for r in rows if not r['true']),
        'failures': [r['qbf'] for r in rows if not r['ok']],
        'rows': rows,
    }


def derivation_growth_report(qbfs: Sequence[Qbf], tree_ceiling: int = DEFAULT_TREE_CEILING) -> List[Dict]:
    """전략 길이 대 추출된 결정적 유도 크기 (측정만)"""
    rows = []
    for qbf in qbfs:
        if not evaluate_qbf(qbf):
            continue
        try:
            compiled = compile_honest_strategy(qbf, tree_ceiling=tree_ceiling)
        except WorkCeilingError:
            logger.warning(f"⚠️ 트리 한도 초과로 건너뜀: {format_qbf(qbf)}")
            continue
        result = extract_deterministic(compiled.tree, compiled.target)
        rows.append({
            'qbf': format_qbf(qbf),
            'p': compiled.arith.p,
            'rounds': compiled.arith.rounds,
            'strategy_length': tree_depth(compiled.tree),
            'tree_size': tree_size(compiled.tree),
            'probability': prove_probability(compiled.tree, compiled.target).probability,
            'derivation_size': len(result.derivation) if result.derived else None,
        })
    rows.sort(key=lambda row: (row['strategy_length'], row['qbf']))
    return rows
