"""
유한화 모형 위의 명제 언어, 이론, 유도 객체

- 원자 명제: C(x) >= k, C(x|y) >= k, K(x) >= k, 비정지, t 단계 내 정지
- FracForall(δ, A, R): A 의 원소 중 R 을 만족하지 않는 비율이 δ 이하
- 두 가지 함의 판정: 의미론적(semantic_entails) / 구문적(check_derivation)
"""

import logging
from dataclasses import dataclass, field, fields, replace
from fractions import Fraction
from typing import Any, Callable, Dict, Iterator, List, Optional, Sequence, Tuple, Type, Union

from core.errors import CertificationError, OutOfLimitsError
from core.machine import PLAIN, MachineConfig, run
from utils.bitstrings import parse_bits, render_bits, strings_of_length
from utils.rationals import parse_fraction, render_fraction, to_fraction
from utils.sexpr import SExpr, format_sexpr, parse_sexpr

logger = logging.getLogger(__name__)

SEMANTIC = 'semantic'
SYNTACTIC = 'syntactic'
BACKENDS = (SEMANTIC, SYNTACTIC)

HOLE_TOKEN = '_'


class _Hole:
    """템플릿의 빈 자리"""
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return 'HOLE'

    def __reduce__(self):
        return (_Hole, ())


HOLE = _Hole()


# ------------------------------------------
# 유한화 모형
# ------------------------------------------

class FinitizedModel:
    """표준 모형 대신 쓰는 유한 모형 (정지 = T∞ 안에 정지)"""

    def __init__(self, machine: MachineConfig, plain=None, prefix=None,
                 conditionals: Optional[Dict[str, Any]] = None, budget: Optional[int] = None):
        self.machine = machine.with_variant(PLAIN)
        self.plain = plain
        self.prefix = prefix
        self.conditionals = dict(conditionals or {})
        if budget is None:
            budget = plain.budget if plain is not None else 0
        self.budget = budget
        self.N = plain.max_string_len if plain is not None else -1
        self.L = plain.max_prog_len if plain is not None else machine.max_program_len
        self._runs: Dict[str, Tuple[bool, int]] = {}

    @classmethod
    def tableless(cls, machine: Optional[MachineConfig] = None) -> 'FinitizedModel':
        """복잡도 원자를 쓰지 않는 명제용 (예: 다항식 주장)"""
        return cls(machine or MachineConfig())

    def plain_value(self, x: str, atom=None) -> Optional[int]:
        if self.plain is None or len(x) > self.plain.max_string_len:
            raise OutOfLimitsError(f"평문 표 한도 밖: {_describe(atom, x)}", {'atom': _describe(atom, x)})
        return self.plain.value(x)

    def prefix_value(self, x: str, atom=None) -> Optional[int]:
        if self.prefix is None or len(x) > self.prefix.max_string_len:
            raise OutOfLimitsError(f"접두 표 한도 밖: {_describe(atom, x)}", {'atom': _describe(atom, x)})
        return self.prefix.value(x)

    def conditional_value(self, x: str, y: str, atom=None) -> Optional[int]:
        table = self.conditionals.get(y)
        if table is None or len(x) > table.max_string_len:
            raise OutOfLimitsError(f"조건부 표 한도 밖: {_describe(atom, x)}", {'atom': _describe(atom, x)})
        return table.value(x)

    def halts(self, p: str, t: int, atom=None) -> bool:
        if t < 0 or t > self.budget or len(p) > self.L:
            raise OutOfLimitsError(f"정지 판정 한도 밖: {_describe(atom, p)}", {'atom': _describe(atom, p)})
        if p not in self._runs:
            result = run(self.machine, p, self.budget)
            self._runs[p] = (result.halted, result.steps or 0)
        halted, steps = self._runs[p]
        return halted and steps <= t

    def describe(self) -> str:
        return f"model(N={self.N}, L={self.L}, T={self.budget})"


def _describe(atom, fallback: str) -> str:
    return format_statement(atom) if isinstance(atom, Statement) else render_bits(fallback)


def _value_at_least(value: Optional[int], k: int, limit: int, model_limit_atom) -> bool:
    if value is not None:
        return value >= k
    # 값 미정의 = 길이 limit 이하 프로그램 없음
    if k <= limit + 1:
        return True
    raise OutOfLimitsError(f"판정 불가: {format_statement(model_limit_atom)}",
                           {'atom': format_statement(model_limit_atom)})


# ------------------------------------------
# 명제
# ------------------------------------------

STATEMENT_KINDS: Dict[str, Type['Statement']] = {}


def register_statement(head: str):
    """S-식 머리 기호와 명제 클래스를 등록"""
    def decorator(cls):
        cls.HEAD = head
        STATEMENT_KINDS[head] = cls
        return cls
    return decorator


def _substitute(value, filler):
    if value is HOLE:
        return filler
    if isinstance(value, Statement):
        return value.instantiate(filler)
    if isinstance(value, tuple):
        return tuple(_substitute(v, filler) for v in value)
    return value


def _contains_hole(value) -> bool:
    if value is HOLE:
        return True
    if isinstance(value, Statement):
        return value.has_hole()
    if isinstance(value, tuple):
        return any(_contains_hole(v) for v in value)
    return False


def encode_bits(x) -> str:
    return HOLE_TOKEN if x is HOLE else render_bits(x)


def decode_bits(token: str):
    return HOLE if token == HOLE_TOKEN else parse_bits(token)


def decode_int(token: str):
    return HOLE if token == HOLE_TOKEN else int(token)


class Statement:
    """기초 명제 (불변)"""
    HEAD = ''

    def holds(self, model: FinitizedModel) -> bool:
        raise NotImplementedError

    def instantiate(self, filler) -> 'Statement':
        return replace(self, **{f.name: _substitute(getattr(self, f.name), filler)
                                for f in fields(self)})

    def has_hole(self) -> bool:
        return any(_contains_hole(getattr(self, f.name)) for f in fields(self))

    def to_sexpr(self) -> SExpr:
        raise NotImplementedError

    @classmethod
    def from_sexpr(cls, args: List[SExpr]) -> 'Statement':
        raise NotImplementedError

    def __str__(self) -> str:
        return format_statement(self)


@register_statement('C>=')
@dataclass(frozen=True)
class CGe(Statement):
    x: Union[str, _Hole]
    k: int

    def holds(self, model: FinitizedModel) -> bool:
        return _value_at_least(model.plain_value(self.x, self), self.k, model.L, self)

    def to_sexpr(self) -> SExpr:
        return [self.HEAD, encode_bits(self.x), str(self.k)]

    @classmethod
    def from_sexpr(cls, args):
        return cls(decode_bits(args[0]), int(args[1]))


@register_statement('Ccond>=')
@dataclass(frozen=True)
class CCondGe(Statement):
    x: Union[str, _Hole]
    y: str
    k: int

    def holds(self, model: FinitizedModel) -> bool:
        return _value_at_least(model.conditional_value(self.x, self.y, self), self.k, model.L, self)

    def to_sexpr(self) -> SExpr:
        return [self.HEAD, encode_bits(self.x), encode_bits(self.y), str(self.k)]

    @classmethod
    def from_sexpr(cls, args):
        return cls(decode_bits(args[0]), decode_bits(args[1]), int(args[2]))


@register_statement('K>=')
@dataclass(frozen=True)
class KGe(Statement):
    x: Union[str, _Hole]
    k: int

    def holds(self, model: FinitizedModel) -> bool:
        limit = model.prefix.max_prog_len if model.prefix is not None else model.L
        return _value_at_least(model.prefix_value(self.x, self), self.k, limit, self)

    def to_sexpr(self) -> SExpr:
        return [self.HEAD, encode_bits(self.x), str(self.k)]

    @classmethod
    def from_sexpr(cls, args):
        return cls(decode_bits(args[0]), int(args[1]))


@register_statement('nonterm')
@dataclass(frozen=True)
class NonTerm(Statement):
    p: Union[str, _Hole]

    def holds(self, model: FinitizedModel) -> bool:
        return not model.halts(self.p, model.budget, self)

    def to_sexpr(self) -> SExpr:
        return [self.HEAD, encode_bits(self.p)]

    @classmethod
    def from_sexpr(cls, args):
        return cls(decode_bits(args[0]))


@register_statement('halts-within')
@dataclass(frozen=True)
class HaltsWithin(Statement):
    p: Union[str, _Hole]
    t: int

    def holds(self, model: FinitizedModel) -> bool:
        return model.halts(self.p, self.t, self)

    def to_sexpr(self) -> SExpr:
        return [self.HEAD, encode_bits(self.p), str(self.t)]

    @classmethod
    def from_sexpr(cls, args):
        return cls(decode_bits(args[0]), int(args[1]))


@register_statement('not')
@dataclass(frozen=True)
class Not(Statement):
    body: Statement

    def holds(self, model: FinitizedModel) -> bool:
        return not self.body.holds(model)

    def to_sexpr(self) -> SExpr:
        return [self.HEAD, self.body.to_sexpr()]

    @classmethod
    def from_sexpr(cls, args):
        return cls(statement_from_sexpr(args[0]))


@dataclass(frozen=True)
class _Binary(Statement):
    left: Statement
    right: Statement

    def to_sexpr(self) -> SExpr:
        return [self.HEAD, self.left.to_sexpr(), self.right.to_sexpr()]

    @classmethod
    def from_sexpr(cls, args):
        return cls(statement_from_sexpr(args[0]), statement_from_sexpr(args[1]))


@register_statement('and')
@dataclass(frozen=True)
class And(_Binary):
    def holds(self, model: FinitizedModel) -> bool:
        return self.left.holds(model) and self.right.holds(model)


@register_statement('or')
@dataclass(frozen=True)
class Or(_Binary):
    def holds(self, model: FinitizedModel) -> bool:
        return self.left.holds(model) or self.right.holds(model)


@register_statement('implies')
@dataclass(frozen=True)
class Implies(_Binary):
    """left → right"""

    @property
    def antecedent(self) -> Statement:
        return self.left

    @property
    def consequent(self) -> Statement:
        return self.right

    def holds(self, model: FinitizedModel) -> bool:
        return (not self.left.holds(model)) or self.right.holds(model)


# ------------------------------------------
# 유한 집합 A
# ------------------------------------------

DOMAIN_KINDS: Dict[str, Type['Domain']] = {}


def _register_domain(head: str):
    def decorator(cls):
        cls.HEAD = head
        DOMAIN_KINDS[head] = cls
        return cls
    return decorator


class Domain:
    HEAD = ''

    def elements(self) -> List:
        raise NotImplementedError

    @property
    def size(self) -> int:
        return len(self.elements())

    def to_sexpr(self) -> SExpr:
        raise NotImplementedError


@_register_domain('strings')
@dataclass(frozen=True)
class StringsOfLength(Domain):
    """길이 n 인 모든 문자열"""
    n: int

    def __post_init__(self):
        if self.n < 0:
            raise ValueError(f"길이는 0 이상이어야 합니다: {self.n}")

    def elements(self) -> List[str]:
        return list(strings_of_length(self.n))

    @property
    def size(self) -> int:
        return 2 ** self.n

    def to_sexpr(self) -> SExpr:
        return [self.HEAD, str(self.n)]

    @classmethod
    def from_sexpr(cls, args):
        return cls(int(args[0]))


@_register_domain('explicit')
@dataclass(frozen=True)
class ExplicitDomain(Domain):
    items: Tuple[str, ...]

    def __post_init__(self):
        if not self.items:
            raise ValueError("ExplicitDomain 은 비어 있을 수 없습니다")
        if len(set(self.items)) != len(self.items):
            raise ValueError("ExplicitDomain 원소가 중복됩니다")

    def elements(self) -> List[str]:
        return list(self.items)

    def to_sexpr(self) -> SExpr:
        return [self.HEAD] + [render_bits(x) for x in self.items]

    @classmethod
    def from_sexpr(cls, args):
        return cls(tuple(parse_bits(a) for a in args))


@_register_domain('field')
@dataclass(frozen=True)
class FieldElements(Domain):
    """F_p = {0, ..., p-1}"""
    p: int

    def __post_init__(self):
        if self.p < 1:
            raise ValueError(f"p 는 1 이상이어야 합니다: {self.p}")

    def elements(self) -> List[int]:
        return list(range(self.p))

    @property
    def size(self) -> int:
        return self.p

    def to_sexpr(self) -> SExpr:
        return [self.HEAD, str(self.p)]

    @classmethod
    def from_sexpr(cls, args):
        return cls(int(args[0]))


def domain_from_sexpr(expr: SExpr) -> Domain:
    if not isinstance(expr, list) or not expr or expr[0] not in DOMAIN_KINDS:
        raise ValueError(f"알 수 없는 집합 표기: {expr!r}")
    return DOMAIN_KINDS[expr[0]].from_sexpr(expr[1:])


@register_statement('frac-forall')
@dataclass(frozen=True)
class FracForall(Statement):
    """|{a ∈ A : ¬R(a)}| <= δ·|A|"""
    delta: Fraction
    domain: Domain
    template: Statement

    def __post_init__(self):
        object.__setattr__(self, 'delta', to_fraction(self.delta))
        if not 0 <= self.delta <= 1:
            raise ValueError(f"δ 는 [0, 1] 범위여야 합니다: {self.delta}")
        if not self.template.has_hole():
            raise ValueError("템플릿에 빈 자리가 없습니다")
        if self.domain.size == 0:
            raise ValueError("FracForall 의 정의역이 비어 있습니다")

    def instance(self, element) -> Statement:
        return self.template.instantiate(element)

    def instances(self) -> Iterator[Tuple[Any, Statement]]:
        for element in self.domain.elements():
            yield element, self.template.instantiate(element)

    def failures(self, model: FinitizedModel) -> int:
        return sum(1 for _, s in self.instances() if not s.holds(model))

    def holds(self, model: FinitizedModel) -> bool:
        return self.failures(model) <= self.delta * self.domain.size

    # 템플릿의 빈 자리는 이 명제에 묶여 있음
    def instantiate(self, filler) -> 'Statement':
        return self

    def has_hole(self) -> bool:
        return False

    def to_sexpr(self) -> SExpr:
        return [self.HEAD, render_fraction(self.delta), self.domain.to_sexpr(), self.template.to_sexpr()]

    @classmethod
    def from_sexpr(cls, args):
        return cls(parse_fraction(args[0]), domain_from_sexpr(args[1]), statement_from_sexpr(args[2]))


def negate(statement: Statement) -> Statement:
    return statement.body if isinstance(statement, Not) else Not(statement)


def statement_from_sexpr(expr: SExpr) -> Statement:
    if not isinstance(expr, list) or not expr:
        raise ValueError(f"명제 표기가 아닙니다: {expr!r}")
    head = expr[0]
    if head not in STATEMENT_KINDS:
        raise ValueError(f"지원하지 않는 명제 종류: {head}")
    return STATEMENT_KINDS[head].from_sexpr(expr[1:])


def format_statement(statement: Statement) -> str:
    return format_sexpr(statement.to_sexpr())


def parse_statement(text: str) -> Statement:
    return statement_from_sexpr(parse_sexpr(text))


def eval_statement(statement: Statement, model: FinitizedModel) -> bool:
    """유한화 모형에서의 진리값"""
    if statement.has_hole():
        raise ValueError(f"빈 자리가 남은 명제는 평가할 수 없습니다: {format_statement(statement)}")
    return statement.holds(model)


# ------------------------------------------
# 공리 도식과 이론
# ------------------------------------------

AXIOM_SCHEMAS: Dict[str, Callable[[Statement, FinitizedModel], bool]] = {}


def register_axiom_schema(name: str):
    """공리 도식 등록: (명제, 모형) -> 인증 여부"""
    def decorator(func):
        AXIOM_SCHEMAS[name] = func
        return func
    return decorator


@register_axiom_schema('counting')
def _counting_schema(statement: Statement, model: FinitizedModel) -> bool:
    return isinstance(statement, FracForall) and statement.holds(model)


@register_axiom_schema('witness')
def _witness_schema(statement: Statement, model: FinitizedModel) -> bool:
    """Σ1 사실: 증거가 있는 상한, 유한 시간 정지, 자명한 하한"""
    if isinstance(statement, (CGe, KGe, CCondGe)):
        return statement.k <= 0
    if isinstance(statement, HaltsWithin):
        return statement.holds(model)
    if isinstance(statement, Not):
        body = statement.body
        if isinstance(body, (CGe, KGe, CCondGe, HaltsWithin, NonTerm)):
            return not body.holds(model)
    return False


DEFAULT_SCHEMAS = ('counting', 'witness')


@dataclass(frozen=True)
class AxiomBase:
    """기본 공리계 (이름 + 사용하는 도식)"""
    name: str
    schemas: Tuple[str, ...]
    model: FinitizedModel = field(compare=False, hash=False, repr=False)

    def certify_with(self, schema: str, statement: Statement) -> bool:
        if schema not in self.schemas or schema not in AXIOM_SCHEMAS:
            return False
        if statement.has_hole():
            return False
        try:
            return bool(AXIOM_SCHEMAS[schema](statement, self.model))
        except OutOfLimitsError:
            return False

    def certifying_schema(self, statement: Statement) -> Optional[str]:
        for schema in self.schemas:
            if self.certify_with(schema, statement):
                return schema
        return None


def standard_base(model: FinitizedModel, extra_schemas: Sequence[str] = (),
                  name: str = 'toy-arith') -> AxiomBase:
    return AxiomBase(name, tuple(DEFAULT_SCHEMAS) + tuple(extra_schemas), model)


@dataclass(frozen=True)
class Theory:
    """기본 공리계 + 추가 명제"""
    base: AxiomBase
    extras: Tuple[Statement, ...] = ()

    def __post_init__(self):
        if len(set(self.extras)) != len(self.extras):
            raise ValueError("이론의 추가 명제가 중복됩니다")

    def extend(self, statement: Statement) -> 'Theory':
        if statement in self.extras:
            return self
        return Theory(self.base, self.extras + (statement,))

    def contains(self, statement: Statement) -> bool:
        return statement in self.extras

    @property
    def model(self) -> FinitizedModel:
        return self.base.model


def semantic_entails(theory: Theory, phi: Statement, model: FinitizedModel) -> bool:
    """추가 명제가 모두 참이면 φ 도 참인가 (단일 모형에서의 실질 함의)"""
    if not all(eval_statement(s, model) for s in theory.extras):
        return True
    return eval_statement(phi, model)


def consistent(theory: Theory) -> bool:
    """반박 기반 무모순성: 기본 공리계가 어떤 추가 명제의 부정을 인증하면 모순"""
    for statement in theory.extras:
        opposite = negate(statement)
        if opposite in theory.extras:
            return False
        if theory.base.certifying_schema(opposite) is not None:
            return False
    return True


# ------------------------------------------
# 유도
# ------------------------------------------

AXIOM, EXTRA, HYP, RULE, DISCHARGE, WEAKEN = 'axiom', 'extra', 'hyp', 'rule', 'discharge', 'weaken'


@dataclass(frozen=True)
class Justification:
    kind: str
    name: str = ''
    refs: Tuple[int, ...] = ()

    def shifted(self, offset: int) -> 'Justification':
        if self.kind in (RULE, DISCHARGE, WEAKEN):
            return Justification(self.kind, self.name, tuple(r + offset for r in self.refs))
        return self

    def to_sexpr(self) -> SExpr:
        head = [self.kind] + ([self.name] if self.kind in (AXIOM, RULE) else [])
        return head + [str(r) for r in self.refs]

    @classmethod
    def from_sexpr(cls, expr: SExpr) -> 'Justification':
        kind = expr[0]
        if kind in (AXIOM, RULE):
            return cls(kind, expr[1], tuple(int(r) for r in expr[2:]))
        if kind in (EXTRA, HYP, DISCHARGE, WEAKEN):
            return cls(kind, '', tuple(int(r) for r in expr[1:]))
        raise ValueError(f"알 수 없는 근거: {kind}")

    def describe(self) -> str:
        refs = ', '.join(str(r + 1) for r in self.refs) if self.kind != HYP else str(self.refs[0] + 1)
        label = f"{self.kind} {self.name}".strip()
        return f"{label} {refs}".strip() if self.refs else label


def axiom(schema: str) -> Justification:
    return Justification(AXIOM, schema)


def extra() -> Justification:
    return Justification(EXTRA)


def hyp(index: int) -> Justification:
    return Justification(HYP, '', (index,))


def rule(name: str, *premises: int) -> Justification:
    return Justification(RULE, name, tuple(premises))


def discharge(index: int) -> Justification:
    return Justification(DISCHARGE, '', (index,))


def weaken(index: int) -> Justification:
    return Justification(WEAKEN, '', (index,))


@dataclass(frozen=True)
class Step:
    statement: Statement
    justification: Justification
    context: Tuple[Statement, ...] = ()


@dataclass(frozen=True)
class Derivation:
    """단계의 나열; 결론은 마지막 단계"""
    steps: Tuple[Step, ...] = ()

    @property
    def conclusion(self) -> Optional[Statement]:
        return self.steps[-1].statement if self.steps else None

    def __len__(self) -> int:
        return len(self.steps)


class DerivationBuilder:
    """유도를 이어 붙이며 단계 번호를 관리"""

    def __init__(self):
        self.steps: List[Step] = []

    def add(self, statement: Statement, justification: Justification,
            context: Tuple[Statement, ...] = ()) -> int:
        self.steps.append(Step(statement, justification, tuple(context)))
        return len(self.steps) - 1

    def include(self, derivation: Derivation) -> int:
        """다른 유도를 통째로 붙이고 그 결론의 번호를 돌려줌"""
        if not derivation.steps:
            raise ValueError("빈 유도는 붙일 수 없습니다")
        offset = len(self.steps)
        for step in derivation.steps:
            self.steps.append(Step(step.statement, step.justification.shifted(offset), step.context))
        return len(self.steps) - 1

    def build(self) -> Derivation:
        return Derivation(tuple(self.steps))


# 추론 규칙: (전제 명제들, 결론) -> 타당성
RULES: Dict[str, Callable[[List[Statement], Statement], bool]] = {}


def register_rule(name: str):
    def decorator(func):
        RULES[name] = func
        return func
    return decorator


@register_rule('modus_ponens')
def _modus_ponens(premises, conclusion) -> bool:
    return len(premises) == 2 and premises[1] == Implies(premises[0], conclusion)


@register_rule('and_intro')
def _and_intro(premises, conclusion) -> bool:
    return len(premises) == 2 and conclusion == And(premises[0], premises[1])


@register_rule('and_elim_l')
def _and_elim_l(premises, conclusion) -> bool:
    return len(premises) == 1 and isinstance(premises[0], And) and premises[0].left == conclusion


@register_rule('and_elim_r')
def _and_elim_r(premises, conclusion) -> bool:
    return len(premises) == 1 and isinstance(premises[0], And) and premises[0].right == conclusion


@register_rule('or_intro_l')
def _or_intro_l(premises, conclusion) -> bool:
    return len(premises) == 1 and isinstance(conclusion, Or) and conclusion.left == premises[0]


@register_rule('or_intro_r')
def _or_intro_r(premises, conclusion) -> bool:
    return len(premises) == 1 and isinstance(conclusion, Or) and conclusion.right == premises[0]


@register_rule('weakening')
def _weakening(premises, conclusion) -> bool:
    return len(premises) == 1 and isinstance(conclusion, Implies) and conclusion.right == premises[0]


@register_rule('disj_from_frac')
def _disj_from_frac(premises, conclusion) -> bool:
    """FracForall(τ,A,R) 와 서로 다른 a_j 에 대한 R(a_j) → φ 가 t > τ|A| 개면 φ"""
    if len(premises) < 2 or not isinstance(premises[0], FracForall):
        return False
    frac = premises[0]
    by_instance = {s: a for a, s in frac.instances()}
    chosen = set()
    for implication in premises[1:]:
        if not isinstance(implication, Implies) or implication.right != conclusion:
            return False
        if implication.left not in by_instance:
            return False
        chosen.add(by_instance[implication.left])
    if len(chosen) != len(premises) - 1:
        return False
    return len(chosen) > frac.delta * frac.domain.size


@dataclass(frozen=True)
class CheckResult:
    ok: bool
    failed_index: Optional[int] = None
    reason: str = ''

    def __bool__(self) -> bool:
        return self.ok


def _check_step(index: int, step: Step, steps: Tuple[Step, ...], theory: Theory) -> str:
    just = step.justification
    refs = just.refs
    if any(r < 0 or (just.kind != HYP and r >= index) for r in refs):
        return "앞 단계만 참조할 수 있습니다"

    if just.kind == AXIOM:
        if not theory.base.certify_with(just.name, step.statement):
            return f"공리 도식 {just.name} 이 인증하지 않습니다"
    elif just.kind == EXTRA:
        if not theory.contains(step.statement):
            return "이론의 추가 명제가 아닙니다"
    elif just.kind == HYP:
        if len(refs) != 1 or refs[0] >= len(step.context) or step.context[refs[0]] != step.statement:
            return "가정 번호가 맞지 않습니다"
    elif just.kind == RULE:
        if just.name not in RULES:
            return f"알 수 없는 규칙: {just.name}"
        premises = [steps[r] for r in refs]
        if any(p.context != step.context for p in premises):
            return "전제의 가정 문맥이 다릅니다"
        if not RULES[just.name]([p.statement for p in premises], step.statement):
            return f"규칙 {just.name} 적용이 틀렸습니다"
    elif just.kind == DISCHARGE:
        if len(refs) != 1:
            return "discharge 는 전제 하나"
        prior = steps[refs[0]]
        if not isinstance(step.statement, Implies) or step.statement.right != prior.statement:
            return "discharge 결론 형식이 틀렸습니다"
        if prior.context != step.context + (step.statement.left,):
            return "discharge 가정 문맥이 맞지 않습니다"
    elif just.kind == WEAKEN:
        if len(refs) != 1:
            return "weaken 은 전제 하나"
        prior = steps[refs[0]]
        if prior.statement != step.statement or not set(prior.context) <= set(step.context):
            return "weaken 적용이 틀렸습니다"
    else:
        return f"알 수 없는 근거 종류: {just.kind}"
    return ''


def check_derivation(derivation: Derivation, theory: Theory,
                     goal: Optional[Statement] = None) -> CheckResult:
    """각 단계를 검사; 첫 번째 잘못된 단계 번호를 돌려줌"""
    steps = derivation.steps
    if not steps:
        return CheckResult(False, 0, "빈 유도")
    for index, step in enumerate(steps):
        reason = _check_step(index, step, steps, theory)
        if reason:
            return CheckResult(False, index, reason)
    if steps[-1].context:
        return CheckResult(False, len(steps) - 1, "결론에 해소되지 않은 가정이 있습니다")
    if goal is not None and steps[-1].statement != goal:
        return CheckResult(False, len(steps) - 1, "결론이 목표와 다릅니다")
    return CheckResult(True)


def deduction(derivation: Derivation, hypothesis: Statement) -> Derivation:
    """T + {H} 에서의 φ 유도를 T 에서의 H → φ 유도로 바꿈"""
    if not derivation.steps or derivation.steps[-1].context:
        raise ValueError("닫힌 유도만 변환할 수 있습니다")
    steps = []
    for step in derivation.steps:
        just = step.justification
        if just.kind == EXTRA and step.statement == hypothesis:
            just = hyp(0)
        elif just.kind == HYP:
            just = hyp(just.refs[0] + 1)
        steps.append(Step(step.statement, just, (hypothesis,) + step.context))
    steps.append(Step(Implies(hypothesis, derivation.conclusion), discharge(len(steps) - 1), ()))
    return Derivation(tuple(steps))


def single_step(statement: Statement, justification: Justification) -> Derivation:
    return Derivation((Step(statement, justification),))


@dataclass(frozen=True)
class Certificate:
    """FracForall 의 공리급 인증서"""
    statement: FracForall
    schema: str
    failures: int
    size: int

    @property
    def step(self) -> Step:
        return Step(self.statement, axiom(self.schema))

    @property
    def derivation(self) -> Derivation:
        return Derivation((self.step,))


def frac_forall_certify(delta, domain: Domain, template: Statement,
                        model: FinitizedModel) -> Certificate:
    """전수 평가로 FracForall(δ, A, R) 을 인증"""
    statement = FracForall(to_fraction(delta), domain, template)
    failures = statement.failures(model)
    if failures > statement.delta * domain.size:
        raise CertificationError(
            f"FracForall 인증 실패: 반례 {failures}개 > {render_fraction(statement.delta)}·{domain.size}",
            {'failures': failures, 'size': domain.size, 'delta': render_fraction(statement.delta),
             'statement': format_statement(statement)},
        )
    return Certificate(statement, 'counting', failures, domain.size)


# ------------------------------------------
# 유도 직렬화
# ------------------------------------------

def derivation_to_sexpr(derivation: Derivation) -> SExpr:
    return ['derivation'] + [
        ['step', step.statement.to_sexpr(), ['ctx'] + [s.to_sexpr() for s in step.context],
         step.justification.to_sexpr()]
        for step in derivation.steps
    ]


def derivation_from_sexpr(expr: SExpr) -> Derivation:
    if not isinstance(expr, list) or not expr or expr[0] != 'derivation':
        raise ValueError("유도 표기가 아닙니다")
    steps = []
    for item in expr[1:]:
        _, statement, ctx, just = item
        steps.append(Step(statement_from_sexpr(statement), Justification.from_sexpr(just),
                          tuple(statement_from_sexpr(s) for s in ctx[1:])))
    return Derivation(tuple(steps))


def format_derivation(derivation: Derivation) -> str:
    """번호 붙인 단계 목록"""
    lines = []
    for number, step in enumerate(derivation.steps, start=1):
        context = ', '.join(format_statement(s) for s in step.context)
        prefix = f"{context} ⊢ " if context else ''
        lines.append(f"{number:>4}. {prefix}{format_statement(step.statement)}"
                     f"    [{step.justification.describe()}]")
    return '\n'.join(lines)
