# ==========================================
# core/strategy.py - 확률적 증명 전략 트리
# ==========================================

import logging
from dataclasses import dataclass, field, replace
from fractions import Fraction
from pathlib import Path
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np
from scipy import stats

from core.errors import InternalConsistencyError, KolmogorovLabError, TreeValidationError
from core.logic import (
    BACKENDS, SEMANTIC, SYNTACTIC, AxiomBase, Derivation, DerivationBuilder, FinitizedModel,
    FracForall, Statement, Theory, axiom, check_derivation, deduction, derivation_from_sexpr,
    derivation_to_sexpr, eval_statement, extra, format_statement, rule, semantic_entails,
    single_step, statement_from_sexpr,
)
from utils.rationals import parse_fraction, render_fraction, to_fraction
from utils.report_writer import atomic_write
from utils.sexpr import format_sexpr, parse_sexpr

logger = logging.getLogger(__name__)

LEAF = 'leaf'
DETERMINISTIC = 'deterministic'
PROBABILISTIC = 'probabilistic'

TREE_FORMAT_VERSION = 'v1'


@dataclass(frozen=True, eq=False)
class StrategyNode:
    """(이론, 자본) 라벨이 붙은 노드

    deterministic: statement = 추가된 명제, derivation = 부모 이론에서의 유도
    probabilistic: statement = 분기 FracForall(τ, A, R), derivation = 그 유도
    """
    kind: str
    theory: Theory
    capital: Fraction
    statement: Optional[Statement] = None
    derivation: Optional[Derivation] = None
    children: Tuple['StrategyNode', ...] = ()

    @property
    def cost(self) -> Fraction:
        if self.kind == PROBABILISTIC and isinstance(self.statement, FracForall):
            return self.statement.delta
        return Fraction(0)


@dataclass(frozen=True)
class StrategyTree:
    root: StrategyNode

    @property
    def epsilon(self) -> Fraction:
        return self.root.capital

    @property
    def base(self) -> AxiomBase:
        return self.root.theory.base


@dataclass
class ValidationReport:
    violations: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok


@dataclass
class EvalResult:
    target: Statement
    probability: Fraction
    leaf_outcomes: Dict[str, bool]

    def to_dict(self) -> Dict:
        return {
            'target': format_statement(self.target),
            'probability': render_fraction(self.probability),
            'leaves': len(self.leaf_outcomes),
            'leaves_yielding': sum(1 for v in self.leaf_outcomes.values() if v),
        }


@dataclass
class MonteCarloResult:
    target: Statement
    trials: int
    successes: int
    seed: int
    ci_low: float
    ci_high: float

    @property
    def estimate(self) -> Fraction:
        return Fraction(self.successes, self.trials)

    def to_dict(self) -> Dict:
        return {
            'target': format_statement(self.target),
            'trials': self.trials,
            'successes': self.successes,
            'estimate': render_fraction(self.estimate),
            'ci95': [round(self.ci_low, 6), round(self.ci_high, 6)],
            'seed': self.seed,
        }


@dataclass
class ExtractionResult:
    status: str  # 'derived' | 'insufficient-probability'
    probability: Fraction
    epsilon: Fraction
    derivation: Optional[Derivation] = None

    @property
    def derived(self) -> bool:
        return self.status == 'derived'


# ------------------------------------------
# 트리 구성
# ------------------------------------------

class StrategyBuilder:
    """부모 이론/자본에서 자식 라벨을 계산해 주는 노드 생성기"""

    def __init__(self, base: AxiomBase):
        self.base = base

    def root_theory(self) -> Theory:
        return Theory(self.base)

    @staticmethod
    def leaf(theory: Theory, capital) -> StrategyNode:
        return StrategyNode(LEAF, theory, to_fraction(capital))

    def statement_derivation(self, theory: Theory, statement: Statement) -> Derivation:
        """이론에서 바로 얻을 수 있는 명제의 한 단계 유도 (추가 명제 또는 공리)"""
        if theory.contains(statement):
            return single_step(statement, extra())
        schema = self.base.certifying_schema(statement)
        if schema is None:
            raise TreeValidationError(f"한 단계로 유도되지 않는 명제: {format_statement(statement)}")
        return single_step(statement, axiom(schema))

    @staticmethod
    def deterministic(theory: Theory, capital, statement: Statement, derivation: Derivation,
                      build_child: Callable[[Theory, Fraction], StrategyNode]) -> StrategyNode:
        capital = to_fraction(capital)
        child = build_child(theory.extend(statement), capital)
        return StrategyNode(DETERMINISTIC, theory, capital, statement, derivation, (child,))

    @staticmethod
    def probabilistic(theory: Theory, capital, branching: FracForall, derivation: Derivation,
                      build_child: Callable[[object, Theory, Fraction], StrategyNode]) -> StrategyNode:
        capital = to_fraction(capital)
        residual = capital - branching.delta
        children = tuple(build_child(element, theory.extend(instance), residual)
                         for element, instance in branching.instances())
        return StrategyNode(PROBABILISTIC, theory, capital, branching, derivation, children)


def iter_nodes(tree: StrategyTree):
    """(경로, 노드) 를 전위 순서로"""
    stack = [('root', tree.root)]
    while stack:
        path, node = stack.pop()
        yield path, node
        for index in reversed(range(len(node.children))):
            stack.append((f"{path}/{index}", node.children[index]))


def tree_depth(tree: StrategyTree) -> int:
    """가장 긴 가지의 간선 수 (전략 길이)"""
    return max(path.count('/') for path, _ in iter_nodes(tree))


def tree_size(tree: StrategyTree) -> int:
    return sum(1 for _ in iter_nodes(tree))


def _derivable(theory: Theory, statement: Statement, derivation: Optional[Derivation],
               backend: str, model: FinitizedModel) -> bool:
    if backend == SEMANTIC:
        return semantic_entails(theory, statement, model)
    if derivation is None:
        return theory.contains(statement) or theory.base.certifying_schema(statement) is not None
    return bool(check_derivation(derivation, theory, goal=statement))


def validate_tree(tree: StrategyTree, backend: str = SYNTACTIC,
                  model: Optional[FinitizedModel] = None) -> ValidationReport:
    """트리 불변식 검사 (위반마다 노드 경로와 이유)"""
    if backend not in BACKENDS:
        raise ValueError(f"지원하지 않는 백엔드: {backend}")
    model = model or tree.base.model
    report = ValidationReport()
    root = tree.root
    if root.theory.extras:
        report.violations.append("root: root theory must be the base theory")

    for path, node in iter_nodes(tree):
        def violation(message: str):
            report.violations.append(f"{path}: {message}")

        if node.capital < 0:
            violation(f"negative capital {render_fraction(node.capital)}")
        if node.theory.base != root.theory.base:
            violation("base theory changed")

        if node.kind == LEAF:
            if node.children:
                violation("leaf has children")
        elif node.kind == DETERMINISTIC:
            if len(node.children) != 1:
                violation("deterministic node must have exactly one child")
                continue
            child = node.children[0]
            if node.statement is None:
                violation("deterministic node without statement")
                continue
            if child.theory != node.theory.extend(node.statement):
                violation("child theory is not parent theory plus the added statement")
            if child.capital != node.capital:
                violation("deterministic child capital differs")
            if not _derivable(node.theory, node.statement, node.derivation, backend, model):
                violation("added statement is not derivable")
        elif node.kind == PROBABILISTIC:
            if not node.children:
                violation("probabilistic node has no children")
                continue
            branching = node.statement
            if not isinstance(branching, FracForall):
                violation("branching statement is not FracForall")
                continue
            tau = branching.delta
            if tau > node.capital:
                violation(f"capital exceeded (τ={render_fraction(tau)} > δ={render_fraction(node.capital)})")
            if not _derivable(node.theory, branching, node.derivation, backend, model):
                violation("branching statement is not derivable")
            instances = list(branching.instances())
            if len(node.children) != len(instances):
                violation(f"expected {len(instances)} children, found {len(node.children)}")
                continue
            for (element, instance), child in zip(instances, node.children):
                if child.theory != node.theory.extend(instance):
                    violation(f"child for {element!r} does not add R(a)")
                if child.capital != node.capital - tau:
                    violation(f"child capital for {element!r} is not δ − τ")
        else:
            violation(f"unknown node kind {node.kind}")
    return report


def ensure_valid(tree: StrategyTree, backend: str = SYNTACTIC,
                 model: Optional[FinitizedModel] = None) -> StrategyTree:
    report = validate_tree(tree, backend, model)
    if not report.ok:
        raise TreeValidationError(f"전략 트리 불변식 위반 {len(report.violations)}건",
                                  {'violations': report.violations[:20]})
    return tree


# ------------------------------------------
# 평가
# ------------------------------------------

def leaf_yields(theory: Theory, phi: Statement, backend: str, model: FinitizedModel) -> bool:
    """잎의 이론에서 φ 가 나타나는가"""
    if backend == SEMANTIC:
        return semantic_entails(theory, phi, model)
    if backend == SYNTACTIC:
        return theory.contains(phi) or theory.base.certifying_schema(phi) is not None
    raise ValueError(f"지원하지 않는 백엔드: {backend}")


def _children(node: StrategyNode, path: Optional[str] = None) -> Tuple[StrategyNode, ...]:
    """잎이 아닌 노드의 자식 (비어 있으면 평가할 수 없음)"""
    if not node.children:
        raise TreeValidationError(f"자식이 없는 {node.kind} 노드", {'node': path, 'kind': node.kind})
    return node.children


def _node_probabilities(tree: StrategyTree, phi: Statement, backend: str,
                        model: FinitizedModel) -> Tuple[Dict[int, Fraction], Dict[str, bool]]:
    probabilities: Dict[int, Fraction] = {}
    outcomes: Dict[str, bool] = {}

    def visit(path: str, node: StrategyNode) -> Fraction:
        if node.kind == LEAF:
            try:
                yielded = leaf_yields(node.theory, phi, backend, model)
            except KolmogorovLabError as e:
                e.payload.setdefault('node', path)
                raise
            outcomes[path] = yielded
            value = Fraction(1) if yielded else Fraction(0)
        elif node.kind == DETERMINISTIC:
            value = visit(f"{path}/0", _children(node, path)[0])
        else:
            children = _children(node, path)
            total = sum((visit(f"{path}/{i}", child) for i, child in enumerate(children)), Fraction(0))
            value = total / len(children)
        probabilities[id(node)] = value
        return value

    visit('root', tree.root)
    return probabilities, outcomes


def prove_probability(tree: StrategyTree, phi: Statement, backend: str = SYNTACTIC,
                      model: Optional[FinitizedModel] = None) -> EvalResult:
    """역방향 귀납으로 φ 가 나타나는 잎의 확률을 정확히 계산"""
    model = model or tree.base.model
    probabilities, outcomes = _node_probabilities(tree, phi, backend, model)
    return EvalResult(phi, probabilities[id(tree.root)], outcomes)


def leaf_path_probability(tree: StrategyTree, phi: Statement, backend: str = SYNTACTIC,
                          model: Optional[FinitizedModel] = None) -> Fraction:
    """루트-잎 경로를 모두 펼쳐 무게를 더함 (prove_probability 와 독립된 계산)"""
    model = model or tree.base.model
    total = Fraction(0)
    stack = [(tree.root, Fraction(1))]
    while stack:
        node, weight = stack.pop()
        if node.kind == LEAF:
            if leaf_yields(node.theory, phi, backend, model):
                total += weight
            continue
        children = _children(node)
        share = weight / len(children)
        stack.extend((child, share) for child in children)
    return total


def false_statement_probability(tree: StrategyTree, model: Optional[FinitizedModel] = None) -> Fraction:
    """모형에서 거짓인 명제를 포함하는 잎들의 측도"""
    model = model or tree.base.model
    total = Fraction(0)
    stack = [(tree.root, Fraction(1))]
    while stack:
        node, weight = stack.pop()
        if node.kind == LEAF:
            if any(not eval_statement(s, model) for s in node.theory.extras):
                total += weight
            continue
        children = _children(node)
        share = weight / len(children)
        stack.extend((child, share) for child in children)
    return total


def monte_carlo(tree: StrategyTree, phi: Statement, trials: int, seed: int,
                backend: str = SYNTACTIC, model: Optional[FinitizedModel] = None,
                chunk_size: int = 1000) -> MonteCarloResult:
    """루트에서 무작위로 잎까지 내려가는 시행을 반복"""
    if trials < 1:
        raise ValueError("trials 는 1 이상이어야 합니다")
    model = model or tree.base.model
    cache: Dict[int, bool] = {}
    chunks = (trials + chunk_size - 1) // chunk_size
    generators = [np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(chunks)]

    successes = 0
    for index, rng in enumerate(generators):
        count = min(chunk_size, trials - index * chunk_size)
        for _ in range(count):
            node = tree.root
            while node.kind != LEAF:
                children = _children(node)
                node = children[0] if node.kind == DETERMINISTIC else children[int(rng.integers(len(children)))]
            if id(node) not in cache:
                cache[id(node)] = leaf_yields(node.theory, phi, backend, model)
            successes += cache[id(node)]

    interval = stats.binomtest(successes, trials).proportion_ci(confidence_level=0.95, method='exact')
    return MonteCarloResult(phi, trials, successes, seed, float(interval.low), float(interval.high))


def compress_tree(tree: StrategyTree) -> StrategyTree:
    """분기 없는 결정적 사슬을 생략한 압축 트리 (잎의 이론은 그대로)"""
    def collapse(node: StrategyNode) -> StrategyNode:
        while node.kind == DETERMINISTIC:
            node = node.children[0]
        if node.kind == LEAF:
            return node
        return replace(node, children=tuple(collapse(child) for child in node.children))

    return StrategyTree(collapse(tree.root))


# ------------------------------------------
# 보존 추출: 확률 > ε 이면 무작위 공리 없이 유도
# ------------------------------------------

def _extract(node: StrategyNode, phi: Statement, probabilities: Dict[int, Fraction],
             builder: StrategyBuilder) -> Optional[Derivation]:
    theory = node.theory
    if node.kind == LEAF:
        if theory.contains(phi):
            return single_step(phi, extra())
        schema = theory.base.certifying_schema(phi)
        return single_step(phi, axiom(schema)) if schema else None

    if node.kind == DETERMINISTIC:
        child_derivation = _extract(node.children[0], phi, probabilities, builder)
        if child_derivation is None:
            return None
        added = node.statement
        out = DerivationBuilder()
        added_index = out.include(node.derivation or builder.statement_derivation(theory, added))
        implication_index = out.include(deduction(child_derivation, added))
        out.add(phi, rule('modus_ponens', added_index, implication_index))
        return out.build()

    branching: FracForall = node.statement
    strong = []
    for (element, instance), child in zip(branching.instances(), node.children):
        if probabilities[id(child)] <= child.capital:
            continue
        child_derivation = _extract(child, phi, probabilities, builder)
        if child_derivation is not None:
            strong.append((instance, child_derivation))
    if len(strong) <= branching.delta * len(node.children):
        return None

    out = DerivationBuilder()
    frac_index = out.include(node.derivation or builder.statement_derivation(theory, branching))
    implication_indices = [out.include(deduction(d, instance)) for instance, d in strong]
    out.add(phi, rule('disj_from_frac', frac_index, *implication_indices))
    return out.build()


def extract_deterministic(tree: StrategyTree, phi: Statement, backend: str = SYNTACTIC,
                          model: Optional[FinitizedModel] = None) -> ExtractionResult:
    """강한 자식들을 disj_from_frac 로 묶어 기본 공리계만으로 φ 를 유도"""
    if backend != SYNTACTIC:
        raise ValueError("추출은 syntactic 백엔드에서만 가능합니다")
    model = model or tree.base.model
    probabilities, _ = _node_probabilities(tree, phi, backend, model)
    p = probabilities[id(tree.root)]
    epsilon = tree.epsilon

    derivation = _extract(tree.root, phi, probabilities, StrategyBuilder(tree.base))
    if derivation is not None:
        check = check_derivation(derivation, Theory(tree.base), goal=phi)
        if not check:
            raise InternalConsistencyError(
                f"추출된 유도가 검사를 통과하지 못했습니다 (단계 {check.failed_index}: {check.reason})",
                {'step': check.failed_index, 'reason': check.reason})
        logger.debug(f"✅ 추출 성공: {len(derivation)} 단계")
        return ExtractionResult('derived', p, epsilon, derivation)
    if p > epsilon:
        raise InternalConsistencyError(
            f"p={render_fraction(p)} > ε={render_fraction(epsilon)} 인데 추출할 노드가 없습니다",
            {'probability': render_fraction(p), 'epsilon': render_fraction(epsilon)})
    return ExtractionResult('insufficient-probability', p, epsilon)


# ------------------------------------------
# 직렬화
# ------------------------------------------

def _node_to_sexpr(node: StrategyNode) -> list:
    capital = render_fraction(node.capital)
    if node.kind == LEAF:
        return ['leaf', capital]
    derivation = derivation_to_sexpr(node.derivation) if node.derivation is not None else ['none']
    head = 'det' if node.kind == DETERMINISTIC else 'prob'
    return [head, capital, node.statement.to_sexpr(), derivation] + [
        _node_to_sexpr(child) for child in node.children]


def format_tree(tree: StrategyTree) -> str:
    base = tree.base
    return format_sexpr(['strategy-tree', TREE_FORMAT_VERSION,
                         ['base', base.name] + list(base.schemas),
                         _node_to_sexpr(tree.root)]) + '\n'


def _node_from_sexpr(expr: list, theory: Theory) -> StrategyNode:
    head, capital = expr[0], parse_fraction(expr[1])
    if head == 'leaf':
        return StrategyNode(LEAF, theory, capital)
    statement = statement_from_sexpr(expr[2])
    derivation = None if expr[3] == ['none'] else derivation_from_sexpr(expr[3])
    if head == 'det':
        child = _node_from_sexpr(expr[4], theory.extend(statement))
        return StrategyNode(DETERMINISTIC, theory, capital, statement, derivation, (child,))
    if head == 'prob':
        if not isinstance(statement, FracForall):
            raise ValueError("prob 노드의 분기 명제는 frac-forall 이어야 합니다")
        instances = [s for _, s in statement.instances()]
        if len(instances) != len(expr) - 4:
            raise ValueError("prob 노드의 자식 수가 |A| 와 다릅니다")
        children = tuple(_node_from_sexpr(child, theory.extend(instance))
                         for instance, child in zip(instances, expr[4:]))
        return StrategyNode(PROBABILISTIC, theory, capital, statement, derivation, children)
    raise ValueError(f"알 수 없는 노드 종류: {head}")


def parse_tree(text: str, base: AxiomBase) -> StrategyTree:
    expr = parse_sexpr(text)
    if expr[0] != 'strategy-tree' or expr[1] != TREE_FORMAT_VERSION:
        raise ValueError("전략 트리 형식/버전이 맞지 않습니다")
    name = expr[2][1]
    if name != base.name:
        raise ValueError(f"기본 공리계가 다릅니다: {name} != {base.name}")
    return StrategyTree(_node_from_sexpr(expr[3], Theory(base)))


def base_from_tree_text(text: str, model: FinitizedModel) -> AxiomBase:
    """트리 파일의 (base 이름 도식...) 줄로 기본 공리계를 복원"""
    expr = parse_sexpr(text)
    if expr[0] != 'strategy-tree':
        raise ValueError("전략 트리 형식이 아닙니다")
    return AxiomBase(expr[2][1], tuple(expr[2][2:]), model)


def save_tree(tree: StrategyTree, path) -> Path:
    return atomic_write(path, format_tree(tree).encode('utf-8'))


def load_tree(path, model: FinitizedModel, base: Optional[AxiomBase] = None) -> StrategyTree:
    text = Path(path).read_text(encoding='utf-8')
    return parse_tree(text, base or base_from_tree_text(text, model))
