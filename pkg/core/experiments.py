# ==========================================
# core/experiments.py - 무작위 공리 전략, 독립성 실험, 트리 퍼저
# ==========================================

import itertools
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from core.errors import InternalConsistencyError
from core.logic import (
    HOLE, SYNTACTIC, And, AxiomBase, CGe, DerivationBuilder, FinitizedModel, FracForall,
    HaltsWithin, Implies, Not, Or, Statement, StringsOfLength, ExplicitDomain, Theory,
    axiom, consistent, extra, frac_forall_certify, rule, single_step, standard_base,
)
from core.strategy import (
    StrategyBuilder, StrategyNode, StrategyTree, extract_deterministic,
    false_statement_probability, leaf_path_probability, monte_carlo, prove_probability,
    validate_tree,
)
from utils.bitstrings import iter_strings
from utils.rationals import pow2_inverse, render_fraction, to_fraction

logger = logging.getLogger(__name__)


# ------------------------------------------
# 무작위 공리 전략 (기본/확장 버전)
# ------------------------------------------

def build_random_axiom_strategy(model: FinitizedModel, n: Union[int, Sequence[int]],
                                cs: Sequence[int], epsilon,
                                base: Optional[AxiomBase] = None) -> StrategyTree:
    """k 개의 확률 노드를 이어 "C(x) >= n_i - c_i" 를 무작위로 추가하는 전략

    Args:
        n: 모든 단계의 문자열 길이 또는 단계별 길이 목록
        cs: 단계별 c_i (Σ 2^(-c_i) < ε)
    """
    epsilon = to_fraction(epsilon)
    lengths = [n] * len(cs) if isinstance(n, int) else list(n)
    if len(lengths) != len(cs):
        raise ValueError("길이 목록과 c 목록의 길이가 다릅니다")
    spent = sum((pow2_inverse(c) for c in cs), Fraction(0))
    if cs and spent >= epsilon:
        raise ValueError(f"Σ2^(-c_i) = {render_fraction(spent)} 는 ε = {render_fraction(epsilon)} 보다 작아야 합니다")
    for length in lengths:
        if length > model.N:
            raise ValueError(f"n={length} 이 모형 한도 N={model.N} 를 넘습니다")

    base = base or standard_base(model)
    builder = StrategyBuilder(base)
    certificates = [frac_forall_certify(pow2_inverse(c), StringsOfLength(length), CGe(HOLE, length - c), model)
                    for length, c in zip(lengths, cs)]

    def level(index: int, theory: Theory, capital: Fraction) -> StrategyNode:
        if index == len(certificates):
            return builder.leaf(theory, capital)
        certificate = certificates[index]
        return builder.probabilistic(
            theory, capital, certificate.statement, certificate.derivation,
            lambda element, child_theory, child_capital: level(index + 1, child_theory, child_capital))

    tree = StrategyTree(level(0, builder.root_theory(), epsilon))
    logger.info(f"📊 무작위 공리 전략: k={len(cs)}, 사용 자본 {render_fraction(spent)} / ε {render_fraction(epsilon)}")
    return tree


# ------------------------------------------
# 독립성 실험
# ------------------------------------------

DEPENDENCE_FORMS = ('decided', 'implication', 'implication_into_disjunction',
                    'conjunction_into_implication')


@dataclass
class IndependenceReport:
    m: int
    n: int
    c: int
    trials: int
    seed: int
    all_consistent: Fraction
    dependence: Fraction
    form_counts: Dict[str, int] = field(default_factory=dict)

    def to_dict(self) -> Dict:
        return {
            'm': self.m, 'n': self.n, 'c': self.c, 'trials': self.trials, 'seed': self.seed,
            'all_patterns_consistent': render_fraction(self.all_consistent),
            'dependence': render_fraction(self.dependence),
            'form_counts': dict(self.form_counts),
            'reference_bound': render_fraction(min(Fraction(1), self.m * pow2_inverse(self.c))),
        }


def _signed(statement: Statement, positive: bool) -> Statement:
    return statement if positive else Not(statement)


def _refuted(base: AxiomBase, literals: Sequence[Tuple[Statement, bool]]) -> bool:
    theory = Theory(base)
    for statement, positive in literals:
        theory = theory.extend(_signed(statement, positive))
    return not consistent(theory)


def _dependence_forms(base: AxiomBase, statements: List[Statement]) -> Dict[str, bool]:
    m = len(statements)
    forms = dict.fromkeys(DEPENDENCE_FORMS, False)
    for i in range(m):
        if _refuted(base, [(statements[i], True)]) or _refuted(base, [(statements[i], False)]):
            forms['decided'] = True
    for i, j in itertools.permutations(range(m), 2):
        # S_i → S_j  ⇔  {S_i, ¬S_j} 모순
        if _refuted(base, [(statements[i], True), (statements[j], False)]):
            forms['implication'] = True
    for i, j, k in itertools.permutations(range(m), 3):
        if _refuted(base, [(statements[i], True), (statements[j], False), (statements[k], False)]):
            forms['implication_into_disjunction'] = True
        if _refuted(base, [(statements[i], True), (statements[j], True), (statements[k], False)]):
            forms['conjunction_into_implication'] = True
    return forms


def independence_experiment(model: FinitizedModel, m: int, n: int, c: int, trials: int,
                            seed: int, base: Optional[AxiomBase] = None) -> IndependenceReport:
    """무작위 길이-n 문자열 m 개의 "C(x_i) >= n - c" 가 서로 독립인지 시행별로 검사"""
    if not 1 <= m <= 4:
        raise ValueError("m 은 1 이상 4 이하여야 합니다")
    if n > model.N:
        raise ValueError(f"n={n} 이 모형 한도 N={model.N} 를 넘습니다")
    base = base or standard_base(model)
    rng = np.random.default_rng(seed)

    consistent_trials = 0
    dependent_trials = 0
    form_counts = dict.fromkeys(DEPENDENCE_FORMS, 0)
    for _ in range(trials):
        draws = rng.integers(0, 2 ** n, size=m)
        strings = [format(int(v), f'0{n}b') if n else '' for v in draws]
        statements = [CGe(x, n - c) for x in strings]

        if all(not _refuted(base, list(zip(statements, signs)))
               for signs in itertools.product((True, False), repeat=m)):
            consistent_trials += 1
        forms = _dependence_forms(base, statements)
        if any(forms.values()):
            dependent_trials += 1
        for name, present in forms.items():
            form_counts[name] += int(present)

    report = IndependenceReport(m, n, c, trials, seed, Fraction(consistent_trials, trials),
                                Fraction(dependent_trials, trials), form_counts)
    logger.info(f"📊 독립성 실험 m={m} n={n} c={c}: 의존 비율 {render_fraction(report.dependence)}")
    return report


# ------------------------------------------
# 트리 퍼저
# ------------------------------------------

@dataclass
class FuzzCase:
    name: str
    tree: StrategyTree
    target: Statement


def disjunction_of(statements: Sequence[Statement]) -> Statement:
    """오른쪽으로 중첩된 Or"""
    result = statements[-1]
    for statement in reversed(statements[:-1]):
        result = Or(statement, result)
    return result


def _or_chain(instances: Sequence[Statement], index: int) -> List[Tuple[Statement, str]]:
    """R(a_index) 에서 전체 선언까지의 (결론, 규칙) 목록"""
    k = len(instances)
    if k == 1:
        return []
    chain = []
    if index == k - 1:
        current = Or(instances[k - 2], instances[k - 1])
        chain.append((current, 'or_intro_r'))
        start = k - 3
    else:
        current = Or(instances[index], disjunction_of(instances[index + 1:]))
        chain.append((current, 'or_intro_l'))
        start = index - 1
    for j in range(start, -1, -1):
        current = Or(instances[j], current)
        chain.append((current, 'or_intro_r'))
    return chain


class TreeFuzzer:
    """인증 가능한 FracForall 만 써서 유효한 전략 트리를 무작위로 생성"""

    def __init__(self, model: FinitizedModel, seed: int, max_depth: int = 6, max_branch: int = 8,
                 max_nodes: int = 400, base: Optional[AxiomBase] = None):
        if max_depth > 6 or max_branch > 8:
            raise ValueError("max_depth <= 6, max_branch <= 8")
        self.model = model
        self.rng = np.random.default_rng(seed)
        self.max_depth = max_depth
        self.max_branch = max_branch
        self.max_nodes = max_nodes
        self.base = base or standard_base(model)
        self.builder = StrategyBuilder(self.base)
        self.pool = self._certified_pool()
        self.logger = logging.getLogger(__name__)

    def _candidate_templates(self, length: int) -> List[Statement]:
        templates = [CGe(HOLE, k) for k in range(0, length + 5)]
        templates += [Not(CGe(HOLE, k)) for k in range(1, length + 5)]
        templates += [HaltsWithin(HOLE, t) for t in range(1, 4) if t <= self.model.budget]
        return templates

    def _certified_pool(self) -> List[FracForall]:
        pool = []
        max_length = min(self.model.N, int(math.log2(self.max_branch)))
        for length in range(1, max_length + 1):
            domain = StringsOfLength(length)
            for template in self._candidate_templates(length):
                tight = Fraction(FracForall(1, domain, template).failures(self.model), domain.size)
                for tau in sorted({tight, Fraction(1, 8), Fraction(1, 4), Fraction(1, 2)}):
                    if tau >= tight:
                        pool.append(frac_forall_certify(tau, domain, template, self.model).statement)
        for x in iter_strings(min(self.model.N, 3)):
            pool.append(frac_forall_certify(0, ExplicitDomain((x,)), CGe(HOLE, 0), self.model).statement)
        return pool

    def _choice(self, items: Sequence):
        return items[int(self.rng.integers(len(items)))]

    def _affordable(self, capital: Fraction, budget: int, min_size: int = 1) -> List[FracForall]:
        return [f for f in self.pool
                if f.delta <= capital and min_size <= f.domain.size <= min(budget, self.max_branch)]

    def _witness_fact(self) -> Statement:
        strings = list(iter_strings(min(self.model.N, 4)))
        x = self._choice(strings)
        value = self.model.plain_value(x)
        if value is not None and self.rng.random() < 0.7:
            return Not(CGe(x, value + 1))
        return CGe(x, 0)

    def _deterministic_step(self, theory: Theory):
        """(추가 명제, 부모 이론에서의 유도)"""
        extras = list(theory.extras)
        roll = self.rng.random()
        if len(extras) >= 2 and roll < 0.3:
            i, j = self.rng.choice(len(extras), size=2, replace=False)
            statement = And(extras[i], extras[j])
            out = DerivationBuilder()
            a = out.add(extras[i], extra())
            b = out.add(extras[j], extra())
            out.add(statement, rule('and_intro', a, b))
            return statement, out.build()
        if extras and roll < 0.55:
            premise = self._choice(extras)
            statement = Implies(self._witness_fact(), premise)
            out = DerivationBuilder()
            a = out.add(premise, extra())
            out.add(statement, rule('weakening', a))
            return statement, out.build()
        if roll < 0.8:
            statement = self._witness_fact()
            return statement, self.builder.statement_derivation(theory, statement)
        statement = self._choice(self.pool)
        return statement, single_step(statement, axiom('counting'))

    def grow(self, theory: Theory, capital: Fraction, depth: int, budget: List[int]) -> StrategyNode:
        budget[0] -= 1
        if depth >= self.max_depth or budget[0] <= 0 or self.rng.random() < 0.35:
            return self.builder.leaf(theory, capital)
        options = self._affordable(capital, budget[0])
        if options and self.rng.random() < 0.5:
            branching = self._choice(options)
            budget[0] -= branching.domain.size
            return self.builder.probabilistic(
                theory, capital, branching, single_step(branching, axiom('counting')),
                lambda element, child_theory, child_capital: self.grow(child_theory, child_capital,
                                                                       depth + 1, budget))
        statement, derivation = self._deterministic_step(theory)
        return self.builder.deterministic(
            theory, capital, statement, derivation,
            lambda child_theory, child_capital: self.grow(child_theory, child_capital, depth + 1, budget))

    def tree(self, epsilon) -> StrategyTree:
        """무작위 유효 트리"""
        epsilon = to_fraction(epsilon)
        return StrategyTree(self.grow(self.builder.root_theory(), epsilon, 0, [self.max_nodes]))

    def derive_chain(self, theory: Theory, capital: Fraction, instances: Sequence[Statement],
                     index: int, depth: int, budget: List[int]) -> StrategyNode:
        """R(a_index) 를 가진 이론에서 Or 사슬로 목표 선언을 추가한 뒤 무작위로 계속"""
        chain = _or_chain(instances, index)

        def step(position: int, current_theory: Theory, premise: Statement) -> StrategyNode:
            if position == len(chain):
                return self.grow(current_theory, capital, depth + position, budget)
            statement, rule_name = chain[position]
            out = DerivationBuilder()
            a = out.add(premise, extra())
            out.add(statement, rule(rule_name, a))
            return self.builder.deterministic(
                current_theory, capital, statement, out.build(),
                lambda child_theory, _capital: step(position + 1, child_theory, statement))

        return step(0, theory, instances[index])

    def case(self, epsilon, derive_probability: float = 0.8, name: str = 'fuzz') -> FuzzCase:
        """루트 분기의 인스턴스 선언을 목표로 하는 (트리, φ)"""
        epsilon = to_fraction(epsilon)
        options = self._affordable(epsilon, self.max_nodes, min_size=2) or self._affordable(epsilon, self.max_nodes)
        root_theory = self.builder.root_theory()
        branching = self._choice(options)
        instances = [s for _, s in branching.instances()]
        target = disjunction_of(instances)
        budget = [self.max_nodes]
        derive = [bool(self.rng.random() < derive_probability) for _ in instances]
        positions = {element: i for i, (element, _) in enumerate(branching.instances())}

        def child(element, child_theory: Theory, child_capital: Fraction) -> StrategyNode:
            index = positions[element]
            if derive[index]:
                return self.derive_chain(child_theory, child_capital, instances, index, 1, budget)
            return self.grow(child_theory, child_capital, 1, budget)

        root = self.builder.probabilistic(root_theory, epsilon, branching,
                                          single_step(branching, axiom('counting')), child)
        return FuzzCase(name, StrategyTree(root), target)


def adversarial_trees(model: FinitizedModel, base: Optional[AxiomBase] = None,
                      count: int = 50) -> List[FuzzCase]:
    """경계 사례: ε = τ 에서 강한 자식 수 t 를 0..|A| 로 바꿔 가며"""
    fuzzer = TreeFuzzer(model, seed=0, base=base)
    builder = fuzzer.builder
    by_shape: Dict[Tuple[int, Fraction], FracForall] = {}
    for statement in fuzzer.pool:
        by_shape.setdefault((statement.domain.size, statement.delta), statement)
    shapes = sorted(by_shape, key=lambda key: (key[0], key[1]))

    cases: List[FuzzCase] = []
    for with_prefix in (False, True):
        for key in shapes:
            branching = by_shape[key]
            instances = [s for _, s in branching.instances()]
            target = disjunction_of(instances)
            size = len(instances)
            for strong in range(size + 1):
                def child(element, child_theory, child_capital, _instances=instances, _strong=strong,
                          _positions={e: i for i, (e, _) in enumerate(branching.instances())}):
                    index = _positions[element]
                    if index < _strong:
                        return fuzzer.derive_chain(child_theory, child_capital, _instances, index,
                                                   fuzzer.max_depth, [0])
                    return builder.leaf(child_theory, child_capital)

                def probabilistic_root(theory, capital, _branching=branching, _child=child):
                    return builder.probabilistic(theory, capital, _branching,
                                                 single_step(_branching, axiom('counting')), _child)

                epsilon = branching.delta
                root_theory = builder.root_theory()
                if with_prefix:
                    fact = CGe('', 0)
                    root = builder.deterministic(root_theory, epsilon, fact,
                                                 single_step(fact, axiom('witness')), probabilistic_root)
                else:
                    root = probabilistic_root(root_theory, epsilon)
                label = f"{'prefixed-' if with_prefix else ''}A{size}-tau{render_fraction(epsilon)}-t{strong}"
                cases.append(FuzzCase(label, StrategyTree(root), target))
                if len(cases) == count:
                    return cases
    return cases


# ------------------------------------------
# 감사 (퍼즈 말뭉치 전체)
# ------------------------------------------

DEFAULT_EPSILONS = (Fraction(1, 16), Fraction(1, 8), Fraction(1, 4))


def fuzz_audit(model: FinitizedModel, count: int, seed: int,
               epsilons: Sequence[Fraction] = DEFAULT_EPSILONS,
               adversarial: int = 50) -> Dict:
    """건전성(거짓 명제 확률 <= ε)과 보존(p > ε 이면 추출 성공) 을 퍼즈 말뭉치에서 검사"""
    fuzzer = TreeFuzzer(model, seed)
    cases = [fuzzer.case(epsilons[i % len(epsilons)], name=f"fuzz-{i}") for i in range(count)]
    cases += adversarial_trees(model, fuzzer.base, adversarial)

    invalid, unsound, extraction_failures = [], [], []
    extracted = 0
    max_ratio = Fraction(0)
    for case in cases:
        if not validate_tree(case.tree, SYNTACTIC, model):
            invalid.append(case.name)
            continue
        false_p = false_statement_probability(case.tree, model)
        if false_p > case.tree.epsilon:
            unsound.append(case.name)
        if case.tree.epsilon > 0:
            max_ratio = max(max_ratio, false_p / case.tree.epsilon)
        p = prove_probability(case.tree, case.target, SYNTACTIC, model).probability
        if p > case.tree.epsilon:
            result = extract_deterministic(case.tree, case.target, SYNTACTIC, model)
            if result.derived:
                extracted += 1
            else:
                extraction_failures.append(case.name)

    logger.info(f"✅ 퍼즈 감사 {len(cases)}건: 무효 {len(invalid)}, 불건전 {len(unsound)}, "
                f"추출 실패 {len(extraction_failures)}")
    return {
        'cases': len(cases),
        'seed': seed,
        'invalid': invalid,
        'unsound': unsound,
        'extracted': extracted,
        'extraction_failures': extraction_failures,
        'max_false_probability_over_epsilon': max_ratio,
    }


def monte_carlo_audit(model: FinitizedModel, count: int, trials: int, seed: int) -> Dict:
    """|p̂ - p| <= 3·sqrt(p(1-p)/trials) 를 만족하는 트리 수"""
    fuzzer = TreeFuzzer(model, seed)
    seeds = np.random.SeedSequence(seed).generate_state(count)
    within = 0
    for i in range(count):
        case = fuzzer.case(DEFAULT_EPSILONS[i % len(DEFAULT_EPSILONS)], name=f"mc-{i}")
        p = prove_probability(case.tree, case.target, SYNTACTIC, model).probability
        if leaf_path_probability(case.tree, case.target, SYNTACTIC, model) != p:
            raise InternalConsistencyError(f"{case.name}: 역방향 귀납과 경로 열거가 다릅니다",
                                           {"case": case.name})
        estimate = monte_carlo(case.tree, case.target, trials, int(seeds[i]), SYNTACTIC, model).estimate
        tolerance = 3 * math.sqrt(float(p * (1 - p)) / trials)
        if abs(float(estimate - p)) <= tolerance:
            within += 1
    return {'trees': count, 'trials': trials, 'seed': seed, 'within_three_sigma': within}
