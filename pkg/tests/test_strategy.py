"""
확률적 전략 트리 테스트
트리 불변식 검증, 정확한 증명 확률, 몬테카를로, 보존 추출, 직렬화를 검증하는 테스트
"""

import os
import shutil
import sys
import tempfile
import unittest
from dataclasses import replace
from fractions import Fraction

# 프로젝트 루트 디렉토리를 Python 경로에 추가
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from core.complexity import build_table
from core.errors import TreeValidationError
from core.logic import (
    HOLE, SEMANTIC, SYNTACTIC, And, CGe, DerivationBuilder, ExplicitDomain, FieldElements,
    FinitizedModel, FracForall, StringsOfLength, Theory, check_derivation, extra,
    frac_forall_certify, rule, single_step, standard_base,
)
from core.machine import MachineConfig
from core.strategy import (
    StrategyBuilder, StrategyTree, compress_tree, ensure_valid, extract_deterministic,
    false_statement_probability, format_tree, leaf_path_probability, load_tree, monte_carlo,
    parse_tree, prove_probability, save_tree, tree_depth, tree_size, validate_tree,
)


class StrategyFixture(unittest.TestCase):
    """N=4 표 위의 작은 트리들"""

    @classmethod
    def setUpClass(cls):
        machine = MachineConfig()
        cls.model = FinitizedModel(machine, build_table(machine, 4, 7, 200))
        cls.base = standard_base(cls.model)
        cls.builder = StrategyBuilder(cls.base)
        cls.phi = CGe('01', 5)

    def branching_tree(self, capital=Fraction(1, 4)) -> StrategyTree:
        """R(a) = C(a) >= 4 ∧ φ 로 분기하고 각 자식에서 φ 를 꺼냄"""
        certificate = frac_forall_certify(Fraction(1, 4), StringsOfLength(2),
                                          And(CGe(HOLE, 4), self.phi), self.model)

        def child(element, theory, child_capital):
            out = DerivationBuilder()
            i = out.add(And(CGe(element, 4), self.phi), extra())
            out.add(self.phi, rule('and_elim_r', i))
            return self.builder.deterministic(theory, child_capital, self.phi, out.build(), self.builder.leaf)

        return StrategyTree(self.builder.probabilistic(
            self.builder.root_theory(), capital, certificate.statement, certificate.derivation, child))

    def guessing_tree(self) -> StrategyTree:
        """R(a) = C(a) >= 4, φ' = C(01) >= 4 는 한 자식에만 나타남"""
        certificate = frac_forall_certify(Fraction(1, 4), StringsOfLength(2), CGe(HOLE, 4), self.model)
        return StrategyTree(self.builder.probabilistic(
            self.builder.root_theory(), Fraction(1, 4), certificate.statement, certificate.derivation,
            lambda element, theory, capital: self.builder.leaf(theory, capital)))


class TestValidation(StrategyFixture):
    """트리 불변식 테스트"""

    def test_valid_tree(self):
        tree = self.branching_tree()
        self.assertTrue(validate_tree(tree))
        self.assertIs(ensure_valid(tree), tree)
        self.assertEqual(tree_depth(tree), 2)
        self.assertEqual(tree_size(tree), 9)
        self.assertEqual(tree.epsilon, Fraction(1, 4))

    def test_capital_exceeded(self):
        """τ > δ 이면 위반"""
        report = validate_tree(self.branching_tree(capital=Fraction(1, 8)))
        self.assertFalse(report)
        self.assertTrue(any('capital exceeded' in v for v in report.violations))
        with self.assertRaises(TreeValidationError):
            ensure_valid(self.branching_tree(capital=Fraction(1, 8)))

    def test_underivable_statement(self):
        """기본 공리계가 인증하지 않는 명제를 결정적으로 추가"""
        node = self.builder.deterministic(self.builder.root_theory(), 0, self.phi,
                                          single_step(self.phi, extra()), self.builder.leaf)
        tree = StrategyTree(node)
        self.assertFalse(validate_tree(tree, SYNTACTIC))
        # 의미론 백엔드에서는 참인 명제라 통과
        self.assertTrue(validate_tree(tree, SEMANTIC))
        with self.assertRaises(ValueError):
            validate_tree(tree, 'oracle')

    def test_probabilistic_node_without_children(self):
        """자식이 없는 확률 노드는 위반이고, 평가는 0 으로 나누지 않고 TreeValidationError"""
        tree = self.branching_tree()
        childless = StrategyTree(replace(tree.root, children=()))
        report = validate_tree(childless)
        self.assertTrue(any('no children' in v for v in report.violations))
        with self.assertRaises(TreeValidationError):
            prove_probability(childless, self.phi)
        with self.assertRaises(TreeValidationError):
            leaf_path_probability(childless, self.phi)
        with self.assertRaises(TreeValidationError):
            monte_carlo(childless, self.phi, 10, seed=0)

    def test_empty_domains_rejected(self):
        with self.assertRaises(ValueError):
            ExplicitDomain(())
        with self.assertRaises(ValueError):
            FieldElements(0)
        with self.assertRaises(ValueError):
            FracForall(0, ExplicitDomain(()), CGe(HOLE, 1))

    def test_statement_derivation(self):
        with self.assertRaises(TreeValidationError):
            self.builder.statement_derivation(self.builder.root_theory(), self.phi)
        derivation = self.builder.statement_derivation(self.builder.root_theory(), CGe('0', 0))
        self.assertEqual(len(derivation), 1)


class TestProbability(StrategyFixture):
    """증명 확률 테스트"""

    def test_exact_probability(self):
        tree = self.branching_tree()
        result = prove_probability(tree, self.phi)
        self.assertEqual(result.probability, Fraction(1))
        self.assertEqual(result.to_dict()['probability'], '1/1')
        self.assertEqual(result.to_dict()['leaves'], 4)
        self.assertEqual(leaf_path_probability(tree, self.phi), Fraction(1))
        # C(00) = 2 라서 '00' 자식의 R(a) 만 거짓
        self.assertEqual(false_statement_probability(tree), Fraction(1, 4))
        self.assertLessEqual(false_statement_probability(tree), tree.epsilon)

    def test_guessing_probability(self):
        """한 자식만 φ' 를 가짐"""
        tree = self.guessing_tree()
        target = CGe('01', 4)
        self.assertEqual(prove_probability(tree, target).probability, Fraction(1, 4))
        self.assertEqual(leaf_path_probability(tree, target), Fraction(1, 4))
        self.assertEqual(prove_probability(tree, target, SEMANTIC).probability, Fraction(1))

    def test_compress_keeps_probability(self):
        tree = self.branching_tree()
        compressed = compress_tree(tree)
        self.assertEqual(tree_depth(compressed), 1)
        self.assertEqual(prove_probability(compressed, self.phi).probability, Fraction(1))

    def test_monte_carlo(self):
        """같은 seed 는 같은 결과, 신뢰구간은 추정치를 포함"""
        tree = self.guessing_tree()
        target = CGe('01', 4)
        first = monte_carlo(tree, target, 2500, seed=3)
        second = monte_carlo(tree, target, 2500, seed=3)
        self.assertEqual(first.successes, second.successes)
        self.assertLessEqual(first.ci_low, float(first.estimate))
        self.assertGreaterEqual(first.ci_high, float(first.estimate))
        self.assertEqual(monte_carlo(self.branching_tree(), self.phi, 100, seed=0).estimate, Fraction(1))
        with self.assertRaises(ValueError):
            monte_carlo(tree, target, 0, seed=0)


class TestExtraction(StrategyFixture):
    """보존 추출 테스트"""

    def test_extracts_when_probability_exceeds_capital(self):
        """p = 1 > ε = 1/4 이면 기본 공리계만으로 φ 유도"""
        tree = self.branching_tree()
        result = extract_deterministic(tree, self.phi)
        self.assertTrue(result.derived)
        self.assertTrue(check_derivation(result.derivation, Theory(self.base), goal=self.phi))

    def test_insufficient_probability(self):
        result = extract_deterministic(self.guessing_tree(), CGe('01', 4))
        self.assertEqual(result.status, 'insufficient-probability')
        self.assertEqual(result.probability, Fraction(1, 4))
        self.assertIsNone(result.derivation)

    def test_semantic_backend_rejected(self):
        with self.assertRaises(ValueError):
            extract_deterministic(self.branching_tree(), self.phi, SEMANTIC)


class TestTreeFiles(StrategyFixture):
    """트리 직렬화 테스트"""

    def setUp(self):
        self.temp_dir = tempfile.mkdtemp()

    def tearDown(self):
        shutil.rmtree(self.temp_dir, ignore_errors=True)

    def test_format_and_parse(self):
        tree = self.branching_tree()
        text = format_tree(tree)
        self.assertTrue(text.startswith('(strategy-tree v1 (base toy-arith counting witness)'))
        parsed = parse_tree(text, self.base)
        self.assertEqual(format_tree(parsed), text)
        self.assertTrue(validate_tree(parsed))

    def test_parse_rejects_other_base(self):
        text = format_tree(self.branching_tree())
        other = standard_base(self.model, name='other-base')
        with self.assertRaises(ValueError):
            parse_tree(text, other)
        with self.assertRaises(ValueError):
            parse_tree(text.replace('strategy-tree v1', 'strategy-tree v9'), self.base)

    def test_save_and_load(self):
        path = os.path.join(self.temp_dir, 'tree.sexpr')
        tree = self.branching_tree()
        save_tree(tree, path)
        loaded = load_tree(path, self.model)
        self.assertEqual(loaded.base, self.base)
        self.assertEqual(prove_probability(loaded, self.phi).probability, Fraction(1))


if __name__ == '__main__':
    unittest.main(verbosity=2)
