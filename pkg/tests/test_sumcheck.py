"""
QBF 합검사 프로토콜 테스트
QBF 파싱, 산술화, 정확한 수용 확률, 정직한 전략 컴파일과 추출을 검증하는 테스트
"""

import os
import sys
import unittest
from fractions import Fraction

# 프로젝트 루트 디렉토리를 Python 경로에 추가
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from core.errors import FieldTooSmallError, QbfSyntaxError, UnboundVariableError, WorkCeilingError
from core.logic import Theory, check_derivation
from core.strategy import (
    extract_deterministic, format_tree, parse_tree, prove_probability, tree_depth, validate_tree,
)
from core.sumcheck import (
    EXISTS, FORALL, Disj, Qbf, QbfTrue, Var, arithmetize, check_value, compile_honest_strategy,
    default_prime, derivation_growth_report, eval_univariate, evaluate_qbf, format_qbf,
    honest_acceptance, honest_prover, max_adversarial_acceptance, parse_qbf, prover_acceptance,
    qbf_suite, run_protocol, suite_report, sumcheck_base,
)

TRUE_QBFS = ('∀x ∃y (x ∨ y)', '∃x (x)', '∀x (x ∨ ¬x)', '∃x ∀y (x ∨ y)')
FALSE_QBFS = ('∀x (x)', '∃x (x ∧ ¬x)', '∀x ∀y (x ∨ y)')


class TestQbfSyntax(unittest.TestCase):
    """QBF 문법 테스트"""

    def test_parse_and_format(self):
        qbf = parse_qbf('∀x ∃y (x ∨ y)')
        self.assertEqual(qbf, Qbf(((FORALL, 'x'), (EXISTS, 'y')), Disj(Var('x'), Var('y'))))
        self.assertEqual(format_qbf(qbf), '∀x ∃y (x ∨ y)')
        self.assertEqual(format_qbf(qbf, unicode=False), 'forall x exists y (x | y)')
        self.assertEqual(parse_qbf('forall x exists y (x | y)'), qbf)
        self.assertEqual(parse_qbf('forall_x.x'), Qbf(((FORALL, 'x'),), Var('x')))

    def test_syntax_errors(self):
        with self.assertRaises(QbfSyntaxError):
            parse_qbf('∀x ∀x (x)')
        with self.assertRaises(QbfSyntaxError) as ctx:
            parse_qbf('∀x (x ∨')
        self.assertIn('position', ctx.exception.payload)

    def test_unbound_and_limits(self):
        with self.assertRaises(UnboundVariableError) as ctx:
            parse_qbf('∀x (x ∨ y)')
        self.assertEqual(ctx.exception.payload['variables'], ['y'])
        with self.assertRaises(ValueError):
            parse_qbf('∀x ∀y (x ∧ y)', max_vars=1)

    def test_evaluate(self):
        """전수 대입 평가"""
        for text in TRUE_QBFS:
            self.assertTrue(evaluate_qbf(parse_qbf(text)), text)
        for text in FALSE_QBFS:
            self.assertFalse(evaluate_qbf(parse_qbf(text)), text)
        self.assertTrue(evaluate_qbf(parse_qbf('1')))


class TestArithmetization(unittest.TestCase):
    """산술화 테스트"""

    def test_default_prime(self):
        """p 는 2D 보다 큰 가장 작은 소수"""
        arith = arithmetize(parse_qbf('∃x (x)'))
        self.assertEqual(arith.degree_bound, 1)
        self.assertEqual(arith.p, 3)
        self.assertEqual(arith.rounds, 1)
        self.assertEqual(arith.capital, Fraction(1, 3))
        self.assertEqual(arith.tag, 'exists x x@3')
        self.assertEqual(default_prime(parse_qbf('∃x (x ∧ ¬x)')), 5)

    def test_linearization_rounds(self):
        """x² 항은 선형화 라운드를 하나 더 둠"""
        arith = arithmetize(parse_qbf('∃x (x ∧ ¬x)'))
        self.assertEqual(arith.degrees, [2, 0])
        self.assertEqual(arith.rounds, 2)
        self.assertEqual(arith.final_value(), 0)

    def test_prime_checks(self):
        qbf = parse_qbf('∃x (x)')
        with self.assertRaises(ValueError):
            arithmetize(qbf, 4)
        with self.assertRaises(FieldTooSmallError):
            arithmetize(qbf, 2)
        self.assertEqual(arithmetize(qbf, 5).capital, Fraction(1, 5))

    def test_field_helpers(self):
        self.assertEqual(eval_univariate((1, 2), 3, 5), 2)
        self.assertEqual(check_value(FORALL, 2, 3, 0, 5), 1)
        self.assertEqual(check_value(EXISTS, 2, 3, 0, 5), 4)
        self.assertEqual(check_value('linearize', 2, 3, 2, 5), 4)


class TestAcceptance(unittest.TestCase):
    """완전성과 건전성 테스트"""

    def test_honest_prover_is_complete(self):
        for text in TRUE_QBFS:
            qbf = parse_qbf(text)
            self.assertEqual(honest_acceptance(qbf), 1, text)
            self.assertEqual(max_adversarial_acceptance(qbf), 1, text)
        self.assertEqual(honest_acceptance(parse_qbf('∀x (x)')), 0)

    def test_cheating_prover_is_bounded(self):
        """최적 속임수 증명자도 Σ d_j / p 를 넘지 못함"""
        for text in FALSE_QBFS:
            qbf = parse_qbf(text)
            arith = arithmetize(qbf)
            self.assertLessEqual(max_adversarial_acceptance(qbf), arith.capital, text)
        qbf = parse_qbf('∀x (x)')
        self.assertLessEqual(max_adversarial_acceptance(qbf, 7), Fraction(1, 7))

    def test_tampered_honest_message_is_rejected(self):
        """첫 메시지의 상수항을 바꾸면 수용 확률이 1 아래로 떨어짐"""
        for text in ('∃x (x)', '∀x ∃y (x ∨ y)'):
            arith = arithmetize(parse_qbf(text))
            honest = honest_prover(arith)
            self.assertEqual(prover_acceptance(arith, honest), 1, text)

            def tampered(k, point, claimed, honest=honest):
                coeffs = list(honest(k, point, claimed))
                if k == 0:
                    coeffs[0] += 1
                return coeffs

            self.assertLess(prover_acceptance(arith, tampered), 1, text)

    def test_over_degree_message_is_rejected(self):
        arith = arithmetize(parse_qbf('∃x (x)'))
        honest = honest_prover(arith)

        def padded(k, point, claimed):
            return tuple(honest(k, point, claimed)) + (1,)

        self.assertEqual(prover_acceptance(arith, padded), 0)

    def test_quantifier_free(self):
        self.assertEqual(max_adversarial_acceptance(parse_qbf('1')), 1)
        self.assertEqual(max_adversarial_acceptance(parse_qbf('0')), 0)

    def test_work_ceiling(self):
        with self.assertRaises(WorkCeilingError):
            max_adversarial_acceptance(parse_qbf('∀x ∀y (x ∨ y)'), work_ceiling=1)


class TestTranscript(unittest.TestCase):
    """프로토콜 대화록 테스트"""

    def test_honest_transcript(self):
        transcript = run_protocol(parse_qbf('∀x ∃y (x ∨ y)'), seed=0)
        self.assertEqual(transcript.prover, 'honest')
        self.assertTrue(transcript.accepted)
        self.assertEqual(len(transcript.rounds), 2)
        self.assertTrue(all(r.check_passed for r in transcript.rounds))
        data = transcript.to_dict()
        self.assertEqual(set(data), {'qbf', 'p', 'prover', 'capital', 'rounds', 'final_check', 'accepted'})
        self.assertEqual(data['capital'], '1/3')

    def test_cheating_transcript(self):
        transcript = run_protocol(parse_qbf('∀x (x)'), seed=4)
        self.assertEqual(transcript.prover, 'cheating')
        self.assertTrue(transcript.rounds[0].check_passed)
        self.assertEqual(transcript.accepted, bool(transcript.final_check))

    def test_same_seed_same_transcript(self):
        qbf = parse_qbf('∃x (x ∧ ¬x)')
        self.assertEqual(run_protocol(qbf, seed=3).to_dict(), run_protocol(qbf, seed=3).to_dict())


class TestCompiledStrategy(unittest.TestCase):
    """정직한 증명자 전략 트리 테스트"""

    def test_compile_single_round(self):
        """p = 3 인 한 라운드: 잎 3 개, 모두 QBF 참을 유도"""
        compiled = compile_honest_strategy(parse_qbf('∃x (x)'))
        self.assertEqual(compiled.epsilon, Fraction(1, 3))
        self.assertEqual(compiled.target, QbfTrue('exists x x@3'))
        self.assertEqual(compiled.tree.base, sumcheck_base())
        self.assertTrue(validate_tree(compiled.tree))
        self.assertEqual(prove_probability(compiled.tree, compiled.target).probability, 1)

    def test_extraction_gives_deterministic_derivation(self):
        """p = 1 > ε 이므로 기본 공리계만으로 QBF 참을 유도"""
        for text in ('∃x (x)', '∀x ∃y (x ∨ y)'):
            compiled = compile_honest_strategy(parse_qbf(text))
            result = extract_deterministic(compiled.tree, compiled.target)
            self.assertTrue(result.derived, text)
            self.assertTrue(check_derivation(result.derivation, Theory(sumcheck_base()),
                                             goal=compiled.target), text)

    def test_quantifier_free_strategy(self):
        compiled = compile_honest_strategy(parse_qbf('1'))
        self.assertEqual(compiled.epsilon, 0)
        self.assertTrue(validate_tree(compiled.tree))
        self.assertTrue(extract_deterministic(compiled.tree, compiled.target).derived)

    def test_tree_text_round_trip(self):
        compiled = compile_honest_strategy(parse_qbf('∀x (x ∨ ¬x)'))
        text = format_tree(compiled.tree)
        self.assertIn('toy-arith+sumcheck', text)
        self.assertEqual(format_tree(parse_tree(text, sumcheck_base())), text)

    def test_rejects_false_and_large(self):
        with self.assertRaises(ValueError):
            compile_honest_strategy(parse_qbf('∀x (x)'))
        with self.assertRaises(WorkCeilingError):
            compile_honest_strategy(parse_qbf('∀x ∃y (x ∨ y)'), tree_ceiling=10)


class TestSuite(unittest.TestCase):
    """묶음 실험 테스트"""

    def test_suite_is_deterministic(self):
        first = [format_qbf(q) for q in qbf_suite(seed=0, true_count=3, false_count=3)]
        self.assertEqual(first, [format_qbf(q) for q in qbf_suite(seed=0, true_count=3, false_count=3)])
        self.assertEqual(first[:3], [format_qbf(parse_qbf(text)) for text in TRUE_QBFS[:3]])
        self.assertEqual(first[1], '∃x x')
        self.assertEqual(len(first), 6)

    def test_suite_report(self):
        report = suite_report(0, true_count=4, false_count=4)
        self.assertEqual(report['true'], 4)
        self.assertEqual(report['false'], 4)
        self.assertEqual(report['failures'], [])

    def test_growth_report(self):
        qbfs = [parse_qbf(text) for text in TRUE_QBFS[:3]] + [parse_qbf('∀x (x)')]
        rows = derivation_growth_report(qbfs)
        self.assertEqual(len(rows), 3)
        keys = [(row['strategy_length'], row['qbf']) for row in rows]
        self.assertEqual(keys, sorted(keys))
        for row in rows:
            self.assertEqual(row['probability'], 1)
            self.assertIsNotNone(row['derivation_size'])
            self.assertEqual(row['strategy_length'],
                             tree_depth(compile_honest_strategy(parse_qbf(row['qbf'])).tree))


if __name__ == '__main__':
    unittest.main(verbosity=2)
