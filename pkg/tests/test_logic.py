"""
유한화 논리 테스트
원자 명제의 진리값, FracForall 인증, 유도 검사와 연역 정리를 검증하는 테스트
"""

import os
import sys
import unittest
from fractions import Fraction

from hypothesis import given, settings, strategies as st

# 프로젝트 루트 디렉토리를 Python 경로에 추가
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from core.complexity import build_table
from core.errors import CertificationError, OutOfLimitsError
from core.logic import (
    HOLE, RULES, And, AxiomBase, CGe, Derivation, DerivationBuilder, ExplicitDomain, FinitizedModel,
    FracForall, HaltsWithin, Implies, Justification, NonTerm, Not, Or, StringsOfLength, Theory, axiom,
    check_derivation, consistent, deduction, derivation_from_sexpr, derivation_to_sexpr,
    eval_statement, extra, format_derivation, format_statement, frac_forall_certify, negate,
    parse_statement, rule, semantic_entails, single_step, standard_base,
)
from core.machine import MachineConfig


def small_model() -> FinitizedModel:
    machine = MachineConfig()
    return FinitizedModel(machine, build_table(machine, 4, 7, 200))


class TestStatements(unittest.TestCase):
    """원자 명제 테스트"""

    @classmethod
    def setUpClass(cls):
        cls.model = small_model()

    def test_complexity_atoms(self):
        """C(x) >= k"""
        self.assertTrue(eval_statement(CGe('0', 1), self.model))
        self.assertFalse(eval_statement(CGe('0', 2), self.model))
        self.assertTrue(eval_statement(CGe('1', 4), self.model))
        self.assertFalse(eval_statement(CGe('0000', 4), self.model))
        self.assertTrue(eval_statement(Not(CGe('01', 6)), self.model))
        with self.assertRaises(OutOfLimitsError):
            eval_statement(CGe('00000', 1), self.model)

    def test_halting_atoms(self):
        """유한화 정지: T∞ 안에 정지"""
        self.assertTrue(eval_statement(HaltsWithin('100', 3), self.model))
        self.assertFalse(eval_statement(HaltsWithin('100', 2), self.model))
        self.assertTrue(eval_statement(NonTerm('1'), self.model))
        self.assertTrue(eval_statement(NonTerm('1110111'), self.model))
        self.assertFalse(eval_statement(NonTerm(''), self.model))
        with self.assertRaises(OutOfLimitsError):
            eval_statement(NonTerm('0' * 8), self.model)

    def test_connectives(self):
        a, b = CGe('1', 4), CGe('1', 5)
        self.assertFalse(eval_statement(And(a, b), self.model))
        self.assertTrue(eval_statement(Or(a, b), self.model))
        self.assertFalse(eval_statement(Implies(a, b), self.model))
        self.assertTrue(eval_statement(Implies(b, a), self.model))
        self.assertEqual(negate(Not(a)), a)

    def test_text_round_trip(self):
        """S-식 표기"""
        self.assertEqual(parse_statement('(C>= 01 5)'), CGe('01', 5))
        self.assertEqual(parse_statement('(C>= - 0)'), CGe('', 0))
        statement = FracForall(Fraction(1, 4), StringsOfLength(2), Implies(CGe(HOLE, 2), NonTerm(HOLE)))
        self.assertEqual(parse_statement(format_statement(statement)), statement)
        self.assertIn('1/4', format_statement(statement))
        with self.assertRaises(ValueError):
            parse_statement('(C<= 0 1)')

    def test_holes(self):
        """빈 자리가 남은 명제는 평가 불가"""
        with self.assertRaises(ValueError):
            eval_statement(CGe(HOLE, 1), self.model)
        self.assertEqual(CGe(HOLE, 1).instantiate('01'), CGe('01', 1))


class TestFracForall(unittest.TestCase):
    """분수 전칭 명제 테스트"""

    @classmethod
    def setUpClass(cls):
        cls.model = small_model()

    def test_invalid(self):
        with self.assertRaises(ValueError):
            FracForall(Fraction(1, 2), StringsOfLength(1), CGe('0', 1))
        with self.assertRaises(ValueError):
            FracForall(Fraction(3, 2), StringsOfLength(1), CGe(HOLE, 1))
        with self.assertRaises(ValueError):
            ExplicitDomain(('0', '0'))

    def test_counting_certification(self):
        """반례 수 <= δ|A| 이면 인증 (길이 2 에서는 C(00) = 2 만 반례)"""
        certificate = frac_forall_certify(Fraction(1, 4), StringsOfLength(2), CGe(HOLE, 4), self.model)
        self.assertEqual(certificate.failures, 1)
        self.assertEqual(certificate.size, 4)
        self.assertEqual(certificate.schema, 'counting')
        base = standard_base(self.model)
        self.assertTrue(base.certify_with('counting', certificate.statement))

    def test_certification_failure(self):
        """C('0') = 1, C('1') = 4 로 둘 다 5 미만"""
        with self.assertRaises(CertificationError):
            frac_forall_certify(Fraction(1, 2), StringsOfLength(1), CGe(HOLE, 5), self.model)
        with self.assertRaises(CertificationError):
            frac_forall_certify(0, StringsOfLength(2), CGe(HOLE, 4), self.model)
        statement = FracForall(1, StringsOfLength(1), CGe(HOLE, 5))
        self.assertEqual(statement.failures(self.model), 2)
        self.assertTrue(eval_statement(statement, self.model))

    def test_explicit_domain(self):
        statement = FracForall(Fraction(1, 2), ExplicitDomain(('0', '01')), CGe(HOLE, 4))
        self.assertEqual(statement.failures(self.model), 1)
        self.assertTrue(statement.holds(self.model))


class TestTheories(unittest.TestCase):
    """공리계와 이론 테스트"""

    @classmethod
    def setUpClass(cls):
        cls.model = small_model()
        cls.base = standard_base(cls.model)

    def test_witness_schema(self):
        """Σ1 사실만 인증"""
        self.assertTrue(self.base.certify_with('witness', Not(CGe('0', 4))))
        self.assertTrue(self.base.certify_with('witness', HaltsWithin('100', 5)))
        self.assertTrue(self.base.certify_with('witness', CGe('0', 0)))
        self.assertFalse(self.base.certify_with('witness', CGe('0', 1)))
        self.assertFalse(self.base.certify_with('witness', Not(CGe('0', 1))))
        self.assertFalse(self.base.certify_with('unknown', CGe('0', 0)))
        self.assertEqual(self.base.certifying_schema(HaltsWithin('', 1)), 'witness')

    def test_out_of_limits_is_not_certified(self):
        self.assertFalse(self.base.certify_with('witness', Not(CGe('00000', 9))))

    def test_base_identity(self):
        """공리계 비교는 이름과 도식만 본다"""
        other = AxiomBase('toy-arith', ('counting', 'witness'), FinitizedModel.tableless())
        self.assertEqual(other, self.base)

    def test_extend_and_consistency(self):
        theory = Theory(self.base)
        grown = theory.extend(CGe('01', 5))
        self.assertTrue(grown.contains(CGe('01', 5)))
        self.assertIs(grown.extend(CGe('01', 5)), grown)
        self.assertTrue(consistent(grown))
        # 기본 공리계가 부정을 인증
        self.assertFalse(consistent(theory.extend(CGe('0', 4))))
        self.assertFalse(consistent(grown.extend(Not(CGe('01', 5)))))

    def test_semantic_entailment(self):
        theory = Theory(self.base).extend(CGe('0', 4))
        self.assertTrue(semantic_entails(theory, CGe('0', 9), self.model))
        self.assertTrue(semantic_entails(Theory(self.base), CGe('0', 1), self.model))
        self.assertFalse(semantic_entails(Theory(self.base), CGe('0', 2), self.model))


class TestDerivations(unittest.TestCase):
    """유도 검사 테스트"""

    @classmethod
    def setUpClass(cls):
        cls.model = small_model()
        cls.base = standard_base(cls.model)

    def test_modus_ponens(self):
        a, b = CGe('01', 5), CGe('0000', 5)
        theory = Theory(self.base).extend(a).extend(Implies(a, b))
        builder = DerivationBuilder()
        i = builder.add(a, extra())
        j = builder.add(Implies(a, b), extra())
        builder.add(b, rule('modus_ponens', i, j))
        derivation = builder.build()
        self.assertTrue(check_derivation(derivation, theory, goal=b))
        self.assertFalse(check_derivation(derivation, theory, goal=a))
        self.assertFalse(check_derivation(derivation, Theory(self.base)))

    def test_first_bad_step_is_reported(self):
        theory = Theory(self.base).extend(CGe('00', 4))
        builder = DerivationBuilder()
        i = builder.add(CGe('00', 4), extra())
        j = builder.add(HaltsWithin('100', 5), axiom('witness'))
        builder.add(And(HaltsWithin('100', 5), CGe('00', 4)), rule('and_intro', i, j))
        result = check_derivation(builder.build(), theory)
        self.assertFalse(result)
        self.assertEqual(result.failed_index, 2)

    def test_forward_reference_rejected(self):
        builder = DerivationBuilder()
        builder.add(CGe('0', 0), rule('and_elim_l', 1))
        builder.add(And(CGe('0', 0), CGe('0', 0)), axiom('witness'))
        self.assertEqual(check_derivation(builder.build(), Theory(self.base)).failed_index, 0)

    def test_empty_derivation(self):
        builder = DerivationBuilder()
        self.assertFalse(check_derivation(builder.build(), Theory(self.base)))
        with self.assertRaises(ValueError):
            builder.include(builder.build())

    def test_deduction(self):
        """T + {H} ⊢ φ 에서 T ⊢ H → φ"""
        h = CGe('01', 5)
        fact = HaltsWithin('100', 5)
        builder = DerivationBuilder()
        i = builder.add(h, extra())
        j = builder.add(fact, axiom('witness'))
        builder.add(And(h, fact), rule('and_intro', i, j))
        derivation = builder.build()
        self.assertTrue(check_derivation(derivation, Theory(self.base).extend(h)))

        lifted = deduction(derivation, h)
        self.assertEqual(lifted.conclusion, Implies(h, And(h, fact)))
        self.assertTrue(check_derivation(lifted, Theory(self.base)))
        self.assertEqual(len(lifted), len(derivation) + 1)

    def test_include_shifts_references(self):
        a, b = CGe('01', 5), CGe('0000', 5)
        theory = Theory(self.base).extend(a).extend(b)
        left = single_step(a, extra())
        builder = DerivationBuilder()
        builder.add(b, extra())
        i = builder.include(left)
        builder.add(And(b, a), rule('and_intro', 0, i))
        self.assertTrue(check_derivation(builder.build(), theory))

    def test_disjunction_from_fraction(self):
        """FracForall 과 t > δ|A| 개의 R(a) → φ 에서 φ"""
        frac = frac_forall_certify(Fraction(1, 4), StringsOfLength(2), CGe(HOLE, 4), self.model)
        phi = CGe('01', 5)
        implications = [Implies(CGe(x, 4), phi) for x in ('00', '01')]
        theory = Theory(self.base)
        for implication in implications:
            theory = theory.extend(implication)

        builder = DerivationBuilder()
        f = builder.add(frac.statement, axiom('counting'))
        refs = [builder.add(implication, extra()) for implication in implications]
        builder.add(phi, rule('disj_from_frac', f, *refs))
        self.assertTrue(check_derivation(builder.build(), theory, goal=phi))

        # 하나만으로는 부족 (1 > 1/4 * 4 가 아님)
        short = DerivationBuilder()
        f = short.add(frac.statement, axiom('counting'))
        r = short.add(implications[0], extra())
        short.add(phi, rule('disj_from_frac', f, r))
        self.assertFalse(check_derivation(short.build(), theory))

    def test_serialization(self):
        a = CGe('01', 5)
        builder = DerivationBuilder()
        i = builder.add(a, extra())
        builder.add(Or(a, NonTerm('1')), rule('or_intro_l', i))
        derivation = deduction(builder.build(), a)
        self.assertEqual(derivation_from_sexpr(derivation_to_sexpr(derivation)), derivation)
        text = format_derivation(derivation)
        self.assertIn('discharge', text)
        self.assertEqual(len(text.splitlines()), len(derivation))
        with self.assertRaises(ValueError):
            Justification.from_sexpr(['magic', '0'])


TRUE_ATOMS = (CGe('0', 1), CGe('1', 4), CGe('00', 2), HaltsWithin('10', 2), NonTerm('1'),
              Not(CGe('0000', 4)))
FALSE_ATOMS = (CGe('0', 2), CGe('1', 5), CGe('00', 3), HaltsWithin('10', 1), NonTerm(''),
               CGe('0000', 4))
STEP_KINDS = ('extra', 'witness', 'counting', 'modus_ponens', 'and_intro', 'and_elim',
              'or_intro', 'weakening', 'disj_from_frac', 'bogus')


class TestDerivationFuzz(unittest.TestCase):
    """무작위 유도: 검사를 통과한 유도의 결론은 모형에서 참"""

    @classmethod
    def setUpClass(cls):
        cls.model = small_model()
        cls.base = standard_base(cls.model)
        cls.atoms = TRUE_ATOMS + FALSE_ATOMS
        candidates = list(cls.atoms)
        candidates += [Implies(a, b) for a in cls.atoms for b in cls.atoms]
        candidates += [Implies(CGe(x, 4), b) for x in ('00', '01', '10', '11') for b in cls.atoms]
        cls.true_extras = [s for s in candidates if eval_statement(s, cls.model)]
        cls.frac = frac_forall_certify(Fraction(1, 4), StringsOfLength(2), CGe(HOLE, 4),
                                       cls.model).statement

    def test_atom_pools(self):
        for atom in TRUE_ATOMS:
            self.assertTrue(eval_statement(atom, self.model), format_statement(atom))
        for atom in FALSE_ATOMS:
            self.assertFalse(eval_statement(atom, self.model), format_statement(atom))

    def random_steps(self, data, cited):
        """cited 를 extra 로 인용하는 무작위 단계들 (규칙에 어긋난 단계도 섞임)"""
        builder = DerivationBuilder()
        statements = []

        def pick(items):
            return data.draw(st.sampled_from(list(items)))

        def push(statement, justification):
            builder.add(statement, justification)
            statements.append(statement)

        push(pick(cited), extra())
        for _ in range(data.draw(st.integers(min_value=0, max_value=10))):
            kind = pick(STEP_KINDS)
            i = data.draw(st.integers(min_value=0, max_value=len(statements) - 1))
            j = data.draw(st.integers(min_value=0, max_value=len(statements) - 1))
            left, right = statements[i], statements[j]
            if kind == 'extra':
                push(pick(cited), extra())
            elif kind == 'witness':
                push(pick(self.atoms), axiom('witness'))
            elif kind == 'counting':
                push(self.frac, axiom('counting'))
            elif kind == 'modus_ponens':
                conclusion = right.right if isinstance(right, Implies) else pick(self.atoms)
                push(conclusion, rule('modus_ponens', i, j))
            elif kind == 'and_intro':
                push(And(left, right), rule('and_intro', i, j))
            elif kind == 'and_elim':
                if isinstance(left, And):
                    push(left.right, rule('and_elim_r', i))
                else:
                    push(pick(self.atoms), rule('and_elim_l', i))
            elif kind == 'or_intro':
                if data.draw(st.booleans()):
                    push(Or(left, pick(self.atoms)), rule('or_intro_l', i))
                else:
                    push(Or(pick(self.atoms), left), rule('or_intro_r', i))
            elif kind == 'weakening':
                push(Implies(pick(self.atoms), left), rule('weakening', i))
            elif kind == 'disj_from_frac':
                fracs = [k for k, s in enumerate(statements) if s == self.frac]
                implications = [k for k, s in enumerate(statements) if isinstance(s, Implies)]
                if not fracs or not implications:
                    push(self.frac, axiom('counting'))
                    continue
                refs = data.draw(st.lists(st.sampled_from(implications), min_size=1, max_size=4,
                                          unique=True))
                push(statements[refs[0]].right, rule('disj_from_frac', fracs[0], *refs))
            else:
                refs = data.draw(st.lists(st.integers(min_value=0, max_value=len(statements) - 1),
                                          max_size=3))
                push(pick(self.atoms), rule(pick(sorted(RULES)), *refs))
        return builder.steps

    @settings(max_examples=300, deadline=None)
    @given(st.data())
    def test_accepted_derivations_are_true(self, data):
        """모든 접두 유도에 대해: 검사 통과 ⇒ 결론 참"""
        extras = data.draw(st.lists(st.sampled_from(self.true_extras), min_size=1, max_size=5,
                                    unique=True))
        theory = Theory(self.base, tuple(extras))
        steps = self.random_steps(data, extras)
        accepted = 0
        for end in range(1, len(steps) + 1):
            prefix = Derivation(tuple(steps[:end]))
            if check_derivation(prefix, theory):
                accepted += 1
                self.assertTrue(eval_statement(prefix.conclusion, self.model),
                                format_derivation(prefix))
        # 첫 단계는 이론의 추가 명제라서 항상 통과
        self.assertGreaterEqual(accepted, 1)

    @settings(max_examples=200, deadline=None)
    @given(st.data())
    def test_discharged_derivations_are_true(self, data):
        """거짓일 수도 있는 가정 H 로 유도한 뒤 해소한 H → φ 도 참"""
        extras = data.draw(st.lists(st.sampled_from(self.true_extras), min_size=1, max_size=4,
                                    unique=True))
        assumption = data.draw(st.sampled_from(self.atoms))
        theory = Theory(self.base, tuple(extras))
        steps = self.random_steps(data, tuple(extras) + (assumption,))
        for end in range(1, len(steps) + 1):
            discharged = deduction(Derivation(tuple(steps[:end])), assumption)
            if check_derivation(discharged, theory):
                self.assertIsInstance(discharged.conclusion, Implies)
                self.assertTrue(eval_statement(discharged.conclusion, self.model),
                                format_derivation(discharged))


if __name__ == '__main__':
    unittest.main(verbosity=2)
