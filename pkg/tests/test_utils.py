"""
유틸리티 모듈 테스트
비트열 부호, 유리수 표기, S-식, 리포트 쓰기, 설정 병합을 검증하는 테스트
"""

import json
import os
import shutil
import sys
import tempfile
import unittest
from fractions import Fraction
from unittest.mock import patch

import numpy as np
from hypothesis import given, strategies as st

# 프로젝트 루트 디렉토리를 Python 경로에 추가
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from utils import (
    EMPTY, gamma_decode, gamma_encode, index_to_string, iter_strings,
    jsonify, parse_bits, parse_fraction, parse_sexpr, parse_sexprs, format_sexpr,
    pow2_inverse, render_bits, render_fraction, string_to_index, strings_of_length, to_fraction,
)
from utils.bitstrings import (
    count_strings, decode_sequence, encode_sequence, is_prefix, pair_strings,
    sequence_term, unpair_string,
)
from utils.report_writer import REPORT_FORMAT_VERSION, atomic_write, render_report, write_report
from utils.config_loader import CACHE_DIR_ENV, ConfigLoader, deep_merge, machine_from_config, set_dotted

bit_strings = st.text(alphabet='01', max_size=12)


class TestBitstrings(unittest.TestCase):
    """비트열 번호와 부호 테스트"""

    def test_length_lex_order(self):
        """길이-사전식 번호 테스트"""
        self.assertEqual([index_to_string(i) for i in range(7)],
                         ['', '0', '1', '00', '01', '10', '11'])
        self.assertEqual(string_to_index(EMPTY), 0)
        self.assertEqual(string_to_index('11'), 6)

    @given(st.integers(min_value=0, max_value=10 ** 6))
    def test_index_bijection(self, n):
        """번호 -> 문자열 -> 번호"""
        self.assertEqual(string_to_index(index_to_string(n)), n)

    def test_invalid_inputs(self):
        """잘못된 입력 테스트"""
        with self.assertRaises(ValueError):
            string_to_index('012')
        with self.assertRaises(ValueError):
            index_to_string(-1)
        with self.assertRaises(ValueError):
            gamma_encode(0)

    def test_iteration_counts(self):
        """열거 개수 테스트"""
        self.assertEqual(list(strings_of_length(0)), [EMPTY])
        self.assertEqual(list(strings_of_length(2)), ['00', '01', '10', '11'])
        self.assertEqual(len(list(iter_strings(5))), count_strings(5))
        self.assertEqual(count_strings(3), 15)

    def test_gamma_code(self):
        """Elias-gamma 부호 테스트"""
        self.assertEqual(gamma_encode(1), '1')
        self.assertEqual(gamma_encode(2), '010')
        self.assertEqual(gamma_encode(5), '00101')
        self.assertEqual(gamma_decode('00101'), (5, 5))
        self.assertEqual(gamma_decode('1' + '010', 1), (2, 4))
        self.assertIsNone(gamma_decode('001'))

    def test_gamma_is_prefix_free(self):
        """gamma 부호끼리는 서로 접두어가 아님"""
        codes = [gamma_encode(n) for n in range(1, 64)]
        for a in codes:
            for b in codes:
                if a != b:
                    self.assertFalse(is_prefix(a, b))

    def test_pairing(self):
        """조건 문자열 ⟨u, q⟩ 테스트"""
        self.assertEqual(pair_strings(0, '110'), '1110')
        self.assertEqual(unpair_string('1110'), (0, '110'))
        self.assertEqual(unpair_string(pair_strings(6, '01')), (6, '01'))
        self.assertIsNone(unpair_string('00'))

    @given(st.lists(bit_strings, max_size=6))
    def test_sequence_left_inverse(self, terms):
        """encode 후 decode 하면 끝쪽 빈 항만 사라짐"""
        trimmed = list(terms)
        while trimmed and trimmed[-1] == EMPTY:
            trimmed.pop()
        self.assertEqual(decode_sequence(encode_sequence(terms)), trimmed)

    def test_sequence_terms(self):
        """수열 항 조회 테스트"""
        s = encode_sequence(['0', '', '11'])
        self.assertEqual(sequence_term(s, 0), '0')
        self.assertEqual(sequence_term(s, 1), EMPTY)
        self.assertEqual(sequence_term(s, 2), '11')
        self.assertEqual(sequence_term(s, 9), EMPTY)
        self.assertEqual(encode_sequence(['', '']), EMPTY)
        # 잘린 꼬리는 무시
        self.assertEqual(decode_sequence('1' + '00'), [])

    def test_render_and_parse_bits(self):
        """리포트 표기 테스트"""
        self.assertEqual(render_bits(EMPTY), '-')
        self.assertEqual(render_bits('01'), '01')
        for token in ('-', 'ε', "''"):
            self.assertEqual(parse_bits(token), EMPTY)
        self.assertEqual(parse_bits(' 0110 '), '0110')
        with self.assertRaises(ValueError):
            parse_bits('0a1')


class TestRationals(unittest.TestCase):
    """정확한 유리수 표기 테스트"""

    def test_render(self):
        """항상 num/den"""
        self.assertEqual(render_fraction(Fraction(1, 2)), '1/2')
        self.assertEqual(render_fraction(1), '1/1')
        self.assertEqual(render_fraction(Fraction(6, 8)), '3/4')

    def test_parse(self):
        """문자열 파싱 테스트"""
        self.assertEqual(parse_fraction('3/12'), Fraction(1, 4))
        self.assertEqual(parse_fraction('2'), Fraction(2))
        with self.assertRaises(ValueError):
            parse_fraction('1/0')

    def test_no_floats(self):
        """float 와 bool 은 거부"""
        with self.assertRaises(ValueError):
            to_fraction(0.5)
        with self.assertRaises(ValueError):
            to_fraction(True)
        self.assertEqual(to_fraction('1/16'), Fraction(1, 16))

    def test_pow2_inverse(self):
        self.assertEqual(pow2_inverse(3), Fraction(1, 8))
        self.assertEqual(pow2_inverse(0), Fraction(1))
        self.assertEqual(pow2_inverse(-2), Fraction(4))

    def test_jsonify(self):
        """리포트 직렬화 테스트"""
        value = {'p': Fraction(1, 3), 'rows': (np.int64(4), np.bool_(True)), 'arr': np.array([1, 2])}
        self.assertEqual(jsonify(value), {'p': '1/3', 'rows': [4, True], 'arr': [1, 2]})
        json.dumps(jsonify(value))


class TestSexpr(unittest.TestCase):
    """S-식 읽기/쓰기 테스트"""

    def test_nested(self):
        self.assertEqual(parse_sexpr('(a (b c) d)'), ['a', ['b', 'c'], 'd'])
        self.assertEqual(format_sexpr(['a', ['b', 'c'], 'd']), '(a (b c) d)')

    def test_quoting(self):
        """공백이나 빈 토큰은 따옴표 처리"""
        expr = ['rule', '', 'two words', '∀x']
        text = format_sexpr(expr)
        self.assertIn('""', text)
        self.assertEqual(parse_sexpr(text), expr)

    def test_comments_and_many(self):
        """주석과 여러 식"""
        self.assertEqual(parse_sexprs('; header\n(a) (b)'), [['a'], ['b']])
        with self.assertRaises(ValueError):
            parse_sexpr('(a) (b)')
        with self.assertRaises(ValueError):
            parse_sexpr('(a')


class TestReportWriter(unittest.TestCase):
    """리포트 렌더링 테스트"""

    def setUp(self):
        self.temp_dir = tempfile.mkdtemp()

    def tearDown(self):
        shutil.rmtree(self.temp_dir, ignore_errors=True)

    def test_json_is_deterministic(self):
        """같은 입력은 같은 바이트"""
        result = {'b': Fraction(1, 2), 'a': [1, 2]}
        first = render_report(result, 'json')
        self.assertEqual(first, render_report(result, 'json'))
        self.assertTrue(first.endswith(b'\n'))
        self.assertEqual(json.loads(first), {'b': '1/2', 'a': [1, 2]})
        self.assertEqual(render_report(None, 'json'), b'{}\n')

    def test_csv_rows(self):
        """CSV 행 렌더링 테스트"""
        rows = [{'a': 1, 'b': Fraction(1, 2)}, {'a': 2, 'b': None}]
        self.assertEqual(render_report(rows, 'csv'), b'a,b\n1,1/2\n2,\n')
        nested = render_report({'rows': [{'x': [1, 2]}]}, 'csv')
        self.assertEqual(nested, b'x\n"[1,2]"\n')
        self.assertEqual(render_report([], 'csv'), b'')

    def test_csv_column_order(self):
        rows = [{'a': 1, 'b': 2}]
        self.assertEqual(render_report(rows, 'csv', columns=['b', 'a']), b'b,a\n2,1\n')

    def test_unknown_format(self):
        with self.assertRaises(ValueError):
            render_report({}, 'xml')

    def test_atomic_write(self):
        """원자적 쓰기 후 임시 파일이 남지 않음"""
        path = os.path.join(self.temp_dir, 'sub', 'report.json')
        write_report({'format': REPORT_FORMAT_VERSION}, path)
        with open(path, encoding='utf-8') as f:
            self.assertEqual(json.load(f)['format'], 'kolmo-report v1')
        atomic_write(path, b'second')
        with open(path, 'rb') as f:
            self.assertEqual(f.read(), b'second')
        self.assertEqual(os.listdir(os.path.dirname(path)), ['report.json'])


class TestConfigLoader(unittest.TestCase):
    """설정 병합 테스트"""

    def setUp(self):
        self.temp_dir = tempfile.mkdtemp()

    def tearDown(self):
        shutil.rmtree(self.temp_dir, ignore_errors=True)

    def test_deep_merge(self):
        base = {'table': {'N': 6, 'L': 12}, 'seed': 0}
        merged = deep_merge(base, {'table': {'N': 4}})
        self.assertEqual(merged, {'table': {'N': 4, 'L': 12}, 'seed': 0})
        self.assertEqual(base['table']['N'], 6)

    def test_set_dotted(self):
        config = {}
        set_dotted(config, 'sumcheck.max_vars', 3)
        self.assertEqual(config, {'sumcheck': {'max_vars': 3}})

    def test_defaults_without_file(self):
        """설정 파일이 없으면 기본값"""
        loader = ConfigLoader(os.path.join(self.temp_dir, 'missing.yaml'))
        with patch.dict(os.environ, {}, clear=True):
            config = loader.load()
        self.assertEqual(config['table']['N'], 6)
        self.assertEqual(config['output']['format'], 'json')

    def test_priority(self):
        """파일 < 환경 변수 < 플래그"""
        path = os.path.join(self.temp_dir, 'config.yaml')
        with open(path, 'w', encoding='utf-8') as f:
            f.write("table:\n  N: 5\n  T: 300\nseed: 7\n")
        loader = ConfigLoader(path)
        with patch.dict(os.environ, {CACHE_DIR_ENV: self.temp_dir}, clear=True):
            config = loader.load({'table.N': 3, 'seed': None})
        self.assertEqual(config['table']['N'], 3)
        self.assertEqual(config['table']['T'], 300)
        self.assertEqual(config['table']['L'], 12)
        self.assertEqual(config['seed'], 7)
        self.assertEqual(config['table']['cache_dir'], self.temp_dir)

    def test_machine_text_file(self):
        """key = value 기계 설정 파일"""
        path = os.path.join(self.temp_dir, 'machine.txt')
        with open(path, 'w', encoding='utf-8') as f:
            f.write("variant = plain\nmax_steps_hard = 500  # 작게\n")
        config = ConfigLoader(path).load()
        self.assertEqual(config['machine']['max_steps_hard'], 500)
        machine = machine_from_config(config, path)
        self.assertEqual(machine.max_steps_hard, 500)
        self.assertEqual(machine_from_config(config).fingerprint(), machine.fingerprint())


if __name__ == '__main__':
    unittest.main(verbosity=2)
