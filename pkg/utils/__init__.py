"""
Utils 모듈 - 콜모고로프 실험실의 공통 유틸리티

비트열 순서/부호, 정확한 유리수 표기, S-식, 리포트 쓰기 등
시스템 전반에서 사용되는 함수들을 제공합니다.
config_loader 는 core 를 import 하므로 여기서 불러오지 않습니다.
"""

import logging

from .bitstrings import (
    EMPTY, gamma_decode, gamma_encode, index_to_string, iter_strings, length_lex_key,
    render_bits, parse_bits, string_to_index, strings_of_length,
)
from .rationals import jsonify, parse_fraction, pow2_inverse, render_fraction, to_fraction
from .sexpr import format_sexpr, parse_sexpr, parse_sexprs

__version__ = "1.0.0"
__author__ = "Kolmogorov Lab Team"

__all__ = [
    # 비트열
    'EMPTY', 'string_to_index', 'index_to_string', 'strings_of_length', 'iter_strings',
    'length_lex_key', 'gamma_encode', 'gamma_decode', 'render_bits', 'parse_bits',
    # 유리수
    'to_fraction', 'render_fraction', 'parse_fraction', 'pow2_inverse', 'jsonify',
    # S-식
    'format_sexpr', 'parse_sexpr', 'parse_sexprs',
    'get_constants', 'setup_utils_logging',
]

MODULE_INFO = {
    'name': 'Kolmogorov Lab Utils',
    'description': '공통 유틸리티 및 헬퍼 함수 모듈',
    'version': __version__,
    'components': {
        'bitstrings': '길이-사전식 전단사, 엘리아스 감마 부호, 유한 지지 수열',
        'rationals': '정확한 유리수 "num/den" 표기',
        'sexpr': 'pyparsing 기반 S-식 읽기/쓰기',
        'report_writer': 'JSON/CSV 리포트와 원자적 파일 쓰기',
        'config_loader': 'config.yaml + .env + 플래그 병합',
    },
}

# 상수 정의
CONSTANTS = {
    'REPORT_FORMAT_VERSION': 'kolmo-report v1',
    'TABLE_FORMAT_VERSION': 'kolmo-table v1',
    'TREE_FORMAT_VERSION': 'v1',
    'CACHE_DIR_ENV': 'KOLMO_CACHE_DIR',
    'EMPTY_STRING_TOKEN': '-',
}


def get_constants():
    """시스템 상수 반환"""
    return CONSTANTS.copy()


def setup_utils_logging(level=logging.INFO):
    """유틸 모듈 로거 수준 설정"""
    logger = logging.getLogger('utils')
    logger.setLevel(level)
    return logger
