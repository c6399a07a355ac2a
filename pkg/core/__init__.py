"""
Core 모듈 - 토이 범용 기계 위의 콜모고로프 복잡도 실험실 핵심 엔진

기계 인터프리터, 복잡도 표, 유한화된 논리, 확률적 증명 전략,
QBF 합검사 프로토콜 컴파일을 제공합니다.
"""

import copy
import importlib
import logging
from typing import Any, Dict

__version__ = "1.0.0"
__author__ = "Kolmogorov Lab Team"

# 기본 설정값 (config.yaml 이 덮어씀)
DEFAULT_CONFIG: Dict[str, Any] = {
    'machine': {
        'variant': 'plain',
        'opcode_table': 'toy-v1',
        'max_steps_hard': 100000,
        'memory_limit': 64,
        'max_program_len': 32,
    },
    'table': {
        'N': 6,
        'L': 12,
        'T': 1000,
        'workers': 1,
        'work_ceiling': 2_000_000_000,
        'cache_dir': None,
    },
    'strategy': {
        'epsilons': ['1/16', '1/8', '1/4'],
        'fuzz_count': 500,
        'adversarial': 50,
        'mc_trees': 100,
        'mc_trials': 10000,
    },
    'sumcheck': {
        'work_ceiling': 50_000_000,
        'tree_ceiling': 200_000,
        'max_vars': 8,
    },
    'output': {
        'dir': 'results',
        'format': 'json',
    },
    'logging': {
        'level': 'INFO',
        'dir': 'logs',
    },
    'seed': 0,
}


def get_default_config() -> Dict[str, Any]:
    """기본 설정값 반환"""
    return copy.deepcopy(DEFAULT_CONFIG)


logger = logging.getLogger(__name__)

# 엔진 모듈 등록 (import 실패는 경고만)
available_modules: Dict[str, Any] = {}

_ENGINE_MODULES = [
    ('machine', 'MachineConfig'),
    ('complexity', 'TableBuilder'),
    ('logic', 'AxiomBase'),
    ('strategy', 'StrategyBuilder'),
    ('experiments', 'TreeFuzzer'),
    ('sumcheck', 'AdversarialGame'),
]

for _module_name, _class_name in _ENGINE_MODULES:
    try:
        _module = importlib.import_module(f'core.{_module_name}')
        available_modules[_class_name] = getattr(_module, _class_name)
        logger.debug(f"✅ {_class_name} 로드 성공")
    except ImportError as e:
        logger.warning(f"⚠️ {_class_name} 로드 실패: {e}")

__all__ = list(available_modules.keys()) + ['DEFAULT_CONFIG', 'get_default_config', 'setup_logging']

MODULE_INFO = {
    'name': 'Kolmogorov Lab Core',
    'description': '토이 범용 기계 위에서 유한화된 콜모고로프 복잡도와 확률적 증명 전략을 실험',
    'version': __version__,
    'available_modules': list(available_modules.keys()),
    'components': {
        'machine': '토이 범용 기계 (plain / prefix / conditional)',
        'complexity': '복잡도 표, 정지 한계, r_n, 압축 가능 문자열 계수, DNC',
        'logic': '명제, 이론, 유도, 공리 도식',
        'strategy': '확률적 전략 트리의 검증, 평가, 추출',
        'experiments': '무작위 공리 전략, 독립성 실험, 트리 퍼저',
        'sumcheck': 'QBF 산술화와 합검사 프로토콜',
    },
}


def get_version():
    """현재 버전 반환"""
    return __version__


def get_module_info():
    """모듈 정보 반환"""
    return MODULE_INFO


def get_class(class_name: str):
    """클래스 이름으로 클래스 객체 반환"""
    return available_modules.get(class_name)


def setup_logging(level=logging.INFO):
    """핵심 모듈 로깅 설정"""
    core_logger = logging.getLogger('core')
    if not core_logger.handlers and not logging.getLogger().handlers:
        handler = logging.StreamHandler()
        handler.setFormatter(logging.Formatter('%(asctime)s - %(name)s - %(levelname)s - %(message)s'))
        core_logger.addHandler(handler)
    core_logger.setLevel(level)
    return core_logger
