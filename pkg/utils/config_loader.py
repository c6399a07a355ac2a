# ==========================================
# utils/config_loader.py - config.yaml + .env + 명령행 플래그 병합
# ==========================================

import copy
import logging
import os
from pathlib import Path
from typing import Any, Dict, Mapping, Optional

import yaml
from dotenv import load_dotenv

from core import get_default_config
from core.machine import MachineConfig

logger = logging.getLogger(__name__)

CACHE_DIR_ENV = 'KOLMO_CACHE_DIR'


def deep_merge(base: Dict, override: Mapping) -> Dict:
    """override 값이 base 를 덮어씀 (중첩 dict 는 재귀 병합)"""
    merged = copy.deepcopy(base)
    for key, value in override.items():
        if isinstance(value, Mapping) and isinstance(merged.get(key), dict):
            merged[key] = deep_merge(merged[key], value)
        else:
            merged[key] = copy.deepcopy(value)
    return merged


class ConfigLoader:
    """기본 설정 < 설정 파일 < 환경 변수 (캐시 경로) < 플래그"""

    def __init__(self, config_path: Optional[str] = "config.yaml", env_path: Optional[str] = None):
        self.config_path = Path(config_path) if config_path else None
        self.env_path = env_path
        self.logger = logging.getLogger(__name__)

    def _read_file(self) -> Dict:
        if self.config_path is None or not self.config_path.exists():
            return {}
        text = self.config_path.read_text(encoding='utf-8')
        try:
            data = yaml.safe_load(text)
        except yaml.YAMLError:
            data = None
        if isinstance(data, dict):
            return data
        # key = value 기계 설정 파일
        machine = MachineConfig.from_text(text)
        return {'machine': {k: getattr(machine, k) for k in
                            ('variant', 'opcode_table', 'max_steps_hard', 'memory_limit', 'max_program_len')}}

    def load(self, overrides: Optional[Mapping[str, Any]] = None) -> Dict:
        """병합된 설정 dict

        Args:
            overrides: 'table.N' 같은 점 표기 키 -> 값 (None 은 무시)
        """
        config = deep_merge(get_default_config(), self._read_file())
        load_dotenv(self.env_path)
        cache_dir = os.getenv(CACHE_DIR_ENV)
        if cache_dir:
            config['table']['cache_dir'] = cache_dir
        for dotted, value in (overrides or {}).items():
            if value is None:
                continue
            set_dotted(config, dotted, value)
        return config


def set_dotted(config: Dict, dotted: str, value: Any) -> None:
    keys = dotted.split('.')
    node = config
    for key in keys[:-1]:
        node = node.setdefault(key, {})
    node[keys[-1]] = value


def machine_from_config(config: Mapping, machine_file: Optional[str] = None) -> MachineConfig:
    """--machine-file 이 있으면 그 파일, 없으면 설정의 machine 절"""
    if machine_file:
        return MachineConfig.from_text(Path(machine_file).read_text(encoding='utf-8'))
    return MachineConfig.from_dict(config.get('machine', {}))
