# ==========================================
# utils/report_writer.py - 리포트 렌더링 (JSON / CSV) 과 원자적 파일 쓰기
# ==========================================

import io
import json
import logging
import os
import tempfile
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import pandas as pd

from utils.rationals import jsonify

logger = logging.getLogger(__name__)

REPORT_FORMAT_VERSION = 'kolmo-report v1'
FORMATS = ('json', 'csv')


def _rows_of(result: Any) -> List[Dict]:
    """CSV 행 목록: 리스트는 그대로, 'rows' 를 가진 dict 는 그 행들, 그 밖의 dict 는 한 행"""
    if result is None:
        return []
    if isinstance(result, (list, tuple)):
        return [row if isinstance(row, dict) else {'value': row} for row in result]
    if isinstance(result, dict):
        rows = result.get('rows')
        if isinstance(rows, list):
            return [row if isinstance(row, dict) else {'value': row} for row in rows]
        return [result]
    return [{'value': result}]


def _cell(value: Any) -> Any:
    value = jsonify(value)
    if isinstance(value, (list, dict)):
        return json.dumps(value, ensure_ascii=False, separators=(',', ':'))
    if value is None:
        return ''
    return value


def render_report(result: Any, fmt: str = 'json', columns: Optional[Sequence[str]] = None) -> bytes:
    """결과를 바이트로: 같은 입력은 항상 같은 바이트

    Args:
        result: dict / 행 dict 목록 / None
        fmt: 'json' 또는 'csv'
        columns: CSV 열 순서 (없으면 첫 등장 순서)
    """
    if fmt not in FORMATS:
        raise ValueError(f"지원하지 않는 리포트 형식: {fmt}")

    if fmt == 'json':
        document = jsonify(result) if result is not None else {}
        text = json.dumps(document, indent=2, ensure_ascii=False)
        return (text + '\n').encode('utf-8')

    rows = _rows_of(result)
    if columns is None:
        ordered: List[str] = []
        for row in rows:
            for key in row:
                if key not in ordered:
                    ordered.append(key)
        columns = ordered
    if not rows and not columns:
        return b''
    frame = pd.DataFrame([{k: _cell(row.get(k)) for k in columns} for row in rows], columns=list(columns))
    buffer = io.StringIO()
    frame.to_csv(buffer, index=False, lineterminator='\n')
    return buffer.getvalue().encode('utf-8')


def atomic_write(path, data: bytes) -> Path:
    """같은 디렉터리의 임시 파일에 쓴 뒤 os.replace 로 교체"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with tempfile.NamedTemporaryFile('wb', dir=path.parent, prefix=f".{path.name}.", delete=False) as handle:
        handle.write(data)
        temp_name = handle.name
    try:
        os.replace(temp_name, path)
    except OSError:
        os.unlink(temp_name)
        raise
    logger.debug(f"💾 저장: {path}")
    return path


def write_report(result: Any, path, fmt: str = 'json', columns: Optional[Sequence[str]] = None) -> Path:
    return atomic_write(path, render_report(result, fmt, columns))
