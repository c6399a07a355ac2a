# ==========================================
# core/errors.py - 도메인 예외 정의
# ==========================================

from typing import Any, Dict, Optional


class KolmogorovLabError(Exception):
    """실험실 도메인 오류의 기본 클래스 (CLI 종료 코드 1)"""

    def __init__(self, message: str, payload: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.message = message
        self.payload = payload or {}

    def to_dict(self) -> Dict[str, Any]:
        return {
            'error': type(self).__name__,
            'message': self.message,
            'payload': self.payload,
        }


class InfeasibleBudgetError(KolmogorovLabError):
    """작업량 한도 초과 (2^(L+1) x T)"""


class WorkCeilingError(KolmogorovLabError):
    """게임 트리/전략 크기 한도 초과"""


class NoIncompressibleStringError(KolmogorovLabError):
    """길이 n 의 비압축 문자열이 없음 (표 불변식 위반)"""


class OracleContradictionError(KolmogorovLabError):
    """오라클 응답이 계약을 위반"""


class InternalConsistencyError(KolmogorovLabError):
    """발생하면 안 되는 내부 불일치"""


class OutOfLimitsError(KolmogorovLabError):
    """원자 명제가 유한 모형의 한도를 벗어남"""


class CertificationError(KolmogorovLabError):
    """FracForall 인증 실패"""


class TreeValidationError(KolmogorovLabError):
    """전략 트리 불변식 위반"""


class FieldTooSmallError(KolmogorovLabError):
    """소수 p 가 차수 한도에 비해 작음"""


class QbfSyntaxError(KolmogorovLabError):
    """QBF 구문 오류"""


class UnboundVariableError(KolmogorovLabError):
    """양화되지 않은 변수"""


class PreconditionError(KolmogorovLabError, ValueError):
    """표 한도나 예산 같은 도메인 전제 조건 위반 (ValueError 로도 잡힘)"""
