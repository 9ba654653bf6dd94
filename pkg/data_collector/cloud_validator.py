"""측정 표본 품질 검증 모듈"""

from dataclasses import dataclass
from enum import Enum
from typing import List, Optional, Set, Tuple

import numpy as np

from utils.logger_utils import setup_logger


class SampleErrorType(Enum):
    """검증 에러 타입"""
    NON_FINITE = "non_finite"
    WRONG_DIMENSION = "wrong_dimension"
    DUPLICATE = "duplicate"


@dataclass
class ValidationResult:
    """검증 결과"""
    is_valid: bool
    error_type: Optional[SampleErrorType] = None
    error_message: Optional[str] = None


class CloudValidator:
    """측정 표본 한 줄씩 검증"""

    def __init__(self, n: int):
        self.logger = setup_logger("cloud_validator")
        self.n = n

        # 중복 체크용
        self.seen: Set[Tuple[float, ...]] = set()

        # 통계
        self.total_validated = 0
        self.total_errors = 0
        self.duplicates = 0
        self.error_counts = {error_type: 0 for error_type in SampleErrorType}

    def validate_sample(self, values: List[float], line: int) -> ValidationResult:
        """측정 표본 검증"""
        self.total_validated += 1

        # 1. 차원
        if len(values) != self.n:
            return self._record_error(
                SampleErrorType.WRONG_DIMENSION,
                f"expected {self.n} values, got {len(values)}",
                line
            )

        # 2. NaN / inf
        if not np.all(np.isfinite(values)):
            return self._record_error(
                SampleErrorType.NON_FINITE,
                f"non-finite coordinate {values}",
                line
            )

        # 3. 중복 (경고만, 실패는 아님 - 같은 위치가 다시 측정될 수 있음)
        key = tuple(values)
        if key in self.seen:
            self.duplicates += 1
            self.logger.warning(f"line {line}: duplicate sample {values}")
        self.seen.add(key)

        return ValidationResult(is_valid=True)

    def _record_error(self, error_type: SampleErrorType, message: str, line: int) -> ValidationResult:
        """에러 기록"""
        self.total_errors += 1
        self.error_counts[error_type] += 1
        self.logger.error(f"[{error_type.value}] line {line}: {message}")

        return ValidationResult(
            is_valid=False,
            error_type=error_type,
            error_message=message
        )

    def get_error_rate(self) -> float:
        """에러율 계산"""
        if self.total_validated == 0:
            return 0.0
        return self.total_errors / self.total_validated

    def get_stats(self) -> dict:
        """검증 통계"""
        return {
            "total_validated": self.total_validated,
            "total_errors": self.total_errors,
            "duplicates": self.duplicates,
            "error_rate": self.get_error_rate(),
            "error_counts": {
                error_type.value: count
                for error_type, count in self.error_counts.items()
                if count > 0
            }
        }
