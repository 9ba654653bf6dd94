"""에러 분류 및 예외 계층"""

from enum import Enum
from typing import Optional


class ErrorType(Enum):
    """에러 타입"""
    DIMENSION_MISMATCH = "dimension_mismatch"
    INVALID_INPUT = "invalid_input"
    POLARITY_VIOLATION = "polarity_violation"
    RANK_DEFICIENT = "rank_deficient"
    PARSE_ERROR = "parse_error"
    IO_ERROR = "io_error"
    ITERATION_LIMIT = "iteration_limit"
    NUMERICAL_FAILURE = "numerical_failure"


class ReconstructionError(Exception):
    """모든 도메인 에러의 기반 클래스"""
    error_type: ErrorType = ErrorType.INVALID_INPUT
    exit_code: int = 1

    def __init__(self, message: str):
        super().__init__(message)
        self.message = message


class DimensionError(ReconstructionError):
    error_type = ErrorType.DIMENSION_MISMATCH


class ValidationError(ReconstructionError):
    error_type = ErrorType.INVALID_INPUT


class PolarityViolationError(ReconstructionError):
    """X^ħ ⊄ P (AB ≰ I)"""
    error_type = ErrorType.POLARITY_VIOLATION


class RankDeficiencyError(ReconstructionError):
    """아핀 종속 점 구름"""
    error_type = ErrorType.RANK_DEFICIENT


class ParseError(ReconstructionError):
    error_type = ErrorType.PARSE_ERROR
    exit_code = 2

    def __init__(self, message: str, line: Optional[int] = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class ArtifactIOError(ReconstructionError):
    error_type = ErrorType.IO_ERROR
    exit_code = 2


class IterationLimitError(ReconstructionError):
    error_type = ErrorType.ITERATION_LIMIT
    exit_code = 3

    def __init__(self, message: str, gap: float):
        super().__init__(f"{message} (gap={gap:.3e})")
        self.gap = gap


class NumericalError(ReconstructionError):
    error_type = ErrorType.NUMERICAL_FAILURE
    exit_code = 3
