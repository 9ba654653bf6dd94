from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

from config.settings import Settings
from models.ellipsoid import Ellipsoid
from utils.errors import ValidationError


class EstimatorKind(Enum):
    LOEWNER = "loewner"   # 최소 부피 외접 (MVEE)
    JOHN = "john"         # 최대 부피 내접


class CenterMode(Enum):
    MEAN = "mean"
    FIXED = "fixed"


@dataclass(frozen=True, eq=False)
class IngestConfig:
    """측정 구름 → 국소화 타원체 설정"""
    estimator: EstimatorKind = EstimatorKind.LOEWNER
    trim_fraction: float = 0.0
    center_mode: CenterMode = CenterMode.MEAN
    fixed_center: Optional[np.ndarray] = None
    eps: float = Settings.MVEE_EPS
    max_iter: int = Settings.MVEE_MAX_ITER
    hbar: float = Settings.HBAR

    def __post_init__(self):
        object.__setattr__(self, "estimator", EstimatorKind(self.estimator))
        object.__setattr__(self, "center_mode", CenterMode(self.center_mode))

        if not 0.0 <= self.trim_fraction <= Settings.MAX_TRIM_FRACTION:
            raise ValidationError(
                f"trim_fraction must be in [0, {Settings.MAX_TRIM_FRACTION}], "
                f"got {self.trim_fraction}"
            )
        if not self.eps > 0:
            raise ValidationError(f"eps must be positive, got {self.eps}")
        if isinstance(self.max_iter, bool) or not isinstance(self.max_iter, int) or self.max_iter < 1:
            raise ValidationError(f"max_iter must be a positive integer, got {self.max_iter!r}")
        if not self.hbar > 0:
            raise ValidationError(f"hbar must be positive, got {self.hbar}")

        if self.center_mode is CenterMode.FIXED:
            if self.fixed_center is None:
                raise ValidationError("center_mode 'fixed' requires fixed_center")
            object.__setattr__(
                self, "fixed_center", np.atleast_1d(np.asarray(self.fixed_center, dtype=float))
            )

    @classmethod
    def from_dict(cls, raw: dict) -> "IngestConfig":
        """JSON 설정 파일 → IngestConfig"""
        known = {"estimator", "trim_fraction", "center_mode", "fixed_center", "eps", "max_iter", "hbar"}
        unknown = set(raw) - known
        if unknown:
            raise ValidationError(f"unknown ingest config keys: {sorted(unknown)}")
        try:
            return cls(
                estimator=raw.get("estimator", EstimatorKind.LOEWNER.value),
                trim_fraction=float(raw.get("trim_fraction", 0.0)),
                center_mode=raw.get("center_mode", CenterMode.MEAN.value),
                fixed_center=raw.get("fixed_center"),
                eps=float(raw.get("eps", Settings.MVEE_EPS)),
                max_iter=raw.get("max_iter", Settings.MVEE_MAX_ITER),
                hbar=float(raw.get("hbar", Settings.HBAR)),
            )
        except (TypeError, ValueError) as e:
            raise ValidationError(f"invalid ingest config: {e}") from e

    def to_dict(self) -> dict:
        return {
            "estimator": self.estimator.value,
            "trim_fraction": self.trim_fraction,
            "center_mode": self.center_mode.value,
            "fixed_center": None if self.fixed_center is None else self.fixed_center.tolist(),
            "eps": self.eps,
            "max_iter": self.max_iter,
            "hbar": self.hbar,
        }


@dataclass(frozen=True, eq=False)
class RegionEstimate:
    """estimate_region 결과: 원점 중심 타원체 + 추출된 중심 x₀"""
    ellipsoid: Ellipsoid
    center: np.ndarray
    retained: int
    dropped: int

    def located(self) -> Ellipsoid:
        """x₀ 로 옮긴 타원체"""
        return self.ellipsoid.with_center(self.center)
