"""측정 구름 이상치 제거 및 중심화 모듈"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from models.cloud import MeasurementCloud
from models.ingest import CenterMode
from utils.errors import DimensionError
from utils.logger_utils import setup_logger


@dataclass
class NormalizedCloud:
    """정규화된 구름"""
    cloud: MeasurementCloud       # 원점 중심 (x − x₀)
    center: np.ndarray            # 추출된 x₀
    retained: int
    dropped: int
    lower: Optional[np.ndarray] = None   # 좌표별 유지 구간
    upper: Optional[np.ndarray] = None


class CloudNormalizer:
    """좌표별 분위수 절단 + 중심 추출"""

    def __init__(self, trim_fraction: float = 0.0):
        """
        Args:
            trim_fraction: 각 좌표의 위/아래에서 잘라낼 분위 (0 ~ 0.2)
        """
        self.logger = setup_logger("cloud_normalizer")
        self.trim_fraction = trim_fraction

    def trim_mask(self, points: np.ndarray):
        """(mask, lower, upper): 모든 좌표가 [q, 1−q] 분위 구간 안인 점"""
        if self.trim_fraction == 0.0:
            return np.ones(points.shape[0], dtype=bool), None, None

        lower = np.quantile(points, self.trim_fraction, axis=0)
        upper = np.quantile(points, 1.0 - self.trim_fraction, axis=0)
        mask = np.all((points >= lower) & (points <= upper), axis=1)
        return mask, lower, upper

    def normalize(
        self,
        cloud: MeasurementCloud,
        center_mode: CenterMode = CenterMode.MEAN,
        fixed_center: Optional[np.ndarray] = None,
    ) -> NormalizedCloud:
        """절단 → 중심 추출 → 원점으로 평행이동"""
        mask, lower, upper = self.trim_mask(cloud.points)
        retained = cloud.points[mask]

        if center_mode is CenterMode.FIXED:
            center = np.atleast_1d(np.asarray(fixed_center, dtype=float))
            if center.shape != (cloud.n,):
                raise DimensionError(f"fixed center must have length {cloud.n}, got {center.shape}")
        else:
            center = retained.mean(axis=0) if retained.size else np.zeros(cloud.n)

        dropped = int(cloud.size - retained.shape[0])
        if dropped:
            self.logger.info(
                f"[절단] {dropped}/{cloud.size} points dropped "
                f"(trim={self.trim_fraction:.3f})"
            )
        self.logger.debug(f"[중심] x0={np.round(center, 8).tolist()} ({center_mode.value})")

        return NormalizedCloud(
            cloud=MeasurementCloud(cloud.n, retained - center, cloud.label),
            center=center,
            retained=int(retained.shape[0]),
            dropped=dropped,
            lower=lower,
            upper=upper,
        )
