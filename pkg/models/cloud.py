from dataclasses import dataclass

import numpy as np

from utils.errors import DimensionError, ValidationError


@dataclass(frozen=True, eq=False)
class MeasurementCloud:
    """위치 측정 표본 {x₁, …, x_N}"""
    n: int
    points: np.ndarray   # (N, n), 위치 단위
    label: str = ""

    def __post_init__(self):
        points = np.asarray(self.points, dtype=float)
        if points.ndim == 1:
            points = points.reshape(-1, 1) if self.n == 1 else points.reshape(1, -1)
        if points.ndim != 2 or points.shape[1] != self.n:
            raise DimensionError(f"points must have shape (N, {self.n}), got {points.shape}")
        if not np.all(np.isfinite(points)):
            raise ValidationError("measurement cloud contains non-finite values")
        points = points.copy()
        points.setflags(write=False)
        object.__setattr__(self, "points", points)

    @property
    def size(self) -> int:
        return self.points.shape[0]

    def affine_rank(self) -> int:
        """아핀 껍질 차원"""
        if self.size == 0:
            return 0
        centered = self.points - self.points.mean(axis=0)
        return int(np.linalg.matrix_rank(centered))

    def is_full_dimensional(self) -> bool:
        """n+1 개 이상의 아핀 독립 점"""
        return self.size >= self.n + 1 and self.affine_rank() == self.n

    def subset(self, mask: np.ndarray, label: str = None) -> "MeasurementCloud":
        return MeasurementCloud(self.n, self.points[mask], label or self.label)

    def __repr__(self):
        return f"MeasurementCloud(n={self.n}, N={self.size}, label={self.label!r})"
