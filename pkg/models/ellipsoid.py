"""타원체 (위치/운동량/위상 공간 국소화 영역)"""

from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np
from scipy.special import gamma

from utils.errors import DimensionError, ValidationError


class SpaceTag(Enum):
    """타원체가 놓인 공간"""
    POSITION = "position"
    MOMENTUM = "momentum"
    PHASE = "phase"

    @property
    def dual(self) -> "SpaceTag":
        """극쌍대 공간 (position ↔ momentum)"""
        if self is SpaceTag.POSITION:
            return SpaceTag.MOMENTUM
        if self is SpaceTag.MOMENTUM:
            return SpaceTag.POSITION
        return SpaceTag.PHASE


def _frozen(array: np.ndarray) -> np.ndarray:
    array = np.array(array, dtype=float)
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class Ellipsoid:
    """
    { u : (u − center)ᵀ shape (u − center) ≤ ħ }

    항상 "≤ ħ" 규약으로 저장한다 (≤ 1 로 재스케일하지 않음).
    """
    space: SpaceTag
    center: np.ndarray
    shape: np.ndarray
    hbar: float

    def __post_init__(self):
        center = np.atleast_1d(np.asarray(self.center, dtype=float))
        shape = np.atleast_2d(np.asarray(self.shape, dtype=float))

        if shape.ndim != 2 or shape.shape[0] != shape.shape[1]:
            raise DimensionError(f"shape must be square, got {shape.shape}")
        if center.ndim != 1 or center.shape[0] != shape.shape[0]:
            raise DimensionError(
                f"center length {center.shape} does not match shape {shape.shape}"
            )
        if not (np.all(np.isfinite(shape)) and np.all(np.isfinite(center))):
            raise ValidationError("ellipsoid entries must be finite")
        if not self.hbar > 0:
            raise ValidationError(f"hbar must be positive, got {self.hbar}")

        scale = max(np.linalg.norm(shape), 1e-300)
        if np.linalg.norm(shape - shape.T) > 1e-12 * scale:
            raise ValidationError("ellipsoid shape matrix is not symmetric")
        shape = 0.5 * (shape + shape.T)
        try:
            np.linalg.cholesky(shape)
        except np.linalg.LinAlgError:
            raise ValidationError("ellipsoid shape matrix is not positive definite") from None

        object.__setattr__(self, "space", SpaceTag(self.space))
        object.__setattr__(self, "center", _frozen(center))
        object.__setattr__(self, "shape", _frozen(shape))
        object.__setattr__(self, "hbar", float(self.hbar))

    @property
    def n_ambient(self) -> int:
        return self.shape.shape[0]

    def is_centered(self, tol: float = 1e-12) -> bool:
        """중심이 원점인지"""
        scale = max(1.0, float(np.sqrt(self.hbar / np.linalg.eigvalsh(self.shape)[0])))
        return bool(np.all(np.abs(self.center) <= tol * scale))

    def quadratic_form(self, points: np.ndarray) -> np.ndarray:
        """(u − c)ᵀ Q (u − c), points: (..., n)"""
        delta = np.asarray(points, dtype=float) - self.center
        return np.einsum("...i,ij,...j->...", delta, self.shape, delta)

    def contains(self, points: np.ndarray, tol: float = 0.0) -> np.ndarray:
        """멤버십 판정 (≤ ħ·(1 + tol))"""
        return self.quadratic_form(points) <= self.hbar * (1.0 + tol)

    def semi_axes(self) -> np.ndarray:
        """반축 길이 √(ħ/λ_i), 오름차순 고유값 순"""
        return np.sqrt(self.hbar / np.linalg.eigvalsh(self.shape))

    def volume(self) -> float:
        """부피 = vol(B^n(1)) · ħ^{n/2} / √det(Q)"""
        n = self.n_ambient
        unit_ball = np.pi ** (n / 2) / gamma(n / 2 + 1)
        _, logdet = np.linalg.slogdet(self.shape)
        return float(unit_ball * np.exp(0.5 * n * np.log(self.hbar) - 0.5 * logdet))

    def boundary_points(self, count: int, rng: Optional[np.random.Generator] = None) -> np.ndarray:
        """경계 위 무작위 점 (테스트/검증용)"""
        rng = rng or np.random.default_rng(0)
        directions = rng.standard_normal((count, self.n_ambient))
        directions /= np.linalg.norm(directions, axis=1, keepdims=True)
        # u = c + √ħ · Q^{-1/2} d
        vals, vecs = np.linalg.eigh(self.shape)
        inv_sqrt = vecs @ np.diag(vals ** -0.5) @ vecs.T
        return self.center + np.sqrt(self.hbar) * directions @ inv_sqrt.T

    def with_center(self, center: np.ndarray) -> "Ellipsoid":
        return Ellipsoid(space=self.space, center=center, shape=self.shape, hbar=self.hbar)

    def __repr__(self):
        return (
            f"Ellipsoid(space={self.space.value}, n={self.n_ambient}, "
            f"hbar={self.hbar}, semi_axes={np.round(self.semi_axes(), 6).tolist()})"
        )
