"""공분산 행렬 (2n×2n, 블록 순서 x₁..xₙ, p₁..pₙ)"""

from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

from utils.errors import DimensionError, ValidationError


class PurityClass(Enum):
    PURE = "pure"
    MIXED = "mixed"


@dataclass(frozen=True, eq=False)
class CovarianceMatrix:
    """
    Σ = [[Σ_XX, Σ_XP], [Σ_PX, Σ_PP]] 과 평균 z₀ = (x₀, p₀)

    생성 시 대칭/양의 정부호만 검사한다. 양자 조건은 검사 대상이지
    생성 조건이 아니다 (check 명령이 위반 행렬도 보고해야 하므로).
    """
    n: int
    hbar: float
    sigma: np.ndarray
    mean: Optional[np.ndarray] = None

    def __post_init__(self):
        sigma = np.atleast_2d(np.asarray(self.sigma, dtype=float))
        if sigma.shape != (2 * self.n, 2 * self.n):
            raise DimensionError(
                f"sigma must be {2 * self.n}x{2 * self.n} for n={self.n}, got {sigma.shape}"
            )
        mean = np.zeros(2 * self.n) if self.mean is None else np.asarray(self.mean, dtype=float)
        if mean.shape != (2 * self.n,):
            raise DimensionError(f"mean must have length {2 * self.n}, got {mean.shape}")
        if not (np.all(np.isfinite(sigma)) and np.all(np.isfinite(mean))):
            raise ValidationError("covariance entries must be finite")
        if not self.hbar > 0:
            raise ValidationError(f"hbar must be positive, got {self.hbar}")

        scale = max(np.linalg.norm(sigma), 1e-300)
        if np.linalg.norm(sigma - sigma.T) > 1e-12 * scale:
            raise ValidationError("sigma is not symmetric")
        sigma = 0.5 * (sigma + sigma.T)
        try:
            np.linalg.cholesky(sigma)
        except np.linalg.LinAlgError:
            raise ValidationError("sigma is not positive definite") from None

        sigma.setflags(write=False)
        mean = mean.copy()
        mean.setflags(write=False)
        object.__setattr__(self, "sigma", sigma)
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "hbar", float(self.hbar))

    # 블록 접근
    @property
    def sigma_xx(self) -> np.ndarray:
        return self.sigma[:self.n, :self.n]

    @property
    def sigma_xp(self) -> np.ndarray:
        return self.sigma[:self.n, self.n:]

    @property
    def sigma_px(self) -> np.ndarray:
        return self.sigma[self.n:, :self.n]

    @property
    def sigma_pp(self) -> np.ndarray:
        return self.sigma[self.n:, self.n:]

    @property
    def x0(self) -> np.ndarray:
        return self.mean[:self.n]

    @property
    def p0(self) -> np.ndarray:
        return self.mean[self.n:]

    @classmethod
    def from_blocks(
        cls,
        sigma_xx: np.ndarray,
        sigma_xp: np.ndarray,
        sigma_pp: np.ndarray,
        hbar: float,
        mean: Optional[np.ndarray] = None,
    ) -> "CovarianceMatrix":
        sigma_xx = np.atleast_2d(sigma_xx)
        sigma_xp = np.atleast_2d(sigma_xp)
        sigma_pp = np.atleast_2d(sigma_pp)
        sigma = np.block([[sigma_xx, sigma_xp], [sigma_xp.T, sigma_pp]])
        return cls(n=sigma_xx.shape[0], hbar=hbar, sigma=sigma, mean=mean)

    def __repr__(self):
        return f"CovarianceMatrix(n={self.n}, hbar={self.hbar}, diag={np.round(np.diag(self.sigma), 6).tolist()})"
