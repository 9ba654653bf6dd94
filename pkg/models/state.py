"""가우시안 상태 모델"""

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from models.covariance import CovarianceMatrix, PurityClass


@dataclass(frozen=True, eq=False)
class PureGaussianWavefunction:
    """
    ψ(x) = (1/2π)^{n/4} (det Σ_XX)^{−1/4}
           · exp[−(x−x₀)ᵀ (¼Σ_XX⁻¹ − (i/2ħ)Σ_XX⁻¹Σ_XP) (x−x₀)] · exp[i p₀·(x−x₀)/ħ]

    위상 부호는 ⟨x∘p⟩ = +Σ_XP 가 되도록 잡는다.
    """
    n: int
    hbar: float
    x0: np.ndarray
    p0: np.ndarray
    sigma_xx: np.ndarray
    sigma_xp: np.ndarray
    signature: Optional[Tuple[int, ...]] = None

    @property
    def normalization(self) -> float:
        _, logdet = np.linalg.slogdet(self.sigma_xx)
        return float((2 * np.pi) ** (-self.n / 4) * np.exp(-0.25 * logdet))

    @property
    def quadratic_form(self) -> np.ndarray:
        inv_xx = np.linalg.inv(self.sigma_xx)
        chirp = inv_xx @ self.sigma_xp
        chirp = 0.5 * (chirp + chirp.T)
        return 0.25 * inv_xx - (0.5j / self.hbar) * chirp

    def __call__(self, x: np.ndarray) -> np.ndarray:
        """복소 진폭 ψ(x), x: (..., n) 또는 n = 1 이면 스칼라 배열"""
        x = np.asarray(x, dtype=float)
        if self.n == 1 and (x.ndim == 0 or x.shape[-1] != 1):
            x = x[..., np.newaxis]
        delta = x - self.x0
        exponent = -np.einsum("...i,ij,...j->...", delta, self.quadratic_form, delta)
        exponent = exponent + 1j * (delta @ self.p0) / self.hbar
        return self.normalization * np.exp(exponent)


@dataclass(frozen=True, eq=False)
class GaussianState:
    """공분산 + 순도 분류 (+ 순수 상태면 파동함수)"""
    covariance: CovarianceMatrix
    purity: float
    classification: PurityClass
    wavefunction: Optional[PureGaussianWavefunction] = None
    signature: Optional[Tuple[int, ...]] = None

    @property
    def n(self) -> int:
        return self.covariance.n

    @property
    def hbar(self) -> float:
        return self.covariance.hbar

    @property
    def is_pure(self) -> bool:
        return self.classification is PurityClass.PURE
