from dataclasses import dataclass, field
from typing import List, Tuple

from models.covariance import CovarianceMatrix
from utils.errors import ValidationError


@dataclass(frozen=True)
class ReconstructionInput1D:
    """1차원 입력: X = x₀ + [−Δx, Δx], P = p₀ + [−Δp, Δp]"""
    delta_x: float
    delta_p: float
    x0: float = 0.0
    p0: float = 0.0
    hbar: float = 1.0

    def __post_init__(self):
        if not (self.delta_x > 0 and self.delta_p > 0):
            raise ValidationError(
                f"delta_x and delta_p must be positive, got {self.delta_x}, {self.delta_p}"
            )
        if not self.hbar > 0:
            raise ValidationError(f"hbar must be positive, got {self.hbar}")

    @property
    def product(self) -> float:
        return self.delta_x * self.delta_p


@dataclass(frozen=True)
class PauliPartner:
    """
    순수 상태 공분산 하나와 부호 서명

    signature[j] ∈ {−1, +1}: j 번째 고유방향의 Σ_XP 분기 부호,
    0: 해당 성분이 포화되어 (D_j = 0) 부호가 무의미함
    """
    covariance: CovarianceMatrix
    signature: Tuple[int, ...]


@dataclass(frozen=True)
class PauliPartnerSet:
    """동일한 위치/운동량 주변분포를 공유하는 순수 가우시안 상태들"""
    partners: List[PauliPartner]
    rejected: List[Tuple[int, ...]] = field(default_factory=list)

    @property
    def multiplicity(self) -> int:
        return len(self.partners)

    @property
    def states(self) -> List[CovarianceMatrix]:
        return [partner.covariance for partner in self.partners]

    @property
    def signatures(self) -> List[Tuple[int, ...]]:
        return [partner.signature for partner in self.partners]

    def __len__(self):
        return self.multiplicity

    def __iter__(self):
        return iter(self.partners)
