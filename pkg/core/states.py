"""가우시안 상태: 파동함수, Wigner 분포, 순도, Robertson–Schrödinger 진단"""

from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.integrate import trapezoid
from scipy.stats import multivariate_normal

from config.settings import Settings
from core.symplectic import (
    is_pure_covariance,
    satisfies_quantum_condition,
    symplectic_eigenvalues,
)
from models.covariance import CovarianceMatrix, PurityClass
from models.state import GaussianState, PureGaussianWavefunction
from utils.errors import DimensionError, ValidationError
from utils.logger_utils import setup_logger

logger = setup_logger("states")

GridAxis = Tuple[float, float, int]


def purity(Sigma: CovarianceMatrix) -> float:
    """(ħ/2)ⁿ / √det Σ"""
    _, logdet = np.linalg.slogdet(Sigma.sigma)
    return float(np.exp(Sigma.n * np.log(0.5 * Sigma.hbar) - 0.5 * logdet))


def classify(Sigma: CovarianceMatrix, tol: float = Settings.PURE_TOL) -> PurityClass:
    return PurityClass.PURE if abs(purity(Sigma) - 1.0) <= tol else PurityClass.MIXED


def wavefunction_from_covariance(
    Sigma: CovarianceMatrix,
    signature: Optional[Tuple[int, ...]] = None,
    tol: float = Settings.PURE_TOL,
) -> PureGaussianWavefunction:
    if not is_pure_covariance(Sigma, tol):
        raise ValidationError(
            "wavefunction requires a pure covariance ((2/hbar)·Sigma symplectic)"
        )
    return PureGaussianWavefunction(
        n=Sigma.n,
        hbar=Sigma.hbar,
        x0=np.array(Sigma.x0),
        p0=np.array(Sigma.p0),
        sigma_xx=np.array(Sigma.sigma_xx),
        sigma_xp=np.array(Sigma.sigma_xp),
        signature=signature,
    )


def gaussian_state(
    Sigma: CovarianceMatrix,
    signature: Optional[Tuple[int, ...]] = None,
    tol: float = Settings.PURE_TOL,
) -> GaussianState:
    """공분산 → GaussianState (순수하면 파동함수 포함)"""
    value = purity(Sigma)
    classification = classify(Sigma, tol)
    wavefunction = None
    if classification is PurityClass.PURE and is_pure_covariance(Sigma, tol):
        wavefunction = wavefunction_from_covariance(Sigma, signature, tol)
    elif classification is PurityClass.PURE:
        # 행렬식은 맞지만 symplectic 은 아님 (양자 조건 위반 행렬)
        classification = PurityClass.MIXED
    return GaussianState(
        covariance=Sigma,
        purity=value,
        classification=classification,
        wavefunction=wavefunction,
        signature=signature if wavefunction is not None else None,
    )


def momentum_amplitude(wavefunction: PureGaussianWavefunction, p: np.ndarray) -> np.ndarray:
    """
    φ(p) = (2πħ)^{−n/2} ∫ ψ(x) e^{−ip·x/ħ} dx  (가우시안 적분의 닫힌 형태)
    """
    n, hbar = wavefunction.n, wavefunction.hbar
    p = np.asarray(p, dtype=float)
    if n == 1 and (p.ndim == 0 or p.shape[-1] != 1):
        p = p[..., np.newaxis]
    if p.shape[-1] != n:
        raise DimensionError(f"momentum points must have last dimension {n}, got {p.shape}")

    Q = wavefunction.quadratic_form
    Q_inv = np.linalg.inv(Q)
    # Re Q > 0 이므로 고유값 주가지 제곱근의 곱이 해석적 연속과 일치
    det_root = np.prod(np.sqrt(np.linalg.eigvals(Q)))

    k = (wavefunction.p0 - p) / hbar
    gaussian = np.exp(-0.25 * np.einsum("...i,ij,...j->...", k, Q_inv, k))
    phase = np.exp(-1j * (p @ wavefunction.x0) / hbar)
    prefactor = (
        (2 * np.pi * hbar) ** (-n / 2) * wavefunction.normalization * np.pi ** (n / 2) / det_root
    )
    return prefactor * gaussian * phase


def _covariance_of(state: Union[GaussianState, CovarianceMatrix]) -> CovarianceMatrix:
    return state.covariance if isinstance(state, GaussianState) else state


def wigner(state: Union[GaussianState, CovarianceMatrix], z: np.ndarray) -> Union[float, np.ndarray]:
    """
    W(z) = (2π)^{−n} (det Σ)^{−1/2} exp(−½ (z−z₀)ᵀ Σ⁻¹ (z−z₀))

    z: (2n,) 또는 (..., 2n)
    """
    Sigma = _covariance_of(state)
    z = np.asarray(z, dtype=float)
    if z.shape[-1] != 2 * Sigma.n:
        raise DimensionError(f"phase-space points must have last dimension {2 * Sigma.n}, got {z.shape}")
    return multivariate_normal(mean=Sigma.mean, cov=Sigma.sigma).pdf(z)


def grid_axes(axes: Sequence[GridAxis]) -> List[np.ndarray]:
    grids = []
    for lo, hi, steps in axes:
        if int(steps) < 2 or not hi > lo:
            raise ValidationError(f"invalid grid axis ({lo}, {hi}, {steps})")
        grids.append(np.linspace(float(lo), float(hi), int(steps)))
    return grids


def wigner_grid(
    state: Union[GaussianState, CovarianceMatrix],
    axes: Sequence[GridAxis],
) -> Tuple[np.ndarray, np.ndarray]:
    """
    직교 격자 위의 Wigner 값

    반환: (points (M, 2n), values (M,)), 행 우선 (마지막 축이 가장 빠름)
    """
    Sigma = _covariance_of(state)
    if len(axes) != 2 * Sigma.n:
        raise DimensionError(f"grid needs {2 * Sigma.n} axes, got {len(axes)}")
    mesh = np.meshgrid(*grid_axes(axes), indexing="ij")
    points = np.stack([m.ravel() for m in mesh], axis=-1)
    values = np.atleast_1d(wigner(Sigma, points))
    return points, values


def integrate_grid(values: np.ndarray, axes: Sequence[GridAxis]) -> float:
    """격자 값의 중첩 사다리꼴 적분"""
    grids = grid_axes(axes)
    cube = np.asarray(values).reshape([g.size for g in grids])
    for g in reversed(grids):
        cube = trapezoid(cube, g, axis=-1)
    return float(cube)


# ==================== Robertson–Schrödinger ====================

@dataclass
class RSReport:
    """성분별 σ_xjxj·σ_pjpj − σ_xjpj² 와 ħ²/4 대비 여유"""
    hbar: float
    products: List[float] = field(default_factory=list)
    margins: List[float] = field(default_factory=list)
    saturated: List[bool] = field(default_factory=list)
    violated: List[bool] = field(default_factory=list)
    saturation_residual: float = 0.0
    symplectic_spectrum: List[float] = field(default_factory=list)
    quantum_condition: bool = True

    @property
    def all_hold(self) -> bool:
        return not any(self.violated)

    def to_dict(self) -> dict:
        return {
            "hbar": self.hbar,
            "products": self.products,
            "margins": self.margins,
            "saturated": self.saturated,
            "violated": self.violated,
            "saturation_residual": self.saturation_residual,
            "symplectic_spectrum": self.symplectic_spectrum,
            "quantum_condition": self.quantum_condition,
        }


def rs_report(Sigma: CovarianceMatrix, tol: float = Settings.PURE_TOL) -> RSReport:
    quarter = 0.25 * Sigma.hbar ** 2
    xx = np.diag(Sigma.sigma_xx)
    pp = np.diag(Sigma.sigma_pp)
    xp = np.diag(Sigma.sigma_xp)
    products = xx * pp - xp ** 2
    margins = products - quarter

    residual = np.linalg.norm(
        Sigma.sigma_xx @ Sigma.sigma_pp
        - Sigma.sigma_xp @ Sigma.sigma_xp
        - quarter * np.identity(Sigma.n)
    )

    report = RSReport(
        hbar=Sigma.hbar,
        products=products.tolist(),
        margins=margins.tolist(),
        saturated=[bool(abs(m) <= tol * quarter) for m in margins],
        violated=[bool(m < -tol * quarter) for m in margins],
        saturation_residual=float(residual),
        symplectic_spectrum=symplectic_eigenvalues(Sigma.sigma).tolist(),
        quantum_condition=satisfies_quantum_condition(Sigma),
    )

    if not report.all_hold:
        bad = [j + 1 for j, v in enumerate(report.violated) if v]
        logger.warning(f"Robertson–Schrödinger inequality violated for components {bad}")

    return report
