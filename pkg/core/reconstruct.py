"""위치/운동량 국소화 영역 → 가우시안 공분산 재구성 (1D, 순수, 혼합, 사영)"""

import itertools
from typing import List, Tuple, Union

import numpy as np
from sortedcontainers import SortedDict

from config.settings import Settings
from core.polar import (
    is_subset,
    john_of_product,
    john_product_factorization,
)
from core.symplectic import (
    is_pure_covariance,
    is_symplectic,
    satisfies_quantum_condition,
    symplectic_eigenvalues,
    williamson,
)
from models.covariance import CovarianceMatrix
from models.ellipsoid import Ellipsoid, SpaceTag
from models.reconstruction import PauliPartner, PauliPartnerSet, ReconstructionInput1D
from utils.errors import (
    DimensionError,
    NumericalError,
    PolarityViolationError,
    ValidationError,
)
from utils.logger_utils import setup_logger

logger = setup_logger("reconstruct")


def _sym_sqrt(Q: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """(Q^{1/2}, Q^{−1/2})"""
    vals, vecs = np.linalg.eigh(Q)
    root = np.sqrt(vals)
    return (vecs * root) @ vecs.T, (vecs / root) @ vecs.T


# ==================== 공분산 타원체 ====================

def covariance_ellipsoid(Sigma: CovarianceMatrix) -> Ellipsoid:
    """½ zᵀΣ⁻¹z ≤ 1 을 ≤ ħ 규약으로: 모양 (ħ/2)Σ⁻¹"""
    shape = 0.5 * Sigma.hbar * np.linalg.inv(Sigma.sigma)
    return Ellipsoid(
        space=SpaceTag.PHASE,
        center=Sigma.mean,
        shape=0.5 * (shape + shape.T),
        hbar=Sigma.hbar,
    )


def covariance_from_ellipsoid(E: Ellipsoid) -> CovarianceMatrix:
    if E.space is not SpaceTag.PHASE or E.n_ambient % 2 != 0:
        raise ValidationError(
            f"covariance needs an even-dimensional phase-space ellipsoid, "
            f"got {E.space.value} of dimension {E.n_ambient}"
        )
    sigma = 0.5 * E.hbar * np.linalg.inv(E.shape)
    return CovarianceMatrix(
        n=E.n_ambient // 2,
        hbar=E.hbar,
        sigma=0.5 * (sigma + sigma.T),
        mean=E.center,
    )


def quantum_blob_of(Sigma: CovarianceMatrix) -> Ellipsoid:
    """
    Williamson 인자로 만든 양자 blob S⁻ᵀ(B²ⁿ(√ħ)) (평균에 위치)

    Σ = S⁻ᵀ diag(ν, ν) S⁻¹ 이므로 blob 의 모양은 S Sᵀ.
    """
    S = williamson(Sigma.sigma).S
    shape = S @ S.T
    return Ellipsoid(
        space=SpaceTag.PHASE,
        center=Sigma.mean,
        shape=0.5 * (shape + shape.T),
        hbar=Sigma.hbar,
    )


def contains_quantum_blob(Sigma: CovarianceMatrix, tol: float = Settings.LOEWNER_TOL) -> bool:
    """공분산 타원체가 양자 blob 을 포함하는지 (양자 조건과 동치)"""
    return is_subset(quantum_blob_of(Sigma), covariance_ellipsoid(Sigma), tol)


# ==================== 극성 검사 ====================

def _centered(E: Ellipsoid) -> Ellipsoid:
    return E.with_center(np.zeros(E.n_ambient))


def _check_pair(X: Ellipsoid, P: Ellipsoid):
    if X.space is not SpaceTag.POSITION:
        raise ValidationError(f"X must be a position ellipsoid, got {X.space.value}")
    if P.space is not SpaceTag.MOMENTUM:
        raise ValidationError(f"P must be a momentum ellipsoid, got {P.space.value}")
    if X.n_ambient != P.n_ambient:
        raise DimensionError(f"X and P dimensions differ: {X.n_ambient} vs {P.n_ambient}")
    if not np.isclose(X.hbar, P.hbar, rtol=1e-12, atol=0.0):
        raise ValidationError(f"hbar mismatch: {X.hbar} vs {P.hbar}")


def check_polarity(X: Ellipsoid, P: Ellipsoid, tol: float = Settings.LOEWNER_TOL):
    """
    X^ħ ⊆ P ⇔ AB ≤ I ⇔ λ_max(A^{1/2} B A^{1/2}) ≤ 1 + tol, 위반 시 PolarityViolationError

    AB 는 무차원이라 tol 도 상대값. 중심은 비교하지 않는다 (평균은 재구성에서 따로 쓴다).
    """
    _check_pair(X, P)
    a_sqrt, _ = _sym_sqrt(X.shape)
    worst = float(np.linalg.eigvalsh(a_sqrt @ P.shape @ a_sqrt)[-1])
    if worst > 1.0 + tol:
        raise PolarityViolationError(
            f"X^hbar is not contained in P: largest eigenvalue of AB is {worst:.6g} > 1"
        )


# ==================== 1차원 ====================

def reconstruct_1d(inp: ReconstructionInput1D) -> PauliPartnerSet:
    """
    [x₀ ± Δx], [p₀ ± Δp] → σ_xx = Δx²/2, σ_pp = Δp²/2, σ_xp = ±√(σ_xxσ_pp − ħ²/4)

    ΔxΔp = ħ (상대 1e−12 이내) 이면 σ_xp = 0 인 상태 하나.
    """
    hbar = inp.hbar
    relative = (inp.product - hbar) / hbar
    if relative < -Settings.SATURATION_BAND:
        raise PolarityViolationError(
            f"delta_x * delta_p = {inp.product:.6g} < hbar = {hbar:.6g}; "
            f"no admissible pure state"
        )

    sigma_xx = 0.5 * inp.delta_x ** 2
    sigma_pp = 0.5 * inp.delta_p ** 2
    mean = np.array([inp.x0, inp.p0])

    registry = SortedDict()
    if abs(relative) <= Settings.SATURATION_BAND:
        registry[(0,)] = PauliPartner(
            covariance=CovarianceMatrix.from_blocks(sigma_xx, 0.0, sigma_pp, hbar, mean),
            signature=(0,),
        )
    else:
        sigma_xp = np.sqrt(sigma_xx * sigma_pp - 0.25 * hbar ** 2)
        for sign in (-1, 1):
            registry[(sign,)] = PauliPartner(
                covariance=CovarianceMatrix.from_blocks(
                    sigma_xx, sign * sigma_xp, sigma_pp, hbar, mean
                ),
                signature=(sign,),
            )

    logger.info(
        f"[1D] Δx={inp.delta_x:.6g} Δp={inp.delta_p:.6g} ħ={hbar:.6g} | "
        f"Pauli partners: {len(registry)}"
    )
    return PauliPartnerSet(partners=list(registry.values()))


# ==================== n 차원 순수 상태 ====================

def reconstruct_pure(
    X: Ellipsoid,
    P: Ellipsoid,
    tol: float = Settings.PURE_TOL,
) -> PauliPartnerSet:
    """
    X: xᵀAx ≤ ħ, P: pᵀBp ≤ ħ → Σ_XX = (ħ/2)A⁻¹, Σ_PP = (ħ/2)B⁻¹

    Σ_XP 는 Σ_XXΣ_PP − Σ_XP² = (ħ²/4)I 의 해:
        G = Σ_XX^{1/2} Σ_PP Σ_XX^{1/2} − (ħ²/4)I = U D Uᵀ
        Σ_XP(s) = Σ_XX^{1/2} U diag(s)√D Uᵀ Σ_XX^{−1/2},  s ∈ {−1, +1}ⁿ
    D_j = 0 인 성분은 부호가 의미 없어 서명 0 으로 합쳐진다.
    (2/ħ)Σ 가 symplectic 이 아닌 후보는 rejected 로 보고한다.
    """
    check_polarity(X, P)
    hbar = X.hbar
    n = X.n_ambient
    quarter = 0.25 * hbar ** 2

    sigma_xx = 0.5 * hbar * np.linalg.inv(X.shape)
    sigma_pp = 0.5 * hbar * np.linalg.inv(P.shape)
    sigma_xx = 0.5 * (sigma_xx + sigma_xx.T)
    sigma_pp = 0.5 * (sigma_pp + sigma_pp.T)
    mean = np.concatenate([X.center, P.center])

    root, root_inv = _sym_sqrt(sigma_xx)
    G = root @ sigma_pp @ root - quarter * np.identity(n)
    D, U = np.linalg.eigh(0.5 * (G + G.T))
    D = np.where(D <= Settings.SATURATION_BAND * quarter, 0.0, D)
    active = D > 0

    choices = [(-1, 1) if is_active else (0,) for is_active in active]
    registry = SortedDict()
    rejected: List[Tuple[int, ...]] = []

    for signature in itertools.product(*choices):
        T = (U * (np.asarray(signature) * np.sqrt(D))) @ U.T
        sigma_xp = root @ T @ root_inv
        try:
            candidate = CovarianceMatrix.from_blocks(sigma_xx, sigma_xp, sigma_pp, hbar, mean)
        except ValidationError as e:
            logger.warning(f"sign pattern {signature} rejected: {e.message}")
            rejected.append(signature)
            continue

        block_ok = np.linalg.norm(sigma_xp @ sigma_xx - (sigma_xp @ sigma_xx).T) <= tol * max(
            1.0, np.linalg.norm(sigma_xx) * np.linalg.norm(sigma_xp)
        )
        if not (block_ok and is_symplectic(2.0 / hbar * candidate.sigma, tol)):
            logger.warning(f"sign pattern {signature} rejected: (2/ħ)Σ is not symplectic")
            rejected.append(signature)
            continue

        registry[signature] = PauliPartner(covariance=candidate, signature=signature)

    if not registry:
        raise NumericalError("no sign pattern produced an admissible pure state")

    logger.info(
        f"[pure] n={n} | saturated components={int(np.sum(~active))} | "
        f"Pauli partners={len(registry)} | rejected={len(rejected)}"
    )
    return PauliPartnerSet(partners=list(registry.values()), rejected=rejected)


# ==================== 혼합 상태 ====================

def reconstruct_mixed(X: Ellipsoid, P: Ellipsoid) -> CovarianceMatrix:
    """
    Ω_John = (X×P)_John: xᵀAx + pᵀBp ≤ ħ 를 공분산 타원체로 읽는다.

    Σ = (ħ/2)·diag(A⁻¹, B⁻¹), Σ_XP = 0. AB ≤ I 이면 양자 blob 을 포함.
    """
    check_polarity(X, P)
    X0, P0 = _centered(X), _centered(P)

    omega = john_of_product(X0, P0)
    factorization = john_product_factorization(X0, P0)
    if not factorization.contains_blob():
        raise NumericalError("John ellipsoid factorization does not contain its quantum blob")

    sigma = covariance_from_ellipsoid(omega.with_center(np.concatenate([X.center, P.center])))
    if not satisfies_quantum_condition(sigma):
        raise NumericalError("reconstructed mixed covariance violates the quantum condition")

    nu = symplectic_eigenvalues(sigma.sigma)
    logger.info(
        f"[mixed] n={sigma.n} | symplectic spectrum={np.round(nu, 10).tolist()} | "
        f"ħ/2={0.5 * sigma.hbar:.6g}"
    )
    return sigma


# ==================== 사영 / 역행렬 ====================

def project_covariance(
    Sigma: CovarianceMatrix,
    subspace: Union[SpaceTag, str],
    tol: float = Settings.PURE_TOL,
) -> Ellipsoid:
    """
    공분산 타원체의 x (또는 p) 공간 사영

    일반 경로: Σ⁻¹ = [[F, H], [Hᵀ, K]] 의 Schur 보수 F − HK⁻¹Hᵀ (= Σ_XX⁻¹).
    순수 상태면 (4/ħ²)(Σ_PP − Σ_PXΣ_XX⁻¹Σ_XP) 와도 비교한다.
    """
    space = SpaceTag(subspace)
    if space is SpaceTag.PHASE:
        raise ValidationError("projection target must be 'position' or 'momentum'")
    n, hbar = Sigma.n, Sigma.hbar

    try:
        inverse = np.linalg.inv(Sigma.sigma)
        F, H, K = inverse[:n, :n], inverse[:n, n:], inverse[n:, n:]
        if space is SpaceTag.POSITION:
            schur_complement = F - H @ np.linalg.solve(K, H.T)
            center = Sigma.x0
        else:
            schur_complement = K - H.T @ np.linalg.solve(F, H)
            center = Sigma.p0
    except np.linalg.LinAlgError as e:
        raise ValidationError(f"singular covariance block: {e}") from e

    if is_pure_covariance(Sigma, tol):
        factor = 4.0 / hbar ** 2
        if space is SpaceTag.POSITION:
            shortcut = factor * (
                Sigma.sigma_pp - Sigma.sigma_px @ np.linalg.solve(Sigma.sigma_xx, Sigma.sigma_xp)
            )
        else:
            shortcut = factor * (
                Sigma.sigma_xx - Sigma.sigma_xp @ np.linalg.solve(Sigma.sigma_pp, Sigma.sigma_px)
            )
        mismatch = np.linalg.norm(shortcut - schur_complement) / np.linalg.norm(schur_complement)
        if mismatch > np.sqrt(tol):
            logger.warning(
                f"pure-state projection shortcut disagrees with Schur complement "
                f"({space.value}, relative mismatch {mismatch:.2e})"
            )

    shape = 0.5 * hbar * schur_complement
    return Ellipsoid(space=space, center=center, shape=0.5 * (shape + shape.T), hbar=hbar)


def invert_pure_covariance(Sigma: CovarianceMatrix, tol: float = Settings.PURE_TOL) -> np.ndarray:
    """Σ⁻¹ = (4/ħ²)·[[Σ_PP, −Σ_PX], [−Σ_XP, Σ_XX]] (순수 상태 전용)"""
    if not is_pure_covariance(Sigma, tol):
        raise ValidationError(
            "covariance is not pure ((2/hbar)·Sigma is not symplectic); "
            "use a general matrix inverse"
        )
    return (4.0 / Sigma.hbar ** 2) * np.block([
        [Sigma.sigma_pp, -Sigma.sigma_px],
        [-Sigma.sigma_xp, Sigma.sigma_xx],
    ])
