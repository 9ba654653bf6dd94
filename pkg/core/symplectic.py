"""Symplectic 선형대수: 판정, 블록 조건, 역행렬, 회전 임베딩, Williamson 대각화, 양자 조건"""

from dataclasses import dataclass

import numpy as np
from scipy.linalg import block_diag, schur, sqrtm
from scipy.stats import unitary_group

from config.settings import Settings
from models.covariance import CovarianceMatrix
from models.ellipsoid import Ellipsoid, SpaceTag
from utils.errors import DimensionError, ValidationError
from utils.logger_utils import setup_logger

logger = setup_logger("symplectic")


@dataclass(frozen=True, eq=False)
class WilliamsonDecomposition:
    """Sᵀ M S = diag(ν, ν), ν 내림차순"""
    S: np.ndarray
    nu: np.ndarray

    @property
    def n(self) -> int:
        return self.nu.shape[0]

    @property
    def diagonal(self) -> np.ndarray:
        return np.diag(np.concatenate([self.nu, self.nu]))


@dataclass(frozen=True)
class BlockConditionReport:
    """(cond1) / (cond2) 판정 결과"""
    cond1_ok: bool
    cond2_ok: bool
    cond1_residual: float
    cond2_residual: float


def symplectic_form(n: int) -> np.ndarray:
    """J = [[0, I], [−I, 0]]"""
    if n < 1:
        raise DimensionError(f"degrees of freedom must be >= 1, got {n}")
    return np.block([
        [np.zeros((n, n)), np.identity(n)],
        [-np.identity(n), np.zeros((n, n))],
    ])


def _as_even_square(S: np.ndarray) -> np.ndarray:
    S = np.atleast_2d(np.asarray(S, dtype=float))
    if S.ndim != 2 or S.shape[0] != S.shape[1]:
        raise DimensionError(f"matrix must be square, got {S.shape}")
    if S.shape[0] % 2 != 0 or S.shape[0] < 2:
        raise DimensionError(f"matrix must have even dimension 2n >= 2, got {S.shape[0]}")
    if not np.all(np.isfinite(S)):
        raise ValidationError("matrix entries must be finite")
    return S


def _blocks(S: np.ndarray):
    n = S.shape[0] // 2
    return S[:n, :n], S[:n, n:], S[n:, :n], S[n:, n:]


def is_symplectic(S: np.ndarray, tol: float = Settings.SYMPLECTIC_TOL) -> bool:
    """‖SᵀJS − J‖_F ≤ tol·‖J‖_F"""
    S = _as_even_square(S)
    J = symplectic_form(S.shape[0] // 2)
    residual = np.linalg.norm(S.T @ J @ S - J)
    return bool(residual <= tol * np.linalg.norm(J))


def check_block_conditions(
    S: np.ndarray,
    tol: float = Settings.SYMPLECTIC_TOL
) -> BlockConditionReport:
    """
    (cond1): AᵀC, BᵀD 대칭, AᵀD − CᵀB = I
    (cond2): ABᵀ, CDᵀ 대칭, ADᵀ − BCᵀ = I
    """
    S = _as_even_square(S)
    A, B, C, D = _blocks(S)
    I = np.identity(A.shape[0])
    bound = tol * np.linalg.norm(symplectic_form(A.shape[0]))

    # SᵀJS − J 의 블록들과 같은 노름이 되도록 조합
    cond1 = np.sqrt(
        np.linalg.norm(A.T @ C - C.T @ A) ** 2
        + np.linalg.norm(B.T @ D - D.T @ B) ** 2
        + 2 * np.linalg.norm(A.T @ D - C.T @ B - I) ** 2
    )
    cond2 = np.sqrt(
        np.linalg.norm(A @ B.T - B @ A.T) ** 2
        + np.linalg.norm(C @ D.T - D @ C.T) ** 2
        + 2 * np.linalg.norm(A @ D.T - B @ C.T - I) ** 2
    )

    return BlockConditionReport(
        cond1_ok=bool(cond1 <= bound),
        cond2_ok=bool(cond2 <= bound),
        cond1_residual=float(cond1),
        cond2_residual=float(cond2),
    )


def symplectic_inverse(
    S: np.ndarray,
    assume_symplectic: bool = False,
    tol: float = Settings.SYMPLECTIC_TOL
) -> np.ndarray:
    """S⁻¹ = [[Dᵀ, −Bᵀ], [−Cᵀ, Aᵀ]]"""
    S = _as_even_square(S)
    if not assume_symplectic and not is_symplectic(S, tol):
        raise ValidationError("matrix is not symplectic; use a general inverse instead")
    A, B, C, D = _blocks(S)
    return np.block([[D.T, -B.T], [-C.T, A.T]])


def embed_unitary(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """ι: A + iB ↦ [[A, B], [−B, A]]"""
    A = np.atleast_2d(np.asarray(A, dtype=float))
    B = np.atleast_2d(np.asarray(B, dtype=float))
    if A.shape != B.shape or A.shape[0] != A.shape[1]:
        raise DimensionError(f"A and B must be square of equal size, got {A.shape}, {B.shape}")
    return np.block([[A, B], [-B, A]])


def is_symplectic_rotation(A: np.ndarray, B: np.ndarray, tol: float = Settings.SYMPLECTIC_TOL) -> bool:
    """
    ι(A + iB) 가 symplectic 회전인지:
    (uni1) AᵀB = BᵀA, AᵀA + BᵀB = I
    (uni2) ABᵀ = BAᵀ, AAᵀ + BBᵀ = I
    """
    A = np.atleast_2d(np.asarray(A, dtype=float))
    B = np.atleast_2d(np.asarray(B, dtype=float))
    if A.shape != B.shape or A.shape[0] != A.shape[1]:
        raise DimensionError(f"A and B must be square of equal size, got {A.shape}, {B.shape}")
    I = np.identity(A.shape[0])
    bound = tol * np.sqrt(A.shape[0])

    uni1 = (
        np.linalg.norm(A.T @ B - B.T @ A) <= bound
        and np.linalg.norm(A.T @ A + B.T @ B - I) <= bound
    )
    uni2 = (
        np.linalg.norm(A @ B.T - B @ A.T) <= bound
        and np.linalg.norm(A @ A.T + B @ B.T - I) <= bound
    )
    return bool(uni1 and uni2)


def symplectic_dilation(L: np.ndarray) -> np.ndarray:
    """block-diag(L, L⁻ᵀ) (L 가역)"""
    L = np.atleast_2d(np.asarray(L, dtype=float))
    return block_diag(L, np.linalg.inv(L).T)


def _validate_spd(M: np.ndarray, tol: float) -> np.ndarray:
    M = _as_even_square(M)
    scale = max(np.linalg.norm(M), 1e-300)
    if np.linalg.norm(M - M.T) > tol * scale:
        raise ValidationError("matrix is not symmetric")
    M = 0.5 * (M + M.T)
    try:
        np.linalg.cholesky(M)
    except np.linalg.LinAlgError:
        raise ValidationError("matrix is not positive definite") from None
    return M


def symplectic_eigenvalues(M: np.ndarray) -> np.ndarray:
    """ν_j = |Im λ(JM)|, 내림차순"""
    M = _validate_spd(M, Settings.SYMPLECTIC_TOL)
    n = M.shape[0] // 2
    eigs = np.linalg.eigvals(symplectic_form(n) @ M)
    # ±iν 쌍 중 양의 허수부만
    nu = np.sort(np.abs(eigs.imag))[::-1][::2]
    return nu[:n]


def williamson(M: np.ndarray, tol: float = Settings.SYMPLECTIC_TOL) -> WilliamsonDecomposition:
    """
    Williamson 대각화: Sᵀ M S = diag(ν, ν)

    K = M^{−1/2} J M^{−1/2} (반대칭) 의 real Schur 형식에서
    2×2 블록 [[0, t], [−t, 0]] 을 얻고 ν = 1/t.
    S = M^{−1/2} O D^{1/2}, O 는 블록을 xp 순서로 재배치한 직교행렬.
    """
    M = _validate_spd(M, tol)
    n = M.shape[0] // 2
    J = symplectic_form(n)

    m_inv_sqrt = np.real(sqrtm(np.linalg.inv(M)))
    m_inv_sqrt = 0.5 * (m_inv_sqrt + m_inv_sqrt.T)
    K = m_inv_sqrt @ J @ m_inv_sqrt
    K = 0.5 * (K - K.T)

    T, Z = schur(K, output="real")

    # 각 2×2 블록의 우상단이 양수가 되도록 열 교환
    columns = []
    t_values = []
    for j in range(n):
        a, b = Z[:, 2 * j], Z[:, 2 * j + 1]
        t = T[2 * j, 2 * j + 1]
        if t < 0:
            a, b, t = b, a, -t
        columns.append((a, b))
        t_values.append(t)

    # ν = 1/t 내림차순 → t 오름차순
    order = np.argsort(t_values, kind="stable")
    O = np.empty_like(Z)
    for position, j in enumerate(order):
        O[:, position] = columns[j][0]
        O[:, n + position] = columns[j][1]

    t_sorted = np.asarray(t_values)[order]
    if np.any(t_sorted <= 0):
        raise ValidationError("degenerate symplectic spectrum (zero Schur block)")
    nu = 1.0 / t_sorted

    S = m_inv_sqrt @ O @ np.diag(np.sqrt(np.concatenate([nu, nu])))

    residual = np.linalg.norm(S.T @ M @ S - np.diag(np.concatenate([nu, nu])))
    logger.debug(
        f"[williamson] n={n} | nu={np.round(nu, 10).tolist()} | "
        f"residual={residual:.2e}"
    )

    return WilliamsonDecomposition(S=S, nu=nu)


def is_quantum_blob(E: Ellipsoid, tol: float = 1e-9) -> bool:
    """
    E = S(B²ⁿ(√ħ)) 인지: 모양 행렬 Q 의 symplectic 고유값이 모두 1

    (동치: Q 가 대칭 양의 정부호이며 symplectic)
    """
    if E.space is not SpaceTag.PHASE:
        raise ValidationError(f"quantum blob test needs a phase-space ellipsoid, got {E.space.value}")
    nu = symplectic_eigenvalues(E.shape)
    return bool(np.all(np.abs(nu - 1.0) <= tol))


def _dimensionless(Sigma: CovarianceMatrix) -> np.ndarray:
    """
    (2/ħ)·DΣD, D = diag(I/s, s·I), s⁴ = tr Σ_XX / tr Σ_PP

    D 는 symplectic 이므로 ν 와 양자 조건이 그대로 유지되고 ħ/2 → 1.
    """
    n = Sigma.n
    s = (np.trace(Sigma.sigma_xx) / np.trace(Sigma.sigma_pp)) ** 0.25
    d = np.concatenate([np.full(n, 1.0 / s), np.full(n, s)])
    return (2.0 / Sigma.hbar) * Sigma.sigma * np.outer(d, d)


def quantum_condition_routes(Sigma: CovarianceMatrix, tol: float = 1e-9) -> tuple:
    """
    두 경로로 양자 조건 평가 (무차원화한 Σ' 에서, tol 은 상대값):
    (1) min ν(Σ') ≥ 1 − tol
    (2) λ_min(Σ' + iJ) ≥ −tol
    """
    scaled = _dimensionless(Sigma)
    nu = symplectic_eigenvalues(scaled)
    williamson_ok = bool(nu[-1] >= 1.0 - tol)

    hermitian = scaled + 1j * symplectic_form(Sigma.n)
    hermitian_ok = bool(np.linalg.eigvalsh(hermitian)[0] >= -tol)

    return williamson_ok, hermitian_ok


def satisfies_quantum_condition(Sigma: CovarianceMatrix, tol: float = 1e-9) -> bool:
    """Σ + (iħ/2)J ⪰ 0"""
    williamson_ok, hermitian_ok = quantum_condition_routes(Sigma, tol)
    if williamson_ok != hermitian_ok:
        logger.warning(
            f"Quantum condition routes disagree: williamson={williamson_ok}, "
            f"hermitian={hermitian_ok} (matrix within {tol:.0e} of the boundary)"
        )
    return williamson_ok


def random_symplectic(n: int, seed: int) -> np.ndarray:
    """
    결정적 무작위 symplectic 행렬: 회전 · diag(Λ, Λ⁻¹) · 회전

    (n, seed) 가 같으면 같은 행렬; 전역 RNG 상태 사용 안 함
    """
    if n < 1:
        raise DimensionError(f"n must be >= 1, got {n}")
    rng = np.random.default_rng(seed)

    def random_rotation() -> np.ndarray:
        if n == 1:
            u = np.exp(1j * rng.uniform(0, 2 * np.pi)) * np.ones((1, 1))
        else:
            u = unitary_group.rvs(n, random_state=rng)
        return embed_unitary(u.real, u.imag)

    squeeze = np.exp(rng.uniform(-1.0, 1.0, size=n))
    dilation = np.diag(np.concatenate([squeeze, 1.0 / squeeze]))

    return random_rotation() @ dilation @ random_rotation()


def is_pure_covariance(Sigma: CovarianceMatrix, tol: float = Settings.PURE_TOL) -> bool:
    """(2/ħ)Σ 가 symplectic 이면 순수 상태"""
    return is_symplectic(2.0 / Sigma.hbar * Sigma.sigma, tol)
