"""ħ-극쌍대, Löwner 순서 포함 판정, John/Löwner 타원체"""

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from scipy.linalg import block_diag, cholesky, eigh, solve_triangular
from scipy.spatial import ConvexHull, QhullError

from config.settings import Settings
from core.symplectic import symplectic_dilation
from models.cloud import MeasurementCloud
from models.ellipsoid import Ellipsoid, SpaceTag
from utils.errors import (
    DimensionError,
    IterationLimitError,
    RankDeficiencyError,
    ValidationError,
)
from utils.logger_utils import setup_logger

logger = setup_logger("polar")


def _sym_power(Q: np.ndarray, power: float) -> np.ndarray:
    vals, vecs = np.linalg.eigh(Q)
    return (vecs * vals ** power) @ vecs.T


def _loewner_ratio(B2: np.ndarray, B1: np.ndarray) -> float:
    """λ_max(B₁⁻¹B₂): B₂ ≤ B₁ 이면 ≤ 1"""
    return float(eigh(B2, B1, eigvals_only=True)[-1])


# ==================== 생성 / 변환 ====================

def ellipsoid_at_level(
    A: np.ndarray,
    radius: float,
    space: SpaceTag,
    hbar: float = Settings.HBAR,
    center: Optional[np.ndarray] = None,
) -> Ellipsoid:
    """{u : uᵀAu ≤ R²} 를 ≤ ħ 규약으로"""
    if not radius > 0:
        raise ValidationError(f"radius must be positive, got {radius}")
    A = np.atleast_2d(np.asarray(A, dtype=float))
    center = np.zeros(A.shape[0]) if center is None else center
    return Ellipsoid(space=space, center=center, shape=hbar * A / radius ** 2, hbar=hbar)


def ball(n: int, radius: float, space: SpaceTag, hbar: float = Settings.HBAR) -> Ellipsoid:
    """원점 중심 공 B(R)"""
    if n < 1:
        raise DimensionError(f"dimension must be >= 1, got {n}")
    return ellipsoid_at_level(np.identity(n), radius, space, hbar)


def translate(E: Ellipsoid, delta: np.ndarray) -> Ellipsoid:
    delta = np.atleast_1d(np.asarray(delta, dtype=float))
    if delta.shape != (E.n_ambient,):
        raise DimensionError(f"delta must have length {E.n_ambient}, got {delta.shape}")
    return E.with_center(E.center + delta)


def linear_image(E: Ellipsoid, L: np.ndarray, space: Optional[SpaceTag] = None) -> Ellipsoid:
    """L·E: 모양 L⁻ᵀ Q L⁻¹, 중심 L·c"""
    L = np.atleast_2d(np.asarray(L, dtype=float))
    if L.shape != (E.n_ambient, E.n_ambient):
        raise DimensionError(f"linear map must be {E.n_ambient}x{E.n_ambient}, got {L.shape}")
    try:
        L_inv = np.linalg.inv(L)
    except np.linalg.LinAlgError as e:
        raise ValidationError("linear map is singular") from e
    shape = L_inv.T @ E.shape @ L_inv
    return Ellipsoid(
        space=space or E.space,
        center=L @ E.center,
        shape=0.5 * (shape + shape.T),
        hbar=E.hbar,
    )


# ==================== 극쌍대 ====================

def _require_centered(E: Ellipsoid, what: str):
    if not E.is_centered(Settings.CENTER_TOL):
        raise ValidationError(
            f"{what} requires an origin-centered ellipsoid "
            f"(center={E.center.tolist()}); translate it first"
        )


def polar_dual(E: Ellipsoid, centered_check: bool = True) -> Ellipsoid:
    """
    {x : xᵀAx ≤ ħ}^ħ = {p : pᵀA⁻¹p ≤ ħ}

    중심이 원점이 아니면 거부한다 (자동 재중심화 없음).
    centered_check=False 면 중심을 무시하고 원점 중심 쌍대를 돌려준다.
    """
    if centered_check:
        _require_centered(E, "polar duality")
    shape = np.linalg.inv(E.shape)
    return Ellipsoid(
        space=E.space.dual,
        center=np.zeros(E.n_ambient),
        shape=0.5 * (shape + shape.T),
        hbar=E.hbar,
    )


def polar_dual_at_level(
    A: np.ndarray,
    radius: float,
    space: SpaceTag = SpaceTag.POSITION,
    hbar: float = Settings.HBAR,
) -> Ellipsoid:
    """{x : xᵀAx ≤ R²}^ħ = {p : pᵀA⁻¹p ≤ (ħ/R)²}"""
    A = np.atleast_2d(np.asarray(A, dtype=float))
    return ellipsoid_at_level(np.linalg.inv(A), hbar / radius, space.dual, hbar)


def _check_comparable(E1: Ellipsoid, E2: Ellipsoid):
    if E1.n_ambient != E2.n_ambient:
        raise ValidationError(
            f"ellipsoid dimensions differ: {E1.n_ambient} vs {E2.n_ambient}"
        )
    if not np.isclose(E1.hbar, E2.hbar, rtol=1e-12, atol=0.0):
        raise ValidationError(f"hbar mismatch: {E1.hbar} vs {E2.hbar}")
    scale = max(1.0, float(np.max(E1.semi_axes())), float(np.max(E2.semi_axes())))
    if np.max(np.abs(E1.center - E2.center)) > Settings.CENTER_TOL * scale:
        raise ValidationError(
            f"ellipsoid centers differ: {E1.center.tolist()} vs {E2.center.tolist()}"
        )


def is_subset(E1: Ellipsoid, E2: Ellipsoid, tol: float = Settings.LOEWNER_TOL) -> bool:
    """
    E1 ⊆ E2 ⇔ B₂ ≤ B₁ (Löwner) ⇔ λ_max(B₁⁻¹B₂) ≤ 1 + tol

    일반화 고유값이라 단위와 스케일에 무관하다.
    """
    _check_comparable(E1, E2)
    return bool(_loewner_ratio(E2.shape, E1.shape) <= 1.0 + tol)


# ==================== X×P 의 John 타원체 ====================

@dataclass(frozen=True, eq=False)
class JohnProductFactorization:
    """
    (X×P)_John = M(B²ⁿ(√ħ)),  M = diag(I, Y) · S_{A^{1/2}}

    S_{A^{1/2}} = diag(A^{−1/2}, A^{1/2}) 는 symplectic,
    Y = B^{−1/2}A^{−1/2} 는 압축 인자.
    """
    M: np.ndarray
    symplectic_part: np.ndarray
    squeeze: np.ndarray

    def contains_blob(self, tol: float = Settings.LOEWNER_TOL) -> bool:
        """S_{A^{1/2}}(B²ⁿ(√ħ)) ⊆ M(B²ⁿ(√ħ)) ⇔ σ_max(Y⁻¹) ≤ 1 ⇔ AB ≤ I"""
        sigma_max = np.linalg.norm(np.linalg.inv(self.squeeze), 2)
        return bool(sigma_max <= 1.0 + tol)


def _check_product_pair(X: Ellipsoid, P: Ellipsoid):
    if X.space is not SpaceTag.POSITION:
        raise ValidationError(f"X must be a position ellipsoid, got {X.space.value}")
    if P.space is not SpaceTag.MOMENTUM:
        raise ValidationError(f"P must be a momentum ellipsoid, got {P.space.value}")
    if X.n_ambient != P.n_ambient:
        raise ValidationError(f"X and P dimensions differ: {X.n_ambient} vs {P.n_ambient}")
    if not np.isclose(X.hbar, P.hbar, rtol=1e-12, atol=0.0):
        raise ValidationError(f"hbar mismatch: {X.hbar} vs {P.hbar}")
    _require_centered(X, "X×P John ellipsoid")
    _require_centered(P, "X×P John ellipsoid")


def john_of_product(X: Ellipsoid, P: Ellipsoid) -> Ellipsoid:
    """{(x,p) : xᵀAx + pᵀBp ≤ ħ}"""
    _check_product_pair(X, P)
    return Ellipsoid(
        space=SpaceTag.PHASE,
        center=np.concatenate([X.center, P.center]),
        shape=block_diag(X.shape, P.shape),
        hbar=X.hbar,
    )


def john_product_factorization(X: Ellipsoid, P: Ellipsoid) -> JohnProductFactorization:
    _check_product_pair(X, P)
    A, B = X.shape, P.shape
    a_sqrt = _sym_power(A, 0.5)
    symplectic_part = symplectic_dilation(np.linalg.inv(a_sqrt))
    squeeze = _sym_power(B, -0.5) @ _sym_power(A, -0.5)
    n = A.shape[0]
    M = block_diag(np.identity(n), squeeze) @ symplectic_part
    return JohnProductFactorization(M=M, symplectic_part=symplectic_part, squeeze=squeeze)


# ==================== 점 구름 → 타원체 ====================

def _khachiyan(V: np.ndarray, eps: float, max_iter: int, dim: int) -> Tuple[np.ndarray, float, int]:
    """
    D-최적 설계 가중치 (Wolfe–Atwood add/away 스텝)

    V: (N, k) 행벡터. 종료 조건 (max_j M_j − k)/dim ≤ eps.
    """
    N, k = V.shape
    u = np.full(N, 1.0 / N)
    gap = np.inf

    for iteration in range(1, max_iter + 1):
        X = V.T @ (u[:, None] * V)
        try:
            L = cholesky(X, lower=True)
        except np.linalg.LinAlgError as e:
            raise RankDeficiencyError("moment matrix became singular during MVEE iteration") from e
        W = solve_triangular(L, V.T, lower=True)
        M = np.sum(W ** 2, axis=0)

        j_plus = int(np.argmax(M))
        gap = (M[j_plus] - k) / dim
        if gap <= eps:
            return u, float(gap), iteration

        support = np.flatnonzero(u > 0)
        j_minus = int(support[np.argmin(M[support])])

        if M[j_plus] - k >= k - M[j_minus] or u[j_minus] >= 1.0:
            j = j_plus
            tau = (M[j] - k) / (k * (M[j] - 1.0))
        else:
            j = j_minus
            # M_j ≤ 1 이면 log det 가 τ 에 대해 감소 → 가중치 전부 제거
            tau = (M[j] - k) / (k * (M[j] - 1.0)) if M[j] > 1.0 else -np.inf
            tau = max(tau, -u[j] / (1.0 - u[j]))

        u = (1.0 - tau) * u
        u[j] += tau
        u[u < 0] = 0.0

    raise IterationLimitError(f"MVEE did not converge in {max_iter} iterations", gap)


def _hull_vertices(points: np.ndarray) -> np.ndarray:
    n = points.shape[1]
    if n == 1:
        return np.array([[points.min()], [points.max()]])
    if n > Settings.HULL_MAX_DIM:
        return points
    try:
        return points[ConvexHull(points).vertices]
    except QhullError as e:
        raise RankDeficiencyError(f"convex hull failed: {e}") from e


def _hull_halfspaces(points: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(vertices, normals, offsets): 내부는 normals·x + offsets ≤ 0"""
    n = points.shape[1]
    if n == 1:
        lo, hi = points.min(), points.max()
        return np.array([[lo], [hi]]), np.array([[1.0], [-1.0]]), np.array([-hi, lo])
    try:
        hull = ConvexHull(points)
    except QhullError as e:
        raise RankDeficiencyError(f"convex hull failed: {e}") from e
    # 삼각분할된 면은 같은 초평면을 여러 번 낸다
    equations = np.unique(np.round(hull.equations, 12), axis=0)
    return points[hull.vertices], equations[:, :n], equations[:, n]


def _require_full_dimensional(cloud: MeasurementCloud):
    if not cloud.is_full_dimensional():
        raise RankDeficiencyError(
            f"cloud needs at least {cloud.n + 1} affinely independent points "
            f"(N={cloud.size}, affine rank={cloud.affine_rank()})"
        )


def mvee(
    cloud: MeasurementCloud,
    eps: float = Settings.MVEE_EPS,
    max_iter: int = Settings.MVEE_MAX_ITER,
    centered: bool = False,
    hbar: float = Settings.HBAR,
) -> Ellipsoid:
    """
    최소 부피 외접 타원체 (Khachiyan)

    centered=True 면 원점 중심으로 고정한 최소 타원체.
    모든 점이 (u−c)ᵀQ(u−c) ≤ ħ(1+eps) 를 만족.
    """
    if not eps > 0:
        raise ValidationError(f"eps must be positive, got {eps}")
    n = cloud.n

    if centered:
        if cloud.size < n or np.linalg.matrix_rank(cloud.points) < n:
            raise RankDeficiencyError(
                f"cloud does not span R^{n} around the origin (N={cloud.size})"
            )
        vertices = _hull_vertices(cloud.points) if cloud.is_full_dimensional() else cloud.points
        u, gap, iterations = _khachiyan(vertices, eps, max_iter, n)
        moment = vertices.T @ (u[:, None] * vertices)
        center = np.zeros(n)
        shape = hbar * np.linalg.inv(moment) / n
    else:
        _require_full_dimensional(cloud)
        vertices = _hull_vertices(cloud.points)
        lifted = np.hstack([vertices, np.ones((vertices.shape[0], 1))])
        u, gap, iterations = _khachiyan(lifted, eps, max_iter, n)
        center = u @ vertices
        delta = vertices - center
        spread = delta.T @ (u[:, None] * delta)
        shape = hbar * np.linalg.inv(spread) / n

    logger.debug(
        f"[mvee] n={n} | N={cloud.size} | vertices={vertices.shape[0]} | "
        f"iterations={iterations} | gap={gap:.2e} | centered={centered}"
    )

    return Ellipsoid(
        space=SpaceTag.POSITION,
        center=center,
        shape=0.5 * (shape + shape.T),
        hbar=hbar,
    )


def john_of_cloud(
    cloud: MeasurementCloud,
    eps: float = Settings.MVEE_EPS,
    center: Optional[np.ndarray] = None,
    max_iter: int = Settings.MVEE_MAX_ITER,
    hbar: float = Settings.HBAR,
) -> Ellipsoid:
    """
    볼록 껍질에 내접하는 타원체 (쌍대 경로)

    1) 중심 c: 껍질 꼭짓점의 무게중심 (또는 지정값)
    2) 지지 반공간 a_iᵀ(x − c) ≤ h_i 의 쌍대점 a_i/h_i
    3) 쌍대점의 원점 중심 MVEE 를 가장 먼 점에 닿도록 조정
    4) 다시 쌍대 → 껍질 안에 포함됨
    """
    if not eps > 0:
        raise ValidationError(f"eps must be positive, got {eps}")
    _require_full_dimensional(cloud)
    n = cloud.n

    vertices, normals, offsets = _hull_halfspaces(cloud.points)
    c = vertices.mean(axis=0) if center is None else np.atleast_1d(np.asarray(center, dtype=float))
    if c.shape != (n,):
        raise DimensionError(f"center must have length {n}, got {c.shape}")

    heights = -(normals @ c + offsets)
    if np.any(heights <= 0):
        raise ValidationError(
            f"center {c.tolist()} does not lie strictly inside the convex hull"
        )
    dual_points = normals / heights[:, None]

    u, gap, iterations = _khachiyan(dual_points, eps, max_iter, n)
    moment = dual_points.T @ (u[:, None] * dual_points)
    reach = np.max(np.einsum("ij,jk,ik->i", dual_points, np.linalg.inv(moment), dual_points))
    shape = hbar * reach * moment

    logger.debug(
        f"[john] n={n} | facets={dual_points.shape[0]} | iterations={iterations} | "
        f"gap={gap:.2e} | center={np.round(c, 8).tolist()}"
    )

    return Ellipsoid(
        space=SpaceTag.POSITION,
        center=c,
        shape=0.5 * (shape + shape.T),
        hbar=hbar,
    )
