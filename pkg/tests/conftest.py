import json

import numpy as np
import pytest

from models.ellipsoid import Ellipsoid, SpaceTag


def _spd(rng: np.random.Generator, n: int, floor: float = 0.5) -> np.ndarray:
    G = rng.standard_normal((n, n))
    return G @ G.T / n + floor * np.identity(n)


def _sym_power(Q: np.ndarray, power: float) -> np.ndarray:
    vals, vecs = np.linalg.eigh(Q)
    return (vecs * vals ** power) @ vecs.T


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def random_spd(rng):
    """n×n 대칭 양의 정부호 생성기"""
    def make(n: int, floor: float = 0.5) -> np.ndarray:
        return _spd(rng, n, floor)
    return make


@pytest.fixture
def admissible_pair(rng):
    """AB ≤ I 인 (X, P) 생성기: B = A^{−1/2} W A^{−1/2}, W 의 고유값 ⊂ (0.1, 0.95)"""
    def make(n: int, hbar: float = 1.0):
        A = _spd(rng, n)
        U, _ = np.linalg.qr(rng.standard_normal((n, n)))
        W = (U * rng.uniform(0.1, 0.95, size=n)) @ U.T
        a_inv_sqrt = _sym_power(A, -0.5)
        B = a_inv_sqrt @ W @ a_inv_sqrt
        B = 0.5 * (B + B.T)
        X = Ellipsoid(space=SpaceTag.POSITION, center=np.zeros(n), shape=A, hbar=hbar)
        P = Ellipsoid(space=SpaceTag.MOMENTUM, center=np.zeros(n), shape=B, hbar=hbar)
        return X, P
    return make


@pytest.fixture
def write_json(tmp_path):
    """dict → tmp_path 의 JSON 파일 경로"""
    def write(name: str, payload) -> str:
        path = tmp_path / name
        path.write_text(json.dumps(payload), encoding="utf-8")
        return str(path)
    return write


@pytest.fixture
def ellipse_samples(rng):
    """uᵀQu ≤ 1 안의 균일 표본 (2차원)"""
    def sample(Q: np.ndarray, count: int) -> np.ndarray:
        radius = np.sqrt(rng.uniform(0.0, 1.0, size=count))
        angle = rng.uniform(0.0, 2 * np.pi, size=count)
        disk = np.stack([radius * np.cos(angle), radius * np.sin(angle)], axis=1)
        return disk @ _sym_power(Q, -0.5).T
    return sample
