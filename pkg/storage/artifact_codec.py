"""JSON/CSV 아티팩트 직렬화 (타원체, 공분산, 가우시안 상태, Wigner 격자)"""

import csv
import json
from pathlib import Path
from typing import Any, Iterable, List, Optional, Sequence, Union

import numpy as np

from core.states import gaussian_state
from models.covariance import CovarianceMatrix
from models.ellipsoid import Ellipsoid, SpaceTag
from models.state import GaussianState
from utils.errors import ArtifactIOError, ParseError, ValidationError
from utils.logger_utils import setup_logger

logger = setup_logger("artifact_codec")

PathLike = Union[str, Path]


# ==================== 파일 입출력 ====================

def dumps(payload: Any) -> str:
    """
    결정적 JSON 텍스트

    float 은 파이썬 최단 왕복 표현 (최대 17 유효숫자) 으로 나가므로
    읽고 다시 쓰면 바이트 단위로 같다.
    """
    return json.dumps(payload, indent=2, ensure_ascii=False, allow_nan=False)


def read_json(path: PathLike) -> dict:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ArtifactIOError(f"cannot read {path}: {e}") from e
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"{path.name}: invalid JSON ({e.msg})", line=e.lineno) from e
    if not isinstance(data, dict):
        raise ParseError(f"{path.name}: top-level JSON value must be an object")
    return data


def _field(raw: dict, key: str, what: str):
    if key not in raw:
        raise ParseError(f"{what} JSON is missing field {key!r}")
    return raw[key]


def _matrix(value, key: str) -> np.ndarray:
    try:
        array = np.array(value, dtype=float)
    except (TypeError, ValueError) as e:
        raise ParseError(f"field {key!r} is not a numeric array: {e}") from e
    return array


def _float_list(array: np.ndarray) -> list:
    return np.asarray(array, dtype=float).tolist()


# ==================== 타원체 ====================

def ellipsoid_to_dict(E: Ellipsoid) -> dict:
    return {
        "space": E.space.value,
        "hbar": E.hbar,
        "center": _float_list(E.center),
        "shape": _float_list(E.shape),
    }


def ellipsoid_from_dict(raw: dict) -> Ellipsoid:
    try:
        space = SpaceTag(_field(raw, "space", "ellipsoid"))
    except ValueError as e:
        raise ValidationError(f"unknown space tag: {raw.get('space')!r}") from e
    shape = _matrix(_field(raw, "shape", "ellipsoid"), "shape")
    center = raw.get("center")
    center = np.zeros(np.atleast_2d(shape).shape[0]) if center is None else _matrix(center, "center")
    return Ellipsoid(space=space, center=center, shape=shape, hbar=float(raw.get("hbar", 1.0)))


def region_to_dict(estimate) -> dict:
    """ingest 출력: {"ellipsoid", "center", "retained", "dropped"}"""
    return {
        "ellipsoid": ellipsoid_to_dict(estimate.ellipsoid),
        "center": _float_list(estimate.center),
        "retained": estimate.retained,
        "dropped": estimate.dropped,
    }


def load_ellipsoid(path: PathLike) -> Ellipsoid:
    """
    타원체 JSON 또는 ingest 출력 JSON

    ingest 출력이면 원점 중심 타원체를 추출된 중심 x₀ 로 옮겨 돌려준다.
    """
    raw = read_json(path)
    if isinstance(raw.get("ellipsoid"), dict):
        E = ellipsoid_from_dict(raw["ellipsoid"])
        if raw.get("center") is not None:
            E = E.with_center(_matrix(raw["center"], "center"))
        return E
    return ellipsoid_from_dict(raw)


# ==================== 공분산 / 상태 ====================

def covariance_to_dict(Sigma: CovarianceMatrix, purity_class: Optional[str] = None) -> dict:
    raw = {
        "n": Sigma.n,
        "hbar": Sigma.hbar,
        "mean": _float_list(Sigma.mean),
        "sigma": _float_list(Sigma.sigma),
    }
    if purity_class is not None:
        raw["purity_class"] = purity_class
    return raw


def covariance_from_dict(raw: dict) -> CovarianceMatrix:
    n = _field(raw, "n", "covariance")
    if not isinstance(n, int) or isinstance(n, bool):
        raise ParseError(f"field 'n' must be an integer, got {n!r}")
    mean = raw.get("mean")
    return CovarianceMatrix(
        n=n,
        hbar=float(raw.get("hbar", 1.0)),
        sigma=_matrix(_field(raw, "sigma", "covariance"), "sigma"),
        mean=None if mean is None else _matrix(mean, "mean"),
    )


def state_to_dict(state: GaussianState) -> dict:
    """GaussianState JSON: 공분산 필드 + purity (+ 순수하면 wavefunction)"""
    raw = covariance_to_dict(state.covariance, state.classification.value)
    raw["purity"] = state.purity
    if state.wavefunction is not None:
        wf = state.wavefunction
        raw["wavefunction"] = {
            "x0": _float_list(wf.x0),
            "p0": _float_list(wf.p0),
            "sigma_xx": _float_list(wf.sigma_xx),
            "sigma_xp": _float_list(wf.sigma_xp),
            "signature": None if wf.signature is None else list(wf.signature),
        }
    return raw


def state_from_dict(raw: dict) -> GaussianState:
    """상태 JSON (또는 공분산 JSON) → GaussianState; 분류는 다시 계산한다"""
    Sigma = covariance_from_dict(raw)
    signature = None
    wavefunction = raw.get("wavefunction")
    if isinstance(wavefunction, dict) and wavefunction.get("signature") is not None:
        signature = tuple(int(s) for s in wavefunction["signature"])
    return gaussian_state(Sigma, signature)


def load_state(path: PathLike) -> GaussianState:
    return state_from_dict(read_json(path))


# ==================== ħ 일치 ====================

def check_hbar(artifacts: Iterable, expected: Optional[float] = None) -> float:
    """파이프로 연결된 아티팩트들의 ħ 가 같은지 (다르면 ValidationError)"""
    values = [a.hbar for a in artifacts]
    if expected is not None:
        values.append(float(expected))
    if not values:
        raise ValidationError("no artifacts to read hbar from")
    reference = values[0]
    for value in values[1:]:
        if not np.isclose(value, reference, rtol=1e-12, atol=0.0):
            raise ValidationError(f"hbar mismatch between inputs: {reference} vs {value}")
    return reference


# ==================== CSV ====================

def write_cloud_csv(path: PathLike, points: np.ndarray):
    points = np.atleast_2d(np.asarray(points, dtype=float))
    rows = [[repr(float(v)) for v in row] for row in points]
    _write_csv(path, [f"x{j}" for j in range(1, points.shape[1] + 1)], rows)


def write_wigner_csv(
    path: PathLike,
    n: int,
    hbar: float,
    grid_spec: str,
    points: np.ndarray,
    values: np.ndarray,
):
    """첫 줄 '# n=..,hbar=..,grid=..', 헤더 z1..z2n,W"""
    header = [f"z{j}" for j in range(1, 2 * n + 1)] + ["W"]
    rows = [
        [repr(float(v)) for v in point] + [repr(float(w))]
        for point, w in zip(points, values)
    ]
    _write_csv(path, header, rows, comment=f"# n={n},hbar={hbar!r},grid={grid_spec}")
    logger.debug(f"Wigner grid written: {path} ({len(rows)} rows)")


def _write_csv(path: PathLike, header: Sequence[str], rows: List[list], comment: Optional[str] = None):
    path = Path(path)
    try:
        with open(path, "w", newline="", encoding="utf-8") as handle:
            if comment is not None:
                handle.write(comment + "\n")
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(header)
            writer.writerows(rows)
    except OSError as e:
        raise ArtifactIOError(f"cannot write {path}: {e}") from e


def parse_grid_spec(spec: str) -> List[tuple]:
    """'min,max,steps;min,max,steps' → [(min, max, steps), ...]"""
    axes = []
    for part in spec.split(";"):
        fields = [f.strip() for f in part.split(",")]
        if len(fields) != 3:
            raise ValidationError(f"grid axis must be 'min,max,steps', got {part!r}")
        try:
            lo, hi, steps = float(fields[0]), float(fields[1]), int(fields[2])
        except ValueError as e:
            raise ValidationError(f"invalid grid axis {part!r}: {e}") from e
        axes.append((lo, hi, steps))
    return axes
