"""수집 파이프라인 - CSV → 검증 → 절단/중심화 → 국소화 타원체"""

from pathlib import Path
from typing import Optional, Union

import numpy as np

from core.polar import is_subset, john_of_cloud, mvee, polar_dual
from data_collector.cloud_normalizer import CloudNormalizer
from data_collector.cloud_parser import CloudParser
from data_collector.cloud_validator import CloudValidator
from models.cloud import MeasurementCloud
from models.ellipsoid import Ellipsoid, SpaceTag
from models.ingest import EstimatorKind, IngestConfig, RegionEstimate
from utils.errors import ParseError, PolarityViolationError, RankDeficiencyError, ValidationError
from utils.logger_utils import setup_logger

logger = setup_logger("ingest")


def load_cloud(
    path: Union[str, Path],
    expected_n: Optional[int] = None,
    strict: bool = True,
) -> MeasurementCloud:
    """
    CSV → MeasurementCloud

    strict=True 면 첫 번째 무효 행에서 ParseError (줄 번호 포함),
    False 면 무효 행을 버리고 통계에 남긴다.
    """
    path = Path(path)
    n, rows = CloudParser.iter_rows(path, expected_n)
    validator = CloudValidator(n)

    points = []
    for line, values in rows:
        result = validator.validate_sample(values, line)
        if not result.is_valid:
            if strict:
                raise ParseError(result.error_message, line=line)
            continue
        points.append(values)

    if not points:
        raise ParseError(f"{path}: no samples after the header")

    stats = validator.get_stats()
    logger.info(
        f"Loaded {len(points)} samples (n={n}) from {path.name} | "
        f"errors={stats['total_errors']} | duplicates={stats['duplicates']}"
    )
    return MeasurementCloud(n=n, points=np.asarray(points), label=path.stem)


def estimate_region(cloud: MeasurementCloud, cfg: IngestConfig) -> RegionEstimate:
    """
    절단 → 중심 추출 → 원점 중심 점들에 Löwner (또는 John) 타원체

    반환 타원체는 원점 중심 (극쌍대에 바로 사용), x₀ 는 따로 돌려준다.
    """
    normalized = CloudNormalizer(cfg.trim_fraction).normalize(
        cloud, cfg.center_mode, cfg.fixed_center
    )
    retained = normalized.cloud

    if not retained.is_full_dimensional():
        raise RankDeficiencyError(
            f"cloud after trimming has {retained.size} points of affine rank "
            f"{retained.affine_rank()}; need {cloud.n + 1} affinely independent points"
        )

    if cfg.estimator is EstimatorKind.LOEWNER:
        ellipsoid = mvee(retained, eps=cfg.eps, max_iter=cfg.max_iter, centered=True, hbar=cfg.hbar)
    else:
        ellipsoid = john_of_cloud(
            retained, eps=cfg.eps, center=np.zeros(cloud.n), max_iter=cfg.max_iter, hbar=cfg.hbar
        )

    logger.info(
        f"[{cfg.estimator.value}] n={cloud.n} | retained={normalized.retained} | "
        f"dropped={normalized.dropped} | semi-axes={np.round(ellipsoid.semi_axes(), 8).tolist()}"
    )

    return RegionEstimate(
        ellipsoid=ellipsoid,
        center=normalized.center,
        retained=normalized.retained,
        dropped=normalized.dropped,
    )


def postulate_momentum_region(
    X: Ellipsoid,
    slack: Union[float, np.ndarray],
    p0: Optional[np.ndarray] = None,
) -> Ellipsoid:
    """
    극성 공준으로 P ⊇ X^ħ 를 정한다.

    스칼라 s ≥ 1: B = A⁻¹/s (반축이 √s 배)
    SPD 행렬 S: B = S^{−1/2} A⁻¹ S^{−1/2}, X^ħ ⊆ P 여부를 검증
    """
    if X.space is not SpaceTag.POSITION:
        raise ValidationError(f"X must be a position ellipsoid, got {X.space.value}")
    dual = polar_dual(X)

    slack = np.asarray(slack, dtype=float)
    if slack.ndim == 0:
        if not slack >= 1.0:
            raise PolarityViolationError(f"scalar slack must be >= 1, got {float(slack)}")
        shape = dual.shape / float(slack)
    else:
        slack = np.atleast_2d(slack)
        if slack.shape != dual.shape.shape:
            raise ValidationError(f"slack matrix must be {dual.shape.shape}, got {slack.shape}")
        vals, vecs = np.linalg.eigh(0.5 * (slack + slack.T))
        if vals[0] <= 0:
            raise ValidationError("slack matrix must be positive definite")
        inv_root = (vecs / np.sqrt(vals)) @ vecs.T
        shape = inv_root @ dual.shape @ inv_root

    P = Ellipsoid(space=SpaceTag.MOMENTUM, center=np.zeros(X.n_ambient), shape=0.5 * (shape + shape.T), hbar=X.hbar)
    if not is_subset(dual, P):
        raise PolarityViolationError("slack matrix does not keep X^hbar inside P")

    return P if p0 is None else P.with_center(p0)


class IngestPipeline:
    """
    측정 CSV → 검증 → 절단/중심화 → 위치 영역 → (선택) 운동량 영역

    플로우:
    CloudParser → CloudValidator → CloudNormalizer → mvee / john_of_cloud → postulate
    """

    def __init__(self, cfg: IngestConfig):
        self.cfg = cfg
        self.logger = setup_logger("ingest_pipeline")

        # 통계
        self.processed_clouds = 0
        self.total_points = 0
        self.total_dropped = 0
        self.failures = 0

    def run(
        self,
        source: Union[str, Path, MeasurementCloud],
        expected_n: Optional[int] = None,
    ) -> RegionEstimate:
        """파일 경로 또는 구름 하나 처리"""
        cloud = source if isinstance(source, MeasurementCloud) else load_cloud(source, expected_n)
        try:
            estimate = estimate_region(cloud, self.cfg)
        except Exception as e:
            self.failures += 1
            self.logger.error(f"Region estimation failed for {cloud.label or 'cloud'}: {e}")
            raise

        self.processed_clouds += 1
        self.total_points += cloud.size
        self.total_dropped += estimate.dropped
        return estimate

    def momentum_region(self, estimate: RegionEstimate, slack: Union[float, np.ndarray]) -> Ellipsoid:
        return postulate_momentum_region(estimate.ellipsoid, slack)

    def get_stats(self) -> dict:
        return {
            "processed_clouds": self.processed_clouds,
            "total_points": self.total_points,
            "total_dropped": self.total_dropped,
            "failures": self.failures,
            "estimator": self.cfg.estimator.value,
        }

    def log_final_stats(self):
        """최종 통계 로깅"""
        self.logger.info("=" * 60)
        self.logger.info("INGEST FINAL STATISTICS")
        self.logger.info("=" * 60)
        for key, value in self.get_stats().items():
            self.logger.info(f"  {key}: {value}")
        self.logger.info("=" * 60)
