"""CLI 명령: dual, reconstruct, ingest, check, project, wigner"""

from argparse import Namespace
from dataclasses import dataclass, field
from typing import Any, Callable, List, Optional

import numpy as np

from config.settings import Settings
from core.ingest_pipeline import IngestPipeline, postulate_momentum_region
from core.polar import polar_dual
from core.reconstruct import project_covariance, reconstruct_mixed, reconstruct_pure
from core.states import gaussian_state, integrate_grid, rs_report, wigner_grid
from core.symplectic import is_pure_covariance, symplectic_eigenvalues
from models.ingest import IngestConfig
from storage.artifact_codec import (
    check_hbar,
    covariance_from_dict,
    ellipsoid_to_dict,
    load_ellipsoid,
    load_state,
    parse_grid_spec,
    read_json,
    region_to_dict,
    state_to_dict,
    write_wigner_csv,
)
from utils.errors import ReconstructionError, ValidationError
from utils.logger_utils import setup_logger

logger = setup_logger("cli")


@dataclass
class CommandResult:
    """exit_code 0 이면 payload 는 JSON 으로 직렬화 가능"""
    exit_code: int
    payload: Any = None
    diagnostics: List[str] = field(default_factory=list)


def run_command(command: Callable[[Namespace], Any], args: Namespace) -> CommandResult:
    """도메인 예외 → 종료 코드 (1 검증/극성, 2 입출력/파싱, 3 수치)"""
    try:
        return CommandResult(exit_code=0, payload=command(args))
    except ReconstructionError as e:
        logger.error(f"[{e.error_type.value}] {e.message}")
        return CommandResult(exit_code=e.exit_code, diagnostics=[e.message])
    except np.linalg.LinAlgError as e:
        logger.error(f"[numerical_failure] {e}")
        return CommandResult(exit_code=3, diagnostics=[str(e)])


def _hbar_flag(args: Namespace) -> Optional[float]:
    return getattr(args, "hbar", None)


# ==================== 명령 ====================

def dual(args: Namespace):
    E = load_ellipsoid(args.input)
    check_hbar([E], _hbar_flag(args))
    return ellipsoid_to_dict(polar_dual(E))


def reconstruct(args: Namespace):
    X = load_ellipsoid(args.x)
    if args.p is not None:
        P = load_ellipsoid(args.p)
    elif args.slack is not None:
        P = postulate_momentum_region(X.with_center(np.zeros(X.n_ambient)), args.slack)
    else:
        raise ValidationError("reconstruct needs either --p or --slack")
    check_hbar([X, P], _hbar_flag(args))

    if args.mode == "pure":
        partners = reconstruct_pure(X, P)
        return [
            state_to_dict(gaussian_state(partner.covariance, partner.signature))
            for partner in partners
        ]
    return state_to_dict(gaussian_state(reconstruct_mixed(X, P)))


def ingest(args: Namespace):
    cfg = IngestConfig.from_dict(read_json(args.config)) if args.config else IngestConfig()
    if _hbar_flag(args) is not None:
        check_hbar([cfg], _hbar_flag(args))
    pipeline = IngestPipeline(cfg)
    estimate = pipeline.run(args.csv)
    pipeline.log_final_stats()
    return region_to_dict(estimate)


def check(args: Namespace):
    Sigma = covariance_from_dict(read_json(args.sigma))
    check_hbar([Sigma], _hbar_flag(args))
    report = rs_report(Sigma)
    state = gaussian_state(Sigma)
    return {
        "quantum_ok": report.quantum_condition,
        "symplectic_eigenvalues": symplectic_eigenvalues(Sigma.sigma).tolist(),
        "rs_margins": report.margins,
        "rs_saturated": report.saturated,
        "saturation_residual": report.saturation_residual,
        "purity": state.purity,
        "pure": bool(state.is_pure and is_pure_covariance(Sigma)),
    }


def project(args: Namespace):
    Sigma = covariance_from_dict(read_json(args.sigma))
    check_hbar([Sigma], _hbar_flag(args))
    return ellipsoid_to_dict(project_covariance(Sigma, args.onto))


def wigner(args: Namespace):
    state = load_state(args.state)
    check_hbar([state], _hbar_flag(args))
    if state.n > Settings.WIGNER_MAX_N:
        raise ValidationError(
            f"Wigner grid output supports n <= {Settings.WIGNER_MAX_N}, got n={state.n}"
        )

    axes = parse_grid_spec(args.grid)
    if len(axes) == 1:
        axes = axes * (2 * state.n)
    points, values = wigner_grid(state, axes)
    write_wigner_csv(args.out, state.n, state.hbar, args.grid, points, values)

    integral = integrate_grid(values, axes)
    logger.info(f"[wigner] {len(values)} grid points | integral={integral:.8f}")
    return {
        "integral_estimate": integral,
        "max_at": points[int(np.argmax(values))].tolist(),
        "rows": int(len(values)),
    }


def cmd_dual(args: Namespace) -> CommandResult:
    return run_command(dual, args)


def cmd_reconstruct(args: Namespace) -> CommandResult:
    return run_command(reconstruct, args)


def cmd_ingest(args: Namespace) -> CommandResult:
    return run_command(ingest, args)


def cmd_check(args: Namespace) -> CommandResult:
    return run_command(check, args)


def cmd_project(args: Namespace) -> CommandResult:
    return run_command(project, args)


def cmd_wigner(args: Namespace) -> CommandResult:
    return run_command(wigner, args)


COMMANDS = {
    "dual": cmd_dual,
    "reconstruct": cmd_reconstruct,
    "ingest": cmd_ingest,
    "check": cmd_check,
    "project": cmd_project,
    "wigner": cmd_wigner,
}
