import argparse
import logging
import sys
from typing import List, Optional

from cli.commands import COMMANDS
from storage.artifact_codec import dumps
from utils.logger_utils import set_global_level, setup_logger

# 값이 음수로 시작할 수 있는 옵션
_DASH_VALUE_OPTIONS = ("--grid",)

def build_parser() -> argparse.ArgumentParser:
    """서브커맨드 파서"""
    parser = argparse.ArgumentParser(
        prog="gaussian_recon",
        description="Gaussian state reconstruction from position localization data",
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="DEBUG 로그")
    parser.add_argument("-q", "--quiet", action="store_true", help="WARNING 이상만")
    sub = parser.add_subparsers(dest="command", required=True)

    def with_hbar(p: argparse.ArgumentParser) -> argparse.ArgumentParser:
        p.add_argument("--hbar", type=float, default=None, help="입력 아티팩트의 ħ 와 일치해야 함")
        return p

    dual = with_hbar(sub.add_parser("dual", help="원점 중심 타원체의 ħ-극쌍대"))
    dual.add_argument("--input", required=True)

    rec = with_hbar(sub.add_parser("reconstruct", help="X (와 P) 로부터 가우시안 상태 재구성"))
    rec.add_argument("--x", required=True)
    momentum = rec.add_mutually_exclusive_group(required=True)
    momentum.add_argument("--p")
    momentum.add_argument("--slack", type=float)
    rec.add_argument("--mode", choices=("pure", "mixed"), default="pure")

    ing = with_hbar(sub.add_parser("ingest", help="측정 CSV → 위치 국소화 타원체"))
    ing.add_argument("--csv", required=True)
    ing.add_argument("--config")

    chk = with_hbar(sub.add_parser("check", help="양자 조건 / RS 부등식 / 순도"))
    chk.add_argument("--sigma", required=True)

    proj = with_hbar(sub.add_parser("project", help="공분산 타원체의 x 또는 p 사영"))
    proj.add_argument("--sigma", required=True)
    proj.add_argument("--onto", choices=("position", "momentum"), required=True)

    wig = with_hbar(sub.add_parser("wigner", help="Wigner 분포 격자 CSV"))
    wig.add_argument("--state", required=True)
    wig.add_argument("--grid", required=True, help='"min,max,steps[;min,max,steps...]"')
    wig.add_argument("--out", required=True)

    return parser


def _attach_option_values(argv: List[str], options=_DASH_VALUE_OPTIONS) -> List[str]:
    """'--grid -4,4,401' → '--grid=-4,4,401' (argparse 는 '-' 로 시작하는 값을 옵션으로 읽는다)"""
    joined = []
    tokens = iter(argv)
    for token in tokens:
        if token in options:
            value = next(tokens, None)
            joined.append(token if value is None else f"{token}={value}")
        else:
            joined.append(token)
    return joined


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    argv = _attach_option_values(sys.argv[1:] if argv is None else list(argv))
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse 사용법 오류 = 검증 오류
        return 0 if e.code == 0 else 1

    level = logging.DEBUG if args.verbose else logging.WARNING if args.quiet else logging.INFO
    set_global_level(level)
    logger = setup_logger("main")
    logger.debug(f"command={args.command}")

    result = COMMANDS[args.command](args)
    if result.exit_code == 0:
        sys.stdout.write(dumps(result.payload) + "\n")
    else:
        logger.debug(f"exit {result.exit_code}: {'; '.join(result.diagnostics)}")
    return result.exit_code


if __name__ == "__main__":
    sys.exit(main())
