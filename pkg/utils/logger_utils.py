import logging
import sys
from typing import Optional

from config.settings import Settings


_LEVEL_COLORS = {
    "DEBUG": "\033[36m",
    "INFO": "\033[32m",
    "WARNING": "\033[33m",
    "ERROR": "\033[31m",
    "CRITICAL": "\033[1;31m",
}
_RESET = "\033[0m"


class _LevelColorFormatter(logging.Formatter):
    """레벨 이름에만 색 적용 (NO_COLOR 존중)"""

    def __init__(self, fmt: str, datefmt: str, use_color: bool):
        super().__init__(fmt, datefmt)
        self.use_color = use_color

    def format(self, record: logging.LogRecord) -> str:
        if not self.use_color:
            return super().format(record)
        original = record.levelname
        color = _LEVEL_COLORS.get(original)
        if color:
            record.levelname = f"{color}{original:<8}{_RESET}"
        try:
            return super().format(record)
        finally:
            record.levelname = original


# set_global_level 이후 생성되는 로거도 같은 레벨로 시작
_global_level = logging.INFO
_project_loggers = set()


def setup_logger(name: str = "gaussian_recon", level: Optional[int] = None) -> logging.Logger:
    """로거 설정 및 반환 (level 미지정 시 전역 레벨)"""

    logger = logging.getLogger(name)
    logger.setLevel(_global_level if level is None else level)
    logger.handlers.clear()
    logger.propagate = False
    _project_loggers.add(name)

    fmt = '%(asctime)s | %(name)-15s | %(levelname)-8s | %(message)s'
    datefmt = '%Y-%m-%d %H:%M:%S'

    # 콘솔 출력 - stdout 은 JSON 전용이므로 stderr
    use_color = not Settings.NO_COLOR and sys.stderr.isatty()
    console = logging.StreamHandler(sys.stderr)
    console.setFormatter(_LevelColorFormatter(fmt, datefmt, use_color))
    logger.addHandler(console)

    # 파일 출력 (설정된 경우만)
    if Settings.LOG_FILE:
        file_handler = logging.FileHandler(Settings.LOG_FILE, encoding='utf-8')
        file_handler.setFormatter(logging.Formatter(fmt, datefmt))
        logger.addHandler(file_handler)

    return logger


def set_global_level(level: int):
    """프로젝트 로거 레벨 일괄 변경 (CLI -v/-q), 이후 생성되는 로거에도 적용"""
    global _global_level
    _global_level = level
    for name in _project_loggers:
        logging.getLogger(name).setLevel(level)
