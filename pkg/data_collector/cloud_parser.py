import csv
import re
from pathlib import Path
from typing import Iterator, List, Optional, Tuple

from utils.errors import ArtifactIOError, DimensionError, ParseError

_HEADER_NAME = re.compile(r"^x(\d+)$")


class CloudParser:
    """측정 구름 CSV (헤더 x1,...,xn) 파싱"""

    @staticmethod
    def parse_header(fields: List[str]) -> int:
        """헤더 → 차원 n"""
        names = [f.strip() for f in fields]
        expected = [f"x{j}" for j in range(1, len(names) + 1)]
        if not names or names != expected:
            bad = next((name for name in names if not _HEADER_NAME.match(name)), names)
            raise ParseError(f"header must be x1,...,xn, got {bad!r}", line=1)
        return len(names)

    @staticmethod
    def parse_row(fields: List[str], line: int) -> List[float]:
        """한 행 → 좌표 리스트 (숫자가 아니면 ParseError, 개수는 CloudValidator 가 본다)"""
        values = []
        for token in fields:
            try:
                values.append(float(token.strip()))
            except ValueError:
                raise ParseError(f"non-numeric token {token!r}", line=line) from None
        return values

    @staticmethod
    def iter_rows(path: Path, expected_n: Optional[int] = None) -> Tuple[int, Iterator[Tuple[int, List[float]]]]:
        """(n, (줄 번호, 좌표) 이터레이터)"""
        try:
            handle = open(path, newline="", encoding="utf-8")
        except OSError as e:
            raise ArtifactIOError(f"cannot read {path}: {e}") from e

        reader = csv.reader(handle)
        try:
            header = next(reader)
        except StopIteration:
            handle.close()
            raise ParseError("empty file", line=1) from None
        except (csv.Error, UnicodeDecodeError) as e:
            handle.close()
            raise ParseError(f"unreadable header: {e}", line=1) from e

        try:
            n = CloudParser.parse_header(header)
            if expected_n is not None and n != expected_n:
                raise DimensionError(f"{path}: header declares n={n}, expected n={expected_n}")
        except Exception:
            handle.close()
            raise

        def rows():
            with handle:
                try:
                    for fields in reader:
                        if not fields or all(not f.strip() for f in fields):
                            continue
                        yield reader.line_num, CloudParser.parse_row(fields, reader.line_num)
                except (csv.Error, UnicodeDecodeError) as e:
                    raise ParseError(f"malformed CSV: {e}", line=reader.line_num) from e

        return n, rows()
