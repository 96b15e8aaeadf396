"""Plain-text files holding an ordered sequence of square matrices.

Format, line oriented and diffable:

    n=3                  header: the dimension, first content line
    # key=value          optional metadata, one pair per comment line
    0.2 0.3 0.5          one matrix = n data lines of n decimal reals
    0.1 0.8 0.1
    0.4 0.4 0.2
                         blank line between matrices (writer convention;
    1 0 0                the parser accepts any blank/comment interleaving)
    0 1 0
    0 0 1

Every record is validated on read; records and rows in error messages are
1-based. Writes are atomic: content goes to a temporary file in the target
directory and is renamed into place.
"""

from __future__ import annotations

import os
import tempfile
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from .errors import StochasticityError
from .hypotheses import MatrixSequence
from .stochastic import NEGATIVITY_TOL, ROW_SUM_TOL, StochasticMatrix


class SequenceFileError(ValueError):
    """Malformed sequence file: bad header, bad record, or failed validation."""


@dataclass
class SequenceFile:
    """Parsed file: dimension, metadata pairs, and the validated matrices."""

    n: int
    metadata: dict[str, str] = field(default_factory=dict)
    matrices: tuple[StochasticMatrix, ...] = ()

    @property
    def length(self) -> int:
        return len(self.matrices)

    def to_sequence(self) -> MatrixSequence:
        return MatrixSequence(self.matrices)


def parse_sequence_text(
    text: str,
    *,
    tol_row: float = ROW_SUM_TOL,
    tol_neg: float = NEGATIVITY_TOL,
) -> SequenceFile:
    header_n: int | None = None
    metadata: dict[str, str] = {}
    rows: list[list[float]] = []
    row_line_numbers: list[int] = []

    for lineno, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line.lstrip("#").strip()
            if "=" in body:
                key, value = body.split("=", 1)
                metadata.setdefault(key.strip(), value.strip())
            continue
        if header_n is None:
            if not line.startswith("n="):
                raise SequenceFileError(f"line {lineno}: expected header 'n=<int>', got {line!r}")
            try:
                header_n = int(line[2:])
            except ValueError:
                raise SequenceFileError(f"line {lineno}: malformed header {line!r}") from None
            if header_n < 1:
                raise SequenceFileError(f"line {lineno}: dimension must be at least 1")
            continue
        try:
            values = [float(tok) for tok in line.split()]
        except ValueError:
            raise SequenceFileError(f"line {lineno}: non-numeric value in {line!r}") from None
        rows.append(values)
        row_line_numbers.append(lineno)

    if header_n is None:
        raise SequenceFileError("missing header line 'n=<int>'")
    if not rows:
        raise SequenceFileError("no matrices")
    if len(rows) % header_n != 0:
        raise SequenceFileError(
            f"record {len(rows) // header_n + 1} is incomplete: "
            f"{len(rows) % header_n} of {header_n} rows present"
        )

    matrices = []
    for record_index in range(len(rows) // header_n):
        block = rows[record_index * header_n : (record_index + 1) * header_n]
        for offset, row in enumerate(block):
            if len(row) != header_n:
                lineno = row_line_numbers[record_index * header_n + offset]
                raise SequenceFileError(
                    f"record {record_index + 1}, row {offset + 1} (line {lineno}): "
                    f"expected {header_n} values, got {len(row)}"
                )
        try:
            matrices.append(StochasticMatrix(block, tol_row=tol_row, tol_neg=tol_neg))
        except StochasticityError as err:
            raise SequenceFileError(f"record {record_index + 1}: {err}") from err
    return SequenceFile(header_n, metadata, tuple(matrices))


def read_sequence_file(
    path: str | Path,
    *,
    tol_row: float = ROW_SUM_TOL,
    tol_neg: float = NEGATIVITY_TOL,
) -> SequenceFile:
    return parse_sequence_text(Path(path).read_text(encoding="utf-8"), tol_row=tol_row, tol_neg=tol_neg)


def format_sequence(
    matrices: Sequence[StochasticMatrix] | Iterable[StochasticMatrix],
    metadata: dict[str, str] | None = None,
) -> str:
    """Render matrices in the file format; floats use shortest round-trip form."""
    mats = list(matrices)
    if not mats:
        raise SequenceFileError("no matrices")
    n = mats[0].n
    lines = [f"n={n}"]
    for key, value in (metadata or {}).items():
        lines.append(f"# {key}={value}")
    for m in mats:
        lines.append("")
        for row in m.entries:
            lines.append(" ".join(repr(float(v)) for v in row))
    return "\n".join(lines) + "\n"


def write_sequence_file(
    path: str | Path,
    matrices: Sequence[StochasticMatrix] | Iterable[StochasticMatrix],
    metadata: dict[str, str] | None = None,
) -> None:
    """Atomically write a sequence file (temp file + rename)."""
    target = Path(path)
    content = format_sequence(matrices, metadata)
    fd, tmp_name = tempfile.mkstemp(dir=target.parent or Path("."), prefix=target.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as handle:
            handle.write(content)
        os.replace(tmp_name, target)
    except BaseException:
        try:
            os.unlink(tmp_name)
        except OSError:
            pass
        raise
