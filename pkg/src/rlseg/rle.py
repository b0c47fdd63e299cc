"""Row-wise run-length model of a binary image.

Each row is a ragged list of alternating white/black run lengths that
always starts with white; a row beginning with black carries a leading
zero. Rows are never padded in memory; :func:`to_padded_matrix` produces the
zero-padded rectangular view for display.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .bitmap import BitImage
from .errors import FormatError, StructureError


def _check_runs(runs: Sequence[int], width: int):
    if not runs:
        raise StructureError("row has no runs")
    if min(runs) < 0:
        raise StructureError("negative run length")
    if 0 in runs[1:]:
        raise StructureError("zero run length after the first (white) position")
    if sum(runs) != width:
        raise StructureError(f"runs sum to {sum(runs)}, expected width {width}")


@dataclass(frozen=True)
class RleRow:
    runs: tuple[int, ...]
    width: int

    def __post_init__(self):
        object.__setattr__(self, "runs", tuple(map(int, self.runs)))
        _check_runs(self.runs, self.width)

    @property
    def black_runs(self) -> tuple[int, ...]:
        return self.runs[1::2]

    @property
    def white_runs(self) -> tuple[int, ...]:
        return self.runs[0::2]

    def black_count(self) -> int:
        return sum(self.runs[1::2])

    def __len__(self):
        return len(self.runs)


@dataclass(frozen=True)
class RleDocument:
    rows: tuple[RleRow, ...]
    width: int

    def __post_init__(self):
        if self.width < 1:
            raise StructureError(f"width must be positive, got {self.width}")
        object.__setattr__(self, "rows", tuple(self.rows))
        for i, row in enumerate(self.rows, start=1):
            if row.width != self.width:
                raise StructureError(
                    f"row width {row.width} differs from document width {self.width}", row=i)

    @property
    def height(self) -> int:
        return len(self.rows)

    @classmethod
    def from_runs(cls, runs: Iterable[Sequence[int]], width: int) -> "RleDocument":
        """Build from plain run lists, reporting the offending row on error."""
        rows = []
        for i, r in enumerate(runs, start=1):
            try:
                rows.append(RleRow(tuple(r), width))
            except StructureError as exc:
                raise StructureError(str(exc), row=i) from None
        return cls(tuple(rows), width)

    def total_entries(self) -> int:
        return sum(len(r.runs) for r in self.rows)


def _row_runs(row: np.ndarray) -> tuple[int, ...]:
    change = np.flatnonzero(row[1:] != row[:-1]) + 1
    bounds = np.concatenate(([0], change, [row.size]))
    runs = np.diff(bounds).tolist()
    if row[0]:
        runs.insert(0, 0)
    return tuple(runs)


def compress(img: BitImage) -> RleDocument:
    a = img.to_array()
    rows = tuple(RleRow(_row_runs(a[i]), img.width) for i in range(img.height))
    return RleDocument(rows, img.width)


def decompress(doc: RleDocument) -> BitImage:
    if doc.height == 0:
        raise StructureError("document has no rows; a BitImage needs at least one")
    out = bytearray()
    for row in doc.rows:
        colour = 0
        for run in row.runs:
            out += bytes((colour,)) * run
            colour ^= 1
    return BitImage(doc.height, doc.width, bytes(out))


def to_padded_matrix(doc: RleDocument) -> list[list[int]]:
    cols = max((len(r.runs) for r in doc.rows), default=0)
    return [list(r.runs) + [0] * (cols - len(r.runs)) for r in doc.rows]


# --- RLC1 text format --------------------------------------------------------

def dumps_rlc(doc: RleDocument) -> str:
    lines = [f"RLC1 {doc.width} {doc.height}"]
    lines.extend(" ".join(map(str, r.runs)) for r in doc.rows)
    return "\n".join(lines) + "\n"


def loads_rlc(text: str) -> RleDocument:
    lines = text.splitlines()
    if not lines:
        raise FormatError("empty RLC stream", 0)
    head = lines[0].split()
    if len(head) != 3 or head[0] != "RLC1":
        raise FormatError(f"line 1: expected 'RLC1 <width> <height>', got {lines[0]!r}", 0)
    try:
        width, height = int(head[1]), int(head[2])
    except ValueError:
        raise FormatError(f"line 1: non-integer dimensions in {lines[0]!r}", 0) from None
    if width < 1 or height < 0:
        raise FormatError(f"line 1: invalid dimensions {width}x{height}", 0)
    body = lines[1:]
    # tolerate trailing blank lines
    while body and not body[-1].strip() and len(body) > height:
        body.pop()
    if len(body) != height:
        raise FormatError(f"expected {height} run rows, found {len(body)}")
    rows = []
    for lineno, line in enumerate(body, start=2):
        try:
            runs = tuple(int(t) for t in line.split())
            rows.append(RleRow(runs, width))
        except ValueError as exc:
            raise FormatError(f"line {lineno}: {exc}") from None
    return RleDocument(tuple(rows), width)
