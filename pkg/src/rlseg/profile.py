"""Projection profiles and column scanning straight from run lengths.

The row profile sums each row's black runs. Column information, which run
lengths do not expose directly, comes from :class:`ColumnScanner`: it keeps
one (white head, black head) cursor per row and pops one pixel from every
row per advance, emitting 0 for a white pop and 1 for a black pop.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Optional

from .cost import CostLedger
from .errors import BoundsError, ExhaustedError
from .rle import RleDocument

ROW = "row"
COLUMN = "column"


@dataclass(frozen=True)
class ProfileCurve:
    axis: str
    values: tuple[int, ...]
    addition_count: int

    def __len__(self):
        return len(self.values)

    def __getitem__(self, i):
        return self.values[i]

    def to_csv(self) -> str:
        return "index,value\n" + "".join(f"{i},{v}\n" for i, v in enumerate(self.values, 1))


def row_profile(doc: RleDocument, ledger: Optional[CostLedger] = None) -> ProfileCurve:
    values = []
    additions = 0
    for row in doc.rows:
        total = 0
        for run in row.runs[1::2]:
            total += run
            additions += 1
        values.append(total)
    if ledger is not None:
        ledger.additions += additions
    return ProfileCurve(ROW, tuple(values), additions)


@dataclass(frozen=True)
class ColumnTransitions:
    column: int
    bits: tuple[int, ...]
    band: tuple[int, int]

    def is_space(self) -> bool:
        """True when no row of the band is black in this column."""
        return not any(self.bits)

    def black_count(self) -> int:
        return sum(self.bits)


def _check_band(doc: RleDocument, band) -> tuple[int, int]:
    if band is None:
        band = (1, doc.height)
    r0, r1 = int(band[0]), int(band[1])
    if r0 > r1:
        raise BoundsError(f"empty or inverted row band [{r0}, {r1}]")
    if r0 < 1 or r1 > doc.height:
        raise BoundsError(f"row band [{r0}, {r1}] outside rows 1..{doc.height}")
    return r0, r1


class ColumnScanner:
    """Virtual-column cursor over a band of rows of one document.

    Not thread-safe; create one scanner per band and per thread.
    """

    def __init__(self, doc: RleDocument, band=None, ledger: Optional[CostLedger] = None):
        self.band = _check_band(doc, band)
        self.width = doc.width
        self.emitted = 0
        self.ledger = ledger if ledger is not None else CostLedger()
        self._runs = [doc.rows[x - 1].runs for x in range(self.band[0], self.band[1] + 1)]
        self._pair = [0] * len(self._runs)
        self._white = [r[0] for r in self._runs]
        self._black = [r[1] if len(r) > 1 else 0 for r in self._runs]

    @property
    def exhausted(self) -> bool:
        return self.emitted >= self.width

    def advance(self) -> ColumnTransitions:
        if self.emitted >= self.width:
            raise ExhaustedError(f"all {self.width} columns already emitted")
        white, black, pair, runs = self._white, self._black, self._pair, self._runs
        bits = []
        shifts = 0
        for i in range(len(runs)):
            if white[i] == 0 and black[i] == 0:
                # both heads spent: the next white/black pair moves in
                p = pair[i] + 2
                pair[i] = p
                row = runs[i]
                white[i] = row[p]
                black[i] = row[p + 1] if p + 1 < len(row) else 0
                shifts += 1
            if white[i]:
                white[i] -= 1
                bits.append(0)
            else:
                black[i] -= 1
                bits.append(1)
        self.emitted += 1
        self.ledger.advances += 1
        self.ledger.pops += len(bits)
        self.ledger.shifts += shifts
        return ColumnTransitions(self.emitted, tuple(bits), self.band)

    def __iter__(self) -> Iterator[ColumnTransitions]:
        while not self.exhausted:
            yield self.advance()


def new_scanner(doc: RleDocument, band=None, ledger: Optional[CostLedger] = None) -> ColumnScanner:
    return ColumnScanner(doc, band, ledger)


def advance(scanner: ColumnScanner) -> ColumnTransitions:
    return scanner.advance()


def column_profile(doc: RleDocument, band=None,
                   ledger: Optional[CostLedger] = None) -> ProfileCurve:
    ledger = ledger if ledger is not None else CostLedger()
    scanner = ColumnScanner(doc, band, ledger)
    values = []
    additions = 0
    for col in scanner:
        n = col.black_count()
        additions += n
        values.append(n)
    ledger.additions += additions
    return ProfileCurve(COLUMN, tuple(values), additions)
