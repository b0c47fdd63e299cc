"""Line, word and character segmentation on run-length documents.

Lines are the maximal row intervals whose row profile exceeds a noise
tolerance. Inside each line band a :class:`~rlseg.profile.ColumnScanner`
walks the columns once; maximal runs of non-space columns are characters,
and a blank gap at least as wide as the word-space threshold starts a new
word.
"""

from __future__ import annotations

import math
import statistics
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple, Optional, Sequence, Union

from .bitmap import CharBox, GroundTruth, LineBox, WordBox
from .cost import CostLedger
from .errors import BoundsError, InputError
from .profile import ROW, ColumnScanner, ProfileCurve, row_profile
from .rle import RleDocument

Interval = tuple[int, int]
AUTO = "auto"


@dataclass(frozen=True)
class LineSegment:
    rows: Interval
    gap_above: int


@dataclass(frozen=True)
class CharSegment:
    cols: Interval
    rows: Interval


@dataclass(frozen=True)
class WordSegment:
    cols: Interval
    rows: Interval
    chars: tuple[CharSegment, ...]


@dataclass(frozen=True)
class SegmentedLine:
    line: LineSegment
    threshold: int
    threshold_method: str
    words: tuple[WordSegment, ...]

    @property
    def rows(self) -> Interval:
        return self.line.rows

    @property
    def chars(self) -> list[CharSegment]:
        return [c for w in self.words for c in w.chars]


@dataclass(frozen=True)
class SegmentationResult:
    height: int
    width: int
    lines: tuple[SegmentedLine, ...]
    config: dict = field(default_factory=dict)
    cost: dict = field(default_factory=dict)

    def to_truth(self) -> GroundTruth:
        return GroundTruth(self.height, self.width, tuple(
            LineBox(ln.rows, tuple(
                WordBox(w.cols, tuple(CharBox(c.cols) for c in w.chars)) for w in ln.words))
            for ln in self.lines))

    def boxes(self) -> tuple:
        """Nested plain-tuple view used for equality checks across paths."""
        return tuple(
            (ln.rows, tuple((w.cols, tuple(c.cols for c in w.chars)) for w in ln.words))
            for ln in self.lines)

    def to_dict(self) -> dict:
        d = self.to_truth().to_dict()
        for out, ln in zip(d["lines"], self.lines):
            out["gap_above"] = ln.line.gap_above
            out["threshold"] = ln.threshold
        d["config"] = dict(self.config)
        d["cost"] = dict(self.cost)
        return d


def segment_lines(profile: ProfileCurve, tau: int = 0,
                  ledger: Optional[CostLedger] = None) -> list[LineSegment]:
    """Single pass over a row profile; O(m)."""
    if profile.axis != ROW:
        raise InputError("line segmentation needs a row profile")
    lines = []
    start = None
    prev_end = 0
    for x, v in enumerate(profile.values, start=1):
        if v > tau:
            if start is None:
                start = x
        elif start is not None:
            lines.append(LineSegment((start, x - 1), start - prev_end - 1))
            prev_end = x - 1
            start = None
    if start is not None:
        end = len(profile.values)
        lines.append(LineSegment((start, end), start - prev_end - 1))
    if ledger is not None:
        ledger.profile_steps += len(profile.values)
    return lines


class ThresholdEstimate(NamedTuple):
    value: int
    method: str  # "two-means", "median-fallback" or "no-gaps"


def word_space_threshold(gaps: Sequence[int]) -> ThresholdEstimate:
    """Word-space threshold with the method that produced it."""
    gaps = [int(g) for g in gaps]
    if not gaps:
        return ThresholdEstimate(2, "no-gaps")
    if len(gaps) >= 4:
        c1, c2 = Fraction(min(gaps)), Fraction(max(gaps))
        for _ in range(100):
            low = [g for g in gaps if abs(g - c1) <= abs(g - c2)]
            high = [g for g in gaps if abs(g - c1) > abs(g - c2)]
            n1 = Fraction(sum(low), len(low)) if low else c1
            n2 = Fraction(sum(high), len(high)) if high else c2
            if (n1, n2) == (c1, c2):
                break
            c1, c2 = n1, n2
        if c1 < c2 and c2 >= 2 * c1:
            return ThresholdEstimate(math.ceil((c1 + c2) / 2), "two-means")
    med = Fraction(statistics.median(gaps))
    return ThresholdEstimate(max(2, math.ceil(Fraction(5, 2) * med)), "median-fallback")


def estimate_word_space_threshold(gaps: Sequence[int]) -> int:
    return word_space_threshold(gaps).value


def _check_line(doc: RleDocument, line: LineSegment):
    r0, r1 = line.rows
    if r0 > r1 or r0 < 1 or r1 > doc.height:
        raise BoundsError(f"line band [{r0}, {r1}] outside rows 1..{doc.height}")


def scan_chars(doc: RleDocument, line: LineSegment,
               ledger: Optional[CostLedger] = None) -> list[Interval]:
    """Column intervals of maximal non-space runs within the line band."""
    _check_line(doc, line)
    scanner = ColumnScanner(doc, line.rows, ledger)
    chars = []
    start = None
    for col in scanner:
        if col.is_space():
            if start is not None:
                chars.append((start, col.column - 1))
                start = None
        elif start is None:
            start = col.column
    if start is not None:
        chars.append((start, doc.width))
    return chars


def char_gaps(chars: Sequence[Interval]) -> list[int]:
    return [b[0] - a[1] - 1 for a, b in zip(chars, chars[1:])]


def group_words(chars: Sequence[Interval], threshold: int,
                rows: Interval) -> tuple[WordSegment, ...]:
    """A gap of at least ``threshold`` blank columns starts a new word."""
    if threshold < 1:
        raise InputError(f"word-space threshold must be >= 1, got {threshold}")
    groups: list[list[Interval]] = []
    prev = None
    for c in chars:
        if prev is None or c[0] - prev[1] - 1 >= threshold:
            groups.append([])
        groups[-1].append(c)
        prev = c
    return tuple(
        WordSegment((g[0][0], g[-1][1]), rows, tuple(CharSegment(c, rows) for c in g))
        for g in groups)


def segment_words_chars(doc: RleDocument, line: LineSegment, threshold: int,
                        ledger: Optional[CostLedger] = None
                        ) -> tuple[tuple[WordSegment, ...], tuple[CharSegment, ...]]:
    chars = scan_chars(doc, line, ledger)
    words = group_words(chars, threshold, line.rows)
    return words, tuple(c for w in words for c in w.chars)


def _resolve_thresholds(per_line_chars, threshold, gap_scope):
    if threshold != AUTO:
        t = int(threshold)
        if t < 1:
            raise InputError(f"threshold must be >= 1 or 'auto', got {threshold}")
        return [ThresholdEstimate(t, "fixed")] * len(per_line_chars)
    if gap_scope == "page":
        gaps = [g for chars in per_line_chars for g in char_gaps(chars)]
        return [word_space_threshold(gaps)] * len(per_line_chars)
    if gap_scope != "line":
        raise InputError(f"gap_scope must be 'line' or 'page', got {gap_scope!r}")
    return [word_space_threshold(char_gaps(chars)) for chars in per_line_chars]


def assemble(height: int, width: int, lines: Sequence[LineSegment], per_line_chars,
             tau: int, threshold: Union[int, str], gap_scope: str,
             cost: dict) -> SegmentationResult:
    """Group scanned character intervals into the final result."""
    estimates = _resolve_thresholds(per_line_chars, threshold, gap_scope)
    out = tuple(
        SegmentedLine(ln, est.value, est.method, group_words(chars, est.value, ln.rows))
        for ln, chars, est in zip(lines, per_line_chars, estimates))
    config = {
        "tau": tau,
        "threshold": threshold if threshold == AUTO else int(threshold),
        "gap_scope": gap_scope,
        "line_thresholds": [e.value for e in estimates],
        "threshold_methods": [e.method for e in estimates],
    }
    return SegmentationResult(height, width, out, config, cost)


def segment_document(doc: RleDocument, tau: int = 0,
                     threshold: Union[int, str] = AUTO, gap_scope: str = "line",
                     ledger: Optional[CostLedger] = None) -> SegmentationResult:
    """Row profile, line split, then one band scan per line."""
    ledger = ledger if ledger is not None else CostLedger()
    if threshold != AUTO and int(threshold) < 1:
        raise InputError(f"threshold must be >= 1 or 'auto', got {threshold}")
    lines = segment_lines(row_profile(doc, ledger), tau, ledger)
    per_line_chars = [scan_chars(doc, ln, ledger) for ln in lines]
    return assemble(doc.height, doc.width, lines, per_line_chars,
                    tau, threshold, gap_scope, ledger.as_dict())
