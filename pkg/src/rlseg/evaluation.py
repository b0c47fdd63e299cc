"""Pixel-domain reference segmenter, P/R/F metrics and cost reports."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Iterable, Union

import numpy as np

from .bitmap import BitImage, GroundTruth, iter_truth_boxes
from .errors import InputError
from .segment import (
    AUTO, CharSegment, LineSegment, SegmentationResult, SegmentedLine, WordSegment,
    word_space_threshold,
)
from .rle import RleDocument

LEVELS = ("lines", "words", "chars")


def _true_runs(mask: np.ndarray) -> list[tuple[int, int]]:
    """1-based inclusive intervals where ``mask`` is True."""
    padded = np.concatenate(([False], mask.astype(bool), [False]))
    edges = np.flatnonzero(padded[1:] != padded[:-1])
    return [(int(a) + 1, int(b)) for a, b in zip(edges[::2], edges[1::2])]


def reference_segment(img: BitImage, tau: int = 0, threshold: Union[int, str] = AUTO,
                      gap_scope: str = "line") -> SegmentationResult:
    """Same box semantics as ``segment_document``, computed on raw pixels."""
    a = img.to_array().astype(np.int64)
    m, n = a.shape
    line_rows = _true_runs(a.sum(axis=1) > tau)
    occupied = [_true_runs(a[r0 - 1:r1].any(axis=0)) for r0, r1 in line_rows]
    gaps = [[c[0] - p[1] - 1 for p, c in zip(chars, chars[1:])] for chars in occupied]

    if threshold != AUTO:
        if int(threshold) < 1:
            raise InputError(f"threshold must be >= 1 or 'auto', got {threshold}")
        ests = [(int(threshold), "fixed")] * len(line_rows)
    elif gap_scope == "page":
        ests = [tuple(word_space_threshold([g for gs in gaps for g in gs]))] * len(line_rows)
    else:
        ests = [tuple(word_space_threshold(gs)) for gs in gaps]

    lines = []
    prev_end = 0
    for (r0, r1), chars, gs, (t, method) in zip(line_rows, occupied, gaps, ests):
        # word starts: first char, and every char preceded by a gap >= t
        starts = [0] + [i + 1 for i, g in enumerate(gs) if g >= t]
        ends = starts[1:] + [len(chars)]
        words = tuple(
            WordSegment((chars[s][0], chars[e - 1][1]), (r0, r1),
                        tuple(CharSegment(c, (r0, r1)) for c in chars[s:e]))
            for s, e in zip(starts, ends) if chars)
        lines.append(SegmentedLine(LineSegment((r0, r1), r0 - prev_end - 1), t, method, words))
        prev_end = r1

    config = {
        "tau": tau,
        "threshold": threshold if threshold == AUTO else int(threshold),
        "gap_scope": gap_scope,
        "line_thresholds": [e[0] for e in ests],
        "threshold_methods": [e[1] for e in ests],
    }
    pixel_ops = m * n + sum((r1 - r0 + 1) * n for r0, r1 in line_rows)
    return SegmentationResult(m, n, tuple(lines), config, {"pixel_ops": pixel_ops})


# --- metrics -----------------------------------------------------------------

def f_measure(precision: float, recall: float) -> float:
    if precision + recall == 0:
        return 0.0
    return 2 * precision * recall / (precision + recall)


@dataclass(frozen=True)
class Metrics:
    tp: int
    fp: int
    fn: int

    @property
    def samples(self) -> int:
        return self.tp + self.fn

    @property
    def precision(self) -> float:
        # nothing predicted: vacuously precise
        return 100.0 if self.tp + self.fp == 0 else 100.0 * self.tp / (self.tp + self.fp)

    @property
    def recall(self) -> float:
        return 100.0 if self.tp + self.fn == 0 else 100.0 * self.tp / (self.tp + self.fn)

    @property
    def f_measure(self) -> float:
        return f_measure(self.precision, self.recall)

    def __add__(self, other: "Metrics") -> "Metrics":
        return Metrics(self.tp + other.tp, self.fp + other.fp, self.fn + other.fn)

    def as_dict(self) -> dict:
        d = asdict(self)
        d.update(precision=self.precision, recall=self.recall, f_measure=self.f_measure)
        return d


def _as_truth(x) -> GroundTruth:
    return x.to_truth() if isinstance(x, SegmentationResult) else x


def _match(pred: list, truth: list, tol: int) -> Metrics:
    used = [False] * len(truth)
    tp = 0
    for p in pred:
        for j, t in enumerate(truth):
            if not used[j] and all(abs(a - b) <= tol for a, b in zip(p, t)):
                used[j] = True
                tp += 1
                break
    return Metrics(tp, len(pred) - tp, len(truth) - tp)


def evaluate(pred, truth, tol: int = 0) -> dict[str, Metrics]:
    """Greedy one-to-one matching per level in reading order.

    A predicted box matches the first unmatched truth box whose every
    boundary lies within ``tol`` pixels.
    """
    pred, truth = _as_truth(pred), _as_truth(truth)
    if (pred.height, pred.width) != (truth.height, truth.width):
        raise InputError(
            f"page size mismatch: prediction {pred.height}x{pred.width}, "
            f"truth {truth.height}x{truth.width}")
    if tol < 0:
        raise InputError("tolerance must be >= 0")
    by_level = {lv: ([], []) for lv in LEVELS}
    for level, box in iter_truth_boxes(pred):
        by_level[level][0].append(box)
    for level, box in iter_truth_boxes(truth):
        by_level[level][1].append(box)
    return {lv: _match(p, t, tol) for lv, (p, t) in by_level.items()}


def evaluate_corpus(pairs: Iterable, tol: int = 0) -> dict[str, Metrics]:
    total = {lv: Metrics(0, 0, 0) for lv in LEVELS}
    for pred, truth in pairs:
        for lv, m in evaluate(pred, truth, tol).items():
            total[lv] = total[lv] + m
    return total


def format_table(metrics: dict[str, Metrics]) -> str:
    rows = [f"{'Level':<8}{'Samples':>9}{'Precision(%)':>14}{'Recall(%)':>11}{'F-Measure':>11}"]
    for lv, m in metrics.items():
        rows.append(f"{lv.capitalize():<8}{m.samples:>9}{m.precision:>14.2f}"
                    f"{m.recall:>11.2f}{m.f_measure:>11.2f}")
    return "\n".join(rows)


# --- cost --------------------------------------------------------------------

@dataclass(frozen=True)
class CostReport:
    height: int
    width: int
    additions: int
    addition_bound: int   # m * ceil(n'/2)
    baseline: int         # m * n', additions of the pixel-domain profile
    pops: int
    advances: int
    pixel_ops: int
    run_entries: int      # stored run lengths, the compressed size in integers

    @property
    def ratio(self) -> float:
        return self.additions / self.baseline if self.baseline else 0.0

    def as_dict(self) -> dict:
        d = asdict(self)
        d["ratio"] = self.ratio
        return d

    def to_csv(self) -> str:
        d = self.as_dict()
        return ",".join(d) + "\n" + ",".join(str(v) for v in d.values()) + "\n"


def cost_report(doc: RleDocument, result: SegmentationResult) -> CostReport:
    c = result.cost
    return CostReport(
        height=doc.height,
        width=doc.width,
        additions=c.get("additions", 0),
        addition_bound=doc.height * math.ceil(doc.width / 2),
        baseline=doc.height * doc.width,
        pops=c.get("pops", 0),
        advances=c.get("advances", 0),
        pixel_ops=c.get("pixel_ops", 0),
        run_entries=doc.total_entries(),
    )
