"""Binary rasters, PBM I/O, ground truth, and synthetic test pages.

Coordinates are 1-based and inclusive everywhere: ``x`` indexes rows,
``y`` indexes columns, and a pixel value of 1 is black ink.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Sequence, Union

import numpy as np

from .errors import DimensionError, FormatError, TruncationError

Interval = tuple[int, int]


@dataclass(frozen=True)
class BitImage:
    height: int
    width: int
    pixels: bytes  # row-major, one byte (0 or 1) per pixel

    def __post_init__(self):
        if self.height < 1 or self.width < 1:
            raise DimensionError(
                f"image dimensions must be positive, got {self.height}x{self.width}")
        if len(self.pixels) != self.height * self.width:
            raise DimensionError(
                f"expected {self.height * self.width} pixels, got {len(self.pixels)}")
        if self.pixels.translate(None, b"\x00\x01"):
            raise DimensionError("pixel values must be 0 or 1")

    @classmethod
    def from_rows(cls, rows: Sequence[Union[str, Sequence[int]]]) -> "BitImage":
        """Build from rows given as '0'/'1' strings or integer sequences."""
        if not rows:
            raise DimensionError("at least one row is required")
        data = []
        for row in rows:
            if isinstance(row, str):
                data.append(bytes(int(c) for c in row))
            else:
                data.append(bytes(row))
        width = len(data[0])
        if any(len(r) != width for r in data):
            raise DimensionError("rows have unequal lengths")
        return cls(len(data), width, b"".join(data))

    @classmethod
    def from_array(cls, array) -> "BitImage":
        a = np.asarray(array)
        if a.ndim != 2:
            raise DimensionError(f"expected a 2-D array, got {a.ndim}-D")
        return cls(a.shape[0], a.shape[1], (a != 0).astype(np.uint8).tobytes())

    @classmethod
    def blank(cls, height: int, width: int) -> "BitImage":
        return cls(height, width, bytes(height * width))

    def to_array(self) -> np.ndarray:
        return np.frombuffer(self.pixels, dtype=np.uint8).reshape(self.height, self.width)

    def row(self, x: int) -> bytes:
        start = (x - 1) * self.width
        return self.pixels[start:start + self.width]

    def __getitem__(self, xy: tuple[int, int]) -> int:
        x, y = xy
        if not (1 <= x <= self.height and 1 <= y <= self.width):
            raise IndexError(f"pixel ({x}, {y}) outside {self.height}x{self.width}")
        return self.pixels[(x - 1) * self.width + (y - 1)]

    def rows_as_strings(self) -> list[str]:
        return ["".join("01"[b] for b in self.row(x)) for x in range(1, self.height + 1)]


# --- PBM ---------------------------------------------------------------------

_WS = b" \t\r\n\v\f"


class _HeaderReader:
    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0

    def skip_space(self):
        data = self.data
        while self.pos < len(data):
            c = data[self.pos:self.pos + 1]
            if c == b"#":
                end = data.find(b"\n", self.pos)
                self.pos = len(data) if end < 0 else end + 1
            elif c in _WS:
                self.pos += 1
            else:
                break

    def integer(self, what: str) -> int:
        self.skip_space()
        start = self.pos
        while self.pos < len(self.data) and self.data[self.pos:self.pos + 1].isdigit():
            self.pos += 1
        if start == self.pos:
            if start >= len(self.data):
                raise TruncationError(f"header ends before {what}", start)
            raise FormatError(f"expected decimal {what}", start)
        return int(self.data[start:self.pos])


def load_pbm(data: bytes) -> BitImage:
    """Parse a plain (P1) or raw (P4) PBM stream."""
    if len(data) < 2:
        raise TruncationError("stream too short for a PBM magic number", 0)
    magic = data[:2]
    if magic not in (b"P1", b"P4"):
        raise FormatError(f"bad PBM magic {magic!r}", 0)
    reader = _HeaderReader(data)
    reader.pos = 2
    width = reader.integer("width")
    height = reader.integer("height")
    if width < 1 or height < 1:
        raise FormatError(f"non-positive dimensions {width}x{height}", reader.pos)

    if magic == b"P1":
        need = width * height
        start = reader.pos
        digits = data[start:].translate(None, _WS)
        bad = digits[:need].translate(None, b"01")
        if bad:
            # report the first offending byte at its position in the stream
            pos = start
            while data[pos] in _WS or data[pos] in b"01":
                pos += 1
            raise FormatError(f"invalid P1 pixel character {chr(data[pos])!r}", pos)
        if len(digits) < need:
            raise TruncationError(f"expected {need} pixels, found {len(digits)}", len(data))
        pixels = np.frombuffer(digits[:need], dtype=np.uint8) - 0x30
        return BitImage(height, width, pixels.tobytes())

    # a single whitespace byte separates the header from raster data
    if reader.pos >= len(data):
        raise TruncationError("missing raster data", reader.pos)
    if data[reader.pos:reader.pos + 1] not in _WS:
        raise FormatError("expected whitespace after PBM header", reader.pos)
    start = reader.pos + 1
    stride = (width + 7) // 8
    raster = data[start:start + stride * height]
    if len(raster) < stride * height:
        raise TruncationError(
            f"expected {stride * height} raster bytes, found {len(raster)}",
            start + len(raster))
    packed = np.frombuffer(raster, dtype=np.uint8).reshape(height, stride)
    bits = np.unpackbits(packed, axis=1)[:, :width]
    return BitImage(height, width, bits.tobytes())


def save_pbm(img: BitImage, ascii: bool = False) -> bytes:
    if ascii:
        out = [f"P1\n{img.width} {img.height}\n".encode()]
        for x in range(1, img.height + 1):
            row = img.row(x)
            # plain PBM lines should stay under 70 characters
            for i in range(0, img.width, 35):
                out.append(b" ".join(b"01"[b:b + 1] for b in row[i:i + 35]) + b"\n")
        return b"".join(out)
    packed = np.packbits(img.to_array(), axis=1)
    return f"P4\n{img.width} {img.height}\n".encode() + packed.tobytes()


# --- ground truth ------------------------------------------------------------

@dataclass(frozen=True)
class CharBox:
    cols: Interval


@dataclass(frozen=True)
class WordBox:
    cols: Interval
    chars: tuple[CharBox, ...] = ()


@dataclass(frozen=True)
class LineBox:
    rows: Interval
    words: tuple[WordBox, ...] = ()


def _check_children(children: Sequence[Interval], parent: Interval, what: str):
    prev_end = None
    for lo, hi in children:
        if lo > hi:
            raise DimensionError(f"{what} interval [{lo}, {hi}] is inverted")
        if lo < parent[0] or hi > parent[1]:
            raise DimensionError(f"{what} interval [{lo}, {hi}] escapes parent {list(parent)}")
        if prev_end is not None and lo <= prev_end:
            raise DimensionError(f"{what} intervals overlap or are unsorted at [{lo}, {hi}]")
        prev_end = hi


@dataclass(frozen=True)
class GroundTruth:
    height: int
    width: int
    lines: tuple[LineBox, ...] = ()

    def __post_init__(self):
        _check_children([ln.rows for ln in self.lines], (1, self.height), "line")
        for ln in self.lines:
            _check_children([w.cols for w in ln.words], (1, self.width), "word")
            for w in ln.words:
                _check_children([c.cols for c in w.chars], w.cols, "char")

    def to_dict(self) -> dict:
        return {
            "height": self.height,
            "width": self.width,
            "lines": [
                {
                    "rows": list(ln.rows),
                    "words": [
                        {"cols": list(w.cols), "chars": [{"cols": list(c.cols)} for c in w.chars]}
                        for w in ln.words
                    ],
                }
                for ln in self.lines
            ],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "GroundTruth":
        try:
            lines = tuple(
                LineBox(
                    tuple(ln["rows"]),
                    tuple(
                        WordBox(tuple(w["cols"]),
                                tuple(CharBox(tuple(c["cols"])) for c in w.get("chars", ())))
                        for w in ln.get("words", ())
                    ),
                )
                for ln in d["lines"]
            )
            return cls(int(d["height"]), int(d["width"]), lines)
        except (KeyError, TypeError) as exc:
            raise FormatError(f"ground truth JSON missing or malformed field: {exc}") from exc

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1)

    @classmethod
    def from_json(cls, text: str) -> "GroundTruth":
        try:
            return cls.from_dict(json.loads(text))
        except json.JSONDecodeError as exc:
            raise FormatError(f"invalid JSON: {exc.msg}", exc.pos) from exc


# --- synthetic pages ---------------------------------------------------------

IntOrRange = Union[int, tuple[int, int]]


@dataclass(frozen=True)
class LayoutSpec:
    """Parameters for :func:`synth_doc`.

    ``words_per_line``, ``chars_per_word`` and ``glyph_width`` accept either a
    fixed value or an inclusive ``(lo, hi)`` range sampled per item.
    ``perforation`` is the probability that an interior glyph pixel is white.
    """

    lines: int = 3
    words_per_line: IntOrRange = 4
    chars_per_word: IntOrRange = 5
    glyph_width: IntOrRange = 5
    glyph_height: int = 7
    char_gap: int = 1
    word_gap: int = 5
    line_gap: int = 4
    margin: int = 3
    perforation: float = 0.25
    page_width: int | None = None
    page_height: int | None = None


def _range(v: IntOrRange) -> tuple[int, int]:
    return (v, v) if isinstance(v, int) else (int(v[0]), int(v[1]))


def _validate_layout(spec: LayoutSpec):
    if spec.lines < 0:
        raise DimensionError("lines must be >= 0")
    for name in ("char_gap", "word_gap", "line_gap"):
        if getattr(spec, name) < 1:
            raise DimensionError(f"{name} must be >= 1")
    if spec.margin < 0:
        raise DimensionError("margin must be >= 0")
    if spec.glyph_height < 1:
        raise DimensionError("glyph_height must be >= 1")
    for name in ("glyph_width", "words_per_line", "chars_per_word"):
        lo, hi = _range(getattr(spec, name))
        if lo < 1 or hi < lo:
            raise DimensionError(f"{name} range ({lo}, {hi}) must satisfy 1 <= lo <= hi")
    if spec.char_gap >= spec.word_gap:
        raise DimensionError(
            f"char_gap ({spec.char_gap}) must be less than word_gap ({spec.word_gap})")
    if not 0.0 <= spec.perforation <= 1.0:
        raise DimensionError("perforation must lie in [0, 1]")


def synth_doc(spec: LayoutSpec, seed: int = 0) -> tuple[BitImage, GroundTruth]:
    """Render a ground-truthed page of rectangular glyphs.

    Glyphs keep their full border so every truth box is tight; perforation
    only whitens interior pixels.
    """
    _validate_layout(spec)
    rng = np.random.default_rng(seed)

    def draw(v: IntOrRange) -> int:
        lo, hi = _range(v)
        return int(rng.integers(lo, hi + 1))

    # layout first, relative to the page's left margin
    plan = []  # per line: list of words, each a list of glyph widths
    for _ in range(spec.lines):
        words = []
        for _ in range(draw(spec.words_per_line)):
            words.append([draw(spec.glyph_width) for _ in range(draw(spec.chars_per_word))])
        plan.append(words)

    def line_width(words):
        w = sum(sum(g) + spec.char_gap * (len(g) - 1) for g in words)
        return w + spec.word_gap * (len(words) - 1)

    content_w = max((line_width(w) for w in plan), default=0)
    content_h = spec.lines * spec.glyph_height + spec.line_gap * max(spec.lines - 1, 0)
    width = spec.page_width if spec.page_width is not None else content_w + 2 * spec.margin
    height = spec.page_height if spec.page_height is not None else content_h + 2 * spec.margin
    if width < 1 or height < 1:
        raise DimensionError(f"page would be {height}x{width}; increase margin")
    if content_w + 2 * spec.margin > width:
        raise DimensionError(
            f"page_width {width} < widest line {content_w} + 2*margin {2 * spec.margin}")
    if content_h + 2 * spec.margin > height:
        raise DimensionError(
            f"page_height {height} < text block {content_h} + 2*margin {2 * spec.margin}")

    canvas = np.zeros((height, width), dtype=np.uint8)
    lines = []
    top = spec.margin + 1
    for words in plan:
        bottom = top + spec.glyph_height - 1
        left = spec.margin + 1
        word_boxes = []
        for glyphs in words:
            chars = []
            for k, gw in enumerate(glyphs):
                if k:
                    left += spec.char_gap
                right = left + gw - 1
                glyph = np.ones((spec.glyph_height, gw), dtype=np.uint8)
                if spec.perforation > 0 and gw > 2 and spec.glyph_height > 2:
                    holes = rng.random((spec.glyph_height - 2, gw - 2)) < spec.perforation
                    glyph[1:-1, 1:-1][holes] = 0
                canvas[top - 1:bottom, left - 1:right] = glyph
                chars.append(CharBox((left, right)))
                left = right + 1
            word_boxes.append(WordBox((chars[0].cols[0], chars[-1].cols[1]), tuple(chars)))
            left += spec.word_gap
        lines.append(LineBox((top, bottom), tuple(word_boxes)))
        top = bottom + 1 + spec.line_gap

    img = BitImage.from_array(canvas)
    return img, GroundTruth(height, width, tuple(lines))


def iter_truth_boxes(truth: GroundTruth) -> Iterable[tuple[str, tuple[int, int, int, int]]]:
    """Yield ``(level, (r0, r1, c0, c1))`` for every box in reading order."""
    for ln in truth.lines:
        yield "lines", (ln.rows[0], ln.rows[1], 0, 0)
        for w in ln.words:
            yield "words", (ln.rows[0], ln.rows[1], w.cols[0], w.cols[1])
            for c in w.chars:
                yield "chars", (ln.rows[0], ln.rows[1], c.cols[0], c.cols[1])

