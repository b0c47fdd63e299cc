"""CCITT Group 3 one-dimensional (Modified Huffman) run-length codec.

Decoding stops at run lengths and yields an :class:`RleDocument`; no pixel
buffer is ever built.

Container layout (``.mh``)::

    b"MH1D" | width (u32 BE) | height (u32 BE) | bitstream

The bitstream is MSB-first: an EOL before every row, each row coded as
alternating white/black runs starting with white, and one final EOL. There
are no fill bits; the last partial byte is zero padded.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from typing import Optional, Union

from .cost import CostLedger
from .errors import DecodeError, FormatError, FramingError, RowLengthError, TruncationError
from .rle import RleDocument, RleRow

MAGIC = b"MH1D"
HEADER = struct.Struct(">4sII")
EOL = "000000000001"
MAX_MAKEUP = 2560

# ITU-T T.4 terminating codes, run lengths 0..63
WHITE_TERMINATING = (
    "00110101", "000111", "0111", "1000", "1011", "1100", "1110", "1111",
    "10011", "10100", "00111", "01000", "001000", "000011", "110100", "110101",
    "101010", "101011", "0100111", "0001100", "0001000", "0010111", "0000011", "0000100",
    "0101000", "0101011", "0010011", "0100100", "0011000", "00000010", "00000011", "00011010",
    "00011011", "00010010", "00010011", "00010100", "00010101", "00010110", "00010111", "00101000",
    "00101001", "00101010", "00101011", "00101100", "00101101", "00000100", "00000101", "00001010",
    "00001011", "01010010", "01010011", "01010100", "01010101", "00100100", "00100101", "01011000",
    "01011001", "01011010", "01011011", "01001010", "01001011", "00110010", "00110011", "00110100",
)
BLACK_TERMINATING = (
    "0000110111", "010", "11", "10", "011", "0011", "0010", "00011",
    "000101", "000100", "0000100", "0000101", "0000111", "00000100", "00000111", "000011000",
    "0000010111", "0000011000", "0000001000", "00001100111", "00001101000", "00001101100",
    "00000110111", "00000101000", "00000010111", "00000011000", "000011001010", "000011001011",
    "000011001100", "000011001101", "000001101000", "000001101001", "000001101010",
    "000001101011", "000011010010", "000011010011", "000011010100", "000011010101",
    "000011010110", "000011010111", "000001101100", "000001101101", "000011011010",
    "000011011011", "000001010100", "000001010101", "000001010110", "000001010111",
    "000001100100", "000001100101", "000001010010", "000001010011", "000000100100",
    "000000110111", "000000111000", "000000100111", "000000101000", "000001011000",
    "000001011001", "000000101011", "000000101100", "000001011010", "000001100110",
    "000001100111",
)
# makeup codes for 64, 128, ..., 1728
WHITE_MAKEUP = (
    "11011", "10010", "010111", "0110111", "00110110", "00110111", "01100100", "01100101",
    "01101000", "01100111", "011001100", "011001101", "011010010", "011010011", "011010100",
    "011010101", "011010110", "011010111", "011011000", "011011001", "011011010", "011011011",
    "010011000", "010011001", "010011010", "011000", "010011011",
)
BLACK_MAKEUP = (
    "0000001111", "000011001000", "000011001001", "000001011011", "000000110011",
    "000000110100", "000000110101", "0000001101100", "0000001101101", "0000001001010",
    "0000001001011", "0000001001100", "0000001001101", "0000001110010", "0000001110011",
    "0000001110100", "0000001110101", "0000001110110", "0000001110111", "0000001010010",
    "0000001010011", "0000001010100", "0000001010101", "0000001011010", "0000001011011",
    "0000001100100", "0000001100101",
)
# makeup codes for 1792, 1856, ..., 2560, shared by both colours
EXTENDED_MAKEUP = (
    "00000001000", "00000001100", "00000001101", "000000010010", "000000010011",
    "000000010100", "000000010101", "000000010110", "000000010111", "000000011100",
    "000000011101", "000000011110", "000000011111",
)


@dataclass(frozen=True)
class MhCodeTable:
    """One colour alphabet: ``codes`` maps run length (or ``"EOL"``) to a codeword."""

    colour: str
    codes: dict

    def encode_run(self, length: int) -> list[str]:
        out = []
        while length >= MAX_MAKEUP:
            out.append(self.codes[MAX_MAKEUP])
            length -= MAX_MAKEUP
        if length >= 64:
            out.append(self.codes[length - length % 64])
            length %= 64
        out.append(self.codes[length])
        return out

    def prefix_conflicts(self) -> list[tuple]:
        """Pairs of symbols where one codeword prefixes the other."""
        items = sorted(self.codes.items(), key=lambda kv: kv[1])
        bad = []
        # in lexicographic order a prefix sorts immediately before its extensions
        for (s1, c1), (s2, c2) in zip(items, items[1:]):
            if c2.startswith(c1):
                bad.append((s1, s2))
        return bad


def _build_table(colour, terminating, makeup) -> MhCodeTable:
    codes = {i: c for i, c in enumerate(terminating)}
    codes.update({64 * (i + 1): c for i, c in enumerate(makeup)})
    codes.update({1792 + 64 * i: c for i, c in enumerate(EXTENDED_MAKEUP)})
    codes["EOL"] = EOL
    return MhCodeTable(colour, codes)


WHITE = _build_table("white", WHITE_TERMINATING, WHITE_MAKEUP)
BLACK = _build_table("black", BLACK_TERMINATING, BLACK_MAKEUP)

_PEEK = max(len(c) for t in (WHITE, BLACK) for c in t.codes.values())


def _lookup(table: MhCodeTable) -> list:
    """Direct-indexed decode table over the next ``_PEEK`` bits."""
    lut = [None] * (1 << _PEEK)
    for sym, code in table.codes.items():
        shift = _PEEK - len(code)
        base = int(code, 2) << shift
        for i in range(base, base + (1 << shift)):
            if lut[i] is not None:
                raise RuntimeError(f"{table.colour} code table is not prefix-free at {sym}")
            lut[i] = (sym, len(code))
    return lut


_LUT = (_lookup(WHITE), _lookup(BLACK))


@dataclass(frozen=True)
class MhBitstream:
    width: int
    height: int
    data: bytes  # body only, without the container header

    def to_bytes(self) -> bytes:
        return HEADER.pack(MAGIC, self.width, self.height) + self.data

    @classmethod
    def from_bytes(cls, raw: bytes) -> "MhBitstream":
        if len(raw) < HEADER.size:
            raise TruncationError(
                f"container needs {HEADER.size} header bytes, got {len(raw)}", len(raw))
        magic, width, height = HEADER.unpack_from(raw)
        if magic != MAGIC:
            raise FormatError(f"bad container magic {magic!r}", 0)
        if width < 1:
            raise FormatError("declared width must be positive", 4)
        return cls(width, height, bytes(raw[HEADER.size:]))


def mh_encode(doc: RleDocument, ledger: Optional[CostLedger] = None) -> MhBitstream:
    parts = []
    tables = (WHITE, BLACK)
    for row in doc.rows:
        parts.append(EOL)
        for i, run in enumerate(row.runs):
            parts.extend(tables[i & 1].encode_run(run))
    parts.append(EOL)
    bits = "".join(parts)
    if ledger is not None:
        ledger.codewords += len(parts)
    pad = -len(bits) % 8
    bits += "0" * pad
    data = int(bits, 2).to_bytes(len(bits) // 8, "big") if bits else b""
    return MhBitstream(doc.width, doc.height, data)


def mh_decode(stream: Union[MhBitstream, bytes],
              ledger: Optional[CostLedger] = None) -> RleDocument:
    if not isinstance(stream, MhBitstream):
        stream = MhBitstream.from_bytes(stream)
    width, height = stream.width, stream.height
    nbits = len(stream.data) * 8
    # zero lookahead past the end keeps every peek full width
    bits = (format(int.from_bytes(stream.data, "big"), f"0{nbits}b") if nbits else "") + "0" * _PEEK

    def peek(pos):
        return int(bits[pos:pos + _PEEK], 2)

    eol = int(EOL, 2)
    eol_len = len(EOL)
    pos = 0
    codewords = 0
    rows = []

    if height == 0 and not stream.data.strip(b"\x00"):
        return RleDocument((), width)

    for r in range(1, height + 1):
        if pos + eol_len > nbits or peek(pos) >> (_PEEK - eol_len) != eol:
            raise FramingError("missing EOL before row", bit_offset=pos, row=r)
        pos += eol_len
        runs = []
        filled = 0
        colour = 0
        acc = 0
        while True:
            if pos >= nbits:
                raise FramingError("stream ends inside row", bit_offset=pos, row=r)
            hit = _LUT[colour][peek(pos)]
            if hit is None:
                raise DecodeError(
                    f"unknown {('white', 'black')[colour]} codeword prefix",
                    bit_offset=pos, row=r)
            sym, length = hit
            if sym == "EOL":
                raise RowLengthError(
                    f"row ends after {filled + acc} pixels, expected {width}",
                    bit_offset=pos, row=r)
            if pos + length > nbits:
                raise FramingError("codeword runs past end of stream", bit_offset=pos, row=r)
            pos += length
            codewords += 1
            acc += sym
            if sym >= 64:
                continue  # makeup code; a terminating code of the same colour follows
            filled += acc
            if filled > width:
                raise RowLengthError(
                    f"row runs sum to {filled}, exceeding width {width}",
                    bit_offset=pos, row=r)
            runs.append(acc)
            acc = 0
            colour ^= 1
            if filled == width:
                break
        rows.append(RleRow(tuple(runs), width))

    if pos + eol_len > nbits or peek(pos) >> (_PEEK - eol_len) != eol:
        raise FramingError("missing terminating EOL", bit_offset=pos)
    pos += eol_len
    trailing = nbits - pos
    if trailing >= 8 or "1" in bits[pos:nbits]:
        raise FramingError("unexpected data after terminating EOL", bit_offset=pos)
    if ledger is not None:
        ledger.codewords += codewords + height + 1
    return RleDocument(tuple(rows), width)
