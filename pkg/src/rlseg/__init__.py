"""Segment run-length compressed binary text images into lines, words and characters."""

from .bitmap import BitImage, GroundTruth, LayoutSpec, load_pbm, save_pbm, synth_doc
from .cost import CostLedger
from .evaluation import Metrics, cost_report, evaluate, reference_segment
from .mhcodec import MhBitstream, mh_decode, mh_encode
from .profile import ColumnScanner, ColumnTransitions, ProfileCurve, column_profile, new_scanner, row_profile
from .rle import RleDocument, RleRow, compress, decompress, to_padded_matrix
from .segment import (
    LineSegment, SegmentationResult, estimate_word_space_threshold, segment_document,
    segment_lines, segment_words_chars,
)

__all__ = [
    "BitImage", "GroundTruth", "LayoutSpec", "load_pbm", "save_pbm", "synth_doc",
    "CostLedger", "Metrics", "cost_report", "evaluate", "reference_segment",
    "MhBitstream", "mh_decode", "mh_encode",
    "ColumnScanner", "ColumnTransitions", "ProfileCurve", "column_profile", "new_scanner",
    "row_profile", "RleDocument", "RleRow", "compress", "decompress", "to_padded_matrix",
    "LineSegment", "SegmentationResult", "estimate_word_space_threshold",
    "segment_document", "segment_lines", "segment_words_chars",
]
