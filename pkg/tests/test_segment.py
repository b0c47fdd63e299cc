import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from rlseg.bitmap import BitImage, LayoutSpec, synth_doc
from rlseg.cost import CostLedger
from rlseg.errors import BoundsError, InputError
from rlseg.evaluation import reference_segment
from rlseg.profile import ProfileCurve, column_profile, row_profile
from rlseg.rle import RleDocument, compress
from rlseg.segment import (
    LineSegment, estimate_word_space_threshold, segment_document, segment_lines,
    segment_words_chars, word_space_threshold,
)

from conftest import random_image


def curve(values):
    return ProfileCurve("row", tuple(values), 0)


def test_lines_sample(sample_doc):
    assert segment_lines(row_profile(sample_doc)) == [LineSegment((2, 12), 1)]


def test_lines_all_zero():
    assert segment_lines(curve([0] * 7)) == []


def test_lines_two_single_rows():
    assert segment_lines(curve([0, 5, 0, 4, 0])) == [
        LineSegment((2, 2), 1), LineSegment((4, 4), 1)]


def test_lines_touching_page_edges_and_tau():
    assert segment_lines(curve([3, 3, 0, 0, 1, 9])) == [
        LineSegment((1, 2), 0), LineSegment((5, 6), 2)]
    assert segment_lines(curve([3, 3, 0, 0, 1, 9]), tau=1) == [
        LineSegment((1, 2), 0), LineSegment((6, 6), 3)]


def test_lines_reject_column_profile(sample_doc):
    with pytest.raises(InputError):
        segment_lines(column_profile(sample_doc))


def test_lines_single_pass_ledger(sample_doc):
    ledger = CostLedger()
    segment_lines(row_profile(sample_doc), ledger=ledger)
    assert ledger.profile_steps == 13


@pytest.mark.parametrize("gaps, expected, method", [
    ([1, 1, 1, 4, 1, 4], 3, "two-means"),
    ([], 2, "no-gaps"),
    ([2, 2, 2, 2], 5, "median-fallback"),
    ([1], 3, "median-fallback"),
    ([1, 2], 4, "median-fallback"),      # ceil(2.5 * 1.5) = 4
    ([3, 3, 3, 4, 4], 8, "median-fallback"),  # centers 3, 4 fail the 2x separation
    ([2, 2, 2, 7, 7, 9], 5, "two-means"),    # centers 2 and 23/3: ceil(29/6) = 5
])
def test_threshold_estimation(gaps, expected, method):
    est = word_space_threshold(gaps)
    assert (est.value, est.method) == (expected, method)
    assert estimate_word_space_threshold(gaps) == expected


def test_words_chars_sample(sample_doc):
    line = LineSegment((2, 12), 1)
    words, chars = segment_words_chars(sample_doc, line, 2)
    assert [c.cols for c in chars] == [(1, 6), (8, 13)]
    assert [w.cols for w in words] == [(1, 13)]
    words, chars = segment_words_chars(sample_doc, line, 1)
    assert [w.cols for w in words] == [(1, 6), (8, 13)]
    assert [[c.cols for c in w.chars] for w in words] == [[(1, 6)], [(8, 13)]]
    assert all(c.rows == (2, 12) for c in chars)


def test_words_chars_blank_band(sample_doc):
    assert segment_words_chars(sample_doc, LineSegment((13, 13), 0), 2) == ((), ())


def test_words_chars_bounds(sample_doc):
    with pytest.raises(BoundsError):
        segment_words_chars(sample_doc, LineSegment((10, 20), 0), 2)


def test_document_sample(sample_doc):
    r = segment_document(sample_doc, tau=0, threshold=2)
    assert r.boxes() == (((2, 12), (((1, 13), ((1, 6), (8, 13))),)),)
    assert r.config["line_thresholds"] == [2]
    assert r.cost["additions"] == 18
    assert r.cost["advances"] == 14
    assert r.cost["pops"] == 14 * 11


def test_document_synthetic_exact():
    spec = LayoutSpec(lines=2, words_per_line=3, chars_per_word=4, char_gap=1, word_gap=5)
    img, truth = synth_doc(spec, seed=9)
    r = segment_document(compress(img))
    assert r.to_truth() == truth


def test_document_empty_page():
    r = segment_document(RleDocument.from_runs([[30]] * 4, 30))
    assert r.lines == () and r.cost["advances"] == 0


def test_invalid_threshold(sample_doc):
    with pytest.raises(InputError):
        segment_document(sample_doc, threshold=0)
    with pytest.raises(InputError):
        segment_document(sample_doc, gap_scope="column")


def test_page_gap_scope():
    spec = LayoutSpec(lines=3, words_per_line=(1, 4), chars_per_word=(2, 4), word_gap=6)
    img, truth = synth_doc(spec, seed=4)
    r = segment_document(compress(img), gap_scope="page")
    assert len(set(r.config["line_thresholds"])) == 1
    assert r.to_truth() == truth
    assert r.boxes() == reference_segment(img, gap_scope="page").boxes()


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 100_000), st.sampled_from(["auto", 1, 2, 3, 7]), st.integers(0, 2))
def test_matches_pixel_reference_on_random_images(seed, threshold, tau):
    rng = np.random.default_rng(seed)
    img = random_image(rng, 30, 40)
    ours = segment_document(compress(img), tau=tau, threshold=threshold)
    ref = reference_segment(img, tau=tau, threshold=threshold)
    assert ours.boxes() == ref.boxes()
    assert ours.config == ref.config


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 100_000))
def test_structural_invariants(seed):
    rng = np.random.default_rng(seed)
    img = random_image(rng, 30, 40)
    doc = compress(img)
    a = img.to_array()
    r = segment_document(doc)
    for ln in r.lines:
        r0, r1 = ln.rows
        chars = ln.chars
        cols = [c.cols for c in chars]
        assert cols == sorted(cols)
        assert all(b[0] > a_[1] + 1 for a_, b in zip(cols, cols[1:]))
        covered = np.zeros(img.width, dtype=bool)
        for c0, c1 in cols:
            covered[c0 - 1:c1] = True
        assert not a[r0 - 1:r1][:, ~covered].any()
        # words partition chars
        assert [c for w in ln.words for c in w.chars] == chars
    assert r.cost["advances"] <= len(r.lines) * img.width
    assert r.cost["additions"] <= img.height * -(-img.width // 2)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 100_000), st.integers(0, 5), st.integers(0, 5))
def test_lines_invariant_under_blank_padding(seed, top, bottom):
    rng = np.random.default_rng(seed)
    img = random_image(rng, 20, 20)
    a = img.to_array()
    padded = np.vstack([np.zeros((top, img.width), np.uint8), a,
                        np.zeros((bottom, img.width), np.uint8)])
    base = segment_lines(row_profile(compress(img)))
    moved = segment_lines(row_profile(compress(BitImage.from_array(padded))))
    assert [(s.rows[0] + top, s.rows[1] + top) for s in base] == [s.rows for s in moved]
    assert [s.gap_above for s in base[1:]] == [s.gap_above for s in moved[1:]]
    if base:
        assert moved[0].gap_above == base[0].gap_above + top


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 100_000))
def test_threshold_monotonicity(seed):
    rng = np.random.default_rng(seed)
    img = random_image(rng, 20, 40)
    doc = compress(img)
    counts = []
    for t in range(1, img.width + 2):
        r = segment_document(doc, threshold=t)
        counts.append([len(ln.words) for ln in r.lines])
        if t == 1:
            assert all(len(ln.words) == len(ln.chars) for ln in r.lines)
        if t > img.width:
            assert all(len(ln.words) == 1 for ln in r.lines if ln.chars)
    for prev, cur in zip(counts, counts[1:]):
        assert all(c <= p for p, c in zip(prev, cur))
