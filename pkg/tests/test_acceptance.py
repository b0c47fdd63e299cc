"""Exit criteria. Each test prints one PASS/FAIL line, even without ``-s``."""

import math
import time

import numpy as np
import pytest

from rlseg.bitmap import BitImage, load_pbm, save_pbm
from rlseg.cost import CostLedger
from rlseg.evaluation import evaluate, f_measure, reference_segment
from rlseg.mhcodec import mh_decode, mh_encode
from rlseg.profile import ColumnScanner, row_profile
from rlseg.rle import compress, decompress, to_padded_matrix
from rlseg.segment import segment_document, segment_lines

from conftest import SAMPLE_BITS, SAMPLE_MATRIX, random_image


@pytest.fixture
def report(capsys):
    def _report(n, title, ok, detail):
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] criterion {n}: {title}: {detail}")
        assert ok, detail
    return _report


def test_c1_sample_bit_exact(report):
    img = BitImage.from_rows(SAMPLE_BITS)
    best = math.inf
    for _ in range(50):
        t0 = time.perf_counter()
        doc = compress(img)
        matrix = to_padded_matrix(doc)
        back = decompress(doc)
        best = min(best, time.perf_counter() - t0)
    ok = matrix == SAMPLE_MATRIX and back == img and best < 1e-3
    report(1, "13x14 sample bit-exactness", ok,
           f"matrix exact={matrix == SAMPLE_MATRIX}, inverse exact={back == img}, "
           f"best time {best * 1e3:.3f} ms (< 1 ms)")


def test_c2_codec_roundtrips(report):
    rng = np.random.default_rng(20240602)
    n_images, failures = 1000, []
    t0 = time.perf_counter()
    for i in range(n_images):
        img = random_image(rng, 256, 256)
        ascii = i % 4 == 0
        if load_pbm(save_pbm(img, ascii=ascii)) != img:
            failures.append((i, "pbm"))
        doc = compress(img)
        if decompress(doc) != img:
            failures.append((i, "rle"))
        if mh_decode(mh_encode(doc).to_bytes()) != doc:
            failures.append((i, "mh"))
    elapsed = time.perf_counter() - t0
    ok = not failures and elapsed < 60
    report(2, "codec roundtrips", ok,
           f"{n_images} images up to 256x256, {len(failures)} failures, {elapsed:.1f} s (< 60 s)")


def test_c3_virtual_column_oracle(report):
    rng = np.random.default_rng(3)
    n_docs, columns, mismatches = 100, 0, 0
    for _ in range(n_docs):
        img = random_image(rng, 128, 128)
        doc = compress(img)
        a = decompress(doc).to_array()
        for col in ColumnScanner(doc):
            columns += 1
            if list(col.bits) != a[:, col.column - 1].tolist():
                mismatches += 1
    report(3, "virtual-column oracle", mismatches == 0,
           f"{n_docs} documents, {columns} columns checked, {mismatches} mismatches")


def test_c4_compressed_pixel_equivalence(report, synthetic_corpus):
    mismatches = 0
    runs = 0
    for _, img, _ in synthetic_corpus:
        doc = compress(img)
        for threshold in ("auto", 3):
            for tau in (0, 1):
                runs += 1
                ours = segment_document(doc, tau=tau, threshold=threshold)
                ref = reference_segment(img, tau=tau, threshold=threshold)
                if ours.boxes() != ref.boxes():
                    mismatches += 1
    report(4, "compressed/pixel path equivalence", mismatches == 0 and len(synthetic_corpus) >= 200,
           f"{len(synthetic_corpus)} pages, {runs} configurations, {mismatches} mismatches")


def test_c5_perfect_synthetic_segmentation(report, synthetic_corpus):
    eligible = [(k, img, truth) for k, img, truth in synthetic_corpus if k[0] < k[1] / 2]
    imperfect = []
    for key, img, truth in eligible:
        metrics = evaluate(segment_document(compress(img)), truth, tol=0)
        if any((m.precision, m.recall, m.f_measure) != (100.0, 100.0, 100.0)
               for m in metrics.values()):
            imperfect.append(key)
    report(5, "perfect synthetic segmentation", not imperfect and eligible,
           f"{len(eligible)} eligible pages at P=R=F=100 on lines/words/chars, "
           f"{len(imperfect)} imperfect {imperfect[:5]}")


REFERENCE_ROWS = [(96.19, 100, 98.06), (99.09, 100, 99.54), (100, 100, 100),
             (96.96, 99.43, 98.18), (94.39, 88.68, 91.45)]


def test_c6_metric_arithmetic(report):
    errs = [abs(f_measure(p, r) - f) for p, r, f in REFERENCE_ROWS]
    report(6, "metric arithmetic", max(errs) <= 0.01,
           f"{len(REFERENCE_ROWS)} reference rows, max |F - expected| = {max(errs):.4f} (<= 0.01)")


def test_c7_cost_claims(report, synthetic_corpus):
    problems = []
    sample = compress(BitImage.from_rows(SAMPLE_BITS))
    tp = row_profile(sample)
    if not (tp.addition_count <= 91 and 13 * 14 == 182):
        problems.append(f"13x14 sample additions {tp.addition_count}")

    rng = np.random.default_rng(7)
    docs = [compress(img) for _, img, _ in synthetic_corpus]
    docs += [compress(random_image(rng, 64, 64)) for _ in range(100)]
    docs.append(compress(BitImage.from_array(np.indices((31, 47)).sum(axis=0) % 2)))
    for doc in docs:
        m, n = doc.height, doc.width
        if row_profile(doc).addition_count > m * math.ceil(n / 2):
            problems.append(f"addition bound on {m}x{n}")
        ledger = CostLedger()
        lines = segment_lines(row_profile(doc), ledger=ledger)
        if ledger.profile_steps != m:
            problems.append(f"line pass visited {ledger.profile_steps} of {m} rows")
        ledger = CostLedger()
        result = segment_document(doc, ledger=ledger)
        band_rows = sum(ln.rows[1] - ln.rows[0] + 1 for ln in lines)
        if ledger.advances != len(result.lines) * n or ledger.pops != band_rows * n:
            problems.append(f"scan cost {ledger.advances} advances on {m}x{n}")
        if ledger.pixel_ops:
            problems.append("pixel-domain work on the compressed path")
    report(7, "cost claims", not problems,
           f"13x14 sample additions {tp.addition_count} <= 91 vs baseline 182; {len(docs)} documents: "
           f"additions <= m*ceil(n'/2), line pass = m steps, n' advances per band; "
           f"{len(problems)} problems {problems[:3]}")


def test_c8_threshold_behaviour(report, synthetic_corpus):
    problems = []
    for key, img, _ in synthetic_corpus:
        doc = compress(img)
        n = doc.width
        prev = None
        for t in list(range(1, 12)) + [n + 1]:
            r = segment_document(doc, threshold=t)
            counts = [len(ln.words) for ln in r.lines]
            if t == 1 and any([w.cols for w in ln.words] != [c.cols for c in ln.chars]
                              for ln in r.lines):
                problems.append((key, "t=1"))
            if t > n and any(len(ln.words) != 1 for ln in r.lines if ln.chars):
                problems.append((key, "t>n'"))
            if prev is not None and any(c > p for p, c in zip(prev, counts)):
                problems.append((key, f"increase at t={t}"))
            prev = counts
    report(8, "threshold behaviour", not problems,
           f"{len(synthetic_corpus)} pages: words==chars at t=1, one word per line at t>n', "
           f"non-increasing word count; {len(problems)} problems")
