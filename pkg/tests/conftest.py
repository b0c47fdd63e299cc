import numpy as np
import pytest

from rlseg.bitmap import BitImage, LayoutSpec, synth_doc

# 13x14 sample page and its zero-padded 13x5 run-length matrix
SAMPLE_BITS = [
    "00000000000000",
    "00110000111110",
    "01111000111110",
    "01111000111110",
    "01111000111110",
    "00110000000000",
    "10000000000000",
    "10000000000000",
    "00100001111100",
    "01110001111100",
    "01111001111100",
    "01111100000000",
    "00000000000000",
]
SAMPLE_MATRIX = [
    [14, 0, 0, 0, 0],
    [2, 2, 4, 5, 1],
    [1, 4, 3, 5, 1],
    [1, 4, 3, 5, 1],
    [1, 4, 3, 5, 1],
    [2, 2, 10, 0, 0],
    [0, 1, 13, 0, 0],
    [0, 1, 13, 0, 0],
    [2, 1, 4, 5, 2],
    [1, 3, 3, 5, 2],
    [1, 4, 2, 5, 2],
    [1, 5, 8, 0, 0],
    [14, 0, 0, 0, 0],
]

CHAR_GAPS = (1, 2)
WORD_GAPS = (4, 6, 8)
GLYPH_SIZES = range(3, 9)
SEEDS = range(6)


@pytest.fixture
def sample_image():
    return BitImage.from_rows(SAMPLE_BITS)


@pytest.fixture
def sample_doc(sample_image):
    from rlseg.rle import compress
    return compress(sample_image)


def random_image(rng, max_h, max_w, min_side=1):
    """Random image with run structure ranging from iid noise to long runs."""
    h = int(rng.integers(min_side, max_h + 1))
    w = int(rng.integers(min_side, max_w + 1))
    flip = rng.uniform(0.02, 0.5)
    flips = rng.random((h, w)) < flip
    start = rng.integers(0, 2, size=(h, 1))
    bits = (np.cumsum(flips, axis=1) + start) % 2
    return BitImage.from_array(bits.astype(np.uint8))


def grid_layout(char_gap, word_gap, glyph, seed):
    return LayoutSpec(
        lines=1 + seed % 4,
        words_per_line=(1, 5),
        chars_per_word=(2, 5),
        glyph_width=(glyph - 1, glyph + 1),
        glyph_height=glyph + 2,
        char_gap=char_gap,
        word_gap=word_gap,
        line_gap=2 + seed % 3,
        margin=2,
        perforation=0.3,
    )


@pytest.fixture(scope="session")
def synthetic_corpus():
    """216 ground-truthed pages over char gaps x word gaps x glyph sizes x seeds."""
    pages = []
    for cg in CHAR_GAPS:
        for wg in WORD_GAPS:
            for g in GLYPH_SIZES:
                for seed in SEEDS:
                    img, truth = synth_doc(grid_layout(cg, wg, g, seed), seed=1000 * g + seed)
                    pages.append(((cg, wg, g, seed), img, truth))
    return pages
