"""Command-line entry point.

Exit status: 0 on success, 1 on input or format errors, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .bitmap import BitImage, GroundTruth, LayoutSpec, load_pbm, save_pbm, synth_doc
from .cost import CostLedger
from .errors import InputError, RlsegError
from .evaluation import cost_report, evaluate, format_table
from .mhcodec import mh_decode, mh_encode
from .profile import column_profile, row_profile
from .rle import RleDocument, compress, decompress, dumps_rlc, loads_rlc
from .segment import AUTO, segment_document

FORMATS = ("pbm", "rlc", "mh")


def _format_of(path: Path, override: str | None) -> str:
    if override:
        return override
    ext = path.suffix.lower().lstrip(".")
    if ext not in FORMATS:
        raise InputError(f"{path}: cannot infer format from extension; pass --format")
    return ext


def read_document(path: Path, fmt: str | None = None,
                  ledger: CostLedger | None = None) -> RleDocument:
    """Load any supported input as run lengths. ``.mh`` inputs are never rasterized."""
    fmt = _format_of(path, fmt)
    data = path.read_bytes()
    if fmt == "mh":
        return mh_decode(data, ledger)
    if fmt == "rlc":
        return loads_rlc(data.decode("ascii"))
    return compress(load_pbm(data))


def write_document(doc: RleDocument, path: Path, fmt: str | None = None, ascii: bool = False):
    fmt = _format_of(path, fmt)
    if fmt == "mh":
        path.write_bytes(mh_encode(doc).to_bytes())
    elif fmt == "rlc":
        path.write_text(dumps_rlc(doc))
    else:
        path.write_bytes(save_pbm(decompress(doc), ascii=ascii))


def _threshold(value: str):
    if value == AUTO:
        return AUTO
    try:
        t = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer >= 1 or 'auto', got {value!r}")
    if t < 1:
        raise argparse.ArgumentTypeError("threshold must be >= 1")
    return t


def _non_negative(value: str) -> int:
    v = int(value)
    if v < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return v


def _positive(value: str) -> int:
    v = int(value)
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def _band(value: str) -> tuple[int, int]:
    try:
        lo, hi = value.split(":")
        return int(lo), int(hi)
    except ValueError:
        raise argparse.ArgumentTypeError(f"band must look like START:END, got {value!r}")


def overlay(img: BitImage, result) -> BitImage:
    """Draw each character box one pixel outside its extent."""
    a = img.to_array().copy()
    m, n = a.shape
    for ln in result.lines:
        r0, r1 = max(ln.rows[0] - 1, 1), min(ln.rows[1] + 1, m)
        for ch in ln.chars:
            c0, c1 = max(ch.cols[0] - 1, 1), min(ch.cols[1] + 1, n)
            a[r0 - 1, c0 - 1:c1] = 1
            a[r1 - 1, c0 - 1:c1] = 1
            a[r0 - 1:r1, c0 - 1] = 1
            a[r0 - 1:r1, c1 - 1] = 1
    return BitImage.from_array(a)


def _segment_one(src: Path, out: Path, args) -> None:
    ledger = CostLedger()
    doc = read_document(src, args.format, ledger)
    result = segment_document(doc, args.tau, args.threshold, args.gap_scope, ledger)
    out.write_text(json.dumps(result.to_dict(), indent=1) + "\n")
    if getattr(args, "overlay", None):
        Path(args.overlay).write_bytes(save_pbm(overlay(decompress(doc), result)))


def cmd_compress(args):
    src = Path(args.input)
    doc = read_document(src)
    if args.out:
        out = Path(args.out)
        fmt = args.format or _format_of(out, None)
    else:
        fmt = args.format or "rlc"
        out = src.with_suffix("." + fmt)
    if fmt == "pbm":
        raise InputError("compress writes .rlc or .mh; use decompress for PBM output")
    write_document(doc, out, fmt)


def cmd_decompress(args):
    src = Path(args.input)
    doc = read_document(src, args.format)
    out = Path(args.out) if args.out else src.with_suffix(".pbm")
    write_document(doc, out, "pbm", ascii=args.ascii)


def cmd_segment(args):
    if args.in_dir:
        if not args.out_dir:
            raise InputError("--in-dir requires --out-dir")
        src_dir, out_dir = Path(args.in_dir), Path(args.out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        files = sorted(p for p in src_dir.iterdir() if p.suffix.lower().lstrip(".") in FORMATS)
        jobs = [(p, out_dir / (p.stem + ".json")) for p in files]
        if args.jobs > 1:
            with ProcessPoolExecutor(args.jobs) as pool:
                for f in [pool.submit(_segment_one, s, o, args) for s, o in jobs]:
                    f.result()
        else:
            for s, o in jobs:
                _segment_one(s, o, args)
        return
    if not args.input or not args.out:
        raise InputError("segment needs --in and --out (or --in-dir and --out-dir)")
    _segment_one(Path(args.input), Path(args.out), args)


def cmd_profile(args):
    ledger = CostLedger()
    doc = read_document(Path(args.input), args.format, ledger)
    if args.axis == "row":
        curve = row_profile(doc)
    else:
        curve = column_profile(doc, args.band)
    text = curve.to_csv()
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    print(f"addition_count={curve.addition_count}", file=sys.stderr)


def cmd_synth(args):
    spec = LayoutSpec(
        lines=args.lines, words_per_line=args.words, chars_per_word=args.chars,
        glyph_width=args.glyph_width, glyph_height=args.glyph_height,
        char_gap=args.char_gap, word_gap=args.word_gap, line_gap=args.line_gap,
        margin=args.margin, perforation=args.perforation,
    )
    img, truth = synth_doc(spec, args.seed)
    Path(args.out).write_bytes(save_pbm(img, ascii=args.ascii))
    if args.truth:
        Path(args.truth).write_text(truth.to_json() + "\n")


def cmd_eval(args):
    pred = GroundTruth.from_json(Path(args.pred).read_text())
    truth = GroundTruth.from_json(Path(args.truth).read_text())
    metrics = evaluate(pred, truth, args.tol)
    if args.json:
        print(json.dumps({lv: m.as_dict() for lv, m in metrics.items()}, indent=1))
    else:
        print(format_table(metrics))


def cmd_bench(args):
    ledger = CostLedger()
    doc = read_document(Path(args.input), args.format, ledger)
    result = segment_document(doc, args.tau, args.threshold, ledger=ledger)
    report = cost_report(doc, result)
    text = report.to_csv() if args.as_ == "csv" else json.dumps(report.as_dict(), indent=1) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="rlseg",
        description="Segment run-length compressed binary text images.")
    sub = p.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def io(sp, out_required=True):
        sp.add_argument("--in", dest="input", required=True, help="input file (.pbm, .rlc, .mh)")
        sp.add_argument("--out", required=out_required, help="output file")
        sp.add_argument("--format", choices=FORMATS,
                        help="override the format inferred from the file extension")

    sp = sub.add_parser("compress", help="PBM to RLC or MH")
    sp.add_argument("--in", dest="input", required=True, help="input file (.pbm, .rlc, .mh)")
    sp.add_argument("--out", help="output file (default: input name with the new extension)")
    sp.add_argument("--format", choices=("rlc", "mh"),
                    help="output format (default: from --out extension, else rlc)")
    sp.set_defaults(func=cmd_compress)

    sp = sub.add_parser("decompress", help="RLC or MH to PBM")
    io(sp, out_required=False)
    sp.add_argument("--ascii", action="store_true", help="write plain P1 instead of P4")
    sp.set_defaults(func=cmd_decompress)

    sp = sub.add_parser("segment", help="line/word/char segmentation to JSON")
    sp.add_argument("--in", dest="input", help="input file (.pbm, .rlc, .mh)")
    sp.add_argument("--out", help="output JSON")
    sp.add_argument("--format", choices=FORMATS)
    sp.add_argument("--tau", type=_non_negative, default=0, help="row-profile noise tolerance")
    sp.add_argument("--threshold", type=_threshold, default=AUTO,
                    help="word-space threshold in columns, or 'auto' (default)")
    sp.add_argument("--gap-scope", choices=("line", "page"), default="line",
                    help="collect gaps for the auto threshold per line or per page")
    sp.add_argument("--overlay", help="also write a PBM with character boxes drawn")
    sp.add_argument("--in-dir", help="segment every supported file in a directory")
    sp.add_argument("--out-dir", help="output directory for --in-dir")
    sp.add_argument("--jobs", type=_positive, default=1, help="parallel workers for --in-dir")
    sp.set_defaults(func=cmd_segment)

    sp = sub.add_parser("profile", help="projection profile as CSV")
    io(sp, out_required=False)
    sp.add_argument("--axis", choices=("row", "column"), default="row")
    sp.add_argument("--band", type=_band, help="row band START:END for column profiles")
    sp.set_defaults(func=cmd_profile)

    sp = sub.add_parser("synth", help="render a synthetic page and its ground truth")
    sp.add_argument("--lines", type=_non_negative, default=3)
    sp.add_argument("--words", type=_positive, default=4, help="words per line")
    sp.add_argument("--chars", type=_positive, default=5, help="characters per word")
    sp.add_argument("--glyph-width", type=_positive, default=5)
    sp.add_argument("--glyph-height", type=_positive, default=7)
    sp.add_argument("--char-gap", type=_positive, default=1)
    sp.add_argument("--word-gap", type=_positive, default=5)
    sp.add_argument("--line-gap", type=_positive, default=4)
    sp.add_argument("--margin", type=_non_negative, default=3)
    sp.add_argument("--perforation", type=float, default=0.25)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--ascii", action="store_true")
    sp.add_argument("--out", required=True, help="output PBM")
    sp.add_argument("--truth", help="output ground-truth JSON")
    sp.set_defaults(func=cmd_synth)

    sp = sub.add_parser("eval", help="precision/recall/F-measure against ground truth")
    sp.add_argument("--pred", required=True)
    sp.add_argument("--truth", required=True)
    sp.add_argument("--tol", type=_non_negative, default=0, help="boundary tolerance in pixels")
    sp.add_argument("--json", action="store_true", help="emit JSON instead of a table")
    sp.set_defaults(func=cmd_eval)

    sp = sub.add_parser("bench", help="operation-count report")
    io(sp, out_required=False)
    sp.add_argument("--tau", type=_non_negative, default=0)
    sp.add_argument("--threshold", type=_threshold, default=AUTO)
    sp.add_argument("--as", dest="as_", choices=("json", "csv"), default="json")
    sp.set_defaults(func=cmd_bench)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)  # exits with status 2 on usage errors
    try:
        args.func(args)
    except (RlsegError, UnicodeDecodeError) as exc:
        print(f"rlseg: error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"rlseg: error: {exc.filename}: {exc.strerror}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
