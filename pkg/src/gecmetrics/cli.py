"""Command-line front end: ``gecmetrics <command> [options]``."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .errors import GecError, LengthMismatch
from .imeasure import (
    SopCosts,
    imeasure_score,
    parse_imeasure_xml,
    sentences_from_blocks,
)
from .m2corpus import (
    apply_edits,
    corpus_stats,
    extract_triples,
    parse_m2,
    read_sent,
    write_m2,
)
from .maxmatch import m2_score
from .ngram_metrics import bleu, gleu


def _read_text(path):
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise GecError(exc.strerror or str(exc), source=path) from None


def read_tokens(path):
    """Sentences of a tokenized file; ``.sent`` files carry ``id<TAB>`` prefixes."""
    text = _read_text(path)
    if str(path).endswith(".sent"):
        return [tokens for _, tokens in read_sent(text, source_name=str(path))]
    return [tuple(line.split()) for line in text.splitlines()]


def read_gold(path):
    return parse_m2(_read_text(path), source_name=str(path))


def _emit(args, report, text):
    if args.format == "kv":
        for key, value in report.items():
            sys.stdout.write(f"{key}={value!r}\n" if isinstance(value, float)
                             else f"{key}={value}\n")
    else:
        sys.stdout.write(text)


def _same_length(name_a, a, name_b, b):
    if len(a) != len(b):
        raise LengthMismatch(f"{name_a} has {len(a)} sentences, {name_b} has {len(b)}")


def cmd_parse(args):
    blocks = read_gold(args.gold)
    if args.format == "kv":
        for b in blocks:
            sys.stdout.write(f"block={b.id} tokens={len(b.source)} edits={len(b.edits)}\n")
    else:
        sys.stdout.write(write_m2(blocks))


def cmd_apply(args):
    blocks = read_gold(args.gold)
    for b in blocks:
        if args.triples:
            rows = [t.as_list() for t in extract_triples(b, args.annotator)]
            sys.stdout.write(json.dumps(rows, ensure_ascii=False) + "\n")
        elif args.format == "kv":
            sys.stdout.write(f"{b.id}\t{' '.join(apply_edits(b, args.annotator))}\n")
        else:
            sys.stdout.write(" ".join(apply_edits(b, args.annotator)) + "\n")


def cmd_stats(args):
    blocks = [b for path in args.gold for b in read_gold(path)]
    stats = corpus_stats(blocks)
    info = stats.as_dict()
    text = [f"{k} : {v:.2f}" if isinstance(v, float) else f"{k} : {v}" for k, v in info.items()]
    text.append("frequency histogram (occurrences : words)")
    text.extend(f"  {f} : {c}" for f, c in stats.word_frequency.items())
    info.update({f"freq.{f}": c for f, c in stats.word_frequency.items()})
    _emit(args, info, "\n".join(text) + "\n")


def cmd_score_m2(args):
    blocks = read_gold(args.gold)
    hyps = read_tokens(args.hyp)
    _same_length("hypothesis", hyps, "gold", blocks)
    sources = [b.source for b in blocks]
    if args.src:
        sources = read_tokens(args.src)
        _same_length("source", sources, "gold", blocks)
    annotator = None if args.annotator == "best" else int(args.annotator)
    sentences = [(s, h, b.edits) for s, h, b in zip(sources, hyps, blocks)]
    report = m2_score(sentences, beta=args.beta, max_unchanged=args.max_unchanged,
                      annotator=annotator, jobs=args.jobs)
    _emit(args, report.as_dict(), report.format_text())


def _parse_costs(text):
    try:
        match, gap, mismatch = (float(x) for x in text.split(","))
        return SopCosts(match, gap, mismatch)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad costs {text!r}: {exc}") from None


def cmd_score_imeasure(args):
    hyps = read_tokens(args.hyp)
    if str(args.gold).endswith(".xml"):
        gold = parse_imeasure_xml(_read_text(args.gold), source_name=str(args.gold))
        _same_length("hypothesis", hyps, "gold", gold)
        sentences = [(g.source, h, g.gold_tokens(args.annotator)) for g, h in zip(gold, hyps)]
    else:
        blocks = read_gold(args.gold)
        _same_length("hypothesis", hyps, "gold", blocks)
        sentences = sentences_from_blocks(blocks, hyps, args.annotator)
    report = imeasure_score(sentences, costs=args.costs, w=args.w, beta=args.beta,
                            compute_improvement=not args.no_improvement, jobs=args.jobs)
    _emit(args, report.as_dict(), report.format_text())


def cmd_score_bleu(args):
    report = bleu(read_tokens(args.hyp), read_tokens(args.ref), args.max_order, args.smooth)
    _emit(args, report.as_dict(), report.format_text())


def cmd_score_gleu(args):
    report = gleu(read_tokens(args.hyp), read_tokens(args.ref), read_tokens(args.src),
                  args.max_order, penalty=args.penalty, smooth=args.smooth,
                  brevity=args.brevity)
    _emit(args, report.as_dict(), report.format_text())


def _positive(kind, minimum=0.0, strict=True):
    def parse(text):
        try:
            value = kind(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"invalid value {text!r}") from None
        if value < minimum or (strict and value == minimum):
            op = ">" if strict else ">="
            raise argparse.ArgumentTypeError(f"must be {op} {minimum}")
        return value
    return parse


def build_parser():
    parser = argparse.ArgumentParser(
        prog="gecmetrics",
        description="Inspect m2 corpora and score grammatical error correction output.")
    parser.add_argument("--version", action="version", version=__version__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["text", "kv"], default="text",
                        help="text tables (default) or key=value lines")
    common.add_argument("--jobs", type=_positive(int), default=1,
                        help="worker processes for per-sentence scoring")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("parse", parents=[common], help="validate and re-emit an m2 file")
    p.add_argument("--gold", required=True)
    p.set_defaults(func=cmd_parse)

    p = sub.add_parser("apply", parents=[common], help="print gold-corrected sentences")
    p.add_argument("--gold", required=True)
    p.add_argument("--annotator", type=_positive(int, strict=False), default=0)
    p.add_argument("--triples", action="store_true",
                   help="print [original, corrected, action] triples per block as JSON")
    p.set_defaults(func=cmd_apply)

    p = sub.add_parser("stats", parents=[common], help="corpus statistics")
    p.add_argument("--gold", required=True, nargs="+")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("score-m2", parents=[common], help="MaxMatch P/R/F")
    p.add_argument("--hyp", required=True)
    p.add_argument("--gold", required=True)
    p.add_argument("--src", help="source sentences (default: the gold S lines)")
    p.add_argument("--beta", type=_positive(float), default=0.5)
    p.add_argument("--max-unchanged", type=_positive(int, strict=False), default=2)
    p.add_argument("--annotator", default="0",
                   help="annotator id, or 'best' to pick per sentence")
    p.set_defaults(func=cmd_score_m2)

    p = sub.add_parser("score-imeasure", parents=[common], help="I-measure table")
    p.add_argument("--hyp", required=True)
    p.add_argument("--gold", required=True, help=".m2 file or I-measure .xml")
    p.add_argument("--annotator", type=_positive(int, strict=False), default=0)
    p.add_argument("--beta", type=_positive(float), default=0.5)
    p.add_argument("--w", type=_positive(float, 1.0), default=2.0)
    p.add_argument("--costs", type=_parse_costs, default=SopCosts(),
                   help="match,gap,mismatch alignment costs (default 0,2,3)")
    p.add_argument("--no-improvement", action="store_true")
    p.set_defaults(func=cmd_score_imeasure)

    p = sub.add_parser("score-bleu", parents=[common], help="corpus BLEU")
    p.add_argument("--hyp", required=True)
    p.add_argument("--ref", required=True)
    p.add_argument("-N", "--max-order", type=_positive(int), default=4)
    p.add_argument("--smooth", action="store_true")
    p.set_defaults(func=cmd_score_bleu)

    p = sub.add_parser("score-gleu", parents=[common], help="corpus GLEU")
    p.add_argument("--hyp", required=True)
    p.add_argument("--ref", required=True)
    p.add_argument("--src", required=True)
    p.add_argument("-N", "--max-order", type=_positive(int), default=4)
    p.add_argument("--lambda", dest="penalty", type=_positive(float, strict=False), default=0.0)
    p.add_argument("--smooth", action="store_true")
    p.add_argument("--brevity", choices=["conventional", "printed"], default="conventional")
    p.set_defaults(func=cmd_score_gleu)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except GecError as exc:
        print(f"gecmetrics: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
