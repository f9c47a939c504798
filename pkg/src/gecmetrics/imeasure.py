"""I-measure: token-level scoring over a three-way source/hypothesis/gold alignment."""

from __future__ import annotations

import math
import xml.etree.ElementTree as ET
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import product

from .errors import EmptyCorpus, MalformedLine
from .m2corpus import apply_edits, apply_spans
from .maxmatch import precision_recall_f

TP, TN, FP, FN, FPN = "TP", "TN", "FP", "FN", "FPN"


@dataclass(frozen=True)
class SopCosts:
    match: float = 0.0
    gap: float = 2.0
    mismatch: float = 3.0

    def __post_init__(self):
        if min(self.match, self.gap, self.mismatch) < 0:
            raise ValueError("alignment costs must be non-negative")
        if not self.gap > self.match:
            raise ValueError("gap cost must exceed match cost")
        if not self.mismatch > self.gap:
            raise ValueError("mismatch cost must exceed gap cost")
        if not 2 * self.gap > self.mismatch:
            raise ValueError("two gaps must cost more than one mismatch")

    def pair(self, x, y):
        if x is None and y is None:
            return 0.0
        if x is None or y is None:
            return self.gap
        return self.match if x == y else self.mismatch

    def column(self, col):
        s, h, g = col
        return self.pair(s, h) + self.pair(s, g) + self.pair(h, g)


# moves as (advance source, advance hypothesis, advance gold)
_MOVES = [m for m in product((1, 0), repeat=3) if any(m)]


def _tie_key(col, move_idx):
    s, h, g = col
    triple = s is not None and s == h == g
    src_hyp = s is not None and s == h
    gaps = sum(x is None for x in col)
    return (not triple, not src_hyp, gaps, move_idx)


def sop_align(source, hypothesis, gold, costs=None):
    """Globally optimal three-way alignment under sum-of-pairs costs.

    Returns a list of ``(src, hyp, gold)`` columns with ``None`` for gaps.
    Ties prefer full matches, then source/hypothesis matches, then fewer
    gaps.
    """
    costs = costs or SopCosts()
    a, b, c = tuple(source), tuple(hypothesis), tuple(gold)
    na, nb, nc = len(a), len(b), len(c)
    inf = math.inf
    dp = [[[inf] * (nc + 1) for _ in range(nb + 1)] for _ in range(na + 1)]
    dp[0][0][0] = 0.0

    def col_at(i, j, k, move):
        return (a[i - 1] if move[0] else None,
                b[j - 1] if move[1] else None,
                c[k - 1] if move[2] else None)

    for i in range(na + 1):
        for j in range(nb + 1):
            for k in range(nc + 1):
                if not (i or j or k):
                    continue
                best = inf
                for move in _MOVES:
                    pi, pj, pk = i - move[0], j - move[1], k - move[2]
                    if pi < 0 or pj < 0 or pk < 0:
                        continue
                    cand = dp[pi][pj][pk] + costs.column(col_at(i, j, k, move))
                    if cand < best:
                        best = cand
                dp[i][j][k] = best

    columns = []
    i, j, k = na, nb, nc
    while i or j or k:
        options = []
        for idx, move in enumerate(_MOVES):
            pi, pj, pk = i - move[0], j - move[1], k - move[2]
            if pi < 0 or pj < 0 or pk < 0:
                continue
            col = col_at(i, j, k, move)
            if math.isclose(dp[pi][pj][pk] + costs.column(col), dp[i][j][k],
                            rel_tol=1e-12, abs_tol=1e-12):
                options.append((_tie_key(col, idx), col, (pi, pj, pk)))
        _, col, (i, j, k) = min(options)
        columns.append(col)
    columns.reverse()
    return columns


def alignment_cost(columns, costs=None):
    costs = costs or SopCosts()
    return sum(costs.column(col) for col in columns)


def was_classify(col):
    """Detection and correction class of one aligned column.

    The correction class is ``"FPN"`` for columns where source, hypothesis
    and gold all differ; such a column counts as FP, FN and FPN at once.
    """
    s, h, g = col
    if s is None and h is None and g is None:
        raise ValueError("column of three gaps")
    if s == h:
        return (TN, TN) if g == s else (FN, FN)
    if g == s:
        return FP, FP
    if g == h:
        return TP, TP
    return TP, FPN


@dataclass
class Confusion:
    tp: int = 0
    tn: int = 0
    fp: int = 0
    fn: int = 0
    fpn: int = 0

    def add(self, label):
        if label == FPN:
            self.fp += 1
            self.fn += 1
            self.fpn += 1
        else:
            setattr(self, label.lower(), getattr(self, label.lower()) + 1)

    def __iadd__(self, other):
        for name in ("tp", "tn", "fp", "fn", "fpn"):
            setattr(self, name, getattr(self, name) + getattr(other, name))
        return self

    @property
    def total(self):
        return self.tp + self.tn + self.fp + self.fn


@dataclass
class WasCounts:
    detection: Confusion = field(default_factory=Confusion)
    correction: Confusion = field(default_factory=Confusion)

    def add_column(self, col):
        det, cor = was_classify(col)
        self.detection.add(det)
        self.correction.add(cor)

    def __iadd__(self, other):
        self.detection += other.detection
        self.correction += other.correction
        return self


def count_columns(columns):
    counts = WasCounts()
    for col in columns:
        counts.add_column(col)
    return counts


def accuracy(c):
    denom = c.tp + c.tn + c.fp + c.fn - c.fpn
    return (c.tp + c.tn) / denom if denom else 1.0


def weighted_accuracy(c, w=2.0):
    denom = w * (c.tp + c.fp) + c.tn + c.fn - (w + 1) * c.fpn / 2
    return (w * c.tp + c.tn) / denom if denom else 1.0


def improvement(wacc, wacc_base):
    if wacc > wacc_base:
        return (wacc - wacc_base) / (1 - wacc_base)
    if wacc < wacc_base:
        return wacc / wacc_base - 1
    return 0.0


@dataclass
class TrackScore:
    counts: Confusion
    baseline: Confusion
    precision: float
    recall: float
    f_beta: float
    acc: float
    acc_b: float
    wacc: float
    wacc_b: float
    i_score: float | None


@dataclass
class IMeasureReport:
    detection: TrackScore
    correction: TrackScore
    w: float
    beta: float

    def rows(self):
        """Table rows as ``(label, detection, correction)`` strings."""
        out = []
        for name in ("tp", "tn", "fp", "fn", "fpn"):
            out.append((name.upper(), str(getattr(self.detection.counts, name)),
                        str(getattr(self.correction.counts, name))))
        pct = [("P", "precision"), ("R", "recall"), (f"F_{self.beta:g}", "f_beta"),
               ("Acc", "acc"), ("Acc_b", "acc_b"), ("WAcc", "wacc"),
               ("WAcc_b", "wacc_b"), ("I", "i_score")]
        for label, attr in pct:
            vals = []
            for track in (self.detection, self.correction):
                v = getattr(track, attr)
                vals.append("-" if v is None else f"{100 * v:.2f}")
            out.append((label, *vals))
        return out

    def format_text(self):
        lines = [f"{'':<8}{'Detection':>12}{'Correction':>12}"]
        for label, det, cor in self.rows():
            lines.append(f"{label:<8}{det:>12}{cor:>12}")
        return "\n".join(lines) + "\n"

    def as_dict(self):
        out = {"w": self.w, "beta": self.beta}
        for prefix, track in (("detection", self.detection), ("correction", self.correction)):
            for name in ("tp", "tn", "fp", "fn", "fpn"):
                out[f"{prefix}.{name}"] = getattr(track.counts, name)
            for name in ("precision", "recall", "f_beta", "acc", "acc_b", "wacc",
                         "wacc_b", "i_score"):
                out[f"{prefix}.{name}"] = getattr(track, name)
        return out


def _sentence_counts(args):
    source, hypothesis, gold, costs = args
    system = count_columns(sop_align(source, hypothesis, gold, costs))
    base = count_columns(sop_align(source, source, gold, costs))
    return system, base


def imeasure_score(sentences, costs=None, w=2.0, beta=0.5, compute_improvement=True, jobs=1):
    """Aggregate I-measure over ``(source, hypothesis, gold_tokens)`` triples.

    The baseline counts come from aligning each source against itself, i.e.
    a system that leaves the text untouched.
    """
    if w <= 1:
        raise ValueError("w must be > 1")
    if beta <= 0:
        raise ValueError("beta must be > 0")
    costs = costs or SopCosts()
    tasks = [(tuple(s), tuple(h), tuple(g), costs) for s, h, g in sentences]
    if not tasks:
        raise EmptyCorpus("no sentences to score")
    if jobs and jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_sentence_counts, tasks, chunksize=8))
    else:
        results = [_sentence_counts(t) for t in tasks]

    system, base = WasCounts(), WasCounts()
    for s, b in results:
        system += s
        base += b
    if system.detection.total == 0:
        raise EmptyCorpus("no tokens to align")

    def track(c, cb):
        p, r, f = precision_recall_f(c.tp, c.fp, c.fn, beta)
        wacc, wacc_b = weighted_accuracy(c, w), weighted_accuracy(cb, w)
        return TrackScore(
            counts=c, baseline=cb, precision=p, recall=r, f_beta=f,
            acc=accuracy(c), acc_b=accuracy(cb), wacc=wacc, wacc_b=wacc_b,
            i_score=improvement(wacc, wacc_b) if compute_improvement else None)

    return IMeasureReport(track(system.detection, base.detection),
                          track(system.correction, base.correction), w, beta)


def sentences_from_blocks(blocks, hypotheses, annotator=0):
    """Pair m2 blocks with hypotheses, using the edit-applied text as gold."""
    return [(b.source, tuple(h), apply_edits(b, annotator))
            for b, h in zip(blocks, hypotheses, strict=True)]


# ---------------------------------------------------------------- XML gold


@dataclass(frozen=True)
class XmlCorrection:
    start: int
    end: int
    text: str


@dataclass(frozen=True)
class XmlError:
    id: str
    required: bool
    type: str
    alternatives: dict  # annotator -> tuple of XmlCorrection


@dataclass(frozen=True)
class XmlSentence:
    id: str
    source: tuple
    errors: tuple

    def gold_tokens(self, annotator=0):
        spans = []
        for err in self.errors:
            for c in err.alternatives.get(annotator, ()):
                spans.append((c.start, c.end, c.text))
        return apply_spans(self.source, spans)


def parse_imeasure_xml(text, source_name=None):
    """Read the ``<scripts>/<script>/<sentence>`` gold annotation scheme."""
    try:
        root = ET.fromstring(text.encode("utf-8") if isinstance(text, str) else text)
    except ET.ParseError as exc:
        raise MalformedLine(f"invalid XML: {exc}", exc.position[0], source_name) from None
    sentences = []
    for script in root.iter("script"):
        for sent in script.iter("sentence"):
            node = sent.find("text")
            source = tuple((node.text or "").split()) if node is not None else ()
            errors = []
            for err in sent.iter("error"):
                alts = {}
                for alt in err.iter("alt"):
                    ann = int(alt.get("ann", 0))
                    alts[ann] = tuple(
                        XmlCorrection(int(c.get("start")), int(c.get("end")),
                                      " ".join((c.text or "").split()))
                        for c in alt.iter("c"))
                errors.append(XmlError(err.get("id", ""), err.get("req", "yes") == "yes",
                                       err.get("type", ""), alts))
            ident = f"{script.get('id', '')}.{sent.get('id', '')}"
            sentences.append(XmlSentence(ident, source, tuple(errors)))
    return sentences


def blocks_to_imeasure_xml(blocks):
    """Render m2 blocks in the I-measure XML scheme."""
    root = ET.Element("scripts")
    script = ET.SubElement(root, "script", id="1")
    for n, block in enumerate(blocks, start=1):
        sent = ET.SubElement(script, "sentence", id=str(n),
                             numann=str(len(block.annotators)))
        ET.SubElement(sent, "text").text = " ".join(block.source)
        errs = ET.SubElement(sent, "error-list")
        for k, e in enumerate(block.edits, start=1):
            err = ET.SubElement(errs, "error", id=str(k), req="yes", type=e.action.value)
            alt = ET.SubElement(err, "alt", ann=str(e.annotator))
            start, end = e.target_span
            c = ET.SubElement(alt, "c", end=str(end), start=str(start))
            if e.correction:
                c.text = e.correction
    ET.indent(root)
    return "<?xml version='1.0' encoding='UTF-8'?>\n" + ET.tostring(root, encoding="unicode") + "\n"
