"""Corpus BLEU and GLEU over tokenized sentences."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass

from .errors import EmptyHypothesis, LengthMismatch


def ngram_counts(tokens, n):
    tokens = tuple(tokens)
    return Counter(tokens[i:i + n] for i in range(len(tokens) - n + 1))


def _check_lengths(**named):
    sizes = {k: len(v) for k, v in named.items()}
    if len(set(sizes.values())) > 1:
        raise LengthMismatch(", ".join(f"{k}={v}" for k, v in sizes.items()))


def _geometric(precisions, weights):
    if any(p <= 0 for p in precisions):
        return 0.0
    return math.exp(sum(w * math.log(p) for w, p in zip(weights, precisions)))


@dataclass
class BleuReport:
    precisions: list
    brevity_penalty: float
    bleu: float
    max_order: int
    hyp_length: int
    ref_length: int

    def format_text(self):
        ps = " ".join(f"{p:.6f}" for p in self.precisions)
        return (f"BLEU : {self.bleu:.6f}\n"
                f"precisions : {ps}\n"
                f"BP : {self.brevity_penalty:.6f}\n")

    def as_dict(self):
        out = {"bleu": self.bleu, "bp": self.brevity_penalty,
               "hyp_length": self.hyp_length, "ref_length": self.ref_length}
        out.update({f"p{i}": p for i, p in enumerate(self.precisions, start=1)})
        return out


def bleu(hypotheses, references, max_order=4, smooth=False):
    """Corpus BLEU with clipped n-gram precision and one reference per line.

    ``smooth`` adds one to every precision's numerator and denominator.
    """
    if max_order < 1:
        raise ValueError("max_order must be >= 1")
    hypotheses = [tuple(h) for h in hypotheses]
    references = [tuple(r) for r in references]
    _check_lengths(hypotheses=hypotheses, references=references)
    matches = [0] * max_order
    totals = [0] * max_order
    for hyp, ref in zip(hypotheses, references):
        for n in range(1, max_order + 1):
            h, r = ngram_counts(hyp, n), ngram_counts(ref, n)
            matches[n - 1] += sum(min(c, r[g]) for g, c in h.items())
            totals[n - 1] += sum(h.values())
    if totals[0] == 0:
        raise EmptyHypothesis("hypotheses contain no tokens")
    if smooth:
        precisions = [(m + 1) / (t + 1) for m, t in zip(matches, totals)]
    else:
        precisions = [m / t if t else 0.0 for m, t in zip(matches, totals)]
    hyp_len = sum(map(len, hypotheses))
    ref_len = sum(map(len, references))
    bp = math.exp(min(0.0, (hyp_len - ref_len) / hyp_len))
    score = bp * _geometric(precisions, [1 / max_order] * max_order)
    return BleuReport(precisions, bp, score, max_order, hyp_len, ref_len)


@dataclass
class GleuReport:
    precisions: list
    brevity_penalty: float
    gleu: float
    penalty: float
    weights: list
    hyp_length: int
    ref_length: int

    def format_text(self):
        ps = " ".join(f"{p:.6f}" for p in self.precisions)
        return (f"GLEU : {self.gleu:.6f}\n"
                f"precisions : {ps}\n"
                f"BP : {self.brevity_penalty:.6f}\n")

    def as_dict(self):
        out = {"gleu": self.gleu, "bp": self.brevity_penalty, "lambda": self.penalty,
               "hyp_length": self.hyp_length, "ref_length": self.ref_length}
        out.update({f"p{i}": p for i, p in enumerate(self.precisions, start=1)})
        return out


def gleu_sentence_stats(hyp, ref, src, n, penalty=0.0):
    """Numerator and denominator of the modified precision at order ``n``.

    Counts are multiset counts; the sums run over the distinct n-grams of the
    hypothesis. Reference n-grams missing from the source are rewarded on top
    of the plain reference count, source n-grams the reference dropped are
    penalized by ``penalty``. A negative numerator is clipped to zero.
    """
    h, r, s = ngram_counts(hyp, n), ngram_counts(ref, n), ngram_counts(src, n)
    r_not_s = r - s
    s_not_r = s - r
    num = sum(r_not_s[g] - penalty * s_not_r[g] + r[g] for g in h)
    den = sum(s[g] for g in h) + sum(r_not_s.values())
    return max(num, 0.0), den


def brevity_penalty(hyp_len, ref_len, orientation="conventional"):
    """``conventional``: 1 when c >= r, else exp(1 - r/c).

    ``printed``: 1 when c > r, else exp((1 - c)/r).
    """
    c, r = hyp_len, ref_len
    if orientation == "printed":
        return 1.0 if c > r else math.exp((1 - c) / r)
    if orientation != "conventional":
        raise ValueError(f"unknown brevity orientation {orientation!r}")
    if c >= r:
        return 1.0
    return math.exp(1 - r / c) if c else 0.0


def gleu(hypotheses, references, sources, max_order=4, penalty=0.0, weights=None,
         smooth=False, brevity="conventional"):
    """Corpus GLEU with one reference per sentence.

    Per-order numerators and denominators are summed over the corpus before
    dividing; each precision is capped at 1 so the score stays in [0, 1].
    """
    if max_order < 1:
        raise ValueError("max_order must be >= 1")
    if penalty < 0:
        raise ValueError("penalty must be >= 0")
    hypotheses = [tuple(h) for h in hypotheses]
    references = [tuple(r) for r in references]
    sources = [tuple(s) for s in sources]
    _check_lengths(hypotheses=hypotheses, references=references, sources=sources)
    weights = list(weights) if weights is not None else [1 / max_order] * max_order
    if len(weights) != max_order:
        raise ValueError("need one weight per order")
    hyp_len = sum(map(len, hypotheses))
    if hyp_len == 0:
        raise EmptyHypothesis("hypotheses contain no tokens")
    nums = [0.0] * max_order
    dens = [0.0] * max_order
    for hyp, ref, src in zip(hypotheses, references, sources):
        for n in range(1, max_order + 1):
            num, den = gleu_sentence_stats(hyp, ref, src, n, penalty)
            nums[n - 1] += num
            dens[n - 1] += den
    if smooth:
        precisions = [min(1.0, (a + 1) / (b + 1)) for a, b in zip(nums, dens)]
    else:
        precisions = [min(1.0, a / b) if b else 0.0 for a, b in zip(nums, dens)]
    ref_len = sum(map(len, references))
    bp = brevity_penalty(hyp_len, ref_len, brevity)
    score = bp * _geometric(precisions, weights)
    return GleuReport(precisions, bp, score, penalty, weights, hyp_len, ref_len)
