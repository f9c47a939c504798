"""MaxMatch (M2) scoring of phrase-level edits."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .align import build_lattice
from .m2corpus import Edit


@dataclass(frozen=True)
class SystemEdit:
    start: int
    end: int
    replacement: str = ""

    def __post_init__(self):
        if self.start > self.end:
            raise ValueError(f"bad span {self.start} {self.end}")
        object.__setattr__(self, "replacement", " ".join(self.replacement.split()))

    @property
    def key(self):
        return (self.start, self.end, self.replacement)

    def __str__(self):
        return f"({self.start}, {self.end}, {self.replacement!r})"


def as_system_edit(edit):
    """Normalize a gold :class:`Edit`, a :class:`SystemEdit` or a tuple."""
    if isinstance(edit, SystemEdit):
        return edit
    if isinstance(edit, Edit):
        start, end = edit.target_span
        return SystemEdit(start, end, edit.correction)
    start, end, replacement = edit
    return SystemEdit(start, end, replacement)


def precision_recall_f(tp, fp, fn, beta=0.5):
    """Micro-averaged P, R and F-beta from edit counts.

    Nothing proposed counts as perfect precision; nothing to find counts as
    zero recall.
    """
    if beta <= 0:
        raise ValueError("beta must be > 0")
    p = tp / (tp + fp) if tp + fp else 1.0
    r = tp / (tp + fn) if tp + fn else 0.0
    b2 = beta * beta
    f = (1 + b2) * p * r / (b2 * p + r) if p * r else 0.0
    return p, r, f


@dataclass
class M2Report:
    tp: int
    fp: int
    fn: int
    beta: float = 0.5
    precision: float = field(init=False)
    recall: float = field(init=False)
    f_beta: float = field(init=False)
    details: list = field(default_factory=list, repr=False)

    def __post_init__(self):
        self.precision, self.recall, self.f_beta = precision_recall_f(
            self.tp, self.fp, self.fn, self.beta)

    def format_text(self):
        return (f"Precision : {self.precision:.4f}\n"
                f"Recall : {self.recall:.4f}\n"
                f"F_{self.beta:g} : {self.f_beta:.4f}\n")

    def as_dict(self):
        return {"tp": self.tp, "fp": self.fp, "fn": self.fn, "beta": self.beta,
                "precision": self.precision, "recall": self.recall,
                "f_beta": self.f_beta}


def score_edit_sets(gold_sets, predicted_sets, beta=0.5):
    """Score explicit per-sentence edit sets by set intersection."""
    tp = fp = fn = 0
    for gold, pred in zip(gold_sets, predicted_sets, strict=True):
        gold, pred = set(gold), set(pred)
        hit = len(gold & pred)
        tp += hit
        fp += len(pred) - hit
        fn += len(gold) - hit
    return M2Report(tp, fp, fn, beta)


def m2_extract_edits(source, hypothesis, gold_edits=(), max_unchanged=2):
    """Return the hypothesis edits that overlap the gold edits the most.

    Lattice edges equal to a gold edit are rewarded with a cost of
    ``-(max_unchanged + 1) * |E|``; the cheapest path through the
    reweighted lattice then carries the extracted edits. Among equally cheap
    paths the one made of more (hence shorter) edges wins.
    """
    lattice = build_lattice(source, hypothesis, max_unchanged)
    gold = {as_system_edit(g).key for g in gold_edits}
    bonus = -(max_unchanged + 1) * len(lattice.edges)

    def key(e):
        return (e.start[0], e.end[0], " ".join(e.target))

    # A path may hold several identical insertions at one gap; only the first
    # of them can be a new gold hit. States carry the gold insertions already
    # rewarded at the current gap, which resets once a source token is used.
    out = lattice.out_edges()
    start = (lattice.vertices[0], frozenset())
    best = {start: ((0, 0), None, None)}
    by_vertex = {lattice.vertices[0]: [start]}
    for v in lattice.vertices:
        for state in by_vertex.get(v, ()):
            (c, neg_n), _, _ = best[state]
            used = state[1]
            for e in out[v]:
                k = key(e)
                hit = e.changed and k in gold and k not in used
                step = bonus if hit else e.cost
                if e.end[0] > v[0]:
                    nxt_used = frozenset()
                elif hit:
                    nxt_used = used | {k}
                else:
                    nxt_used = used
                nxt = (e.end, nxt_used)
                cand = (c + step, neg_n - 1)
                if nxt not in best:
                    by_vertex.setdefault(e.end, []).append(nxt)
                    best[nxt] = (cand, e, state)
                elif cand < best[nxt][0]:
                    best[nxt] = (cand, e, state)

    final = min((s for s in by_vertex[lattice.terminal]), key=lambda s: best[s][0])
    path = []
    state = final
    while best[state][1] is not None:
        _, e, prev = best[state]
        path.append(e)
        state = prev
    path.reverse()
    return [SystemEdit(e.start[0], e.end[0], " ".join(e.target)) for e in path if e.changed]


def _gold_by_annotator(gold_edits):
    groups = {}
    for g in gold_edits:
        ann = g.annotator if isinstance(g, Edit) else 0
        groups.setdefault(ann, []).append(g)
    return groups or {0: []}


def _sentence_counts(args):
    source, hypothesis, gold_edits, max_unchanged, annotator = args
    groups = _gold_by_annotator(gold_edits)
    if annotator is not None:
        groups = {annotator: groups.get(annotator, [])}
    results = []
    for ann, gold in sorted(groups.items()):
        system = m2_extract_edits(source, hypothesis, gold, max_unchanged)
        gold_keys = {as_system_edit(g).key for g in gold}
        sys_keys = {e.key for e in system}
        hit = len(gold_keys & sys_keys)
        results.append((ann, hit, len(sys_keys) - hit, len(gold_keys) - hit, system))
    return results


def m2_score(sentences, beta=0.5, max_unchanged=2, annotator=0, jobs=1):
    """Corpus-level M2 score.

    ``sentences`` holds ``(source, hypothesis, gold_edits)`` triples. With
    ``annotator=None`` every annotator is tried per sentence and the one
    giving the best running F-score is kept.
    """
    if beta <= 0:
        raise ValueError("beta must be > 0")
    if max_unchanged < 0:
        raise ValueError("max_unchanged must be >= 0")
    tasks = [(tuple(s), tuple(h), tuple(g), max_unchanged, annotator)
             for s, h, g in sentences]
    if jobs and jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            per_sentence = list(pool.map(_sentence_counts, tasks, chunksize=16))
    else:
        per_sentence = [_sentence_counts(t) for t in tasks]

    tp = fp = fn = 0
    details = []
    for options in per_sentence:
        def running(o):
            _, hit, extra, miss, _ = o
            f = precision_recall_f(tp + hit, fp + extra, fn + miss, beta)[2]
            return (f, hit, -extra - miss)
        chosen = max(options, key=running) if len(options) > 1 else options[0]
        ann, hit, extra, miss, system = chosen
        tp, fp, fn = tp + hit, fp + extra, fn + miss
        details.append({"annotator": ann, "edits": system,
                        "tp": hit, "fp": extra, "fn": miss})
    return M2Report(tp, fp, fn, beta, details=details)
