"""Reading, writing and applying m2 annotation blocks.

An m2 block is one ``S`` line holding the whitespace-tokenized source text,
followed by zero or more ``A`` lines::

    S Tihs text ismeant ...
    A 0 1|||Edit|||This|||REQUIRED|||-NONE-|||0

Offsets index the gaps between tokens, so ``0 1`` covers the first token and
``9 9`` is the empty gap in front of token 9.
"""

from __future__ import annotations

import enum
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import (
    ConflictingEdits,
    EmptyBlock,
    EmptyCorpus,
    InvalidEdit,
    MalformedLine,
    SpanOutOfRange,
    UnknownAction,
)


class ActionKind(str, enum.Enum):
    OK = "OK"
    EDIT = "Edit"
    ADD_BEFORE = "Add_before"
    MERGE = "Merge"
    SPLIT = "Split"
    DELETE = "Delete"
    MOVE = "Move"
    ADD_AFTER = "Add_after"
    OTHER = "Other"

    def __str__(self):
        return self.value

    @property
    def is_insertion(self):
        return self in (ActionKind.ADD_BEFORE, ActionKind.ADD_AFTER)


_ACTIONS = {a.value: a for a in ActionKind if a is not ActionKind.OK}


@dataclass(frozen=True)
class Edit:
    start: int
    end: int
    action: ActionKind
    correction: str = ""
    annotator: int = 0

    @property
    def position(self):
        """Gap index where an insertion lands.

        ``Add_before k k`` goes in front of token k, ``Add_after k k`` goes
        behind it.
        """
        if self.action is ActionKind.ADD_AFTER:
            return self.start + 1
        return self.start

    @property
    def target_span(self):
        """Source span this edit rewrites, with insertions as empty spans."""
        if self.action.is_insertion:
            return (self.position, self.position)
        return (self.start, self.end)

    @property
    def correction_tokens(self):
        return tuple(self.correction.split())

    def check(self, n_tokens):
        """Raise if the edit cannot belong to a sentence of ``n_tokens``."""
        if not 0 <= self.start <= self.end:
            raise SpanOutOfRange(f"bad span {self.start} {self.end}")
        if self.end > n_tokens:
            raise SpanOutOfRange(
                f"span {self.start} {self.end} exceeds {n_tokens} tokens")
        width = self.end - self.start
        a = self.action
        if a is ActionKind.OK:
            raise InvalidEdit("OK is not a valid annotated action")
        if a.is_insertion:
            ok = width == 0
            if a is ActionKind.ADD_AFTER and self.start >= n_tokens:
                raise SpanOutOfRange(
                    f"Add_after at {self.start} has no token to follow")
        elif a is ActionKind.DELETE:
            ok = width == 1 and not self.correction.strip()
        elif a in (ActionKind.MERGE, ActionKind.MOVE):
            ok = width >= 2
        elif a in (ActionKind.SPLIT, ActionKind.EDIT):
            ok = width == 1
        else:
            ok = width >= 1
        if not ok:
            raise InvalidEdit(
                f"{a.value} cannot span {self.start} {self.end}"
                + (f" with correction {self.correction!r}" if a is ActionKind.DELETE else ""))

    def to_m2(self):
        return (f"A {self.start} {self.end}|||{self.action.value}|||"
                f"{self.correction}|||REQUIRED|||-NONE-|||{self.annotator}")


@dataclass(frozen=True)
class AnnotationBlock:
    id: str
    source: tuple
    edits: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "source", tuple(self.source))
        object.__setattr__(
            self, "edits", tuple(sorted(self.edits, key=lambda e: (e.start, e.end))))

    @property
    def annotators(self):
        return sorted({e.annotator for e in self.edits}) or [0]

    def edits_for(self, annotator=0):
        return tuple(e for e in self.edits if e.annotator == annotator)

    def to_m2(self):
        lines = ["S " + " ".join(self.source)]
        lines.extend(e.to_m2() for e in self.edits)
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class DatasetTriple:
    original: str
    corrected: str
    action: ActionKind

    def as_list(self):
        return [self.original, self.corrected, self.action.value]


@dataclass
class CorpusStats:
    action_counts: dict
    char_inventory: list
    word_frequency: dict
    error_density: float
    token_count: int
    block_count: int = 0
    unique_tokens: int = 0
    edit_count: int = 0

    def as_dict(self):
        return {
            "blocks": self.block_count,
            "tokens": self.token_count,
            "unique_tokens": self.unique_tokens,
            "edits": self.edit_count,
            "error_density": self.error_density,
            "characters": len(self.char_inventory),
            **{f"action.{k.value}": v for k, v in self.action_counts.items()},
        }


# ---------------------------------------------------------------- parsing


def parse_edit_line(line, n_tokens, lineno=None):
    fields = line[2:].split("|||")
    if len(fields) != 6:
        raise MalformedLine(f"expected 6 '|||' fields, got {len(fields)}", lineno)
    span = fields[0].split()
    try:
        start, end = int(span[0]), int(span[1])
        annotator = int(fields[5])
    except (IndexError, ValueError):
        raise MalformedLine(f"unreadable span or annotator in {line!r}", lineno) from None
    if len(span) != 2 or annotator < 0:
        raise MalformedLine(f"unreadable span or annotator in {line!r}", lineno)
    try:
        action = _ACTIONS[fields[1]]
    except KeyError:
        raise UnknownAction(f"unknown action {fields[1]!r}", lineno) from None
    edit = Edit(start, end, action, fields[2], annotator)
    try:
        edit.check(n_tokens)
    except (SpanOutOfRange, InvalidEdit) as exc:
        exc.lineno = lineno
        raise
    return edit


def parse_m2(text, source_name=None):
    """Parse m2 text into a list of :class:`AnnotationBlock`.

    Blocks get the ids ``"1"``, ``"2"``, ... in file order.
    """
    blocks = []
    current = None  # (lineno, tokens, edits)

    def close():
        lineno, tokens, edits = current
        blocks.append(AnnotationBlock(str(len(blocks) + 1), tokens, edits))

    try:
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.rstrip("\r\n")
            if not line.strip():
                if current is not None:
                    close()
                    current = None
                continue
            if line.startswith("S ") or line == "S":
                if current is not None:
                    raise MalformedLine("S line inside an unterminated block", lineno)
                tokens = tuple(line[2:].split())
                if not tokens:
                    raise EmptyBlock("S line without tokens", lineno)
                current = (lineno, tokens, [])
            elif line.startswith("A "):
                if current is None:
                    raise MalformedLine("A line before any S line", lineno)
                current[2].append(parse_edit_line(line, len(current[1]), lineno))
            else:
                raise MalformedLine(f"line starts with neither S nor A: {line[:20]!r}", lineno)
        if current is not None:
            close()
    except Exception as exc:
        if hasattr(exc, "source") and source_name is not None:
            exc.source = source_name
        raise
    return blocks


def read_m2(path):
    with open(path, encoding="utf-8") as f:
        return parse_m2(f.read(), source_name=str(path))


def write_m2(blocks):
    return "".join(b.to_m2() + "\n" for b in blocks)


def write_sent(blocks):
    """Serialize ``(id, tokens)`` pairs or blocks as ``id<TAB>tokens`` lines."""
    out = []
    for item in blocks:
        if isinstance(item, AnnotationBlock):
            ident, tokens = item.id, item.source
        else:
            ident, tokens = item
        tokens = list(tokens)
        if not tokens:
            raise MalformedLine(f"sentence {ident!r} has no tokens")
        if not ident or any(c.isspace() for c in ident):
            raise MalformedLine(f"bad sentence id {ident!r}")
        out.append(f"{ident}\t{' '.join(tokens)}\n")
    return "".join(out)


def read_sent(text, source_name=None):
    pairs = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        ident, tab, rest = line.partition("\t")
        tokens = tuple(rest.split())
        if not tab or not ident.strip() or not tokens:
            raise MalformedLine("expected '<id><TAB><tokens>'", lineno, source_name)
        pairs.append((ident.strip(), tokens))
    return pairs


# ---------------------------------------------------------------- applying


def _plan(block, annotator):
    """Order one annotator's edits into a left-to-right rewrite plan.

    Returns ``(spans, inserts)`` where ``spans`` maps a start offset to the
    merged (end, action, corrections) for that span, and ``inserts`` maps a
    gap to the insertion edits landing there.
    """
    n = len(block.source)
    spans = {}
    inserts = {}
    for e in block.edits_for(annotator):
        e.check(n)
        if e.action.is_insertion:
            inserts.setdefault(e.position, []).append(e)
            continue
        if e.start in spans:
            if spans[e.start][0] != e.end:
                raise ConflictingEdits(
                    f"block {block.id}: spans {e.start}-{spans[e.start][0]} "
                    f"and {e.start}-{e.end} overlap")
            # several annotations on one token: keep the first action
            spans[e.start][2].append(e.correction)
            continue
        spans[e.start] = [e.end, e.action, [e.correction]]

    starts = sorted(spans)
    for a, b in zip(starts, starts[1:]):
        if spans[a][0] > b:
            raise ConflictingEdits(
                f"block {block.id}: spans {a}-{spans[a][0]} and {b}-{spans[b][0]} overlap")
    for pos in inserts:
        for s in starts:
            if s < pos < spans[s][0]:
                raise ConflictingEdits(
                    f"block {block.id}: insertion at {pos} falls inside span {s}-{spans[s][0]}")
    for pos, group in inserts.items():
        # Add_after belongs to the preceding token, so it comes first
        group.sort(key=lambda e: e.action is not ActionKind.ADD_AFTER)
    return spans, inserts


def extract_triples(block, annotator=0):
    """Align each source token with its correction and action."""
    spans, inserts = _plan(block, annotator)
    src = block.source
    out = []
    i = 0
    n = len(src)
    while True:
        for e in inserts.get(i, ()):
            out.append(DatasetTriple("", " ".join(e.correction_tokens), e.action))
        if i >= n:
            break
        if i in spans:
            end, action, corrections = spans[i]
            corrected = " ".join(t for c in corrections for t in c.split())
            out.append(DatasetTriple(" ".join(src[i:end]), corrected, action))
            i = end
        else:
            out.append(DatasetTriple(src[i], src[i], ActionKind.OK))
            i += 1
    return out


def apply_edits(block, annotator=0):
    """Return the corrected token sequence for one annotator."""
    return tuple(t for triple in extract_triples(block, annotator)
                 for t in triple.corrected.split())


def apply_spans(tokens, corrections):
    """Rewrite ``tokens`` with ``(start, end, replacement)`` triples.

    Spans are applied right to left so earlier offsets stay valid;
    insertions at one gap keep their given order.
    """
    out = list(tokens)
    ordered = sorted(corrections, key=lambda c: (c[0], c[1]))
    for start, end, replacement in reversed(ordered):
        if not 0 <= start <= end <= len(tokens):
            raise SpanOutOfRange(f"span {start} {end} outside {len(tokens)} tokens")
        out[start:end] = replacement.split()
    return tuple(out)


# ---------------------------------------------------------------- statistics


def corpus_stats(blocks):
    blocks = list(blocks)
    if not blocks:
        raise EmptyCorpus("no annotation blocks")
    actions = Counter({a: 0 for a in ActionKind})
    tokens = Counter()
    chars = {" "}
    n_edits = 0
    for b in blocks:
        tokens.update(b.source)
        for t in b.source:
            chars.update(t)
        covered = set()
        for e in b.edits:
            actions[e.action] += 1
            covered.update(range(e.start, e.end))
        n_edits += len(b.edits)
        actions[ActionKind.OK] += len(b.source) - len(covered)
    histogram = Counter(tokens.values())
    return CorpusStats(
        action_counts=dict(actions),
        char_inventory=sorted(chars),
        word_frequency=dict(sorted(histogram.items())),
        error_density=n_edits / len(blocks),
        token_count=sum(tokens.values()),
        block_count=len(blocks),
        unique_tokens=len(tokens),
        edit_count=n_edits,
    )
