"""Corpus tools and scorers for grammatical error correction."""

__version__ = "0.1.0"

from .align import build_lattice, lev_matrix, shortest_path_cells
from .errors import (
    ConflictingEdits,
    EmptyBlock,
    EmptyCorpus,
    EmptyHypothesis,
    GecError,
    InvalidEdit,
    LengthMismatch,
    MalformedLine,
    SpanOutOfRange,
    UnknownAction,
)
from .imeasure import SopCosts, imeasure_score, sop_align, was_classify
from .m2corpus import (
    ActionKind,
    AnnotationBlock,
    DatasetTriple,
    Edit,
    apply_edits,
    corpus_stats,
    extract_triples,
    parse_m2,
    read_sent,
    write_m2,
    write_sent,
)
from .maxmatch import SystemEdit, m2_extract_edits, m2_score, score_edit_sets
from .ngram_metrics import bleu, gleu
