"""Acceptance suite: one PASS/FAIL line per criterion.

Run with ``pytest tests/test_acceptance.py -v`` or ``python3 tests/test_acceptance.py``.
"""

import itertools
import random
import sys
import time
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

import oracles  # noqa: E402
from conftest import DATA, LEV_GOLD, LEV_HYPOTHESIS, LEV_SOURCE, LISTING_TRIPLES  # noqa: E402
from gecmetrics.align import lev_matrix, shortest_path_cells  # noqa: E402
from gecmetrics.imeasure import alignment_cost, imeasure_score, sop_align, was_classify  # noqa: E402
from gecmetrics.m2corpus import apply_edits, extract_triples, parse_m2, write_m2  # noqa: E402
from gecmetrics.maxmatch import (  # noqa: E402
    m2_extract_edits,
    m2_score,
    precision_recall_f,
    score_edit_sets,
)
from gecmetrics.ngram_metrics import bleu, gleu  # noqa: E402


# collected here and echoed in the terminal summary (see conftest.py)
RESULTS = []


def report(criterion, ok, detail):
    line = f"{'PASS' if ok else 'FAIL'} criterion {criterion}: {detail}"
    RESULTS.append(line)
    print(line)
    assert ok, line


def test_criterion_1_m2_worked_example():
    start = time.perf_counter()
    r = m2_score([(LEV_SOURCE, LEV_HYPOTHESIS, LEV_GOLD)], beta=0.5, max_unchanged=2)
    elapsed = time.perf_counter() - start
    ok = (abs(r.precision - 0.5) <= 1e-9 and abs(r.recall - 0.5) <= 1e-9
          and abs(r.f_beta - 0.5) <= 1e-9 and elapsed < 0.010)
    report(1, ok, f"P={r.precision:.4f} R={r.recall:.4f} F0.5={r.f_beta:.4f} "
                  f"in {1000 * elapsed:.2f} ms (target P=R=F=0.5000, < 10 ms)")


def test_criterion_2_hypothesis_b():
    gold = {("burgening", "burgeoning"), ("signe", "sign"), ("ishere", "is here")}
    pred = {("burgening", "burgeoning"), ("signe", "sign"), ("ishere.", "is here."), (".", "")}
    r = score_edit_sets([gold], [pred], beta=0.5)
    ok = (abs(r.precision - 0.5) <= 1e-9 and abs(r.recall - 2 / 3) <= 1e-9
          and abs(r.f_beta - 10 / 19) <= 1e-9)
    report(2, ok, f"P={r.precision:.7f} R={r.recall:.7f} F0.5={r.f_beta:.7f} "
                  "(target 0.5, 2/3, 10/19)")


CIRCLED = {(i, i) for i in range(7)} | {(6, 7)} | {(i, i + 1) for i in range(7, 12)}


def test_criterion_3_levenshtein_fixture():
    m = lev_matrix(LEV_SOURCE, LEV_HYPOTHESIS)
    cells = shortest_path_cells(m)
    ok = m.distance == 1 and cells == CIRCLED
    report(3, ok, f"distance={m.distance}, shortest-path cells "
                  f"{'equal' if cells == CIRCLED else 'differ from'} the circled set")


def _figure_block():
    return parse_m2((DATA / "fig_example.m2").read_text(encoding="utf-8"))[0]


def test_criterion_4a_edit_application():
    text = " ".join(apply_edits(_figure_block()))
    expected = "This text is meant to be in Arabic but , it is not ."
    report("4a", text == expected, f"reconstruction {text!r}")


def test_criterion_4b_listing_triples():
    rows = [t.as_list() for t in extract_triples(_figure_block())]
    ok = rows == LISTING_TRIPLES
    missing = [r for r in rows if r not in LISTING_TRIPLES]
    report("4b", ok, f"{len(rows)} triples emitted vs {len(LISTING_TRIPLES)} listed; "
                     f"extra rows {missing}")


def test_criterion_5_baseline_rows():
    gold_tokens = "the greater the Levenshtein distance , the more different strings are .".split()
    m2 = m2_score([(LEV_SOURCE, LEV_SOURCE, LEV_GOLD)])
    im = imeasure_score([(LEV_SOURCE, LEV_SOURCE, gold_tokens)])
    rows = {label: det for label, det, _ in im.rows()}
    b = bleu([gold_tokens], [gold_tokens]).bleu
    g = gleu([gold_tokens], [gold_tokens], [LEV_SOURCE]).gleu
    ok = (f"{m2.precision:.4f}" == "1.0000" and m2.recall == 0 and m2.f_beta == 0
          and rows["P"] == "100.00" and rows["R"] == "0.00" and rows["I"] == "0.00"
          and f"{b:.6f}" == "1.000000" and f"{g:.6f}" == "1.000000")
    report(5, ok, f"M2 P={m2.precision:.4f} R={m2.recall:g} F={m2.f_beta:g}; "
                  f"I-measure P={rows['P']} R={rows['R']} I={rows['I']}; "
                  f"BLEU={b:.6f} GLEU={g:.6f}")


WAS_TABLE = [
    ("a", "a", "a", "TN", "TN"), ("a", "a", "b", "FN", "FN"), ("a", "a", "-", "FN", "FN"),
    ("a", "b", "a", "FP", "FP"), ("a", "b", "b", "TP", "TP"), ("a", "b", "c", "TP", "FPN"),
    ("a", "b", "-", "TP", "FPN"), ("a", "-", "a", "FP", "FP"), ("a", "-", "b", "TP", "FPN"),
    ("a", "-", "-", "TP", "TP"), ("-", "a", "a", "TP", "TP"), ("-", "a", "b", "TP", "FPN"),
    ("-", "a", "-", "FP", "FP"), ("-", "-", "a", "FN", "FN"),
]


def test_criterion_6_was_totality():
    wrong = []
    for s, h, g, det, cor in WAS_TABLE:
        col = tuple(None if x == "-" else x for x in (s, h, g))
        if was_classify(col) != (det, cor):
            wrong.append((s, h, g))
    report(6, not wrong and len(WAS_TABLE) == 14,
           f"{14 - len(wrong)}/14 rows classified as tabulated")


def _random_overlap_case(rng):
    a = [rng.choice("abc") for _ in range(rng.randint(0, 5))]
    b = [rng.choice("abc") for _ in range(rng.randint(0, 5))]
    u = rng.randint(0, 2)
    gold = set()
    path = rng.choice(oracles.minimal_paths(a, b))
    for chunk in rng.choice(list(oracles.chunkings(path, u))):
        (i, _), (k, _), src, tgt = oracles.chunk_edge(chunk, a, b)
        if src != tgt and rng.random() < 0.6:
            gold.add((i, k, " ".join(tgt)))
    for _ in range(rng.randint(0, 2)):
        i = rng.randint(0, len(a))
        k = rng.randint(i, min(len(a), i + 2))
        gold.add((i, k, rng.choice(["a", "b", "c a", ""])))
    return a, b, gold, u


def test_criterion_7a_lattice_overlap_oracle():
    rng = random.Random(7)
    cases, bad = 2000, []
    for _ in range(cases):
        a, b, gold, u = _random_overlap_case(rng)
        hits = len({e.key for e in m2_extract_edits(a, b, gold, u)} & gold)
        if hits != oracles.max_overlap(a, b, gold, u):
            bad.append((a, b, sorted(gold), u))
    report("7a", not bad, f"{cases - len(bad)}/{cases} random cases reach the brute-force "
                          "maximum overlap")


def test_criterion_7b_sop_exhaustive():
    seqs = [s for n in range(4) for s in itertools.product("ab", repeat=n)]
    total, bad = 0, 0
    for a, b, c in itertools.product(seqs, repeat=3):
        total += 1
        if alignment_cost(sop_align(a, b, c)) != oracles.min_sop_cost(a, b, c):
            bad += 1
    report("7b", bad == 0, f"{total - bad}/{total} triples (lengths <= 3) match exhaustive "
                           "search")


def _ngram_fixture(rng):
    src = [rng.choice("abcd") for _ in range(rng.randint(1, 7))]
    ref = [rng.choice("abcde") if rng.random() < 0.3 else t for t in src]
    hyp = [rng.choice("abcde") if rng.random() < 0.3 else t for t in src]
    if rng.random() < 0.3:
        hyp.insert(rng.randint(0, len(hyp)), rng.choice("abcde"))
    return hyp, ref, src


def test_criterion_7c_bounds_and_monotonicity():
    rng = random.Random(70)
    fixtures, problems = 500, []
    for idx in range(fixtures):
        tp, fp, fn = rng.randint(0, 30), rng.randint(0, 30), rng.randint(0, 30)
        beta = rng.uniform(0.1, 3.0)
        p, r, f = precision_recall_f(tp, fp, fn, beta)
        if not (0 <= f <= 1 and (p == 0 or r == 0 or min(p, r) - 1e-12 <= f <= max(p, r) + 1e-12)):
            problems.append(("f", idx))
        hyps, refs, srcs = zip(*[_ngram_fixture(rng) for _ in range(rng.randint(1, 3))])
        for smooth in (False, True):
            if not 0 <= bleu(hyps, refs, smooth=smooth).bleu <= 1:
                problems.append(("bleu", idx))
            scores = [gleu(hyps, refs, srcs, penalty=lam, smooth=smooth).gleu
                      for lam in (0.0, 0.25, 1.0, 3.0)]
            if not all(0 <= s <= 1 for s in scores):
                problems.append(("gleu range", idx))
            if any(x < y for x, y in zip(scores, scores[1:])):
                problems.append(("gleu monotone", idx))
    report("7c", not problems, f"{fixtures} fixtures, {len(problems)} violations")


def test_criterion_8_round_trip():
    text = (DATA / "corpus50.m2").read_text(encoding="utf-8")
    parsed = parse_m2(text)
    again = parse_m2(write_m2(parsed))
    report(8, len(parsed) == 50 and again == parsed,
           f"{len(parsed)} blocks, identity {'holds' if again == parsed else 'broken'}")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
