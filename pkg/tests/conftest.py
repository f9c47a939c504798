import sys
from pathlib import Path

import pytest
from hypothesis import strategies as st

DATA = Path(__file__).parent / "data"

LEV_SOURCE = tuple("the greater the Levenshtein distances , more different strings are .".split())
LEV_HYPOTHESIS = tuple(
    "the greater the Levenshtein distances , the more different strings are .".split())
LEV_GOLD = ((4, 5, "distance"), (6, 7, "the more"))

# the Listing as printed, in order
LISTING_TRIPLES = [
    ["Tihs", "This", "Edit"],
    ["text", "text", "OK"],
    ["ismeant", "is meant", "Split"],
    ["tu", "to", "Edit"],
    ["in", "in", "OK"],
    ["Ara bic", "Arabic", "Merge"],
    ["but", "but", "OK"],
    ["", ",", "Add_before"],
    ["is it", "it is", "Move"],
    ["", ".", "Add_after"],
    [":", "", "Delete"],
]


@pytest.fixture
def data_dir():
    return DATA


@pytest.fixture
def fig_text():
    return (DATA / "fig_example.m2").read_text(encoding="utf-8")


@pytest.fixture
def corpus_text():
    return (DATA / "corpus50.m2").read_text(encoding="utf-8")


WORDS = st.sampled_from(["a", "b", "c", "the", "cat", ",", ".", "&amp;", "كتب"])


@st.composite
def blocks(draw, max_tokens=8):
    """Random well-formed m2 block text for a single annotator."""
    tokens = draw(st.lists(WORDS, min_size=1, max_size=max_tokens))
    n = len(tokens)
    lines = ["S " + " ".join(tokens)]
    i = 0
    while i < n:
        kind = draw(st.sampled_from(
            ["skip", "skip", "Edit", "Split", "Delete", "Merge", "Move", "Other",
             "Add_before", "Add_after"]))
        width = {"skip": 1, "Edit": 1, "Split": 1, "Delete": 1, "Merge": 2, "Move": 2,
                 "Other": draw(st.integers(1, 3)), "Add_before": 0, "Add_after": 0}[kind]
        if kind == "skip" or i + width > n:
            i += 1
            continue
        if kind == "Delete":
            corr = ""
        else:
            corr = " ".join(draw(st.lists(WORDS, min_size=1, max_size=2)))
        lines.append(f"A {i} {i + width}|||{kind}|||{corr}|||REQUIRED|||-NONE-|||0")
        i += max(width, 1) + (kind == "Add_after")
    return "\n".join(lines) + "\n"


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    if module is None or not module.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in module.RESULTS:
        terminalreporter.write_line(line)
