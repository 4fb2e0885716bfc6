from __future__ import annotations

import pytest

from knotheta.diagram import LinkDiagram, from_braid, parse_pd
from knotheta.harness import load_bundled_corpus

CORPUS = load_bundled_corpus()

TREFOIL_RH = "X[1,5,2,4] X[3,1,4,6] X[5,3,6,2]"
TREFOIL_LH = "X[1,4,2,5] X[3,6,4,1] X[5,2,6,3]"
FIGURE_EIGHT = "X[4,2,5,1] X[8,6,1,5] X[6,3,7,4] X[2,7,3,8]"
HOPF_NEG = "X[4,1,3,2] X[2,3,1,4]"


def corpus_diagrams(max_crossings: int = 14) -> list[tuple[str, LinkDiagram]]:
    """Every entry and alias diagram of the bundled corpus, labelled."""
    out = []
    for e in CORPUS:
        for k, text in enumerate((e.pd,) + e.aliases):
            d = parse_pd(text)
            if d.n <= max_crossings:
                out.append((e.name if k == 0 else f"{e.name}~{k}", d))
    return out


SMALL = [
    ("unknot", parse_pd("U")),
    ("unlink2", parse_pd("U U")),
    ("kink+", parse_pd("X[1,1,2,2]")),
    ("kink-", parse_pd("X[1,2,2,1]")),
    ("trefoil_rh", parse_pd(TREFOIL_RH)),
    ("trefoil_lh", parse_pd(TREFOIL_LH)),
    ("hopf_neg", parse_pd(HOPF_NEG)),
    ("hopf_pos", from_braid([1, 1])),
    ("figure_eight", parse_pd(FIGURE_EIGHT)),
    ("whitehead", from_braid([1, -2, 1, -2, -2])),
    ("borromean", from_braid([1, -2] * 3)),
]


@pytest.fixture(params=SMALL, ids=[n for n, _ in SMALL])
def small_diagram(request) -> LinkDiagram:
    return request.param[1]


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[key])
