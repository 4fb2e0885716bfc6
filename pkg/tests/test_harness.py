import json

import pytest

from conftest import CORPUS, TREFOIL_RH
from knotheta.harness import (
    ALL_CHECKS,
    CorpusEntry,
    CorpusError,
    load_corpus,
    parse_corpus,
    reports_to_json,
    reports_to_text,
    verify,
    verify_corpus,
)
from knotheta.kauffman import jones_unreduced
from knotheta.polynomial import LaurentPoly

HEADER = "name,pd,aliases,expected_jones,expected_homfly\n"
REQUIRED = {"unknot", "kink_pos", "kink_neg", "unlink_2", "unlink_3", "unlink_4", "unlink_5",
            "hopf_pos", "hopf_neg", "trefoil_rh", "trefoil_lh", "figure_eight", "5_1", "5_2",
            "6_1", "6_2", "6_3", "square_knot", "granny_knot", "whitehead", "borromean"}


def test_bundled_corpus_contents():
    assert {e.name for e in CORPUS} == REQUIRED
    for e in CORPUS:
        assert len(e.aliases) >= 2, e.name


def test_row_without_expectations():
    (e,) = parse_corpus(HEADER + "unknot,U,,,\n")
    assert e == CorpusEntry("unknot", "U", (), {}, 2)


def test_row_with_aliases():
    (e,) = parse_corpus(HEADER + f'trefoil,"{TREFOIL_RH}","X[1,1,2,2]|U",,\n')
    assert len(e.aliases) == 2


def test_malformed_row_reports_line():
    text = HEADER + "unknot,U,,,\nbroken,\"X[1,2,3\",,,\nfine,\"X[1,1,2,2]\",,,\n"
    with pytest.raises(CorpusError, match="line 3"):
        parse_corpus(text)
    corpus = parse_corpus(text, lenient=True)
    assert [e.name for e in corpus] == ["unknot", "fine"]
    assert corpus.errors[0][0] == 3


def test_bad_expectation_is_a_row_error():
    with pytest.raises(CorpusError, match="line 2"):
        parse_corpus(HEADER + "unknot,U,,q^^2,\n")


def test_json_corpus(tmp_path):
    path = tmp_path / "c.json"
    path.write_text(json.dumps([
        {"name": "unknot", "pd": "U", "aliases": ["X[1,1,2,2]", "X[1,2,2,1]"],
         "expected": {"jones": "1"}},
    ]))
    (e,) = load_corpus(path)
    assert e.aliases == ("X[1,1,2,2]", "X[1,2,2,1]") and e.expected == {"jones": "1"}


def test_missing_file():
    with pytest.raises(CorpusError):
        load_corpus("/nonexistent/corpus.csv")


def test_unknot_passes_everything():
    rep = verify(CorpusEntry("unknot", "U"))
    assert rep.passed and {r.name for r in rep.results} == set(ALL_CHECKS)


def test_mirror_entries_relate_by_q_inversion():
    q = LaurentPoly.var("q")
    by_name = {e.name: e for e in CORPUS}
    rh = jones_unreduced(by_name["trefoil_rh"].diagram())
    lh = jones_unreduced(by_name["trefoil_lh"].diagram())
    assert lh == rh.substitute({"q": q ** -1}) and lh != rh


def test_limit_skips_entry():
    rep = verify(CorpusEntry("trefoil", TREFOIL_RH), max_crossings=2)
    assert rep.skipped and rep.passed and not rep.results


def test_failures_are_reported_with_diffs():
    e = CorpusEntry("wrong", TREFOIL_RH, ("X[1,1,2,2]",), {"jones": "q^2"})
    rep = verify(e)
    failed = {r.name: r.detail for r in rep.results if not r.passed}
    assert set(failed) == {"aliases", "expected"}
    assert "difference" in failed["expected"]
    assert "FAIL" in rep.to_text()


def test_selected_checks_only():
    rep = verify(CorpusEntry("t", TREFOIL_RH), checks={"skein"})
    assert [r.name for r in rep.results] == ["skein"]


def test_full_corpus_verifies():
    reports = verify_corpus(CORPUS, workers=3)
    assert [r.name for r in reports] == [e.name for e in CORPUS]
    bad = [r.to_text() for r in reports if not r.passed]
    assert not bad, "\n".join(bad)
    assert json.loads(reports_to_json(reports))["passed"] is True
    assert reports_to_text(reports).endswith("0 failing, 0 skipped")
