import pytest

from conftest import FIGURE_EIGHT, HOPF_NEG, TREFOIL_RH, corpus_diagrams
from knotheta.diagram import ORIENTED, SWITCH, add_kink, from_braid, parse_pd, unlink
from knotheta.errors import CrossingLimitExceeded
from knotheta.homfly import (
    UNLINK_FACTOR,
    apply_convention,
    expand_states,
    homfly_recursive,
    homfly_state_sum,
)
from knotheta.kauffman import jones_unreduced
from knotheta.polynomial import LaurentPoly
from knotheta.theta import default_cut, grading_homfly, theta_homfly, theta_jones

q = LaurentPoly.var("q")
DELTA = q + q ** -1


@pytest.mark.parametrize("text", ["U", "X[1,1,2,2]", "X[1,2,2,1]"])
def test_theta_jones_of_unknot_diagrams(text):
    assert theta_jones(parse_pd(text)).polynomial == DELTA


def test_theta_jones_matches_bracket(small_diagram):
    assert theta_jones(small_diagram).polynomial == jones_unreduced(small_diagram)


def test_theta_homfly_matches_recursion(small_diagram):
    assert theta_homfly(small_diagram).polynomial == homfly_recursive(small_diagram)


@pytest.mark.parametrize("m", range(1, 6))
def test_theta_homfly_of_unlinks(m):
    assert theta_homfly(unlink(m)).polynomial == UNLINK_FACTOR ** (m - 1)


def test_ledgers_recombine():
    for _, d in corpus_diagrams(max_crossings=6):
        rj = theta_jones(d, ledger=True)
        assert rj.recombined() == rj.polynomial and len(rj.ledger) == max(1, 2 ** d.n)
        rh = theta_homfly(d, ledger=True)
        assert rh.recombined() == rh.polynomial
        assert len(rh.ledger) == len(expand_states(d))


def test_grading_homfly_examples():
    (st,) = expand_states(unlink(2))
    assert grading_homfly(st, unlink(2)) == (0, 0)
    hopf = from_braid([1, 1])  # positive crossings
    neg = parse_pd(HOPF_NEG)
    for d, act, expect in ((hopf, ORIENTED, (-1, 1)), (neg, SWITCH, (2, 0))):
        applied = [st for st in expand_states(d)
                   if [a for a in st.actions if a in (ORIENTED, SWITCH)] == [act]]
        assert applied and all(grading_homfly(st, d) == expect for st in applied)


def test_cut_basepoint_invariance():
    for _, d in corpus_diagrams(max_crossings=5):
        ref = homfly_recursive(d)
        for b in range(1, 2 * d.n + 1):
            assert theta_homfly(d, cut_basepoint=b).polynomial == ref


def test_default_cut_is_last_base_point():
    assert default_cut(parse_pd(TREFOIL_RH)) == 6
    with pytest.raises(ValueError):
        theta_homfly(parse_pd(TREFOIL_RH), cut_basepoint=7)


def test_reduced_jones_divisibility():
    for _, d in corpus_diagrams(max_crossings=8):
        reduced = theta_jones(d).polynomial.divide_exact(DELTA)
        assert reduced == apply_convention(theta_homfly(d).polynomial)


def test_literal_formula_is_the_unsigned_sum():
    s = LaurentPoly.var("s")
    kink = parse_pd("X[1,1,2,2]")
    # s^(3w - i) (s^2 + s^-2)^|sigma| over the two states of a kink
    expect = s ** 3 * (s ** 2 + s ** -2) ** 2 + s ** 5 * (s ** 2 + s ** -2)
    assert theta_jones(kink, literal=True).polynomial == expect
    assert theta_jones(parse_pd("U"), literal=True).polynomial == s ** 2 + s ** -2


def test_threads_do_not_change_theta_jones():
    d = add_kink(parse_pd(FIGURE_EIGHT), 3, 2)
    assert theta_jones(d, threads=1) == theta_jones(d, threads=5)


def test_kinks_on_split_diagrams():
    d = add_kink(unlink(2), 1, 0)
    assert theta_homfly(d).polynomial == homfly_state_sum(d) == UNLINK_FACTOR
    for b in (1, 2):
        assert theta_homfly(d, cut_basepoint=b).polynomial == UNLINK_FACTOR


def test_crossing_limit():
    with pytest.raises(CrossingLimitExceeded):
        theta_jones(from_braid([1] * 21))
    with pytest.raises(CrossingLimitExceeded):
        theta_homfly(from_braid([1] * 5), max_crossings=4)
