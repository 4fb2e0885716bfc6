import random

import pytest

from conftest import FIGURE_EIGHT, HOPF_NEG, TREFOIL_RH, corpus_diagrams
from knotheta.diagram import ORIENTED, SWITCH, add_kink, disjoint_union, from_braid, parse_pd, unlink
from knotheta.errors import CrossingLimitExceeded, DiagramError
from knotheta.harness import skein_residual
from knotheta.homfly import (
    CONVENTION,
    SKEIN_TABLE,
    UNLINK_FACTOR,
    apply_convention,
    determine_convention,
    expand_states,
    homfly_recursive,
    homfly_state_sum,
    renormalized_state,
    skein_children,
    specialize_to_alexander,
    specialize_to_jones,
    traverse,
)
from knotheta.kauffman import apply_state, jones_reduced
from knotheta.polynomial import LaurentPoly

a, z, t = LaurentPoly.var("a"), LaurentPoly.var("z"), LaurentPoly.var("t")


def test_traverse_examples():
    assert traverse(unlink(3)).descending
    assert traverse(parse_pd("X[1,1,2,2]")).descending
    assert traverse(from_braid([1, -1])).descending
    d = parse_pd(TREFOIL_RH)
    for comp_edges in d.components[0].edges:
        rep = traverse(d.with_basepoints([comp_edges]))
        assert rep.nd and rep.first_nd in rep.nd
        assert rep.reached | rep.nd == frozenset(range(3)) and not rep.reached & rep.nd


def test_skein_children_merge_and_split():
    hopf = parse_pd(HOPF_NEG)
    chi = traverse(hopf).first_nd
    d_o, d_s = skein_children(hopf, chi)
    assert d_o.n_components == 1 and d_s.n_components == 2
    tref = parse_pd(TREFOIL_RH)
    chi = traverse(tref).first_nd
    d_o, d_s = skein_children(tref, chi)
    assert d_o.n_components == 2
    assert d_s.writhe() == 1
    for child in (d_o, d_s):
        assert len(traverse(child).nd) < len(traverse(tref).nd)


def test_skein_children_needs_the_stopping_crossing():
    tref = parse_pd(TREFOIL_RH)
    other = next(c for c in range(3) if c != traverse(tref).first_nd)
    with pytest.raises(DiagramError):
        skein_children(tref, other)


def test_split_places_new_component_after_the_old_one():
    d = from_braid([1, 1, 1, 2, -2])
    chi = traverse(d).first_nd
    comp = d.component_of(d.pd[chi][0])
    d_o = skein_children(d, chi)[0]
    assert d_o.n_components == d.n_components + 1
    # the component through chi keeps its slot; the split-off curve follows it
    assert d_o.components[comp].base == d.components[comp].base


def test_expand_states_examples():
    (st,) = expand_states(unlink(2))
    assert (st.i_a, st.i_z, st.sign) == (0, 0, 1)
    (st,) = expand_states(parse_pd("X[1,1,2,2]"))
    assert (st.i_a, st.i_z, st.sign) == (0, 0, 1)
    assert homfly_state_sum(parse_pd(TREFOIL_RH)) == homfly_recursive(parse_pd(TREFOIL_RH))


def test_homfly_state_bookkeeping():
    for _, d in corpus_diagrams(max_crossings=8):
        for st in expand_states(d):
            applied = [c for c, act in enumerate(st.actions) if act in (ORIENTED, SWITCH)]
            assert len(applied) <= d.n
            assert st.i_a == sum(SKEIN_TABLE[(d.signs[c], st.actions[c])][0] for c in applied)
            assert st.i_z == sum(st.actions[c] == ORIENTED for c in applied)
            neg_oriented = sum(st.actions[c] == ORIENTED and d.signs[c] < 0 for c in applied)
            assert st.sign == (-1) ** neg_oriented
            assert st.circles.count == st.leaf.n_components


def test_renormalized_state_examples():
    assert renormalized_state(unlink(3)) == ()
    kink = parse_pd("X[1,1,2,2]")
    assert apply_state(kink, renormalized_state(kink)).count == 1
    clasp = from_braid([1, -1])
    s = renormalized_state(clasp)
    assert s == tuple(clasp.signs)  # both crossings smoothed along the orientation
    assert apply_state(clasp, s).count == 2
    with pytest.raises(DiagramError):
        renormalized_state(parse_pd(TREFOIL_RH))


def test_renormalized_state_on_decorated_unlinks():
    diagrams = [from_braid([1, -1, 2, -2], 3), add_kink(from_braid([1, -1]), 2, 3),
                disjoint_union(add_kink(from_braid([1, -1]), 1, 0), parse_pd("X[1,2,2,1]"))]
    for d in diagrams:
        assert traverse(d).descending
        assert apply_state(d, renormalized_state(d)).count == d.n_components


@pytest.mark.parametrize("m", range(1, 6))
def test_unlinks(m):
    assert homfly_recursive(unlink(m)) == UNLINK_FACTOR ** (m - 1)
    assert homfly_state_sum(unlink(m)) == UNLINK_FACTOR ** (m - 1)


def test_recursive_examples():
    assert homfly_recursive(parse_pd("U")) == 1
    assert homfly_recursive(unlink(2)) == LaurentPoly.parse("a*z^-1 - a^-1*z^-1")
    assert homfly_recursive(from_braid([1, 1, 1])) == LaurentPoly.parse("a^-2*z^2 + 2*a^-2 - a^-4")
    assert homfly_recursive(parse_pd(FIGURE_EIGHT)) == LaurentPoly.parse("a^2 - 1 + a^-2 - z^2")


def test_state_sum_equals_recursion():
    for _, d in corpus_diagrams(max_crossings=10):
        assert homfly_state_sum(d) == homfly_recursive(d)


def test_skein_relation_on_random_crossings():
    rng = random.Random(7)
    diagrams = [d for _, d in corpus_diagrams(max_crossings=8) if d.n]
    for _ in range(40):
        d = rng.choice(diagrams)
        assert skein_residual(d, rng.randrange(d.n), homfly_recursive).is_zero()


def test_memo_does_not_change_results():
    shared: dict = {}
    for _, d in corpus_diagrams(max_crossings=8):
        assert homfly_recursive(d, memo=shared) == homfly_recursive(d, use_memo=False)


def test_basepoint_and_order_invariance_sample():
    d = from_braid([1, -2, 1, -2, -2])
    ref = homfly_recursive(d)
    e0, e1 = d.components[0].edges, d.components[1].edges
    for b0 in e0:
        for b1 in e1[::2]:
            for bases in ([b0, b1], [b1, b0]):
                assert homfly_recursive(d.with_basepoints(bases), memo={}) == ref


def test_specialisations():
    one = LaurentPoly.const(1)
    assert specialize_to_jones(one) == 1 and specialize_to_alexander(one) == 1
    assert specialize_to_alexander(homfly_recursive(unlink(2))).is_zero()
    delta = specialize_to_alexander(homfly_recursive(from_braid([1, 1, 1])))
    assert delta == t - 1 + t ** -1
    assert delta.substitute({"t": t ** -1}) == delta and delta.substitute({"t": 1}) == 1
    # two-component links keep half powers of t, written in s = t^(1/2)
    hopf = specialize_to_alexander(homfly_recursive(from_braid([1, 1])))
    assert hopf.variables() == {"s"}


def test_convention_map_is_frozen_correctly():
    assert determine_convention(jones_reduced, homfly_recursive) == CONVENTION
    for _, d in corpus_diagrams(max_crossings=8):
        assert apply_convention(homfly_recursive(d)) == jones_reduced(d)


def test_crossing_limit():
    with pytest.raises(CrossingLimitExceeded):
        homfly_state_sum(from_braid([1] * 9), max_crossings=8)
    with pytest.raises(CrossingLimitExceeded):
        homfly_recursive(from_braid([1] * 9), max_crossings=8)
