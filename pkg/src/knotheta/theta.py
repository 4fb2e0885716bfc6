"""Intersection-pairing models of the Jones and HOMFLY-PT polynomials.

``theta_jones`` sums, over Kauffman states, the grading monomial times the
pairing specialised at ``Q = 1 - q - q^-1``; ``theta_homfly`` does the same
over the skein-tree states with ``Q = 1 - (a - a^-1)/z`` and one circle cut
open at a base point.  Both pairings are produced by enumerating every
intersection point, never by the closed forms they are checked against.

The Jones grading monomial of a state with intersection number ``i`` is
``(-1)^(i/2) q^(w - i/2)``, which matches the bracket normalisation term by
term.  ``literal=True`` instead returns the unsigned sum
``s^(3w - i) (s^2 + s^-2)^|sigma|`` in ``s = q^(1/2)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _kernels as K
from .diagram import LinkDiagram
from .homfly import SKEIN_TABLE, UNLINK_FACTOR, HomflyState, expand_states
from .kauffman import check_limit, state_tuple
from .polynomial import LaurentPoly
from .surface import (
    assign_sigma_punctures,
    basepoint_circle,
    build_specialization,
    build_surface_model,
    enumerate_and_pair,
)

_q = LaurentPoly.var("q")
_s = LaurentPoly.var("s")
_Q = LaurentPoly.var("Q")

Q_JONES = 1 - _q - _q ** -1
Q_HOMFLY = 1 - UNLINK_FACTOR


@dataclass(frozen=True)
class LedgerEntry:
    state: str
    grading: tuple[int, ...]  # (i,) for Jones, (i_a, i_z) for HOMFLY-PT
    sign: int
    pairing: LaurentPoly  # in Q
    term: LaurentPoly

    def to_dict(self) -> dict:
        return {
            "state": self.state,
            "grading": list(self.grading),
            "sign": self.sign,
            "pairing": self.pairing.to_text(),
            "term": self.term.to_text(),
        }


@dataclass(frozen=True)
class ThetaResult:
    polynomial: LaurentPoly
    ledger: tuple[LedgerEntry, ...] | None = field(default=None, compare=False)

    def recombined(self) -> LaurentPoly:
        total = LaurentPoly.const(0)
        for e in self.ledger or ():
            total = total + e.term
        return total


def _state_label(state) -> str:
    return "".join("+" if v > 0 else "-" for v in state)


def jones_grading_monomial(w: int, i: int) -> LaurentPoly:
    return LaurentPoly.monomial({"q": w - i // 2}, -1 if (i // 2) % 2 else 1)


def _q_poly(coeffs) -> LaurentPoly:
    return LaurentPoly({(("Q", k),): int(c) for k, c in enumerate(coeffs) if c})


def _check_flags(flags: np.ndarray) -> None:
    names = ("grading identity", "monodromy requirement", "closed-form pairing",
             "nesting tree", "distinct sigma-punctures")
    bad = [f"{names[i]} ({int(flags[i])} states)" for i in range(len(names)) if flags[i]]
    if bad:
        raise AssertionError("intersection model checks failed: " + ", ".join(bad))


def theta_table(d: LinkDiagram, threads: int | None = None) -> np.ndarray:
    """``table[(i + 2n)//2, k]``: signed count of intersection points with grading i and Q^k."""
    n = d.n
    a = d.arrays
    table, flags = K.run_chunked(
        K.theta_j_table, 1 << n,
        (n, a.other_end, a.is_head, a.sign, a.qface, a.n_faces, a.face_is_outer), threads)
    _check_flags(flags)
    return table


def theta_jones(d: LinkDiagram, threads: int | None = None, max_crossings: int | None = None,
                ledger: bool = False, literal: bool = False) -> ThetaResult:
    check_limit(d, max_crossings)
    n, w, loops = d.n, d.writhe(), len(d.loops)
    loop_factor = (1 - _Q) ** loops
    if n == 0:
        rows = {0: LaurentPoly.const(1)}
        entries = [(0, "", LaurentPoly.const(1))] if ledger else []
    else:
        table = theta_table(d, threads)
        rows = {}
        for r in range(table.shape[0]):
            if table[r].any():
                rows[2 * r - 2 * n] = _q_poly(table[r])
        entries = []
        if ledger:
            a = d.arrays
            args = (n, a.other_end, a.is_head, a.sign, a.qface, a.n_faces, a.face_is_outer)
            for s in range(1 << n):
                t, _ = K.theta_j_table(s, s + 1, *args)
                r = int(np.nonzero(t.any(axis=1))[0][0])
                entries.append((2 * r - 2 * n, _state_label(state_tuple(s, n)), _q_poly(t[r])))

    def term(i: int, pairing_q: LaurentPoly) -> LaurentPoly:
        pairing_q = pairing_q * loop_factor
        if literal:
            return LaurentPoly.monomial({"s": 3 * w - i}) * pairing_q.substitute(
                {"Q": 1 - _s ** 2 - _s ** -2})
        return jones_grading_monomial(w, i) * pairing_q.substitute({"Q": Q_JONES})

    total = LaurentPoly.const(0)
    for i, pq in rows.items():
        total = total + term(i, pq)
    led = None
    if ledger:
        led = tuple(LedgerEntry(label, (i,), 1, pq * loop_factor, term(i, pq))
                    for i, label, pq in entries)
    return ThetaResult(total, led)


def grading_homfly(st: HomflyState, d: LinkDiagram) -> tuple[int, int]:
    """(i_a, i_z) read off the actions with the local sign tables."""
    ia = iz = 0
    for c, act in enumerate(st.actions):
        key = (d.signs[c], act)
        if key in SKEIN_TABLE:
            da, dz = SKEIN_TABLE[key]
            ia += da
            iz += dz
    return ia, iz


def default_cut(d: LinkDiagram) -> int:
    """b_{2n}: the second base point of the last crossing."""
    return 2 * d.n


def homfly_pairing(d: LinkDiagram, st: HomflyState, cut_basepoint: int | None = None) -> LaurentPoly:
    """Pairing of one skein-tree state, as a polynomial in Q."""
    sc = st.circles
    loops = sc.n_loops
    if d.n == 0:
        return (1 - _Q) ** max(loops - 1, 0)
    b = default_cut(d) if cut_basepoint is None else cut_basepoint
    if not 1 <= b <= 2 * d.n:
        raise ValueError(f"cut base point must be in 1..{2 * d.n}")
    sm = build_surface_model(d)
    asg = assign_sigma_punctures(sc, sm)
    spec = build_specialization(asg, d.n)
    cut = basepoint_circle(sc, b)
    return enumerate_and_pair(sc, asg, spec, cut) * (1 - _Q) ** loops


def theta_homfly(d: LinkDiagram, cut_basepoint: int | None = None,
                 max_crossings: int | None = None, ledger: bool = False) -> ThetaResult:
    check_limit(d, max_crossings)
    total = LaurentPoly.const(0)
    entries = []
    for st in expand_states(d):
        if grading_homfly(st, d) != (st.i_a, st.i_z):
            raise AssertionError("HOMFLY-PT grading disagrees with the skein bookkeeping")
        pq = homfly_pairing(d, st, cut_basepoint)
        term = LaurentPoly.monomial({"a": st.i_a, "z": st.i_z}, st.sign) * pq.substitute(
            {"Q": Q_HOMFLY})
        total = total + term
        if ledger:
            entries.append(LedgerEntry(_state_label(st.state), (st.i_a, st.i_z), st.sign, pq, term))
    return ThetaResult(total, tuple(entries) if ledger else None)
