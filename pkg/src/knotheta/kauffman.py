"""Kauffman states, state circles and the bracket form of the Jones polynomial.

The unreduced Jones polynomial is normalised so the crossingless unknot gives
``q + q^-1``::

    J(D) = sum over states of (-1)^w (-q)^((3w - sgn)/2) (q + q^-1)^|s|

Every exponent is an integer because ``sgn = w = n`` mod 2.  This is the
skein normalisation ``q^-2 J(L+) - q^2 J(L-) = (q^-1 - q) J(L0)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from . import _kernels as K
from .diagram import LinkDiagram
from .errors import CrossingLimitExceeded
from .polynomial import LaurentPoly

DEFAULT_MAX_CROSSINGS = 20

KauffmanState = tuple[int, ...]
StateLike = Union[Sequence[int], int]

_q = LaurentPoly.var("q")
DELTA = _q + _q ** -1


def check_limit(d: LinkDiagram, max_crossings: int | None) -> None:
    limit = DEFAULT_MAX_CROSSINGS if max_crossings is None else max_crossings
    if d.n > limit:
        raise CrossingLimitExceeded(d.n, limit)


def state_bits(sigma: StateLike) -> int:
    """Bit mask of a state given as a tuple of +1/-1 (bit set means ``-``)."""
    if isinstance(sigma, (int, np.integer)):
        return int(sigma)
    bits = 0
    for c, v in enumerate(sigma):
        if v not in (1, -1):
            raise ValueError(f"state entries must be +1 or -1, got {v!r}")
        if v < 0:
            bits |= 1 << c
    return bits


def state_tuple(bits: int, n: int) -> KauffmanState:
    return tuple(-1 if (bits >> c) & 1 else 1 for c in range(n))


def sgn(sigma: Sequence[int]) -> int:
    """n_+ minus n_-."""
    return sum(1 if v > 0 else -1 for v in sigma)


def oriented_choice(d: LinkDiagram, c: int) -> int:
    """The state value (+1/-1) that smooths crossing c along the orientation."""
    return d.signs[c]


@dataclass(frozen=True)
class StateCircles:
    """Circles of a state and how they nest.

    Circles with crossings come first, in order of their lowest end; each is
    stored as its ends in trace order ``e0, blue(e0), e1, blue(e1), ...`` so
    that ``(ends[2t], ends[2t+1])`` are the blue (resolution) arcs and the
    black strand arcs join ``ends[2t+1]`` to ``ends[2t+2]``.  Crossingless
    loops follow with empty end lists.  ``parent[k]`` is the nearest enclosing
    circle (``None`` at the top level), ``inner``/``outer`` are region ids on
    either side and ``corner`` is the region on the corner side of the first
    blue arc.
    """

    state: KauffmanState
    circles: tuple[tuple[int, ...], ...]
    parent: tuple[int | None, ...]
    depth: tuple[int, ...]
    inner: tuple[int, ...]
    outer: tuple[int, ...]
    corner: tuple[int, ...]
    root_region: int
    n_loops: int

    @property
    def count(self) -> int:
        return len(self.circles)

    @property
    def n_crossing_circles(self) -> int:
        return len(self.circles) - self.n_loops

    def children(self, k: int) -> list[int]:
        return [j for j, p in enumerate(self.parent) if p == k]

    def descendants(self, k: int) -> list[int]:
        out = []
        todo = self.children(k)
        while todo:
            j = todo.pop()
            out.append(j)
            todo.extend(self.children(j))
        return sorted(out)

    def blue_arcs(self, k: int) -> list[tuple[int, int]]:
        ends = self.circles[k]
        return [(ends[t], ends[t + 1]) for t in range(0, len(ends), 2)]

    def segments(self, k: int) -> list[tuple[str, int, int]]:
        """Alternating ("blue", end, end) and ("black", end, end) pieces of circle k."""
        ends = self.circles[k]
        out = []
        for t in range(0, len(ends), 2):
            out.append(("blue", ends[t], ends[t + 1]))
            out.append(("black", ends[t + 1], ends[(t + 2) % len(ends)]))
        return out

    def circle_of_end(self, e: int) -> int:
        for k, ends in enumerate(self.circles):
            if e in ends:
                return k
        raise KeyError(e)


def apply_state(d: LinkDiagram, sigma: StateLike) -> StateCircles:
    n = d.n
    bits = state_bits(sigma)
    if not isinstance(sigma, (int, np.integer)) and len(sigma) != n:
        raise ValueError(f"state has {len(sigma)} entries for {n} crossings")
    loops = len(d.loops)
    if n == 0:
        return StateCircles((), ((),) * loops, (None,) * loops, (1,) * loops,
                            tuple(range(1, loops + 1)), (0,) * loops, (0,) * loops, 0, loops)
    a = d.arrays
    n4 = 4 * n
    circ = np.empty(n4, dtype=np.int64)
    first = np.empty(n4, dtype=np.int64)
    corner = np.empty(n4, dtype=np.int64)
    inner = np.empty(n4, dtype=np.int64)
    outer = np.empty(n4, dtype=np.int64)
    parent = np.empty(n4, dtype=np.int64)
    depth = np.empty(n4, dtype=np.int64)
    ncirc, ok = K.circle_structure(bits, n, a.other_end, a.qface, a.n_faces, a.face_is_outer,
                                   circ, first, corner, inner, outer, parent, depth)
    if not ok:
        raise AssertionError("state circles do not form a nesting tree")
    circles = []
    for k in range(ncirc):
        e = int(first[k])
        ends = []
        while True:
            c, p = divmod(e, 4)
            b = 4 * c + K.blue_partner(bits, c, p)
            ends += [e, b]
            e = int(a.other_end[b])
            if e == ends[0]:
                break
        circles.append(tuple(ends))
    root = int(outer[0]) if parent[0] < 0 else -1
    if root < 0:
        root = next(int(outer[k]) for k in range(ncirc) if parent[k] < 0)
    top = max(int(x) for x in inner[:ncirc]) + 1
    return StateCircles(
        state=state_tuple(bits, n),
        circles=tuple(circles) + ((),) * loops,
        parent=tuple(None if parent[k] < 0 else int(parent[k]) for k in range(ncirc)) + (None,) * loops,
        depth=tuple(int(x) for x in depth[:ncirc]) + (1,) * loops,
        inner=tuple(int(x) for x in inner[:ncirc]) + tuple(range(top, top + loops)),
        outer=tuple(int(x) for x in outer[:ncirc]) + (root,) * loops,
        corner=tuple(int(x) for x in corner[:ncirc]) + (root,) * loops,
        root_region=root,
        n_loops=loops,
    )


def grading_intersection(d: LinkDiagram, sigma: StateLike) -> int:
    """Oriented intersection number i(D_sigma(alpha), D).

    Read off crossing by crossing: a smoothing that pairs an incoming end with
    an outgoing end follows the orientation and contributes 0, the other one
    contributes -2 at a positive crossing and +2 at a negative one.
    """
    if d.n == 0:
        return 0
    a = d.arrays
    return int(K.grading_intersection(state_bits(sigma), d.n, a.is_head, a.sign))


def _delta_powers(top: int) -> list[LaurentPoly]:
    out = [LaurentPoly.const(1)]
    for _ in range(top):
        out.append(out[-1] * DELTA)
    return out


def jones_term(w: int, s: int) -> LaurentPoly:
    """(-1)^w (-q)^((3w - s)/2) for one state of signature s."""
    e = (3 * w - s) // 2
    sign = -1 if (w + e) % 2 else 1
    return LaurentPoly.monomial({"q": e}, sign)


def state_histogram(d: LinkDiagram, threads: int | None = None) -> np.ndarray:
    """``hist[r, k]``: number of states with r minus-smoothings and k circles (loops excluded)."""
    n = d.n
    if n == 0:
        return np.ones((1, 1), dtype=np.int64)
    return K.run_chunked(K.state_sum_counts, 1 << n, (n, d.arrays.other_end), threads)


def jones_unreduced(d: LinkDiagram, threads: int | None = None,
                    max_crossings: int | None = None) -> LaurentPoly:
    check_limit(d, max_crossings)
    n, w, loops = d.n, d.writhe(), len(d.loops)
    hist = state_histogram(d, threads)
    powers = _delta_powers(hist.shape[1] + loops)
    total = LaurentPoly.const(0)
    for r in range(hist.shape[0]):
        for k in range(hist.shape[1]):
            cnt = int(hist[r, k])
            if cnt:
                total = total + jones_term(w, n - 2 * r) * powers[k + loops] * cnt
    return total


def jones_reduced(d: LinkDiagram, threads: int | None = None,
                  max_crossings: int | None = None) -> LaurentPoly:
    return jones_unreduced(d, threads, max_crossings).divide_exact(DELTA)
