"""Oriented link diagrams in planar-diagram (PD) form.

Conventions
-----------
A crossing is a quadruple ``X[i,j,k,l]`` of edge labels listed
counterclockwise, starting at the incoming understrand, so the understrand
runs ``i -> k``.  The overstrand runs ``l -> j`` at a positive crossing and
``j -> l`` at a negative one.  Signs are never read off label arithmetic;
they come from propagating edge orientations (every edge has one head and
one tail, and every strand through a crossing has one incoming and one
outgoing end).

Positions 0..3 of a crossing are the ends ``i, j, k, l``.  Quadrant ``q`` is
the corner between positions ``q`` and ``q+1``.  The *A* (``+``) smoothing
joins positions {0,1} and {2,3}; the *B* (``-``) smoothing joins {1,2} and
{3,0}.  At a positive crossing the oriented smoothing is ``+``, at a
negative one it is ``-``.

Crossing ids used by this module are positions in ``LinkDiagram.pd``
(0-based).  ``LinkDiagram.ids`` keeps the id each crossing had in the
diagram it was derived from, so states can be transported back after
surgery.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import DiagramError

Quad = tuple[int, int, int, int]

PLUS, MINUS, ORIENTED, SWITCH = "plus", "minus", "oriented", "switch"
RESOLUTION_MODES = (PLUS, MINUS, ORIENTED, SWITCH)

# Ends paired by each smoothing (positions at one crossing).
_A_PAIRS = ((0, 1), (2, 3))
_B_PAIRS = ((1, 2), (3, 0))


@dataclass(frozen=True)
class Crossing:
    quad: Quad
    sign: int


@dataclass(frozen=True)
class Component:
    """One link component: its edges in traversal order from the base point."""

    edges: tuple[int, ...]
    free: bool = False

    @property
    def base(self) -> int:
        return self.edges[0]


@dataclass(frozen=True)
class DiagramArrays:
    """Flat integer views of a diagram for the numeric kernels.

    End ``4*c + p`` is position ``p`` of crossing ``c``.
    """

    n: int
    other_end: np.ndarray  # int64[4n]
    is_head: np.ndarray  # bool[4n]
    sign: np.ndarray  # int64[n]
    qface: np.ndarray  # int64[4n], face of quadrant q at crossing c
    n_faces: int
    face_is_outer: np.ndarray  # bool[n_faces]
    n_loops: int


class _UnionFind:
    def __init__(self):
        self.parent: dict[int, int] = {}

    def find(self, x: int) -> int:
        p = self.parent.setdefault(x, x)
        if p != x:
            r = self.find(p)
            self.parent[x] = r
            return r
        return x

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            # smaller label becomes the representative
            if rb < ra:
                ra, rb = rb, ra
            self.parent[rb] = ra


class LinkDiagram:
    """Immutable oriented link diagram.

    Args:
        pd: crossing quadruples, incoming understrand first.
        signs: crossing signs; derived from orientations when omitted and
            validated against them otherwise.
        loops: labels of crossingless unknotted components.
        basepoints: one edge label per component, giving the component
            order and base points; defaults to components sorted by their
            smallest label with the base point on that label.
        ids: crossing identities carried through surgery.
        outer_edge: edge whose left face is the unbounded face of its piece.
    """

    __slots__ = ("pd", "signs", "loops", "basepoints", "ids", "outer_edge", "__dict__")

    def __init__(
        self,
        pd: Iterable[Sequence[int]],
        signs: Sequence[int] | None = None,
        loops: Iterable[int] = (),
        basepoints: Sequence[int] | None = None,
        ids: Sequence[int] | None = None,
        outer_edge: int | None = None,
    ):
        self.pd: tuple[Quad, ...] = tuple(tuple(int(x) for x in q) for q in pd)  # type: ignore[misc]
        self.loops: tuple[int, ...] = tuple(int(x) for x in loops)
        for q in self.pd:
            if len(q) != 4:
                raise DiagramError(f"crossing {q} does not have four edges")
            if min(q) < 1:
                raise DiagramError(f"edge labels must be positive integers, got {q}")
        n = len(self.pd)
        self.ids: tuple[int, ...] = tuple(range(n)) if ids is None else tuple(ids)
        if len(self.ids) != n:
            raise DiagramError("ids must have one entry per crossing")
        self._check_labels()
        heads = self._derive_heads(signs)
        self.signs: tuple[int, ...] = tuple(1 if heads[4 * c + 3] else -1 for c in range(n))
        if signs is not None and tuple(signs) != self.signs:
            raise DiagramError("crossing signs disagree with edge orientations")
        self._heads = heads
        self.outer_edge = outer_edge
        comps = self._trace_components()
        if basepoints is None:
            ordered = sorted(comps, key=min)
            basepoints = [min(c) for c in ordered]
        self.basepoints: tuple[int, ...] = tuple(int(b) for b in basepoints)
        self._set_components(comps)
        self._check_planar()
        if outer_edge is not None and outer_edge not in self._edge_ends:
            raise DiagramError(f"outer edge {outer_edge} is not an edge between crossings")

    # -- construction helpers -------------------------------------------
    def _check_labels(self) -> None:
        count: dict[int, list[int]] = {}
        for c, q in enumerate(self.pd):
            for p, lab in enumerate(q):
                count.setdefault(lab, []).append(4 * c + p)
        for lab, ends in count.items():
            if len(ends) != 2:
                raise DiagramError(f"edge {lab} is used {len(ends)} times (expected 2)")
        for lab in self.loops:
            if lab in count:
                raise DiagramError(f"loop label {lab} is also used by a crossing")
        if len(set(self.loops)) != len(self.loops):
            raise DiagramError("duplicate loop labels")
        self._edge_ends: dict[int, tuple[int, int]] = {k: (v[0], v[1]) for k, v in count.items()}
        other = [0] * (4 * len(self.pd))
        for a, b in self._edge_ends.values():
            other[a], other[b] = b, a
        self._other = other

    def _derive_heads(self, signs: Sequence[int] | None) -> list[bool]:
        n = len(self.pd)
        heads: list[bool | None] = [None] * (4 * n)
        stack: list[int] = []

        def assign(e: int, v: bool) -> None:
            if heads[e] is None:
                heads[e] = v
                stack.append(e)
            elif heads[e] != v:
                c, p = divmod(e, 4)
                raise DiagramError(
                    f"inconsistent orientation at crossing {c} X{list(self.pd[c])} position {p}"
                )

        def run() -> None:
            while stack:
                e = stack.pop()
                v = heads[e]
                assign(self._other[e], not v)
                c, p = divmod(e, 4)
                assign(4 * c + (p + 2) % 4, not v)

        for c in range(n):
            assign(4 * c, True)
            assign(4 * c + 2, False)
            if signs is not None:
                if signs[c] not in (1, -1):
                    raise DiagramError(f"sign of crossing {c} must be +1 or -1")
                assign(4 * c + 3, signs[c] == 1)
        run()
        for c in range(n):
            if heads[4 * c + 1] is None:
                # overstrand of a component with no under-passes: its direction
                # is not fixed by the quadruples, fall back on label order
                _, j, _, l = self.pd[c]
                assign(4 * c + 3 if (j - l == 1 or l - j > 1) else 4 * c + 1, True)
                run()
        return [bool(h) for h in heads]

    def _trace_components(self) -> list[list[int]]:
        succ: dict[int, int] = {}
        for lab, (a, b) in self._edge_ends.items():
            h = a if self._heads[a] else b
            c, p = divmod(h, 4)
            succ[lab] = self.pd[c][(p + 2) % 4]
        seen: set[int] = set()
        comps: list[list[int]] = []
        for lab in sorted(succ):
            if lab in seen:
                continue
            cyc = [lab]
            seen.add(lab)
            nxt = succ[lab]
            while nxt != lab:
                cyc.append(nxt)
                seen.add(nxt)
                nxt = succ[nxt]
            comps.append(cyc)
        comps.extend([lab] for lab in self.loops)
        self._succ = succ
        return comps

    def _set_components(self, comps: list[list[int]]) -> None:
        where = {lab: i for i, cyc in enumerate(comps) for lab in cyc}
        if len(self.basepoints) != len(comps):
            raise DiagramError(
                f"{len(self.basepoints)} base points given for {len(comps)} components"
            )
        used = set()
        out = []
        for b in self.basepoints:
            if b not in where:
                raise DiagramError(f"base point {b} is not an edge of the diagram")
            i = where[b]
            if i in used:
                raise DiagramError(f"two base points on the component through edge {b}")
            used.add(i)
            cyc = comps[i]
            k = cyc.index(b)
            out.append(Component(tuple(cyc[k:] + cyc[:k]), free=b in self.loops))
        self._components = tuple(out)
        self._comp_of = {lab: i for i, comp in enumerate(out) for lab in comp.edges}

    def _check_planar(self) -> None:
        n = len(self.pd)
        if n == 0:
            return
        face = self.face_of_end
        for piece in self.pieces:
            faces = {int(face[4 * c + q]) for c in piece for q in range(4)}
            if len(faces) != len(piece) + 2:
                raise DiagramError(
                    f"rotation data is not planar: piece with {len(piece)} crossings has "
                    f"{len(faces)} faces (expected {len(piece) + 2})"
                )

    # -- basic accessors ----------------------------------------------------
    @property
    def n(self) -> int:
        return len(self.pd)

    @property
    def crossings(self) -> tuple[Crossing, ...]:
        return tuple(Crossing(q, s) for q, s in zip(self.pd, self.signs))

    @property
    def components(self) -> tuple[Component, ...]:
        return self._components

    @property
    def n_components(self) -> int:
        return len(self._components)

    @property
    def edges(self) -> tuple[int, ...]:
        return tuple(sorted(self._edge_ends)) + self.loops

    def writhe(self) -> int:
        return sum(self.signs)

    def is_head(self, c: int, p: int) -> bool:
        return self._heads[4 * c + p]

    def other_end(self, c: int, p: int) -> tuple[int, int]:
        return divmod(self._other[4 * c + p], 4)

    def edge_ends(self, label: int) -> tuple[tuple[int, int], tuple[int, int]]:
        """(tail, head) of an edge as (crossing, position) pairs."""
        a, b = self._edge_ends[label]
        if self._heads[a]:
            a, b = b, a
        return divmod(a, 4), divmod(b, 4)

    def successor(self, label: int) -> int:
        return self._succ[label] if label in self._succ else label

    def component_of(self, label: int) -> int:
        return self._comp_of[label]

    def strand_components(self, c: int) -> tuple[int, int]:
        """(understrand component, overstrand component) at crossing c."""
        i, j, _, _ = self.pd[c]
        return self._comp_of[i], self._comp_of[j]

    def oriented_pairs(self, c: int) -> tuple[tuple[int, int], tuple[int, int]]:
        return _A_PAIRS if self.signs[c] > 0 else _B_PAIRS

    # -- planar structure ----------------------------------------------------
    @cached_property
    def face_of_end(self) -> np.ndarray:
        """Face id of quadrant q at crossing c, stored at index 4c+q."""
        n4 = 4 * len(self.pd)
        face = np.full(n4, -1, dtype=np.int64)
        fid = 0
        for start in range(n4):
            if face[start] >= 0:
                continue
            e = start
            while face[e] < 0:
                face[e] = fid
                o = self._other[e]
                c, p = divmod(o, 4)
                e = 4 * c + (p - 1) % 4
            fid += 1
        return face

    @property
    def n_faces(self) -> int:
        return int(self.face_of_end.max()) + 1 if self.pd else 0

    @cached_property
    def pieces(self) -> tuple[tuple[int, ...], ...]:
        """Crossing sets of the connected pieces, ordered by smallest edge label."""
        uf = _UnionFind()
        for c in range(len(self.pd)):
            uf.find(c)
        for a, b in self._edge_ends.values():
            uf.union(a // 4, b // 4)
        groups: dict[int, list[int]] = {}
        for c in range(len(self.pd)):
            groups.setdefault(uf.find(c), []).append(c)
        out = [tuple(g) for g in groups.values()]
        out.sort(key=lambda g: min(min(self.pd[c]) for c in g))
        return tuple(out)

    def left_face(self, label: int) -> int:
        (c, p), _ = self.edge_ends(label)
        return int(self.face_of_end[4 * c + p])

    @cached_property
    def outer_faces(self) -> tuple[int, ...]:
        """Unbounded face of every piece; pieces sit side by side in the plane."""
        out = []
        for piece in self.pieces:
            labels = {self.pd[c][p] for c in piece for p in range(4)}
            edge = self.outer_edge if self.outer_edge in labels else min(labels)
            out.append(self.left_face(edge))
        return tuple(out)

    def is_nugatory(self, c: int) -> bool:
        f = self.face_of_end
        return bool(f[4 * c] == f[4 * c + 2] or f[4 * c + 1] == f[4 * c + 3])

    @cached_property
    def arrays(self) -> DiagramArrays:
        n = len(self.pd)
        outer = np.zeros(max(self.n_faces, 1), dtype=np.bool_)
        for f in self.outer_faces:
            outer[f] = True
        return DiagramArrays(
            n=n,
            other_end=np.asarray(self._other, dtype=np.int64),
            is_head=np.asarray(self._heads, dtype=np.bool_),
            sign=np.asarray(self.signs, dtype=np.int64),
            qface=self.face_of_end.copy(),
            n_faces=self.n_faces,
            face_is_outer=outer,
            n_loops=len(self.loops),
        )

    # -- equality, hashing, display ---------------------------------------
    def _key(self):
        return (self.pd, self.signs, self.loops, self.basepoints, self.ids)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LinkDiagram):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self) -> int:
        return hash(self._key())

    def __repr__(self) -> str:
        return f"LinkDiagram({to_pd(self)!r})"

    def with_basepoints(self, basepoints: Sequence[int]) -> LinkDiagram:
        return LinkDiagram(self.pd, self.signs, self.loops, basepoints, self.ids, self.outer_edge)

    def with_outer_edge(self, outer_edge: int | None) -> LinkDiagram:
        return LinkDiagram(self.pd, self.signs, self.loops, self.basepoints, self.ids, outer_edge)


# ---------------------------------------------------------------------------
# text formats

_PD_TERM = re.compile(r"X\s*\[\s*(-?\d+)\s*,\s*(-?\d+)\s*,\s*(-?\d+)\s*,\s*(-?\d+)\s*\]")


def parse_pd(text: str) -> LinkDiagram:
    """Parse whitespace-separated ``X[a,b,c,d]`` terms and ``U`` tokens.

    ``#`` starts a comment.  Empty input is the crossingless unknot.  A
    surrounding ``PD[...]`` wrapper and commas between terms are tolerated.
    """
    body = "\n".join(line.split("#", 1)[0] for line in text.splitlines())
    body = body.strip()
    if body.startswith("PD[") and body.endswith("]"):
        body = body[3:-1]
    quads: list[Quad] = []
    n_loops = 0
    pos = 0
    while pos < len(body):
        ch = body[pos]
        if ch.isspace() or ch == ",":
            pos += 1
            continue
        m = _PD_TERM.match(body, pos)
        if m:
            quads.append(tuple(int(g) for g in m.groups()))  # type: ignore[arg-type]
            pos = m.end()
            continue
        if ch == "U" and (pos + 1 == len(body) or not body[pos + 1].isalnum()):
            n_loops += 1
            pos += 1
            continue
        snippet = body[pos:pos + 12]
        raise DiagramError(f"cannot parse PD text at offset {pos}: {snippet!r}")
    if not quads and n_loops == 0:
        n_loops = 1
    top = max((max(q) for q in quads), default=0)
    return LinkDiagram(quads, loops=range(top + 1, top + 1 + n_loops))


def to_pd(d: LinkDiagram) -> str:
    terms = [f"X[{a},{b},{c},{e}]" for a, b, c, e in d.pd]
    terms += ["U"] * len(d.loops)
    return " ".join(terms)


_GAUSS_TOKEN = re.compile(r"([OU])(\d+)([+-])")


def parse_gauss(text: str) -> LinkDiagram:
    """Parse a signed Gauss code, e.g. ``O1+U2+O3+U1+O2+U3+``.

    Each component is a sequence of ``[OU]<label>[+-]`` passes; components
    are separated by ``;``.  An empty component is a crossingless loop.
    """
    text = text.replace("−", "-")
    comps: list[list[tuple[str, int, int]]] = []
    for chunk in text.split(";"):
        chunk = re.sub(r"[\s,]", "", chunk)
        toks = []
        pos = 0
        while pos < len(chunk):
            m = _GAUSS_TOKEN.match(chunk, pos)
            if not m:
                raise DiagramError(f"bad Gauss token at {chunk[pos:pos + 8]!r}")
            toks.append((m.group(1), int(m.group(2)), 1 if m.group(3) == "+" else -1))
            pos = m.end()
        comps.append(toks)
    if len(comps) > 1 and not comps[-1]:
        comps.pop()  # trailing separator

    passes: dict[int, dict[str, tuple[int, int]]] = {}
    sign_of: dict[int, int] = {}
    label = 1
    n_loops = 0
    for toks in comps:
        if not toks:
            n_loops += 1
            continue
        first = label
        m = len(toks)
        for t, (kind, lab, sgn) in enumerate(toks):
            in_edge = first + (t - 1) % m
            out_edge = first + t
            slot = passes.setdefault(lab, {})
            if kind in slot:
                raise DiagramError(f"crossing {lab} has two {kind} passes")
            slot[kind] = (in_edge, out_edge)
            if sign_of.setdefault(lab, sgn) != sgn:
                raise DiagramError(f"crossing {lab} has inconsistent signs")
        label += m
    quads = []
    signs = []
    for lab in sorted(passes):
        slot = passes[lab]
        if set(slot) != {"O", "U"}:
            raise DiagramError(f"crossing {lab} must appear once over and once under")
        (ui, uo), (oi, oo) = slot["U"], slot["O"]
        if sign_of[lab] > 0:
            quads.append((ui, oo, uo, oi))
        else:
            quads.append((ui, oi, uo, oo))
        signs.append(sign_of[lab])
    return LinkDiagram(quads, signs, loops=range(label, label + n_loops))


def to_json(d: LinkDiagram) -> str:
    doc = {
        "crossings": [list(q) + [s] for q, s in zip(d.pd, d.signs)],
        "components": [list(c.edges) for c in d.components],
        "basepoints": list(d.basepoints),
        "loops": list(d.loops),
    }
    return json.dumps(doc)


def from_json(text: str) -> LinkDiagram:
    try:
        doc = json.loads(text)
        quads = [row[:4] for row in doc["crossings"]]
        signs = [row[4] for row in doc["crossings"]]
    except (ValueError, KeyError, TypeError, IndexError) as exc:
        raise DiagramError(f"malformed diagram JSON: {exc}") from exc
    d = LinkDiagram(quads, signs, doc.get("loops", ()), doc.get("basepoints"))
    if "components" in doc and [list(c.edges) for c in d.components] != doc["components"]:
        raise DiagramError("component list in JSON disagrees with the crossings")
    return d


def writhe(d: LinkDiagram) -> int:
    return d.writhe()


# ---------------------------------------------------------------------------
# surgery

def _rotate(q: Sequence[int], k: int) -> Quad:
    return tuple(q[(p + k) % 4] for p in range(4))  # type: ignore[return-value]


def _switch_quad(q: Quad, sign: int) -> Quad:
    # the incoming overstrand becomes the incoming understrand
    return _rotate(q, 3) if sign > 0 else _rotate(q, 1)


def _from_heads(
    quads: list[list[int]],
    heads: dict[tuple[int, int], bool],
    loops: Sequence[int],
    ids: Sequence[int],
    basepoints: Sequence[int] | None = None,
) -> LinkDiagram:
    """Build a diagram from quadruples whose understrand may run backwards.

    ``heads`` suggests directions for ends; per component the lowest
    suggested end wins and its direction is propagated.  Each quadruple is
    then rotated so the incoming understrand comes first.
    """
    n = len(quads)
    ends: dict[int, list[tuple[int, int]]] = {}
    for c, q in enumerate(quads):
        for p, lab in enumerate(q):
            ends.setdefault(lab, []).append((c, p))
    h: dict[tuple[int, int], bool] = {}

    def other(c: int, p: int) -> tuple[int, int]:
        a, b = ends[quads[c][p]]
        return b if a == (c, p) else a

    def walk(start: tuple[int, int], v: bool) -> None:
        stack = [(start, v)]
        while stack:
            e, val = stack.pop()
            if e in h:
                if h[e] != val:
                    raise DiagramError("cannot orient resolved diagram consistently")
                continue
            h[e] = val
            stack.append((other(*e), not val))
            stack.append(((e[0], (e[1] + 2) % 4), not val))

    for e in sorted(heads):
        if e not in h:
            walk(e, heads[e])
    for c in range(n):
        if (c, 0) not in h:
            walk((c, 0), True)
    new_quads = []
    signs = []
    for c, q in enumerate(quads):
        k = 0 if h[(c, 0)] else 2
        new_quads.append(_rotate(q, k))
        signs.append(1 if h[(c, (3 + k) % 4)] else -1)
    return LinkDiagram(new_quads, signs, loops, basepoints, ids)


def resolve(d: LinkDiagram, chi: int, mode: str) -> LinkDiagram:
    """Switch or smooth crossing ``chi``.

    ``plus``/``minus`` apply the A/B smoothing and re-orient each resulting
    component (keeping the direction of the end that carries its smallest
    label).  ``oriented`` applies the orientation-respecting smoothing and
    re-assigns base points: a self-crossing of component i splits it into
    components i (holding the old base point) and i+1 (based on its edge
    through the former crossing); a crossing between components i < k merges
    them into component i.  ``switch`` keeps base points.
    """
    if mode not in RESOLUTION_MODES:
        raise DiagramError(f"unknown resolution mode {mode!r}")
    if not 0 <= chi < d.n:
        raise DiagramError(f"unknown crossing id {chi}")
    if mode == SWITCH:
        pd = list(d.pd)
        pd[chi] = _switch_quad(pd[chi], d.signs[chi])
        signs = list(d.signs)
        signs[chi] = -signs[chi]
        return LinkDiagram(pd, signs, d.loops, d.basepoints, d.ids, d.outer_edge)

    q = d.pd[chi]
    if mode == ORIENTED:
        pairs = d.oriented_pairs(chi)
    else:
        pairs = _A_PAIRS if mode == PLUS else _B_PAIRS
    uf = _UnionFind()
    for a, b in pairs:
        uf.union(q[a], q[b])
    merged = [uf.find(q[a]) for a, _ in pairs]
    keep = [c for c in range(d.n) if c != chi]
    quads = [[uf.find(lab) for lab in d.pd[c]] for c in keep]
    present = {lab for qq in quads for lab in qq}
    new_loops = sorted({m for m in merged if m not in present})
    loops = list(d.loops) + new_loops
    ids = [d.ids[c] for c in keep]

    if mode == ORIENTED:
        signs = [d.signs[c] for c in keep]
        plain = LinkDiagram(quads, signs, loops, None, ids)
        return _oriented_basepoints(d, chi, plain, uf, merged)

    # A/B smoothing: directions may clash; the lowest surviving end of each
    # component keeps its old direction
    heads = {(new_c, p): d.is_head(c, p) for new_c, c in enumerate(keep) for p in range(4)}
    return _from_heads(quads, heads, loops, ids)


def _oriented_basepoints(
    d: LinkDiagram, chi: int, plain: LinkDiagram, uf: _UnionFind, merged: list[int]
) -> LinkDiagram:
    ci, ck = d.strand_components(chi)
    bases = [uf.find(b) for b in d.basepoints]
    if ci == ck:
        i = ci
        comp_a = plain.component_of(bases[i])
        other = [m for m in merged if plain.component_of(m) != comp_a]
        if len(other) != 1:
            raise AssertionError("oriented self-resolution did not split the component")
        bases.insert(i + 1, other[0])
    else:
        i, k = min(ci, ck), max(ci, ck)
        del bases[k]
    return LinkDiagram(plain.pd, plain.signs, plain.loops, bases, plain.ids, d.outer_edge
                       if d.outer_edge in {x for qq in plain.pd for x in qq} else None)


def mirror(d: LinkDiagram) -> LinkDiagram:
    pd = [_switch_quad(q, s) for q, s in zip(d.pd, d.signs)]
    return LinkDiagram(pd, [-s for s in d.signs], d.loops, d.basepoints, d.ids)


def reverse(d: LinkDiagram, components: Iterable[int] | None = None) -> LinkDiagram:
    """Reverse the orientation of the given components (all by default)."""
    flip = set(range(d.n_components) if components is None else components)
    heads: dict[tuple[int, int], bool] = {}
    for c in range(d.n):
        for p in range(4):
            h = d.is_head(c, p)
            heads[(c, p)] = (not h) if d.component_of(d.pd[c][p]) in flip else h
    quads = [list(q) for q in d.pd]
    return _from_heads_exact(quads, heads, d.loops, d.ids)


def _from_heads_exact(quads, heads, loops, ids) -> LinkDiagram:
    new_quads, signs = [], []
    for c, q in enumerate(quads):
        k = 0 if heads[(c, 0)] else 2
        new_quads.append(_rotate(q, k))
        signs.append(1 if heads[(c, (3 + k) % 4)] else -1)
    return LinkDiagram(new_quads, signs, loops, None, ids)


def relabel(d: LinkDiagram, mapping: dict[int, int]) -> LinkDiagram:
    pd = [[mapping.get(x, x) for x in q] for q in d.pd]
    loops = [mapping.get(x, x) for x in d.loops]
    bases = [mapping.get(x, x) for x in d.basepoints]
    outer = None if d.outer_edge is None else mapping.get(d.outer_edge, d.outer_edge)
    return LinkDiagram(pd, d.signs, loops, bases, d.ids, outer)


def normalize_labels(d: LinkDiagram) -> LinkDiagram:
    """Relabel edges 1, 2, ... along the components in order."""
    mapping: dict[int, int] = {}
    for comp in d.components:
        for lab in comp.edges:
            mapping[lab] = len(mapping) + 1
    return relabel(d, mapping)


def add_kink(d: LinkDiagram, edge: int, variant: int = 0) -> LinkDiagram:
    """Insert a Reidemeister-I curl on ``edge``.

    ``variant`` in 0..3 picks the side of the curl (bit 0) and whether the
    first pass is under (bit 1 clear) or over; the crossing sign follows.
    """
    top = max([0, *(max(q) for q in d.pd), *d.loops])
    pd = [list(q) for q in d.pd]
    loops = list(d.loops)
    loop = top + 1
    if edge in loops:
        loops.remove(edge)
        tail = edge
    elif edge in d._edge_ends:
        _, (hc, hp) = d.edge_ends(edge)
        tail = top + 2
        pd[hc][hp] = tail
    else:
        raise DiagramError(f"no edge {edge} to put a kink on")
    side, over_first = variant & 1, variant >> 1 & 1
    if not over_first:
        quad = [edge, loop, loop, tail] if side == 0 else [edge, tail, loop, loop]
    else:
        quad = [loop, loop, tail, edge] if side == 0 else [loop, edge, tail, loop]
    pd.append(quad)
    ids = list(d.ids) + [max(d.ids, default=-1) + 1]
    return LinkDiagram(pd, None, loops, d.basepoints, ids)


def connected_sum(d1: LinkDiagram, d2: LinkDiagram, e1: int | None = None,
                  e2: int | None = None) -> LinkDiagram:
    """Band two diagrams together along edge ``e1`` of d1 and ``e2`` of d2."""
    if d1.n == 0 or d2.n == 0:
        raise DiagramError("connected sum needs crossings on both sides")
    e1 = min(d1._edge_ends) if e1 is None else e1
    e2 = min(d2._edge_ends) if e2 is None else e2
    off = max([*(max(q) for q in d1.pd), *d1.loops])
    d2 = relabel(d2, {lab: lab + off for lab in d2.edges})
    e2 += off
    _, (h1c, h1p) = d1.edge_ends(e1)
    _, (h2c, h2p) = d2.edge_ends(e2)
    pd1 = [list(q) for q in d1.pd]
    pd2 = [list(q) for q in d2.pd]
    pd1[h1c][h1p] = e2
    pd2[h2c][h2p] = e1
    return LinkDiagram(pd1 + pd2, None, list(d1.loops) + list(d2.loops))


def disjoint_union(d1: LinkDiagram, d2: LinkDiagram) -> LinkDiagram:
    off = max([0, *(max(q) for q in d1.pd), *d1.loops])
    d2 = relabel(d2, {lab: lab + off for lab in d2.edges})
    return LinkDiagram(list(d1.pd) + list(d2.pd), list(d1.signs) + list(d2.signs),
                       list(d1.loops) + list(d2.loops))


def from_braid(word: Sequence[int], strands: int | None = None) -> LinkDiagram:
    """Closure of a braid word (``k`` is sigma_k with the left strand over, ``-k`` its inverse)."""
    if strands is None:
        strands = max((abs(g) for g in word), default=0) + 1
    if any(g == 0 or abs(g) >= strands for g in word):
        raise DiagramError(f"braid generator out of range for {strands} strands")
    cur = list(range(1, strands + 1))
    start = list(cur)
    nxt = strands + 1
    quads: list[list[int]] = []
    for g in word:
        i = abs(g) - 1
        old_i, old_j = cur[i], cur[i + 1]
        new_i, new_j = nxt, nxt + 1
        nxt += 2
        if g > 0:
            quads.append([old_j, new_j, new_i, old_i])
        else:
            quads.append([old_i, old_j, new_j, new_i])
        cur[i], cur[i + 1] = new_i, new_j
    uf = _UnionFind()
    for a, b in zip(start, cur):
        uf.union(a, b)
    quads = [[uf.find(x) for x in q] for q in quads]
    present = {x for q in quads for x in q}
    loops = sorted({uf.find(s) for s in start} - present)
    return normalize_labels(LinkDiagram(quads, None, loops))


def unlink(m: int) -> LinkDiagram:
    return LinkDiagram((), loops=range(1, m + 1))


# ---------------------------------------------------------------------------
# canonical form

def _piece_code(d: LinkDiagram, piece: Sequence[int], start: int) -> tuple:
    labels: dict[int, int] = {}
    queue = [start]
    while queue:
        e = queue.pop(0)
        if e in labels:
            continue
        walk = []
        cur = e
        while cur not in labels:
            labels[cur] = len(labels) + 1
            walk.append(cur)
            cur = d.successor(cur)
        for lab in walk:
            _, (c, p) = d.edge_ends(lab)
            # outgoing end of the other strand at this crossing
            for pp in range(4):
                if pp % 2 != p % 2 and not d.is_head(c, pp):
                    queue.append(d.pd[c][pp])
    return tuple(sorted((tuple(labels[x] for x in d.pd[c]), d.signs[c]) for c in piece))


def canonical_key(d: LinkDiagram) -> tuple:
    """Invariant of the diagram up to relabeling of edges and crossings."""
    codes = []
    for piece in d.pieces:
        starts = {d.pd[c][p] for c in piece for p in range(4)}
        codes.append(min(_piece_code(d, piece, s) for s in starts))
    return (tuple(sorted(codes)), len(d.loops))


def is_isomorphic(d1: LinkDiagram, d2: LinkDiagram) -> bool:
    return canonical_key(d1) == canonical_key(d2)
