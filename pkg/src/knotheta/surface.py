"""Combinatorial shadow of the punctured Heegaard surface of a diagram.

Nothing topological is built.  What is kept is the bookkeeping that the
intersection pairing actually uses:

* eight punctures per crossing, two per quadrant: a *corner* puncture in the
  quadrant's corner and a *centre* puncture next to the crossing.  Puncture
  ``8c + 2q + 1`` is the corner one of quadrant ``q`` at crossing ``c`` and
  ``8c + 2q + 2`` the centre one; puncture 0 is ``s``, the point at infinity.
  Each puncture carries a monodromy variable ``x<id>``.
* two base points per crossing, ``b_l`` on the smoothing arc through
  position 0 and ``b_r`` on the other arc, numbered ``b_{2c+1}``, ``b_{2c+2}``.
* four marked points per crossing, without variables.

Whatever the state, each smoothing arc cuts off one quadrant and has the
two punctures of that quadrant on its two sides.  A circle's sigma-puncture
is the one on the inner side of its first arc; specialising the variables
so that every disk carries total monodromy ``Q`` makes the pairing of a
state with ``k`` circles equal to ``(1 - Q)^k``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Mapping

from .diagram import LinkDiagram
from .kauffman import StateCircles
from .polynomial import LaurentPoly

# quadrant -> (name of corner puncture, name of centre puncture, side)
_QUADRANT_NAMES = {
    0: ("p_l", "pbar_l", "l"),
    1: ("p'_r", "pbar'_r", "r"),
    2: ("p_r", "pbar_r", "r"),
    3: ("p'_l", "pbar'_l", "l"),
}


def puncture_id(c: int, q: int, corner: bool) -> int:
    return 8 * c + 2 * q + (1 if corner else 2)


def var_name(pid: int) -> str:
    return f"x{pid}"


@dataclass(frozen=True)
class Puncture:
    id: int
    crossing: int
    quadrant: int
    corner: bool
    name: str
    base_point: int  # tau: the base point its loop gamma is attached to


@dataclass(frozen=True)
class SurfaceModel:
    n: int
    punctures: tuple[Puncture, ...]  # index i holds puncture id i+1
    base_points: tuple[tuple[int, str], ...]  # (crossing, "l"|"r") for b_1..b_2n
    marked_points: tuple[tuple[int, str], ...]  # (crossing, name) for the 4n marked points

    @property
    def n_punctures(self) -> int:
        """Including s."""
        return len(self.punctures) + 1

    @property
    def monodromy_vars(self) -> dict[int, str]:
        return {p.id: var_name(p.id) for p in self.punctures}

    def puncture(self, pid: int) -> Puncture:
        return self.punctures[pid - 1]

    def arc_punctures(self, c: int, q: int) -> tuple[int, int]:
        """(corner, centre) puncture ids straddling the arc that cuts off quadrant q."""
        return puncture_id(c, q, True), puncture_id(c, q, False)

    def loops_at(self, b: int) -> list[int]:
        return [p.id for p in self.punctures if p.base_point == b]


def build_surface_model(d: LinkDiagram) -> SurfaceModel:
    punctures = []
    for c in range(d.n):
        for q in range(4):
            corner_name, centre_name, side = _QUADRANT_NAMES[q]
            b = 2 * c + (1 if side == "l" else 2)
            punctures.append(Puncture(puncture_id(c, q, True), c, q, True, corner_name, b))
            punctures.append(Puncture(puncture_id(c, q, False), c, q, False, centre_name, b))
    punctures.sort(key=lambda p: p.id)
    base_points = tuple((c, side) for c in range(d.n) for side in ("l", "r"))
    marked = tuple((c, name) for c in range(d.n) for name in ("x_l", "x_r", "y_l", "y_r"))
    return SurfaceModel(d.n, tuple(punctures), base_points, marked)


def _corner_quadrant(e: int, f: int) -> tuple[int, int]:
    """(crossing, quadrant cut off) for the smoothing arc joining ends e and f."""
    c, p = divmod(e, 4)
    p2 = f % 4
    return c, (p if p2 == (p + 1) % 4 else p2)


def basepoint_circle(sc: StateCircles, b: int) -> int:
    """Circle carrying base point b_b (1-based)."""
    c, side = divmod(b - 1, 2)
    return sc.circle_of_end(4 * c + (0 if side == 0 else 2))


def basepoints_on(sc: StateCircles, k: int) -> int:
    """Number of base points on circle k: one per smoothing arc."""
    return len(sc.circles[k]) // 2


@dataclass(frozen=True)
class SigmaPunctureAssignment:
    """sigma-punctures of the circles that pass through crossings.

    ``puncture[k]`` is P^k (``None`` for crossingless loops); ``enclosed[k]``
    lists the sigma-punctures of circles nested inside circle k.
    """

    circles: StateCircles
    puncture: tuple[int | None, ...]
    enclosed: tuple[tuple[int, ...], ...]

    def f(self, k: int) -> int | None:
        return self.puncture[k]

    def g(self, k: int) -> tuple[int, ...]:
        return self.enclosed[k]

    def inside(self, k: int) -> tuple[int, ...]:
        """All sigma-punctures in the disk of circle k, its own first."""
        own = self.puncture[k]
        return ((own,) if own is not None else ()) + self.enclosed[k]


def assign_sigma_punctures(sc: StateCircles, sm: SurfaceModel | None = None) -> SigmaPunctureAssignment:
    pun: list[int | None] = []
    for k, ends in enumerate(sc.circles):
        if not ends:
            pun.append(None)
            continue
        c, q = _corner_quadrant(ends[0], ends[1])
        corner_inside = sc.corner[k] == sc.inner[k]
        pun.append(puncture_id(c, q, corner_inside))
    real = [p for p in pun if p is not None]
    if len(set(real)) != len(real):
        raise AssertionError("two circles were given the same sigma-puncture")
    if sm is not None and any(p is not None and not 1 <= p <= 8 * sm.n for p in pun):
        raise AssertionError("sigma-puncture outside the surface model")
    enclosed = tuple(tuple(pun[j] for j in sc.descendants(k) if pun[j] is not None)
                     for k in range(sc.count))
    return SigmaPunctureAssignment(sc, tuple(pun), enclosed)


def build_specialization(asg: SigmaPunctureAssignment, n: int,
                         Q: str = "Q") -> dict[str, LaurentPoly]:
    """alpha_Q: x_{P^k} -> Q * (product of the images of the sigma-punctures it encloses)^-1.

    Computed from the innermost circles outwards; every other variable goes to 1.
    """
    qv = LaurentPoly.var(Q)
    spec: dict[str, LaurentPoly] = {var_name(i): LaurentPoly.const(1) for i in range(1, 8 * n + 1)}
    sc = asg.circles
    order = sorted((k for k in range(sc.count) if asg.puncture[k] is not None),
                   key=lambda k: -sc.depth[k])
    for k in order:
        prod = LaurentPoly.const(1)
        for pid in asg.enclosed[k]:
            prod = prod * spec[var_name(pid)]
        if not prod.is_unit():
            raise AssertionError("specialisation needs the inverse of a non-monomial")
        spec[var_name(asg.puncture[k])] = qv * prod ** -1
    return spec


def monodromy_products(asg: SigmaPunctureAssignment,
                       spec: Mapping[str, LaurentPoly]) -> list[LaurentPoly]:
    """Product of the specialised variables over the sigma-punctures in each disk."""
    out = []
    for k in range(asg.circles.count):
        prod = LaurentPoly.const(1)
        for pid in asg.inside(k):
            prod = prod * spec[var_name(pid)]
        out.append(prod)
    return out


def far_sign(m: int) -> int:
    """Sign of the far intersection point on a circle carrying m base points.

    Moving the point across the circle's oval permutes the m points on it
    once cyclically ((-1)^(m-1)) and reverses the local orientation at each
    base point ((-1)^m).
    """
    return (-1) ** m * (-1) ** (m - 1)


@dataclass(frozen=True)
class IntersectionPoint:
    choices: tuple[str, ...]  # per circle: "near", "far" or "cut"
    sign: int
    monomial: LaurentPoly


def enumerate_points(asg: SigmaPunctureAssignment, cut: int | None = None) -> list[IntersectionPoint]:
    """All intersection points for the circles through crossings.

    Crossingless loops are left to the caller.
    """
    sc = asg.circles
    ks = [k for k in range(sc.count) if sc.circles[k]]
    free = [k for k in ks if k != cut]
    far_mono = {}
    for k in free:
        mono = LaurentPoly.const(1)
        for pid in asg.inside(k):
            mono = mono * LaurentPoly.var(var_name(pid))
        far_mono[k] = mono
    points = []
    for mask in range(1 << len(free)):
        choice = {k: "near" for k in ks}
        if cut is not None:
            choice[cut] = "cut"
        sign = 1
        mono = LaurentPoly.const(1)
        for t, k in enumerate(free):
            if (mask >> t) & 1:
                choice[k] = "far"
                sign *= far_sign(basepoints_on(sc, k))
                mono = mono * far_mono[k]
        points.append(IntersectionPoint(tuple(choice[k] for k in ks), sign, mono))
    return points


def enumerate_and_pair(sc: StateCircles, asg: SigmaPunctureAssignment,
                       spec: Mapping[str, LaurentPoly], cut: int | None = None,
                       Q: str = "Q") -> LaurentPoly:
    """Specialised pairing of one state: the signed sum over its intersection points.

    Checked against (1 - Q)^k, k = number of circles through crossings,
    less one when a cut circle is given.
    """
    if cut is not None and not sc.circles[cut]:
        raise ValueError("the cut circle must pass through a crossing")
    total = LaurentPoly.const(0)
    for pt in enumerate_points(asg, cut):
        total = total + pt.monomial.substitute(spec) * pt.sign
    k = sc.n_crossing_circles - (1 if cut is not None else 0)
    expected = (1 - LaurentPoly.var(Q)) ** k
    if total != expected:
        raise AssertionError(f"pairing {total} differs from the closed form {expected}")
    return total


def dump_state(d: LinkDiagram, sc: StateCircles, cut: int | None = None) -> dict:
    """JSON-ready description of one state's sigma-punctures and specialisation."""
    sm = build_surface_model(d)
    asg = assign_sigma_punctures(sc, sm)
    spec = build_specialization(asg, d.n)
    return {
        "state": ["+" if v > 0 else "-" for v in sc.state],
        "n_punctures": sm.n_punctures,
        "n_base_points": len(sm.base_points),
        "circles": [
            {
                "ends": list(sc.circles[k]),
                "parent": sc.parent[k],
                "sigma_puncture": asg.puncture[k],
                "enclosed": list(asg.enclosed[k]),
                "base_points": basepoints_on(sc, k),
                "specialization": (spec[var_name(asg.puncture[k])].to_text()
                                   if asg.puncture[k] is not None else None),
                "cut": k == cut,
            }
            for k in range(sc.count)
        ],
    }


def dump_json(d: LinkDiagram, sc: StateCircles, cut: int | None = None) -> str:
    return json.dumps(dump_state(d, sc, cut))
