"""Regenerate src/knotheta/data/corpus.csv.

Every entry is a PD code with alias diagrams of the same oriented link,
built from braid closures, Markov and Reidemeister moves, kinks and
reversal.  Before writing, each diagram's reduced Jones polynomial is
compared with the tabulated V(t) (t = q^2, up to mirror image) so that a
mistyped PD code cannot enter the corpus.

    python3 tools/gen_corpus.py [--check]
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
from pathlib import Path

from knotheta.diagram import (
    LinkDiagram,
    add_kink,
    connected_sum,
    disjoint_union,
    from_braid,
    is_isomorphic,
    mirror,
    parse_gauss,
    parse_pd,
    reverse,
    to_pd,
    unlink,
)
from knotheta.kauffman import jones_reduced
from knotheta.polynomial import LaurentPoly

OUT = Path(__file__).resolve().parents[1] / "src" / "knotheta" / "data" / "corpus.csv"

q = LaurentPoly.var("q")

# Rolfsen table PD codes
ROLFSEN = {
    "3_1": "X[1,4,2,5] X[3,6,4,1] X[5,2,6,3]",
    "4_1": "X[4,2,5,1] X[8,6,1,5] X[6,3,7,4] X[2,7,3,8]",
    "5_1": "X[1,6,2,7] X[3,8,4,9] X[5,10,6,1] X[7,2,8,3] X[9,4,10,5]",
    "5_2": "X[1,4,2,5] X[3,8,4,9] X[5,10,6,1] X[9,6,10,7] X[7,2,8,3]",
    "6_1": "X[1,4,2,5] X[7,10,8,11] X[3,9,4,8] X[9,3,10,2] X[5,12,6,1] X[11,6,12,7]",
    "6_2": "X[1,4,2,5] X[5,10,6,11] X[3,9,4,8] X[9,3,10,2] X[7,12,8,1] X[11,6,12,7]",
    "6_3": "X[4,2,5,1] X[8,4,9,3] X[12,9,1,10] X[10,5,11,6] X[6,11,7,12] X[2,8,3,7]",
    "hopf": "X[4,1,3,2] X[2,3,1,4]",
    "whitehead": "X[6,1,7,2] X[10,7,5,8] X[4,5,1,6] X[2,10,3,9] X[8,4,9,3]",
}

# Tabulated Jones polynomials V(t), one chirality each
TABLE_V = {
    "3_1": "t + t^3 - t^4",
    "4_1": "t^-2 - t^-1 + 1 - t + t^2",
    "5_1": "-t^-7 + t^-6 - t^-5 + t^-4 + t^-2",
    "5_2": "-t^-6 + t^-5 - t^-4 + 2*t^-3 - t^-2 + t^-1",
    "6_1": "t^-4 - t^-3 + t^-2 - 2*t^-1 + 2 - t + t^2",
    "6_2": "t^-1 - 1 + 2*t - 2*t^2 + 2*t^3 - 2*t^4 + t^5",
    "6_3": "-t^-3 + 2*t^-2 - 2*t^-1 + 3 - 2*t + 2*t^2 - t^3",
}

# HOMFLY-PT values derived by hand from the skein relation a P+ - a^-1 P- = z P0
HAND_HOMFLY = {
    "hopf_pos": "a^-1*z^-1 - a^-3*z^-1 + a^-1*z",
    "hopf_neg": "a^3*z^-1 - a*z^-1 - a*z",
    "trefoil_rh": "a^-2*z^2 + 2*a^-2 - a^-4",
    "trefoil_lh": "a^2*z^2 + 2*a^2 - a^4",
    "figure_eight": "a^2 - 1 + a^-2 - z^2",
}


def table_jones(key: str, d: LinkDiagram) -> LaurentPoly:
    """Tabulated V(t) as a polynomial in q, in the chirality of ``d``."""
    v = LaurentPoly.parse(TABLE_V[key]).substitute({"t": q ** 2})
    got = jones_reduced(d)
    for cand in (v, v.substitute({"q": q ** -1})):
        if got == cand:
            return cand
    raise SystemExit(f"{key}: diagram does not match the tabulated Jones polynomial")


def kinked(d: LinkDiagram, *moves: tuple[int, int]) -> LinkDiagram:
    for edge, variant in moves:
        d = add_kink(d, edge, variant)
    return d


def unlink_aliases(m: int) -> list[LinkDiagram]:
    """Descending decorated unlinks: Reidemeister II pairs and kinks."""
    rest = unlink(m - 2) if m > 2 else None

    def pad(d: LinkDiagram) -> LinkDiagram:
        return d if rest is None else disjoint_union(d, rest)

    r2 = from_braid([1, -1])
    if m == 2:
        return [r2, kinked(r2, (1, 0)), kinked(unlink(2), (1, 1), (2, 2))]
    k = min(m, 4)
    chain = from_braid([g for i in range(1, k) for g in (i, -i)], k)
    if m > k:
        chain = disjoint_union(chain, unlink(m - k))
    return [pad(r2), pad(kinked(r2, (1, 0))), chain]


def braid_moves(word: list[int]) -> list[LinkDiagram]:
    """Closures of braids related to ``word`` by Markov and Reidemeister II moves."""
    k = max(abs(g) for g in word) + 1
    return [
        from_braid(word + [k]),
        from_braid(word[:1] + [k - 1, -(k - 1)] + word[1:]) if k > 2 else from_braid(word + [-k]),
        from_braid(word[1:] + word[:1] + [-k]),
        from_braid(word[:2] + [-1, 1] + word[2:]),
    ]


def pick(d: LinkDiagram, candidates: list[LinkDiagram], count: int = 3) -> list[LinkDiagram]:
    """Up to ``count`` (at least two) candidates that are distinct diagrams, also distinct from ``d``."""
    chosen: list[LinkDiagram] = []
    for c in candidates:
        if c.n <= 12 and not any(is_isomorphic(c, x) for x in [d] + chosen):
            chosen.append(c)
        if len(chosen) == count:
            break
    if len(chosen) < 2:
        raise SystemExit(f"only {len(chosen)} distinct aliases")
    return chosen


def entries() -> list[tuple[str, LinkDiagram, list[LinkDiagram], dict[str, str]]]:
    out = []

    def add(name, d, candidates, jones=None, homfly=None, extra=()):
        exp = {}
        if jones is not None:
            exp["jones"] = jones.to_text()
        if homfly is not None:
            exp["homfly"] = homfly
        elif name in HAND_HOMFLY:
            exp["homfly"] = HAND_HOMFLY[name]
        out.append((name, d, pick(d, candidates) + list(extra), exp))

    U = unlink(1)
    add("unknot", U, [from_braid([1]), from_braid([-1, 2]), from_braid([1, 1, -1])],
        jones=LaurentPoly.const(1), homfly="1")
    kp, kn = parse_pd("X[1,1,2,2]"), parse_pd("X[1,2,2,1]")
    add("kink_pos", kp, [U, kinked(kp, (1, 2)), from_braid([1, -2, 2, 2])], homfly="1")
    add("kink_neg", kn, [U, kinked(kn, (2, 0)), from_braid([1, -1, -1])], homfly="1")

    unlink_value = LaurentPoly.parse("a*z^-1 - a^-1*z^-1")
    for m in range(2, 6):
        add(f"unlink_{m}", unlink(m), unlink_aliases(m), homfly=(unlink_value ** (m - 1)).to_text())

    hopf_pos = from_braid([1, 1])
    add("hopf_pos", hopf_pos, braid_moves([1, 1]) + [kinked(hopf_pos, (2, 1))])
    hopf_neg = parse_pd(ROLFSEN["hopf"])
    add("hopf_neg", hopf_neg, [reverse(hopf_pos, [1])] + braid_moves([-1, -1]))

    lh = parse_pd(ROLFSEN["3_1"])
    rh = from_braid([1, 1, 1])
    add("trefoil_rh", rh, braid_moves([1, 1, 1]) + [kinked(rh, (3, 0))], jones=table_jones("3_1", rh))
    add("trefoil_lh", lh, [parse_gauss("U1-O3-U2-O1-U3-O2-")] + braid_moves([-1, -1, -1]),
        jones=table_jones("3_1", lh))

    fig8 = parse_pd(ROLFSEN["4_1"])
    add("figure_eight", fig8, [mirror(fig8)] + braid_moves([1, -2, 1, -2]), jones=table_jones("4_1", fig8),
        extra=[kinked(from_braid([1, -2, 1, -2, 3, 1, -1, 2, -2, -3, 3]), (5, 1))])

    for key, word in (("5_1", [-1] * 5), ("5_2", [-1, -1, -1, -2, 1, -2]),
                      ("6_1", [-1, -1, -2, 1, 3, -2, 3]), ("6_2", [-1, -1, -1, 2, -1, 2]),
                      ("6_3", [1, 1, -2, 1, -2, -2])):
        k = parse_pd(ROLFSEN[key])
        cands = [from_braid(word)] + ([mirror(k)] if key == "6_3" else []) + braid_moves(word)
        add(key, k, cands, jones=table_jones(key, k))

    square = connected_sum(rh, lh)
    add("square_knot", square, [from_braid([1, 1, 1, -2, -2, -2]), connected_sum(lh, rh, 2, 3),
                                connected_sum(rh, lh, 4, 1)] + braid_moves([1, 1, 1, -2, -2, -2]),
        jones=table_jones("3_1", rh) * table_jones("3_1", lh))
    granny = connected_sum(rh, rh)
    add("granny_knot", granny, [from_braid([1, 1, 1, 2, 2, 2]), connected_sum(rh, mirror(lh), 2, 5),
                                connected_sum(rh, rh, 3, 4)] + braid_moves([1, 1, 1, 2, 2, 2]),
        jones=table_jones("3_1", rh) ** 2)

    wh = parse_pd(ROLFSEN["whitehead"])
    add("whitehead", wh, [from_braid([1, -2, 1, -2, -2])] + braid_moves([1, -2, 1, -2, -2]))
    borr = from_braid([1, -2] * 3)
    add("borromean", borr, braid_moves([1, -2] * 3) + [kinked(borr, (1, 0))],
        extra=[kinked(from_braid([1, -2] * 3 + [3, 1, -1, 2, -2, -3, 3]), (2, 3))])
    return out


def render() -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["name", "pd", "aliases", "expected_jones", "expected_homfly"])
    for name, d, aliases, exp in entries():
        for a in aliases:
            if is_isomorphic(a, d):
                raise SystemExit(f"{name}: alias is the same diagram as the entry")
            if a.n > 14:
                raise SystemExit(f"{name}: alias has {a.n} crossings")
        w.writerow([name, to_pd(d), "|".join(to_pd(a) for a in aliases),
                    exp.get("jones", ""), exp.get("homfly", "")])
    return buf.getvalue()


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--check", action="store_true", help="fail if the frozen file is out of date")
    args = ap.parse_args(argv)
    text = render()
    if args.check:
        if OUT.read_text() != text:
            print(f"{OUT} is out of date", file=sys.stderr)
            return 1
        return 0
    OUT.write_text(text)
    print(f"wrote {OUT}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
