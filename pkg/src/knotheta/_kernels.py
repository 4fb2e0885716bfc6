"""Hot loops of the exponential state sums.

Every kernel here is written in the subset of Python that numba compiles.
With numba available (and ``KNOTHETA_NUMBA`` not set to ``0``) they are
compiled with ``@njit(nogil=True)`` so that state ranges can run on
threads; otherwise the very same functions run as plain Python, except for
:func:`state_sum_counts`, whose fallback is a vectorised numpy version.

State encoding: bit ``c`` of the state integer set means crossing ``c``
takes the ``-`` (B) smoothing; state 0 is all-plus.  End ``4c+p`` is
position ``p`` of crossing ``c``.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np

_WANT_NUMBA = os.environ.get("KNOTHETA_NUMBA", "1").strip().lower() not in ("0", "false", "no", "off")

try:
    if not _WANT_NUMBA:
        raise ImportError
    import numba

    def _jit(fn):
        return numba.njit(cache=True, nogil=True)(fn)

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - depends on environment
    def _jit(fn):
        return fn

    HAVE_NUMBA = False

BACKEND = "numba" if HAVE_NUMBA else "python"

# flag slots reported by theta_j_table
FLAG_GRADING, FLAG_MONODROMY, FLAG_CLOSED_FORM, FLAG_TREE, FLAG_PUNCTURE = range(5)
N_FLAGS = 5


@_jit
def blue_partner(state, c, p):
    if (state >> c) & 1:
        return 3 - p
    return p ^ 1


@_jit
def popcount(x):
    k = 0
    while x:
        x &= x - 1
        k += 1
    return k


@_jit
def trace_circles(state, n, other_end, circ):
    """Label every end with its state circle; return the circle count."""
    for e in range(4 * n):
        circ[e] = -1
    k = 0
    for start in range(4 * n):
        if circ[start] >= 0:
            continue
        e = start
        while circ[e] < 0:
            c = e // 4
            b = 4 * c + blue_partner(state, c, e % 4)
            circ[e] = k
            circ[b] = k
            e = other_end[b]
        k += 1
    return k


@_jit
def _find(parent, x):
    while parent[x] != x:
        parent[x] = parent[parent[x]]
        x = parent[x]
    return x


@_jit
def circle_structure(state, n, other_end, qface, n_faces, face_is_outer,
                     circ, first_end, corner, inner, outer, parent, depth):
    """Trace circles and their nesting for one state.

    Regions are faces of the diagram glued through the smoothing channels,
    with every unbounded face glued into a single root region.  Circles are
    the edges of a tree on the regions; a circle's inner region is the side
    away from the root and its parent is the circle bounding its outer region.

    ``corner[k]`` is the region on the corner side of circle k's first blue
    arc (the arc through its lowest end).  Fills the per-circle arrays and
    returns ``(n_circles, ok)``.
    """
    ncirc = trace_circles(state, n, other_end, circ)
    reg = np.empty(n_faces, dtype=np.int64)
    for f in range(n_faces):
        reg[f] = f
    root_face = -1
    for f in range(n_faces):
        if face_is_outer[f]:
            if root_face < 0:
                root_face = f
            else:
                a = _find(reg, f)
                b = _find(reg, root_face)
                if a != b:
                    reg[a] = b
    for c in range(n):
        if (state >> c) & 1:
            a = _find(reg, qface[4 * c])
            b = _find(reg, qface[4 * c + 2])
        else:
            a = _find(reg, qface[4 * c + 1])
            b = _find(reg, qface[4 * c + 3])
        if a != b:
            reg[a] = b
    root = _find(reg, root_face)

    for k in range(ncirc):
        first_end[k] = -1
    for e in range(4 * n):
        k = circ[e]
        if first_end[k] < 0:
            first_end[k] = e
    side_a = np.empty(ncirc, dtype=np.int64)
    side_b = np.empty(ncirc, dtype=np.int64)
    for k in range(ncirc):
        e = first_end[k]
        c = e // 4
        p = e % 4
        b = blue_partner(state, c, p)
        q = p if b == (p + 1) % 4 else b
        side_a[k] = _find(reg, qface[4 * c + q])
        side_b[k] = _find(reg, qface[4 * c + (q + 1) % 4])
        corner[k] = side_a[k]

    rdepth = np.full(n_faces, -1, dtype=np.int64)
    rdepth[root] = 0
    for k in range(ncirc):
        inner[k] = -1
    ok = True
    changed = True
    while changed:
        changed = False
        for k in range(ncirc):
            if inner[k] >= 0:
                continue
            da = rdepth[side_a[k]]
            db = rdepth[side_b[k]]
            if da >= 0 and db >= 0:
                ok = False  # region graph has a cycle
                inner[k] = side_b[k]
                outer[k] = side_a[k]
            elif da >= 0:
                outer[k] = side_a[k]
                inner[k] = side_b[k]
                rdepth[side_b[k]] = da + 1
                changed = True
            elif db >= 0:
                outer[k] = side_b[k]
                inner[k] = side_a[k]
                rdepth[side_a[k]] = db + 1
                changed = True
    for k in range(ncirc):
        if inner[k] < 0:
            ok = False
            inner[k] = side_a[k]
            outer[k] = side_b[k]
        depth[k] = rdepth[inner[k]]
        parent[k] = -1
    for k in range(ncirc):
        for j in range(ncirc):
            if j != k and inner[j] == outer[k]:
                if parent[k] >= 0:
                    ok = False
                parent[k] = j
    return ncirc, ok


@_jit
def subtree_exponents(ncirc, parent, depth, expo, subtotal):
    """Specialisation exponents: leaves get Q, a circle with c children Q^(1-c).

    ``subtotal[k]`` is the exponent of the product over every sigma-puncture
    inside circle k (its own and its descendants'); the result must be 1.
    """
    for k in range(ncirc):
        expo[k] = 1
    for k in range(ncirc):
        if parent[k] >= 0:
            expo[parent[k]] -= 1
    for k in range(ncirc):
        subtotal[k] = expo[k]
    maxd = 0
    for k in range(ncirc):
        if depth[k] > maxd:
            maxd = depth[k]
    d = maxd
    while d > 0:
        for k in range(ncirc):
            if depth[k] == d and parent[k] >= 0:
                subtotal[parent[k]] += subtotal[k]
        d -= 1


@_jit
def puncture_index(c, q, corner_side):
    """Puncture pair of quadrant q at crossing c: 8c+2q+1 in the corner, +2 at the centre."""
    return 8 * c + 2 * q + (1 if corner_side else 2)


@_jit
def grading_intersection(state, n, is_head, sign):
    """Oriented intersection grading: -2*sign for each non-oriented smoothing."""
    g = 0
    for c in range(n):
        b = blue_partner(state, c, 0)
        if is_head[4 * c] == is_head[4 * c + b]:
            g -= 2 * sign[c]
    return g


@_jit
def _binom(m, k):
    r = 1
    for t in range(k):
        r = r * (m - t) // (t + 1)
    return r


@_jit
def enumerate_pairing(ncirc, subtotal, farsign, cut, far, loc, kmax):
    """Sum sign * Q^exponent over all intersection points, in Gray-code order.

    Each circle other than ``cut`` is either near (sign +1, monomial 1) or
    far (sign ``farsign[k]``, monomial Q^subtotal[k]); the cut circle is
    always near.  ``loc[k]`` receives the coefficient of Q^k.  Returns False
    if an exponent leaves [0, kmax].
    """
    for k in range(kmax + 1):
        loc[k] = 0
    free = np.empty(ncirc, dtype=np.int64)
    m = 0
    for k in range(ncirc):
        far[k] = 0
        if k != cut:
            free[m] = k
            m += 1
    cur_exp = 0
    cur_sign = 1
    loc[0] += 1
    ok = True
    for gidx in range(1, 1 << m):
        t = 0
        while not (gidx >> t) & 1:
            t += 1
        k = free[t]
        if far[k] == 0:
            far[k] = 1
            cur_exp += subtotal[k]
        else:
            far[k] = 0
            cur_exp -= subtotal[k]
        cur_sign *= farsign[k]
        if cur_exp < 0 or cur_exp > kmax:
            ok = False
        else:
            loc[cur_exp] += cur_sign
    return ok


@_jit
def matches_closed_form(loc, m):
    """True when loc holds the coefficients of (1 - Q)^m."""
    for k in range(loc.shape[0]):
        want = _binom(m, k) if k <= m else 0
        if k % 2 == 1:
            want = -want
        if loc[k] != want:
            return False
    return True


@_jit
def theta_j_table(lo, hi, n, other_end, is_head, sign, qface, n_faces, face_is_outer):
    """Pairing table for the Jones intersection model over states [lo, hi).

    ``table[(i + 2n) // 2, k]`` sums the signs of all intersection points with
    grading ``i`` and specialised monomial ``Q^k``.  ``flags`` counts states
    failing each internal check (see FLAG_* constants).
    """
    w = 0
    for c in range(n):
        w += sign[c]
    kmax = 2 * n + 2
    table = np.zeros((2 * n + 1, kmax + 1), dtype=np.int64)
    flags = np.zeros(N_FLAGS, dtype=np.int64)
    n4 = 4 * n
    circ = np.empty(n4, dtype=np.int64)
    first_end = np.empty(n4, dtype=np.int64)
    corner = np.empty(n4, dtype=np.int64)
    inner = np.empty(n4, dtype=np.int64)
    outer = np.empty(n4, dtype=np.int64)
    parent = np.empty(n4, dtype=np.int64)
    depth = np.empty(n4, dtype=np.int64)
    expo = np.empty(n4, dtype=np.int64)
    subtotal = np.empty(n4, dtype=np.int64)
    nblue = np.empty(n4, dtype=np.int64)
    farsign = np.empty(n4, dtype=np.int64)
    punct = np.empty(n4, dtype=np.int64)
    far = np.zeros(n4, dtype=np.int64)
    loc = np.zeros(kmax + 1, dtype=np.int64)
    for s in range(lo, hi):
        ncirc, ok = circle_structure(s, n, other_end, qface, n_faces, face_is_outer,
                                     circ, first_end, corner, inner, outer, parent, depth)
        if not ok:
            flags[FLAG_TREE] += 1
        g = grading_intersection(s, n, is_head, sign)
        sgn = n - 2 * popcount(s)
        if g != sgn - w:
            flags[FLAG_GRADING] += 1
        subtree_exponents(ncirc, parent, depth, expo, subtotal)
        for k in range(ncirc):
            if subtotal[k] != 1:
                flags[FLAG_MONODROMY] += 1
                break
        # base points: one per blue arc, so a circle carries m = (#ends)/2 of them
        for k in range(ncirc):
            nblue[k] = 0
        for e in range(n4):
            nblue[circ[e]] += 1
        for k in range(ncirc):
            m = nblue[k] // 2
            farsign[k] = (-1) ** m * (-1) ** (m - 1)
        # sigma-puncture: inner-side puncture of the circle's first blue arc
        for k in range(ncirc):
            e = first_end[k]
            c = e // 4
            p = e % 4
            b = blue_partner(s, c, p)
            q = p if b == (p + 1) % 4 else b
            punct[k] = puncture_index(c, q, corner[k] == inner[k])
        for k in range(ncirc):
            for j in range(k):
                if punct[j] == punct[k]:
                    flags[FLAG_PUNCTURE] += 1
        if not enumerate_pairing(ncirc, subtotal, farsign, -1, far, loc, kmax):
            flags[FLAG_CLOSED_FORM] += 1
        elif not matches_closed_form(loc, ncirc):
            flags[FLAG_CLOSED_FORM] += 1
        row = (g + 2 * n) // 2
        for k in range(ncirc + 1):
            table[row, k] += loc[k]
    return table, flags



@_jit
def _state_sum_counts_jit(lo, hi, n, other_end):
    hist = np.zeros((n + 1, 2 * n + 2), dtype=np.int64)
    circ = np.empty(4 * n, dtype=np.int64)
    for s in range(lo, hi):
        k = trace_circles(s, n, other_end, circ)
        hist[popcount(s), k] += 1
    return hist


def _state_sum_counts_numpy(lo, hi, n, other_end, block=4096):
    hist = np.zeros((n + 1, 2 * n + 2), dtype=np.int64)
    n4 = 4 * n
    pos = np.tile(np.arange(4), n)
    cross = np.repeat(np.arange(n), 4)
    ident = np.arange(n4)
    rounds = max(1, int(np.ceil(np.log2(max(n4, 2)))) + 1)
    for start in range(lo, hi, block):
        states = np.arange(start, min(hi, start + block), dtype=np.int64)
        bits = (states[:, None] >> cross[None, :]) & 1
        blue = 4 * cross[None, :] + np.where(bits == 1, 3 - pos[None, :], pos[None, :] ^ 1)
        f = other_end[blue]
        label = np.broadcast_to(ident, f.shape).copy()
        # pointer jumping: after r rounds label is the orbit minimum over 2^r steps
        for _ in range(rounds):
            label = np.minimum(label, np.take_along_axis(label, f, axis=1))
            f = np.take_along_axis(f, f, axis=1)
        circles = (label == ident[None, :]).sum(axis=1) // 2
        minus = np.array([popcount(int(x)) for x in states], dtype=np.int64)
        np.add.at(hist, (minus, circles), 1)
    return hist


def state_sum_counts(lo, hi, n, other_end):
    """Histogram ``hist[r, k]`` of states in [lo, hi) with r minus-smoothings and k circles."""
    if HAVE_NUMBA:
        return _state_sum_counts_jit(lo, hi, n, other_end)
    return _state_sum_counts_numpy(lo, hi, n, other_end)


def default_threads() -> int:
    """``KNOTHETA_THREADS`` if set to an integer, else the CPU count."""
    raw = os.environ.get("KNOTHETA_THREADS", "").strip()
    try:
        return max(1, int(raw))
    except ValueError:
        return os.cpu_count() or 1


def run_chunked(kernel, total, args, threads=None, min_chunk=1024):
    """Run ``kernel(lo, hi, *args)`` over [0, total) and sum the results.

    Chunks are fixed by ``total`` alone and combined in chunk order, so the
    integer results do not depend on the number of threads.
    """
    threads = default_threads() if threads is None else max(1, int(threads))
    n_chunks = max(1, min(64, total // min_chunk))
    bounds = [total * i // n_chunks for i in range(n_chunks + 1)]
    spans = list(zip(bounds[:-1], bounds[1:]))
    if threads == 1 or n_chunks == 1:
        parts = [kernel(lo, hi, *args) for lo, hi in spans]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(lambda sp: kernel(sp[0], sp[1], *args), spans))
    first = parts[0]
    if isinstance(first, tuple):
        acc = [x.copy() for x in first]
        for part in parts[1:]:
            for a, x in zip(acc, part):
                a += x
        return tuple(acc)
    out = first.copy()
    for part in parts[1:]:
        out += part
    return out


@_jit
def pairing_audit(lo, hi, n, other_end, qface, n_faces, face_is_outer, cut_end):
    """Closed-form and monodromy audit over states [lo, hi).

    Returns failure counts ``[no-cut pairing, cut pairing, monodromy,
    nesting tree, sigma-puncture clash]``; the cut circle is the one through
    end ``cut_end``.
    """
    out = np.zeros(5, dtype=np.int64)
    n4 = 4 * n
    kmax = 2 * n + 2
    circ = np.empty(n4, dtype=np.int64)
    first_end = np.empty(n4, dtype=np.int64)
    corner = np.empty(n4, dtype=np.int64)
    inner = np.empty(n4, dtype=np.int64)
    outer = np.empty(n4, dtype=np.int64)
    parent = np.empty(n4, dtype=np.int64)
    depth = np.empty(n4, dtype=np.int64)
    expo = np.empty(n4, dtype=np.int64)
    subtotal = np.empty(n4, dtype=np.int64)
    farsign = np.empty(n4, dtype=np.int64)
    nblue = np.empty(n4, dtype=np.int64)
    punct = np.empty(n4, dtype=np.int64)
    far = np.zeros(n4, dtype=np.int64)
    loc = np.zeros(kmax + 1, dtype=np.int64)
    for s in range(lo, hi):
        ncirc, ok = circle_structure(s, n, other_end, qface, n_faces, face_is_outer,
                                     circ, first_end, corner, inner, outer, parent, depth)
        if not ok:
            out[3] += 1
        subtree_exponents(ncirc, parent, depth, expo, subtotal)
        for k in range(ncirc):
            if subtotal[k] != 1:
                out[2] += 1
                break
        for k in range(ncirc):
            nblue[k] = 0
        for e in range(n4):
            nblue[circ[e]] += 1
        for k in range(ncirc):
            m = nblue[k] // 2
            farsign[k] = (-1) ** m * (-1) ** (m - 1)
            e = first_end[k]
            c = e // 4
            p = e % 4
            b = blue_partner(s, c, p)
            q = p if b == (p + 1) % 4 else b
            punct[k] = puncture_index(c, q, corner[k] == inner[k])
        for k in range(ncirc):
            for j in range(k):
                if punct[j] == punct[k]:
                    out[4] += 1
        if not (enumerate_pairing(ncirc, subtotal, farsign, -1, far, loc, kmax)
                and matches_closed_form(loc, ncirc)):
            out[0] += 1
        cut = circ[cut_end]
        if not (enumerate_pairing(ncirc, subtotal, farsign, cut, far, loc, kmax)
                and matches_closed_form(loc, ncirc - 1)):
            out[1] += 1
    return out
