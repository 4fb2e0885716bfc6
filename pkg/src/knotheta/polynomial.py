"""Exact sparse Laurent polynomials over the integers.

A :class:`LaurentPoly` maps monomials to Python ``int`` coefficients.  A
monomial is a tuple of ``(variable, exponent)`` pairs sorted by variable name
with every exponent non-zero, so two polynomials are equal exactly when their
term maps are equal.  Values are immutable and hashable.

Text form::

    >>> q = LaurentPoly.var("q")
    >>> str((q + q**-1) ** 2)
    'q^2 + 2 + q^-2'
"""

from __future__ import annotations

import re
from collections.abc import Iterable, Mapping
from fractions import Fraction
from typing import Union

from .errors import PolynomialError

Monomial = tuple[tuple[str, int], ...]
Coercible = Union["LaurentPoly", int]

_ONE: Monomial = ()


def _mono_mul(m1: Monomial, m2: Monomial) -> Monomial:
    if not m1:
        return m2
    if not m2:
        return m1
    exps = dict(m1)
    for v, e in m2:
        s = exps.get(v, 0) + e
        if s:
            exps[v] = s
        else:
            del exps[v]
    return tuple(sorted(exps.items()))


def _mono_pow(m: Monomial, k: int) -> Monomial:
    if k == 0:
        return _ONE
    return tuple((v, e * k) for v, e in m)


class LaurentPoly:
    """Element of Z[x_1^{±1}, ..., x_k^{±1}] in arbitrarily named variables."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, int] | Iterable[tuple[Monomial, int]] = ()):
        acc: dict[Monomial, int] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for mono, c in items:
            if c:
                key = tuple(sorted((v, e) for v, e in mono if e))
                acc[key] = acc.get(key, 0) + c
        self._terms = {m: c for m, c in acc.items() if c}
        self._hash: int | None = None

    @classmethod
    def _raw(cls, terms: dict[Monomial, int]) -> LaurentPoly:
        # terms must already be canonical with no zero coefficients
        p = object.__new__(cls)
        p._terms = terms
        p._hash = None
        return p

    # -- constructors -----------------------------------------------------
    @classmethod
    def const(cls, c: int) -> LaurentPoly:
        return cls._raw({_ONE: int(c)} if c else {})

    @classmethod
    def var(cls, name: str, exp: int = 1) -> LaurentPoly:
        return cls._raw({((name, exp),) if exp else _ONE: 1})

    @classmethod
    def monomial(cls, exps: Mapping[str, int], coef: int = 1) -> LaurentPoly:
        return cls({tuple(exps.items()): coef})

    @classmethod
    def coerce(cls, x: Coercible) -> LaurentPoly:
        if isinstance(x, LaurentPoly):
            return x
        if isinstance(x, int):
            return cls.const(x)
        raise TypeError(f"cannot coerce {type(x).__name__} to LaurentPoly")

    # -- inspection -------------------------------------------------------
    @property
    def terms(self) -> dict[Monomial, int]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def is_unit(self) -> bool:
        """True for ±(monomial), the invertible elements of the ring."""
        return len(self._terms) == 1 and abs(next(iter(self._terms.values()))) == 1

    def variables(self) -> frozenset[str]:
        return frozenset(v for m in self._terms for v, _ in m)

    def exponent_range(self, var: str) -> tuple[int, int]:
        if not self._terms:
            raise PolynomialError("zero polynomial has no degree")
        es = [dict(m).get(var, 0) for m in self._terms]
        return min(es), max(es)

    def coefficient(self, exps: Mapping[str, int]) -> int:
        key = tuple(sorted((v, e) for v, e in exps.items() if e))
        return self._terms.get(key, 0)

    def constant_term(self) -> int:
        return self._terms.get(_ONE, 0)

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other: Coercible) -> LaurentPoly:
        if not isinstance(other, (LaurentPoly, int)):
            return NotImplemented
        o = LaurentPoly.coerce(other)
        if len(o._terms) > len(self._terms):
            big, small = o._terms, self._terms
        else:
            big, small = self._terms, o._terms
        out = dict(big)
        for m, c in small.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return LaurentPoly._raw(out)

    __radd__ = __add__

    def __neg__(self) -> LaurentPoly:
        return LaurentPoly._raw({m: -c for m, c in self._terms.items()})

    def __pos__(self) -> LaurentPoly:
        return self

    def __sub__(self, other: Coercible) -> LaurentPoly:
        if not isinstance(other, (LaurentPoly, int)):
            return NotImplemented
        return self + (-LaurentPoly.coerce(other))

    def __rsub__(self, other: Coercible) -> LaurentPoly:
        return LaurentPoly.coerce(other) - self

    def __mul__(self, other: Coercible) -> LaurentPoly:
        if isinstance(other, int):
            if other == 0:
                return LaurentPoly._raw({})
            return LaurentPoly._raw({m: c * other for m, c in self._terms.items()})
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        out: dict[Monomial, int] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = _mono_mul(m1, m2)
                s = out.get(m, 0) + c1 * c2
                if s:
                    out[m] = s
                else:
                    out.pop(m, None)
        return LaurentPoly._raw(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> LaurentPoly:
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            if not self.is_unit():
                raise PolynomialError(f"negative power of non-unit {self}")
            (m, c), = self._terms.items()
            return LaurentPoly._raw({_mono_pow(m, k): c ** (-k)})
        if len(self._terms) == 1:
            (m, c), = self._terms.items()
            return LaurentPoly._raw({_mono_pow(m, k): c ** k})
        result = LaurentPoly.const(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            other = LaurentPoly.const(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    # -- ring maps --------------------------------------------------------
    def substitute(self, bindings: Mapping[str, Coercible]) -> LaurentPoly:
        """Image under the ring homomorphism sending each bound variable to its value.

        Negative exponents of a bound variable need a unit (±monomial) binding.
        """
        if not bindings:
            return self
        bound = {v: LaurentPoly.coerce(p) for v, p in bindings.items()}
        powers: dict[tuple[str, int], LaurentPoly] = {}
        out = LaurentPoly._raw({})
        for mono, c in self._terms.items():
            free: list[tuple[str, int]] = []
            term = LaurentPoly.const(c)
            for v, e in mono:
                if v in bound:
                    key = (v, e)
                    if key not in powers:
                        if e < 0 and not bound[v].is_unit():
                            raise PolynomialError(
                                f"substituting {v}^{e} needs the inverse of {bound[v]}"
                            )
                        powers[key] = bound[v] ** e
                    term = term * powers[key]
                else:
                    free.append((v, e))
            if free:
                term = term * LaurentPoly._raw({tuple(free): 1})
            out = out + term
        return out

    def map_exponents(self, var: str, factor: int) -> LaurentPoly:
        """Multiply every exponent of ``var`` by ``factor`` (e.g. q -> s^2)."""
        return LaurentPoly({tuple((v, e * factor if v == var else e) for v, e in m): c
                            for m, c in self._terms.items()})

    def rename(self, mapping: Mapping[str, str]) -> LaurentPoly:
        return LaurentPoly(((tuple((mapping.get(v, v), e) for v, e in m), c)
                            for m, c in self._terms.items()))

    def divide_exact(self, other: Coercible) -> LaurentPoly:
        """Return ``r`` with ``r * other == self``; raise if no such Laurent polynomial exists."""
        d = LaurentPoly.coerce(other)
        if d.is_zero():
            raise PolynomialError("division by zero")
        if self.is_zero():
            return self
        if d.is_unit():
            return self * d ** -1
        names = sorted(self.variables() | d.variables())
        # Shift both to honest polynomials with no monomial content; exactness
        # in the Laurent ring is then exactness in the polynomial ring.
        shift_p = {v: -min(0, *(dict(m).get(v, 0) for m in self._terms)) for v in names}
        shift_d = {v: -min(dict(m).get(v, 0) for m in d._terms) for v in names}
        p = _to_vectors(self * LaurentPoly.monomial(shift_p), names)
        q = _to_vectors(d * LaurentPoly.monomial(shift_d), names)
        lead_q = max(q)
        cq = q[lead_q]
        quot: dict[tuple[int, ...], int] = {}
        while p:
            lead_p = max(p)
            cp = p[lead_p]
            t = tuple(a - b for a, b in zip(lead_p, lead_q))
            if any(x < 0 for x in t) or cp % cq:
                raise PolynomialError(f"{d} does not divide {self}")
            ct = cp // cq
            quot[t] = ct
            for mono, c in q.items():
                key = tuple(a + b for a, b in zip(mono, t))
                s = p.get(key, 0) - ct * c
                if s:
                    p[key] = s
                else:
                    p.pop(key, None)
        r = LaurentPoly({tuple(zip(names, k)): c for k, c in quot.items()})
        back = {v: shift_d[v] - shift_p[v] for v in names}
        return r * LaurentPoly.monomial(back)

    def eval_at(self, point: Mapping[str, complex | float | Fraction | int]):
        """Numeric value at a point; test helper only."""
        total = 0
        for mono, c in self._terms.items():
            term = c
            for v, e in mono:
                term = term * point[v] ** e
            total = total + term
        return total

    # -- rendering --------------------------------------------------------
    def sorted_terms(self) -> list[tuple[Monomial, int]]:
        names = sorted(self.variables())

        def key(item):
            exps = dict(item[0])
            return tuple(-exps.get(v, 0) for v in names)

        return sorted(self._terms.items(), key=key)

    def to_text(self) -> str:
        if not self._terms:
            return "0"
        parts: list[str] = []
        for i, (mono, c) in enumerate(self.sorted_terms()):
            factors = "*".join(v if e == 1 else f"{v}^{e}" for v, e in mono)
            mag = abs(c)
            if not factors:
                body = str(mag)
            elif mag == 1:
                body = factors
            else:
                body = f"{mag}*{factors}"
            if i == 0:
                parts.append(("-" if c < 0 else "") + body)
            else:
                parts.append((" - " if c < 0 else " + ") + body)
        return "".join(parts)

    def to_json(self) -> list:
        return [[dict(mono), str(c)] for mono, c in self.sorted_terms()]

    @classmethod
    def from_json(cls, data: list) -> LaurentPoly:
        return cls({tuple(m.items()): int(c) for m, c in data})

    @classmethod
    def parse(cls, text: str) -> LaurentPoly:
        return _Parser(text).parse()

    def __str__(self) -> str:
        return self.to_text()

    def __repr__(self) -> str:
        return f"LaurentPoly({self.to_text()!r})"


def _to_vectors(p: LaurentPoly, names: list[str]) -> dict[tuple[int, ...], int]:
    out = {}
    for mono, c in p.items():
        exps = dict(mono)
        out[tuple(exps.get(v, 0) for v in names)] = c
    return out


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\S))")


class _Parser:
    """Recursive-descent parser for the text form (plus parentheses)."""

    def __init__(self, text: str):
        self.tokens: list[tuple[str, str]] = []
        pos = 0
        text = text.replace("−", "-")
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if not m or m.end() == pos:
                break
            pos = m.end()
            if m.group(1):
                self.tokens.append(("int", m.group(1)))
            elif m.group(2):
                self.tokens.append(("name", m.group(2)))
            elif m.group(3):
                self.tokens.append(("op", m.group(3)))
        self.i = 0

    def _peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else (None, None)

    def _take(self, value=None):
        tok = self._peek()
        if tok[0] is None or (value is not None and tok[1] != value):
            raise PolynomialError(f"parse error near token {self.i}: expected {value!r}")
        self.i += 1
        return tok

    def parse(self) -> LaurentPoly:
        if not self.tokens:
            raise PolynomialError("empty polynomial text")
        p = self._expr()
        if self.i != len(self.tokens):
            raise PolynomialError(f"trailing input at token {self.i}")
        return p

    def _expr(self) -> LaurentPoly:
        sign = 1
        if self._peek() in (("op", "-"), ("op", "+")):
            sign = -1 if self._take()[1] == "-" else 1
        total = self._term() * sign
        while self._peek() in (("op", "+"), ("op", "-")):
            op = self._take()[1]
            t = self._term()
            total = total + t if op == "+" else total - t
        return total

    def _term(self) -> LaurentPoly:
        p = self._power()
        while self._peek() == ("op", "*"):
            self._take()
            p = p * self._power()
        return p

    def _power(self) -> LaurentPoly:
        base = self._atom()
        if self._peek() == ("op", "^"):
            self._take()
            neg = False
            if self._peek() == ("op", "-"):
                self._take()
                neg = True
            kind, val = self._take()
            if kind != "int":
                raise PolynomialError("exponent must be an integer")
            return base ** (-int(val) if neg else int(val))
        return base

    def _atom(self) -> LaurentPoly:
        kind, val = self._peek()
        if kind == "int":
            self._take()
            return LaurentPoly.const(int(val))
        if kind == "name":
            self._take()
            return LaurentPoly.var(val)
        if (kind, val) == ("op", "("):
            self._take()
            p = self._expr()
            self._take(")")
            return p
        raise PolynomialError(f"unexpected token {val!r}")


# -- functional surface ------------------------------------------------------

def add(p: Coercible, q: Coercible) -> LaurentPoly:
    return LaurentPoly.coerce(p) + q


def mul(p: Coercible, q: Coercible) -> LaurentPoly:
    return LaurentPoly.coerce(p) * q


def neg(p: Coercible) -> LaurentPoly:
    return -LaurentPoly.coerce(p)


def pow(p: Coercible, k: int) -> LaurentPoly:  # noqa: A001 - mirrors the ring operation name
    return LaurentPoly.coerce(p) ** k


def substitute(p: Coercible, bindings: Mapping[str, Coercible]) -> LaurentPoly:
    return LaurentPoly.coerce(p).substitute(bindings)


def divide_exact(p: Coercible, q: Coercible) -> LaurentPoly:
    return LaurentPoly.coerce(p).divide_exact(q)


def var(name: str, exp: int = 1) -> LaurentPoly:
    return LaurentPoly.var(name, exp)


def const(c: int) -> LaurentPoly:
    return LaurentPoly.const(c)


def binomial_power(a: LaurentPoly, b: LaurentPoly, k: int) -> LaurentPoly:
    """(a + b)^k, k >= 0."""
    return (a + b) ** k
