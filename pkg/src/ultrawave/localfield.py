"""Elements of K_q = GF(q)((t)) as truncated Laurent series in the prime element.

The prime element is rendered ``t``.  An element is a finite set of
``(exponent, digit)`` pairs, digit being a nonzero GF(q) index; there are no
carries, so addition is digitwise in GF(q).
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache

from .cyclotomic import root_of_unity
from .gfq import FieldParams, GFqElem, ParameterError

__all__ = [
    "EXPONENT_WINDOW",
    "WindowError",
    "FieldElement",
    "Ball",
    "fe_add",
    "fe_mul",
    "lam",
    "character",
    "character_exponent",
    "chi_n",
    "ball_children",
    "format_element",
    "parse_element",
]

EXPONENT_WINDOW = (-64, 64)


class WindowError(OverflowError):
    """An exponent left the supported window; nothing is truncated silently."""


def _check_window(terms):
    lo, hi = EXPONENT_WINDOW
    if terms and (terms[0][0] < lo or terms[-1][0] > hi):
        raise WindowError(f"exponent outside window [{lo}, {hi}]: {terms[0][0]}..{terms[-1][0]}")


class FieldElement:
    __slots__ = ("params", "terms", "_hash")

    def __init__(self, params: FieldParams, terms=()):
        if isinstance(terms, dict):
            terms = terms.items()
        clean = tuple(sorted((int(e), int(d)) for e, d in terms if d))
        if len({e for e, _ in clean}) != len(clean):
            raise ValueError("repeated exponent in FieldElement terms")
        for _, d in clean:
            if not 0 < d < params.q:
                raise ValueError(f"digit {d} outside GF({params.q})")
        _check_window(clean)
        self.params = params
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, params, terms):
        # terms already sorted, nonzero, in window
        obj = cls.__new__(cls)
        obj.params = params
        obj.terms = terms
        obj._hash = None
        return obj

    @classmethod
    def zero(cls, params):
        return cls._raw(params, ())

    @classmethod
    def one(cls, params):
        return cls._raw(params, ((0, 1),))

    @classmethod
    def monomial(cls, params, digit, exponent):
        if isinstance(digit, GFqElem):
            digit = digit.index
        return cls(params, ((exponent, digit),))

    @classmethod
    def prime(cls, params):
        return cls._raw(params, ((1, 1),))

    # -- structure --------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def valuation(self):
        """Least exponent; ``None`` for zero."""
        return self.terms[0][0] if self.terms else None

    @property
    def norm(self) -> Fraction:
        if not self.terms:
            return Fraction(0)
        return Fraction(self.params.q) ** (-self.terms[0][0])

    def digit(self, exponent: int) -> int:
        for e, d in self.terms:
            if e == exponent:
                return d
            if e > exponent:
                break
        return 0

    def truncate(self, k: int) -> "FieldElement":
        """Drop every term with exponent >= k (reduction modulo P^k)."""
        t = self.terms
        if not t or t[-1][0] < k:
            return self
        i = 0
        while i < len(t) and t[i][0] < k:
            i += 1
        return FieldElement._raw(self.params, t[:i])

    def shift(self, j: int) -> "FieldElement":
        """Multiply by t**j."""
        if not self.terms or j == 0:
            return self
        terms = tuple((e + j, d) for e, d in self.terms)
        _check_window(terms)
        return FieldElement._raw(self.params, terms)

    # -- arithmetic -------------------------------------------------------

    def _same(self, other):
        if not isinstance(other, FieldElement):
            return NotImplemented
        if other.params != self.params:
            raise ParameterError("FieldElements over different FieldParams")
        return other

    def __add__(self, other):
        other = self._same(other)
        if other is NotImplemented:
            return other
        if not other.terms:
            return self
        if not self.terms:
            return other
        add = self.params.add_table
        acc = dict(self.terms)
        for e, d in other.terms:
            acc[e] = add[acc.get(e, 0)][d]
        return FieldElement._raw(self.params, tuple(sorted((e, d) for e, d in acc.items() if d)))

    def __neg__(self):
        neg = self.params.neg_table
        return FieldElement._raw(self.params, tuple((e, neg[d]) for e, d in self.terms))

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        other = self._same(other)
        if other is NotImplemented:
            return other
        if not self.terms or not other.terms:
            return FieldElement.zero(self.params)
        add, mul = self.params.add_table, self.params.mul_table
        acc = {}
        for e1, d1 in self.terms:
            row = mul[d1]
            for e2, d2 in other.terms:
                e = e1 + e2
                acc[e] = add[acc.get(e, 0)][row[d2]]
        terms = tuple(sorted((e, d) for e, d in acc.items() if d))
        _check_window(terms)
        return FieldElement._raw(self.params, terms)

    def scale(self, digit: int) -> "FieldElement":
        """Multiply by a GF(q) constant given by index."""
        if digit == 0:
            return FieldElement.zero(self.params)
        row = self.params.mul_table[digit]
        return FieldElement._raw(self.params, tuple((e, row[d]) for e, d in self.terms))

    def __eq__(self, other):
        if not isinstance(other, FieldElement):
            return NotImplemented
        return self.terms == other.terms and self.params == other.params

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.terms)
        return self._hash

    def __repr__(self):
        return f"FieldElement({format_element(self)!r})"

    def __str__(self):
        return format_element(self)


def fe_add(x: FieldElement, y: FieldElement) -> FieldElement:
    return x + y


def fe_mul(x: FieldElement, y: FieldElement) -> FieldElement:
    return x * y


@lru_cache(maxsize=None)
def _lambda_terms(q: int, n: int) -> tuple:
    terms = []
    i = 0
    while n:
        n, v = divmod(n, q)
        if v:
            terms.append((-i - 1, v))
        i += 1
    return tuple(sorted(terms))


def lam(n: int, params: FieldParams) -> FieldElement:
    """The n-th translation representative lambda(n).

    Base-q digits v_i of n give sum_i v_i t^(-i-1); a digit v < q stands for
    (u_0 + u_1 e_1 + ...) with u the base-p digits of v.
    """
    if n < 0:
        raise ValueError("lambda(n) needs n >= 0")
    terms = _lambda_terms(params.q, n)
    _check_window(terms)
    return FieldElement._raw(params, terms)


def character_exponent(x: FieldElement) -> int:
    """a in Z/p with chi(x) = exp(2 pi i a / p)."""
    return x.params.e0_table[x.digit(-1)]


def pairing_exponent(xi: FieldElement, c: FieldElement) -> int:
    """character_exponent(xi * c) without forming the product."""
    params = xi.params
    if not xi.terms or not c.terms:
        return 0
    add, mul = params.add_table, params.mul_table
    cd = dict(c.terms)
    acc = 0
    for e, d in xi.terms:
        d2 = cd.get(-1 - e)
        if d2:
            acc = add[acc][mul[d][d2]]
    return params.e0_table[acc]


def character(x: FieldElement):
    """chi(x): trivial on the ring of integers, zeta_p on t^-1."""
    return root_of_unity(x.params.p, character_exponent(x))


def chi_n(n: int, x: FieldElement):
    return root_of_unity(x.params.p, pairing_exponent(lam(n, x.params), x))


class Ball:
    """The ball center + P^level; measure q**(-level)."""

    __slots__ = ("center", "level", "_hash")

    def __init__(self, center: FieldElement, level: int):
        self.center = center.truncate(level)
        self.level = int(level)
        self._hash = None

    @classmethod
    def ideal(cls, params: FieldParams, level: int) -> "Ball":
        return cls(FieldElement.zero(params), level)

    @property
    def params(self) -> FieldParams:
        return self.center.params

    @property
    def measure(self) -> Fraction:
        return Fraction(self.params.q) ** (-self.level)

    def contains(self, x: FieldElement) -> bool:
        return x.truncate(self.level) == self.center

    def contains_ball(self, other: "Ball") -> bool:
        return other.level >= self.level and other.center.truncate(self.level) == self.center

    def disjoint(self, other: "Ball") -> bool:
        return not (self.contains_ball(other) or other.contains_ball(self))

    def children(self) -> list:
        return ball_children(self)

    def contains_zero(self) -> bool:
        return not self.center.terms

    def __eq__(self, other):
        if not isinstance(other, Ball):
            return NotImplemented
        return self.level == other.level and self.center == other.center

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.level, self.center.terms))
        return self._hash

    def sort_key(self):
        return (self.level, self.center.terms)

    def __repr__(self):
        return f"Ball({format_element(self.center)!r}, {self.level})"


def ball_children(b: Ball) -> list:
    params = b.params
    k = b.level
    out = []
    for u in range(params.q):
        terms = b.center.terms + ((k, u),) if u else b.center.terms
        _check_window(terms)
        out.append(Ball(FieldElement._raw(params, terms), k + 1))
    return out


# -- textual syntax ------------------------------------------------------------

def format_element(x: FieldElement) -> str:
    if not x.terms:
        return "0"
    params = x.params
    parts = []
    for e, d in x.terms:
        if params.c == 1:
            a = str(d)
        else:
            a = "(" + ",".join(str(u) for u in params.coords(d)) + ")"
        parts.append(f"{a}*t^{e}")
    return " + ".join(parts)


_TERM = re.compile(r"^\s*(\(\s*[0-9,\s]+\)|[0-9]+)?\s*(\*?\s*t\s*(?:\^\s*(-?[0-9]+))?)?\s*$")


def parse_element(s: str, params: FieldParams) -> FieldElement:
    s = s.strip()
    if s in ("", "0"):
        return FieldElement.zero(params)
    add = params.add_table
    acc = {}
    for part in s.split("+"):
        m = _TERM.match(part)
        if not m:
            raise ValueError(f"bad term {part!r} in element {s!r}")
        coef, tpart, exp = m.group(1), m.group(2), m.group(3)
        if coef is None and tpart is None:
            raise ValueError(f"empty term in element {s!r}")
        if tpart is not None and tpart.startswith("*") != (coef is not None):
            raise ValueError(f"bad term {part!r} in element {s!r}")
        e = int(exp) if exp is not None else (1 if tpart else 0)
        coef = coef or "1"
        if coef.startswith("("):
            co = [int(v) for v in coef.strip("()").split(",")]
            if len(co) != params.c or any(not 0 <= v < params.p for v in co):
                raise ValueError(f"bad GF({params.q}) coordinates {coef}")
            d = params.index(co)
        else:
            d = int(coef)
            if not 0 <= d < params.q:
                raise ValueError(f"digit {d} outside GF({params.q})")
        acc[e] = add[acc.get(e, 0)][d]
    return FieldElement(params, acc)
