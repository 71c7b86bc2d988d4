"""Locally constant, compactly supported functions on K_q.

A :class:`StepFunction` is a finite sum of ball indicators with complex
coefficients (exact cyclotomic by default).  The class is closed under the
Fourier transform, which is computed exactly.

Canonical form: pieces are pairwise disjoint, zero pieces are dropped and any
full set of q sibling balls carrying one coefficient is merged into their
parent.  Two representations of the same function canonicalize identically.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction

import numpy as np

from .cyclotomic import Cyclotomic, conj, root_of_unity, simplify
from .gfq import FieldParams, ParameterError
from .localfield import Ball, FieldElement, pairing_exponent

__all__ = [
    "StepFunction",
    "indicator",
    "sf_integrate",
    "sf_translate",
    "sf_dilate",
    "sf_fourier",
    "sf_inner_l2",
    "fourier_direct",
    "fourier_dense",
    "character_step",
    "common_cells",
    "exact_gram",
]

DENSE_LIMIT = 3**9


def _zero(c) -> bool:
    return c == 0


def _root_level(balls):
    e = None
    for b in balls:
        v = b.level if not b.center.terms else min(b.level, b.center.terms[0][0])
        e = v if e is None else min(e, v)
    return e


def _normalize(params: FieldParams, pieces):
    """Canonical disjoint pieces from (Ball, coeff) pairs that may nest."""
    index = {}
    for b, c in pieces:
        c = simplify(c)
        if _zero(c):
            continue
        key = (b.level, b.center)
        index[key] = simplify(index[key] + c) if key in index else c
    index = {k: v for k, v in index.items() if not _zero(v)}
    if not index:
        return ()
    e = _root_level(Ball(cen, lev) for lev, cen in index)
    inner = set()
    for lev, cen in index:
        for t in range(e, lev):
            inner.add((t, cen.truncate(t)))
    q = params.q
    out = []

    def node(center, level, base):
        # returns (is_constant, value); appends pieces to `out` when not
        own = index.get((level, center))
        val = base if own is None else simplify(base + own)
        if (level, center) not in inner:
            return True, val
        results = []
        for u in range(q):
            terms = center.terms + ((level, u),) if u else center.terms
            child = FieldElement._raw(params, terms)
            results.append((child, node(child, level + 1, val)))
        first = results[0][1]
        if all(r[1][0] for r in results) and all(r[1][1] == first[1] for r in results):
            return True, first[1]
        for child, (const, v) in results:
            if const and not _zero(v):
                out.append((Ball(child, level + 1), v))
        return False, None

    const, v = node(FieldElement.zero(params), e, Fraction(0))
    if const and not _zero(v):
        out.append((Ball.ideal(params, e), v))
    out.sort(key=lambda bc: bc[0].sort_key())
    return tuple(out)


class StepFunction:
    __slots__ = ("params", "pieces", "_index", "_levels")

    def __init__(self, params: FieldParams, pieces=(), canonical=False):
        self.params = params
        pieces = tuple(pieces)
        for b, _ in pieces:
            if b.params != params:
                raise ParameterError("ball over different FieldParams")
        self.pieces = pieces if canonical else _normalize(params, pieces)
        self._index = None
        self._levels = None

    @classmethod
    def zero(cls, params):
        return cls(params, (), canonical=True)

    # -- lookup -----------------------------------------------------------

    @property
    def index(self) -> dict:
        if self._index is None:
            idx = {}
            for b, c in self.pieces:
                idx.setdefault(b.level, {})[b.center] = c
            self._index = idx
            self._levels = sorted(idx)
        return self._index

    @property
    def levels(self) -> list:
        self.index
        return self._levels

    def __call__(self, x: FieldElement):
        idx = self.index
        for t in self._levels:
            c = idx[t].get(x.truncate(t))
            if c is not None:
                return c
        return Fraction(0)

    def value_on(self, ball: Ball):
        """Value on a ball assumed to lie inside one piece or outside the support."""
        idx = self.index
        for t in self._levels:
            if t > ball.level:
                break
            c = idx[t].get(ball.center.truncate(t))
            if c is not None:
                return c
        return Fraction(0)

    def is_zero(self) -> bool:
        return not self.pieces

    @property
    def max_level(self):
        return max((b.level for b, _ in self.pieces), default=None)

    def support_level(self):
        """Largest e with support inside P^e (None for the zero function)."""
        if not self.pieces:
            return None
        return _root_level(b for b, _ in self.pieces)

    # -- algebra ----------------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, StepFunction):
            return NotImplemented
        return StepFunction(self.params, self.pieces + other.pieces)

    def __neg__(self):
        return StepFunction(self.params, [(b, -c) for b, c in self.pieces], canonical=True)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, a) -> "StepFunction":
        if _zero(a):
            return StepFunction.zero(self.params)
        return StepFunction(self.params, [(b, simplify(c * a)) for b, c in self.pieces], canonical=True)

    def conj(self) -> "StepFunction":
        return StepFunction(self.params, [(b, conj(c)) for b, c in self.pieces], canonical=True)

    def map_values(self, fn) -> "StepFunction":
        return StepFunction(self.params, [(b, fn(c)) for b, c in self.pieces])

    def __mul__(self, other):
        if not isinstance(other, StepFunction):
            return self.scale(other)
        big, small = (self, other) if len(self.pieces) >= len(other.pieces) else (other, self)
        big_idx, levels = big.index, big.levels
        below = {}  # (k, truncated center) -> big pieces strictly inside that ball
        for k in {b.level for b, _ in small.pieces}:
            m = {}
            for b, c in big.pieces:
                if b.level > k:
                    m.setdefault(b.center.truncate(k), []).append((b, c))
            below[k] = m
        out = []
        for sb, sc in small.pieces:
            hit = False
            for t in levels:
                if t > sb.level:
                    break
                bc = big_idx[t].get(sb.center.truncate(t))
                if bc is not None:
                    out.append((sb, simplify(sc * bc)))
                    hit = True
                    break
            if not hit:
                for b, c in below[sb.level].get(sb.center, ()):
                    out.append((b, simplify(sc * c)))
        return StepFunction(self.params, out)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, StepFunction):
            return NotImplemented
        return self.params == other.params and self.pieces == other.pieces

    def __hash__(self):
        return hash(self.pieces)

    def __repr__(self):
        body = ", ".join(f"{b!r}: {c}" for b, c in self.pieces[:6])
        more = "" if len(self.pieces) <= 6 else f", ... ({len(self.pieces)} pieces)"
        return f"StepFunction({{{body}{more}}})"

    # -- transforms -------------------------------------------------------

    def integrate(self):
        return sf_integrate(self)

    def translate(self, a: FieldElement) -> "StepFunction":
        return sf_translate(self, a)

    def dilate(self, j: int) -> "StepFunction":
        return sf_dilate(self, j)

    def reflect(self) -> "StepFunction":
        return StepFunction(self.params, [(Ball(-b.center, b.level), c) for b, c in self.pieces])

    def fourier(self) -> "StepFunction":
        return sf_fourier(self)

    def inverse_fourier(self) -> "StepFunction":
        return sf_fourier(self).reflect()

    def sup_norm(self):
        """max |f|, exact where |value|^2 is rational."""
        from .cyclotomic import abs2

        best = Fraction(0)
        for _, c in self.pieces:
            a = abs2(c)
            if a > best:
                best = a
        return best**0.5 if not isinstance(best, Fraction) else _fraction_sqrt(best)


def _fraction_sqrt(x: Fraction):
    from math import isqrt

    n, d = x.numerator, x.denominator
    rn, rd = isqrt(n), isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return float(x) ** 0.5


def indicator(ball: Ball, coeff=1) -> StepFunction:
    return StepFunction(ball.params, [(ball, coeff)])


def sf_integrate(f: StepFunction):
    total = Fraction(0)
    for b, c in f.pieces:
        total = total + c * b.measure
    return simplify(total)


def sf_translate(f: StepFunction, a: FieldElement) -> StepFunction:
    """x -> f(x - a)."""
    return StepFunction(f.params, [(Ball(b.center + a, b.level), c) for b, c in f.pieces])


def sf_dilate(f: StepFunction, j: int) -> StepFunction:
    """x -> f(t^j x); B(c, k) pulls back to B(t^-j c, k - j)."""
    return StepFunction(f.params, [(Ball(b.center.shift(-j), b.level - j), c) for b, c in f.pieces], canonical=True)


def sf_inner_l2(f: StepFunction, g: StepFunction):
    return sf_integrate(f * g.conj())


def character_step(a: FieldElement, ball: Ball, sign: int = 1) -> StepFunction:
    """xi -> chi(sign * a * xi) restricted to ``ball``, as a StepFunction."""
    params = ball.params
    p = params.p
    if not a.terms:
        return indicator(ball)
    m = -a.terms[0][0]  # constant on cosets of P^m
    if m <= ball.level:
        return indicator(ball, root_of_unity(p, sign * pairing_exponent(ball.center, a)))
    pieces = []
    for cell in _cells(ball, m):
        pieces.append((cell, root_of_unity(p, sign * pairing_exponent(cell.center, a))))
    return StepFunction(params, pieces)


def _cells(ball: Ball, level: int):
    """All sub-balls of ``ball`` at ``level``."""
    params = ball.params
    k = ball.level
    base = ball.center.terms
    for digits in itertools.product(range(params.q), repeat=level - k):
        terms = base + tuple((k + i, d) for i, d in enumerate(digits) if d)
        yield Ball(FieldElement._raw(params, terms), level)


def fourier_direct(f: StepFunction) -> StepFunction:
    """Piecewise transform: 1_{c+P^k} -> chi(-xi c) q^-k 1_{P^-k}."""
    params = f.params
    out = []
    for b, coeff in f.pieces:
        amp = simplify(coeff * b.measure)
        out.extend(character_step(b.center, Ball.ideal(params, -b.level), sign=-1).scale(amp).pieces)
    return StepFunction(params, out)


def _to_redundant(values, p):
    """Common-denominator integer coordinates on zeta^0..zeta^(p-1)."""
    zero = [Fraction(0)] * p
    cache = {}
    vecs = []
    den = 1
    for v in values:
        r = cache.get(v)
        if r is None:
            if isinstance(v, Cyclotomic):
                r = v.redundant()
            elif v == 0:
                r = zero
            else:
                r = [Fraction(v)] + zero[1:]
            cache[v] = r
            for x in r:
                d = x.denominator
                if den % d:
                    den = den * d // math.gcd(den, d)
        vecs.append(r)
    conv = {}
    ints = []
    for r in vecs:
        key = id(r)
        row = conv.get(key)
        if row is None:
            row = conv[key] = [x.numerator * (den // x.denominator) for x in r]
        ints.append(row)
    return ints, den


def fourier_dense(f: StepFunction) -> StepFunction:
    """Transform through a tensor (Vilenkin) transform on the common grid.

    With support in P^e and all pieces at levels <= L, the values live on
    GF(q)^(L-e); the character pairing factorizes over digit positions, so
    the transform is a product of q x q character matrices along each axis.
    """
    params = f.params
    if f.is_zero():
        return f
    p, q = params.p, params.q
    e = f.support_level()
    L = f.max_level
    n = L - e
    if n == 0:
        return fourier_direct(f)
    exact = all(not isinstance(c, (complex, float)) for _, c in f.pieces)
    if exact:
        ints, den = _to_redundant([c for _, c in f.pieces], p)
        arr = np.zeros((q,) * n + (p,), dtype=object)
        arr[...] = 0
    else:
        arr = np.zeros((q,) * n, dtype=complex)
    for i, (b, c) in enumerate(f.pieces):
        sl = [b.center.digit(e + a) for a in range(b.level - e)] + [slice(None)] * (L - b.level)
        if exact:
            arr[tuple(sl)] += np.array(ints[i], dtype=object)
        else:
            arr[tuple(sl)] += complex(c)
    e0, mul = params.e0_table, params.mul_table
    shift = [[(-e0[mul[x][y]]) % p for y in range(q)] for x in range(q)]
    zeta = np.exp(2j * np.pi / p)
    for axis in range(n):
        a = np.moveaxis(arr, axis, 0)
        new = np.zeros_like(a)
        for y in range(q):
            acc = new[y]
            for x in range(q):
                s = shift[x][y]
                if exact:
                    acc += np.roll(a[x], s, axis=-1) if s else a[x]
                else:
                    acc += a[x] * zeta**s
        arr = np.moveaxis(new, 0, axis)
    scale = Fraction(q) ** (-L)
    pieces = []
    # input axis i <-> exponent e+i ; output axis i <-> exponent -1-e-i
    for idx in itertools.product(range(q), repeat=n):
        cell = arr[idx]
        if exact:
            val = simplify(Cyclotomic.from_redundant(p, [Fraction(int(v), den) for v in cell]) * scale) if p > 2 else Fraction(int(cell[0]) - int(cell[1]), den) * scale
        else:
            val = complex(cell) * float(scale)
        terms = tuple(sorted((-1 - e - i, d) for i, d in enumerate(idx) if d))
        pieces.append((Ball(FieldElement._raw(params, terms), -e), val))
    return StepFunction(params, pieces)


def sf_fourier(f: StepFunction) -> StepFunction:
    """Exact Fourier transform, chi(-xi x) kernel."""
    if len(f.pieces) > 32:
        e, L = f.support_level(), f.max_level
        if f.params.q ** (L - e) <= DENSE_LIMIT:
            return fourier_dense(f)
    return fourier_direct(f)


# -- common refinement and exact Gram matrices ----------------------------------

def common_cells(functions) -> list:
    """Disjoint balls on which every function is constant, covering all supports."""
    functions = [f for f in functions if not f.is_zero()]
    if not functions:
        return []
    params = functions[0].params
    balls = {b for f in functions for b, _ in f.pieces}
    e = _root_level(balls)
    inner = set()
    for b in balls:
        for t in range(e, b.level):
            inner.add((t, b.center.truncate(t)))
    cells = []
    stack = [(Ball.ideal(params, e), False)]
    while stack:
        node, covered = stack.pop()
        covered = covered or node in balls
        if (node.level, node.center) in inner:
            stack.extend((ch, covered) for ch in reversed(node.children()))
        elif covered:
            cells.append(node)
    cells.sort(key=Ball.sort_key)
    return cells


def exact_gram(functions, weights=None):
    """Exact L2 Gram matrix [<f_a, f_b>] of StepFunctions with exact values.

    Values are mapped to integer coordinates on zeta^0..zeta^(p-1) and the
    Gram is assembled from integer matrix products, one per pair of powers.
    Returns a list of lists of Fraction / Cyclotomic entries.
    """
    functions = list(functions)
    if not functions:
        return []
    params = functions[0].params
    p, q = params.p, params.q
    cells = common_cells(functions)
    nf = len(functions)
    if not cells:
        return [[Fraction(0)] * nf for _ in range(nf)]
    Lmax = max(c.level for c in cells)
    w = np.array([q ** (Lmax - c.level) for c in cells], dtype=object)
    dens = []
    mats = np.zeros((p, nf, len(cells)), dtype=object)
    mats[...] = 0
    for a, f in enumerate(functions):
        vals = [f.value_on(c) for c in cells]
        ints, den = _to_redundant(vals, p)
        dens.append(den)
        arr = np.array(ints, dtype=object).reshape(len(cells), p)
        mats[:, a, :] = arr.T
    bound = max((abs(int(x)) for x in mats.flat), default=0)
    use_int = bound * bound * int(max(w)) * len(cells) * p < 2**62
    if use_int:
        mats = mats.astype(np.int64)
        w = w.astype(np.int64)
    # conj(zeta^i) = zeta^-i: G_r = sum_{i - i' = r} A_i W A_i'^T
    acc = [None] * p
    for i in range(p):
        Aw = mats[i] * w
        for i2 in range(p):
            r = (i - i2) % p
            prod = Aw @ mats[i2].T
            acc[r] = prod if acc[r] is None else acc[r] + prod
    qL = q**Lmax
    accs = [a.tolist() for a in acc]
    out = []
    for a in range(nf):
        row = []
        for b in range(nf):
            den = dens[a] * dens[b] * qL
            nums = [int(accs[r][a][b]) for r in range(p)]
            last = nums[p - 1]
            coords = [x - last for x in nums[: max(p - 1, 1)]] if p > 2 else [nums[0] - nums[1]]
            if not any(coords[1:]):
                row.append(Fraction(coords[0], den) if coords[0] else Fraction(0))
            else:
                row.append(Cyclotomic(p, [Fraction(c, den) for c in coords]))
        out.append(row)
    return out
