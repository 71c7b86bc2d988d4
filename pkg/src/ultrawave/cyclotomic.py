"""Exact arithmetic in the cyclotomic field Q(zeta_p), p prime.

An element is stored by its rational coordinates in the basis
1, zeta, ..., zeta^(p-2).  The relation 1 + zeta + ... + zeta^(p-1) = 0
removes the last power.  For p = 2 the field is Q itself and zeta = -1.

Values that turn out to be rational are usually handed back as
``fractions.Fraction`` by :func:`simplify`, so that rational coefficients
compare and hash like ordinary numbers throughout the package.
"""

from __future__ import annotations

import cmath
from fractions import Fraction
from numbers import Rational

__all__ = ["Cyclotomic", "root_of_unity", "simplify", "is_exact", "to_complex", "abs2"]


class Cyclotomic:
    __slots__ = ("p", "coords")

    def __init__(self, p: int, coords):
        coords = tuple(Fraction(c) for c in coords)
        if len(coords) != max(p - 1, 1):
            raise ValueError(f"Q(zeta_{p}) needs {max(p - 1, 1)} coordinates, got {len(coords)}")
        self.p = p
        self.coords = coords

    @classmethod
    def from_rational(cls, p: int, r) -> "Cyclotomic":
        n = max(p - 1, 1)
        return cls(p, (Fraction(r),) + (Fraction(0),) * (n - 1))

    @classmethod
    def from_redundant(cls, p: int, vec) -> "Cyclotomic":
        """Build from coefficients of zeta^0..zeta^(p-1) (length p)."""
        vec = [Fraction(v) for v in vec]
        if len(vec) != p:
            raise ValueError("redundant vector must have length p")
        if p == 2:
            return cls(2, (vec[0] - vec[1],))
        last = vec[p - 1]
        return cls(p, [v - last for v in vec[: p - 1]])

    def redundant(self) -> list:
        """Coefficients on zeta^0..zeta^(p-1) with the last one zero."""
        if self.p == 2:
            return [self.coords[0], Fraction(0)]
        return list(self.coords) + [Fraction(0)]

    # -- predicates -------------------------------------------------------

    def is_rational(self) -> bool:
        return all(c == 0 for c in self.coords[1:])

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    # -- arithmetic -------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, Cyclotomic):
            if other.p == self.p:
                return other
            if other.is_rational():
                return Cyclotomic.from_rational(self.p, other.coords[0])
            if self.is_rational():
                return NotImplemented
            raise ValueError(f"cannot mix Q(zeta_{self.p}) and Q(zeta_{other.p})")
        if isinstance(other, (int, Fraction)) or isinstance(other, Rational):
            return Cyclotomic.from_rational(self.p, other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return other.__add__(self)
        if o is None:
            return complex(self) + other
        return Cyclotomic(self.p, [a + b for a, b in zip(self.coords, o.coords)])

    __radd__ = __add__

    def __neg__(self):
        return Cyclotomic(self.p, [-a for a in self.coords])

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return Cyclotomic(self.p, [a * other for a in self.coords])
        o = self._coerce(other)
        if o is NotImplemented:
            return other.__mul__(self)
        if o is None:
            return complex(self) * other
        p = self.p
        if p == 2:
            return Cyclotomic(2, (self.coords[0] * o.coords[0],))
        acc = [Fraction(0)] * p
        for i, a in enumerate(self.coords):
            if a == 0:
                continue
            for j, b in enumerate(o.coords):
                if b:
                    acc[(i + j) % p] += a * b
        return Cyclotomic.from_redundant(p, acc)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return Cyclotomic(self.p, [a / other for a in self.coords])
        if isinstance(other, Cyclotomic) and other.p == self.p:
            return self * other.inverse()
        if isinstance(other, Cyclotomic) and other.is_rational():
            return self / other.coords[0]
        return complex(self) / complex(other)

    def __rtruediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.inverse() * other
        return other / complex(self)

    def galois(self, a: int) -> "Cyclotomic":
        """Image under zeta -> zeta**a, a prime to p."""
        p = self.p
        red = self.redundant()
        out = [Fraction(0)] * p
        for i, c in enumerate(red):
            out[(i * a) % p] += c
        return Cyclotomic.from_redundant(p, out)

    def inverse(self) -> "Cyclotomic":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        if self.is_rational():
            return Cyclotomic.from_rational(self.p, 1 / self.coords[0])
        # x * prod_{a != 1} sigma_a(x) is the norm, a nonzero rational
        rest = Cyclotomic.from_rational(self.p, 1)
        for a in range(2, self.p):
            rest = rest * self.galois(a)
        norm = (self * rest).coords[0]
        return rest / norm

    def conjugate(self) -> "Cyclotomic":
        p = self.p
        if p == 2:
            return self
        v = self.redundant()
        return Cyclotomic.from_redundant(p, [v[(-i) % p] for i in range(p)])

    # -- comparison / conversion ------------------------------------------

    def __eq__(self, other):
        if isinstance(other, Cyclotomic):
            if other.p != self.p:
                return self.is_rational() and other.is_rational() and self.coords[0] == other.coords[0]
            return self.coords == other.coords
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.coords[0] == other
        if isinstance(other, (float, complex)):
            return complex(self) == other
        return NotImplemented

    def __hash__(self):
        if self.is_rational():
            return hash(self.coords[0])
        return hash((self.p, self.coords))

    def __complex__(self):
        p = self.p
        if p == 2:
            return complex(float(self.coords[0]))
        z = cmath.exp(2j * cmath.pi / p)
        return sum((float(c) * z**i for i, c in enumerate(self.coords)), 0j)

    def __abs__(self):
        return abs(complex(self))

    def __repr__(self):
        return f"Cyclotomic({self.p}, [{', '.join(str(c) for c in self.coords)}])"


def root_of_unity(p: int, a: int):
    """zeta_p ** a, simplified (so p = 2 gives +-1 as Fractions)."""
    a %= p
    if a == 0:
        return Fraction(1)
    if p == 2:
        return Fraction(-1)
    if a == p - 1:
        return Cyclotomic(p, [-1] * (p - 1))
    coords = [0] * (p - 1)
    coords[a] = 1
    return Cyclotomic(p, coords)


def simplify(x):
    """Collapse rational Cyclotomic values to Fraction; ints to Fraction."""
    if isinstance(x, Cyclotomic):
        return x.coords[0] if x.is_rational() else x
    if isinstance(x, int):
        return Fraction(x)
    return x


def is_exact(x) -> bool:
    return isinstance(x, (int, Fraction, Cyclotomic))


def conj(x):
    if isinstance(x, Cyclotomic):
        return simplify(x.conjugate())
    if isinstance(x, complex):
        return x.conjugate()
    return x


def to_complex(x) -> complex:
    return complex(x)


def abs2(x):
    """|x|^2, exact (Fraction) whenever the value is rational."""
    if isinstance(x, Cyclotomic):
        v = simplify(x * x.conjugate())
        return v if isinstance(v, Fraction) else abs(complex(v))
    if isinstance(x, (int, Fraction)):
        return Fraction(x) ** 2
    return abs(x) ** 2
