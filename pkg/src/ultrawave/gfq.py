"""The residue field GF(q), q = p**c.

Elements are coordinate tuples (u_0, ..., u_{c-1}) on the polynomial basis
1, x, ..., x^(c-1) modulo a monic irreducible polynomial.  Internally every
element also has an integer *index* u_0 + u_1 p + ... + u_{c-1} p^(c-1);
index n is exactly the GF(q) digit used by the translation enumeration
lambda(n), so the natural order on indices is the coset-representative order.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property

__all__ = ["FieldParams", "GFqElem", "ParameterError", "gf_add", "gf_mul", "gf_e0_component", "field_params"]

SUPPORTED_P = (2, 3, 5, 7)
SUPPORTED_C = (1, 2)

# low-to-high coefficients of a monic irreducible polynomial of degree c
DEFAULT_MODULUS = {
    (2, 2): (1, 1, 1),  # x^2 + x + 1
    (3, 2): (1, 0, 1),  # x^2 + 1
    (5, 2): (2, 0, 1),  # x^2 + 2
    (7, 2): (1, 0, 1),  # x^2 + 1
}


class ParameterError(ValueError):
    pass


def _poly_has_root(poly, p):
    return any(sum(a * pow(x, i, p) for i, a in enumerate(poly)) % p == 0 for x in range(p))


@dataclass(frozen=True)
class FieldParams:
    p: int
    c: int = 1
    modulus: tuple = field(default=())

    def __post_init__(self):
        if self.p not in SUPPORTED_P:
            raise ParameterError(f"p must be one of {SUPPORTED_P}, got {self.p}")
        if self.c not in SUPPORTED_C:
            raise ParameterError(f"c must be one of {SUPPORTED_C}, got {self.c}")
        mod = tuple(self.modulus) or DEFAULT_MODULUS.get((self.p, self.c), (0, 1))
        if self.c == 1:
            mod = (0, 1)
        else:
            if len(mod) != self.c + 1 or mod[-1] != 1 or any(not 0 <= a < self.p for a in mod):
                raise ParameterError(f"modulus must be {self.c + 1} coefficients in [0,{self.p}), monic")
            # degree <= 3: irreducible iff no root in GF(p)
            if _poly_has_root(mod, self.p):
                raise ParameterError(f"modulus {mod} is reducible over GF({self.p})")
        object.__setattr__(self, "modulus", mod)

    @property
    def q(self) -> int:
        return self.p**self.c

    def to_json(self) -> dict:
        return {"p": self.p, "c": self.c, "modulus": list(self.modulus)}

    @classmethod
    def from_json(cls, d: dict) -> "FieldParams":
        return cls(int(d["p"]), int(d.get("c", 1)), tuple(d.get("modulus", ())))

    # -- index tables -----------------------------------------------------

    def coords(self, idx: int) -> tuple:
        out = []
        for _ in range(self.c):
            idx, r = divmod(idx, self.p)
            out.append(r)
        return tuple(out)

    def index(self, coords) -> int:
        return sum(int(u) * self.p**i for i, u in enumerate(coords))

    @cached_property
    def add_table(self) -> tuple:
        p, q = self.p, self.q
        cs = [self.coords(i) for i in range(q)]
        return tuple(
            tuple(self.index([(a + b) % p for a, b in zip(cs[i], cs[j])]) for j in range(q)) for i in range(q)
        )

    @cached_property
    def neg_table(self) -> tuple:
        return tuple(self.index([(-a) % self.p for a in self.coords(i)]) for i in range(self.q))

    @cached_property
    def mul_table(self) -> tuple:
        p, c, q = self.p, self.c, self.q
        mod = self.modulus

        def mul(a, b):
            prod = [0] * (2 * c - 1)
            for i, x in enumerate(a):
                for j, y in enumerate(b):
                    prod[i + j] = (prod[i + j] + x * y) % p
            # reduce by the monic modulus from the top
            for deg in range(2 * c - 2, c - 1, -1):
                lead = prod[deg]
                if lead:
                    for i in range(c + 1):
                        prod[deg - c + i] = (prod[deg - c + i] - lead * mod[i]) % p
            return prod[:c]

        cs = [self.coords(i) for i in range(q)]
        return tuple(tuple(self.index(mul(cs[i], cs[j])) for j in range(q)) for i in range(q))

    @cached_property
    def e0_table(self) -> tuple:
        """u_0 coordinate of each element (the only one feeding the character)."""
        return tuple(i % self.p for i in range(self.q))

    def elements(self):
        return range(self.q)


def field_params(q: int, modulus=()) -> FieldParams:
    """FieldParams from q = p**c."""
    for p in SUPPORTED_P:
        for c in SUPPORTED_C:
            if p**c == q:
                return FieldParams(p, c, tuple(modulus))
    raise ParameterError(f"unsupported q={q}")


@dataclass(frozen=True)
class GFqElem:
    params: FieldParams
    coeffs: tuple

    def __post_init__(self):
        co = tuple(int(a) for a in self.coeffs)
        if len(co) != self.params.c or any(not 0 <= a < self.params.p for a in co):
            raise ParameterError(f"GF({self.params.q}) element needs {self.params.c} coords in [0,{self.params.p})")
        object.__setattr__(self, "coeffs", co)

    @classmethod
    def from_index(cls, params: FieldParams, idx: int) -> "GFqElem":
        return cls(params, params.coords(idx))

    @property
    def index(self) -> int:
        return self.params.index(self.coeffs)

    def _check(self, other):
        if not isinstance(other, GFqElem) or other.params != self.params:
            raise ParameterError("GF(q) elements over different FieldParams")

    def __add__(self, other):
        return gf_add(self, other)

    def __mul__(self, other):
        return gf_mul(self, other)

    def __neg__(self):
        return GFqElem.from_index(self.params, self.params.neg_table[self.index])

    def __sub__(self, other):
        return self + (-other)

    def inverse(self) -> "GFqElem":
        i = self.index
        if i == 0:
            raise ZeroDivisionError("0 has no inverse in GF(q)")
        row = self.params.mul_table[i]
        return GFqElem.from_index(self.params, row.index(1))

    def __repr__(self):
        return f"GF{self.params.q}{self.coeffs}"


def gf_add(a: GFqElem, b: GFqElem) -> GFqElem:
    a._check(b)
    return GFqElem.from_index(a.params, a.params.add_table[a.index][b.index])


def gf_mul(a: GFqElem, b: GFqElem) -> GFqElem:
    a._check(b)
    return GFqElem.from_index(a.params, a.params.mul_table[a.index][b.index])


def gf_e0_component(a: GFqElem) -> int:
    return a.coeffs[0]


def all_elements(params: FieldParams):
    return [GFqElem(params, co) for co in itertools.product(range(params.p), repeat=params.c)]
