"""Radial functions f(x) = F(|x|) and their shell-sum Fourier transforms.

A profile stores F on the spheres |x| = q^a: explicit values for a in a finite
window [lo, hi], and closed-form tails below and above it.  A tail is a sum of
terms (alpha + beta*a) * q^(gamma*a).  The transform of such a profile is again
of this shape, with tails obtained from geometric and arithmetico-geometric
series in closed form:

    F^(q^m) = (1 - 1/q) * sum_{a <= -m} F_a q^a  -  F_{1-m} q^-m

since the integral of chi(xi x) over |x| = q^a is q^a(1 - 1/q) for |xi| q^a <= 1,
-q^(a-1) for |xi| q^a = q and zero beyond.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .cyclotomic import simplify
from .gfq import FieldParams
from .localfield import Ball, FieldElement
from .stepfn import StepFunction, indicator

__all__ = [
    "Term",
    "RadialProfile",
    "SobolevWeight",
    "DivergenceError",
    "DomainError",
    "NotRadialError",
    "qpow",
    "radial_fourier",
    "make_example",
    "kappa_profile",
    "radial_to_step",
    "step_to_radial",
    "decay_exponent",
    "weight_value",
]


class DivergenceError(ArithmeticError):
    def __init__(self, msg, exponent=None):
        super().__init__(msg)
        self.exponent = exponent


class DomainError(ValueError):
    pass


class NotRadialError(ValueError):
    pass


def _exactify(x):
    if isinstance(x, float) and x.is_integer():
        return Fraction(int(x))
    if isinstance(x, int):
        return Fraction(x)
    return x


def qpow(q: int, x):
    """q**x, a Fraction when x is an integer, float otherwise."""
    x = _exactify(x)
    if isinstance(x, Fraction) and x.denominator == 1:
        return Fraction(q) ** int(x)
    return float(q) ** float(x)


@dataclass(frozen=True)
class Term:
    """(alpha + beta*a) * q^(gamma*a)."""

    alpha: object
    beta: object = Fraction(0)
    gamma: object = Fraction(0)

    def __post_init__(self):
        for name in ("alpha", "beta", "gamma"):
            object.__setattr__(self, name, _exactify(getattr(self, name)))

    def value(self, a: int, q: int):
        return simplify((self.alpha + self.beta * a) * qpow(q, self.gamma * a))

    def is_zero(self) -> bool:
        return self.alpha == 0 and self.beta == 0

    def to_json(self):
        return {"alpha": _num_json(self.alpha), "beta": _num_json(self.beta), "gamma": _num_json(self.gamma)}


def _num_json(x):
    if isinstance(x, Fraction):
        return str(x)
    return float(x)


def _merge(terms):
    acc = {}
    for t in terms:
        a, b = acc.get(t.gamma, (Fraction(0), Fraction(0)))
        acc[t.gamma] = (a + t.alpha, b + t.beta)
    out = [Term(a, b, g) for g, (a, b) in acc.items()]
    return tuple(sorted((t for t in out if not t.is_zero()), key=lambda t: float(t.gamma)))


@dataclass(frozen=True)
class SobolevWeight:
    """xi -> (1 + q^(2 level) |xi|^2) ** s.

    ``level`` is the dilation level: the weight seen by a function after the
    substitution xi -> t^level xi, so level 0 is the plain (1 + |xi|^2)^s.
    """

    s: object
    level: int = 0

    def at_shell(self, m: int, q: int):
        """Weight on the sphere |xi| = q^m."""
        return weight_value(((self.level, self.s),), Fraction(q) ** m, q)


def weight_value(weights, norm, q):
    """prod (1 + q^(2 level) norm^2)^s, exact for integer exponents."""
    val = Fraction(1)
    for level, s in weights:
        base = 1 + Fraction(q) ** (2 * level) * Fraction(norm) ** 2
        s = _exactify(s)
        if isinstance(s, Fraction) and s.denominator == 1:
            val = val * base ** int(s)
        else:
            val = val * float(base) ** float(s)
    return val


@dataclass(frozen=True)
class RadialProfile:
    """F on spheres |x| = q^a.

    ``window`` maps a in [lo, hi] to a value (missing entries are zero);
    ``inner`` applies for a < lo, ``outer`` for a > hi.  ``weight`` is an
    optional product of Sobolev factors (level, exponent) multiplying all of it.
    """

    params: FieldParams
    window: dict = field(default_factory=dict)
    lo: int = 1
    hi: int = 0
    inner: tuple = ()
    outer: tuple = ()
    weight: tuple = ()

    def __post_init__(self):
        if self.window and (min(self.window) < self.lo or max(self.window) > self.hi):
            raise ValueError("window entries outside [lo, hi]")
        object.__setattr__(self, "inner", _merge(self.inner))
        object.__setattr__(self, "outer", _merge(self.outer))

    @property
    def q(self) -> int:
        return self.params.q

    def base_value(self, a: int):
        if a < self.lo:
            return simplify(sum((t.value(a, self.q) for t in self.inner), Fraction(0)))
        if a > self.hi:
            return simplify(sum((t.value(a, self.q) for t in self.outer), Fraction(0)))
        return simplify(self.window.get(a, Fraction(0)))

    def value(self, a: int):
        v = self.base_value(a)
        if self.weight:
            v = simplify(v * weight_value(self.weight, Fraction(self.q) ** a, self.q))
        return v

    __call__ = value

    @property
    def is_L1(self) -> bool:
        """Integrability from the tail exponents; never set by hand."""
        if self.weight:
            growth = 2 * sum(Fraction(s) if not isinstance(s, float) else s for _, s in self.weight)
        else:
            growth = 0
        inner_ok = all(t.gamma + 1 > 0 for t in self.inner)
        outer_ok = all(t.gamma + growth + 1 < 0 for t in self.outer)
        return inner_ok and outer_ok

    def compact(self) -> bool:
        return not self.outer

    def to_json(self) -> dict:
        return {
            "window": {str(a): _num_json(v) for a, v in sorted(self.window.items())},
            "lo": self.lo,
            "hi": self.hi,
            "inner_tail": [t.to_json() for t in self.inner],
            "outer_tail": [t.to_json() for t in self.outer],
            "weight": [[lev, _num_json(s)] for lev, s in self.weight],
        }

    @classmethod
    def from_json(cls, params, d) -> "RadialProfile":
        def num(x):
            return Fraction(x) if isinstance(x, str) else x

        def terms(ts):
            return tuple(Term(num(t["alpha"]), num(t.get("beta", "0")), num(t.get("gamma", "0"))) for t in ts)

        window = {int(a): num(v) for a, v in d.get("window", {}).items()}
        lo = d.get("lo", min(window) if window else 1)
        hi = d.get("hi", max(window) if window else 0)
        return cls(params, window, lo, hi, terms(d.get("inner_tail", [])), terms(d.get("outer_tail", [])),
                   tuple((int(l), num(s)) for l, s in d.get("weight", [])))


# -- closed-form series --------------------------------------------------------

def _sum_le(t: Term, M: int, q: int):
    """sum_{a <= M} (alpha + beta a) q^((gamma+1) a)."""
    rho = t.gamma + 1
    if rho <= 0:
        raise DivergenceError(f"inner tail q^({t.gamma} a) is not integrable at 0", t.gamma)
    r = qpow(q, -rho)
    head = qpow(q, rho * M)
    return head * ((t.alpha + t.beta * M) / (1 - r) - t.beta * r / (1 - r) ** 2)


def _sum_gt(t: Term, M: int, q: int):
    """sum_{a > M} (alpha + beta a) q^((gamma+1) a)."""
    rho = t.gamma + 1
    if rho >= 0:
        raise DivergenceError(f"outer tail q^({t.gamma} a) is not integrable at infinity", t.gamma)
    r = qpow(q, rho)
    head = qpow(q, rho * (M + 1))
    return head * ((t.alpha + t.beta * (M + 1)) / (1 - r) + t.beta * r / (1 - r) ** 2)


def _partial_le(f: RadialProfile, M: int):
    """S(M) = sum_{a <= M} F_a q^a."""
    q = f.q
    if M < f.lo:
        return sum((_sum_le(t, M, q) for t in f.inner), Fraction(0))
    s = sum((_sum_le(t, f.lo - 1, q) for t in f.inner), Fraction(0))
    for a in range(f.lo, min(M, f.hi) + 1):
        s = s + f.window.get(a, 0) * Fraction(q) ** a
    if M > f.hi:
        s = s + sum((t.value(a, q) * Fraction(q) ** a for t in f.outer for a in range(f.hi + 1, M + 1)), Fraction(0))
    return s


def _boundary_terms(t: Term, q: int):
    # -F_{1-m} q^-m as a term in m
    g = qpow(q, t.gamma)
    return Term(-g * (t.alpha + t.beta), g * t.beta, -(t.gamma + 1))


def radial_fourier(f: RadialProfile) -> RadialProfile:
    """Exact transform of an integrable radial profile."""
    if f.weight:
        raise DomainError("weighted profiles are frequency-side objects; transform the unweighted base")
    q = f.q
    c = 1 - Fraction(1, q)
    # output outer tail (|xi| large) comes from the inner tail of f
    out_outer = []
    for t in f.inner:
        rho = t.gamma + 1
        if rho <= 0:
            raise DivergenceError(f"profile not integrable near 0: exponent {t.gamma}", t.gamma)
        r = qpow(q, -rho)
        out_outer.append(Term(c * (t.alpha / (1 - r) - t.beta * r / (1 - r) ** 2), -c * t.beta / (1 - r), -rho))
        out_outer.append(_boundary_terms(t, q))
    # output inner tail (|xi| small) comes from the total integral and the outer tail of f
    total = c * (_partial_le(f, f.hi) + sum((_sum_gt(t, f.hi, q) for t in f.outer), Fraction(0)))
    out_inner = [Term(total)]
    for t in f.outer:
        rho = t.gamma + 1
        r = qpow(q, rho)
        g = qpow(q, rho)
        out_inner.append(Term(-c * g * ((t.alpha + t.beta) / (1 - r) + t.beta * r / (1 - r) ** 2), c * g * t.beta / (1 - r), -rho))
        out_inner.append(_boundary_terms(t, q))
    lo, hi = 1 - f.hi, 1 - f.lo
    window = {}
    for m in range(lo, hi + 1):
        window[m] = simplify(c * _partial_le(f, -m) - f.base_value(1 - m) * Fraction(q) ** (-m))
    return RadialProfile(f.params, window, lo, hi, tuple(out_inner), tuple(out_outer))


def decay_exponent(f: RadialProfile, ms) -> float:
    """Least-squares slope of log_q |F(q^m)| against m."""
    ms = np.asarray(list(ms), dtype=float)
    vals = np.array([abs(complex(f.value(int(m)))) for m in ms])
    slope, _ = np.polyfit(ms, np.log(vals) / math.log(f.q), 1)
    return float(slope)


# -- conversions -----------------------------------------------------------------

def _shell_pieces(params, a, value):
    return [(Ball(FieldElement._raw(params, ((-a, u),)), 1 - a), value) for u in range(1, params.q)]


def radial_to_step(f: RadialProfile) -> StepFunction:
    if f.outer or f.weight:
        raise DomainError("only compactly supported unweighted profiles are step functions")
    params = f.params
    pieces = []
    if f.inner:
        if len(f.inner) != 1 or f.inner[0].gamma != 0 or f.inner[0].beta != 0:
            raise DomainError("inner tail must be constant for a step function")
        pieces.append((Ball.ideal(params, 1 - f.lo), f.inner[0].alpha))
    for a, v in f.window.items():
        pieces.extend(_shell_pieces(params, a, v))
    return StepFunction(params, pieces)


def step_to_radial(g: StepFunction) -> RadialProfile:
    params = g.params
    if g.is_zero():
        return RadialProfile(params)
    e = g.support_level()
    finest = g.max_level
    lo, hi = -finest, -e
    zero = FieldElement.zero(params)
    window = {a: g(FieldElement._raw(params, ((-a, 1),))) for a in range(lo, hi + 1)}
    window = {a: v for a, v in window.items() if v != 0}
    c0 = g(zero)
    prof = RadialProfile(params, window, lo, hi, (Term(c0),) if c0 != 0 else ())
    if radial_to_step(prof) != g:
        raise NotRadialError("step function is not radial")
    return prof


# -- the worked examples -----------------------------------------------------------

def make_example(ex_id: int, params: FieldParams, theta=None, vartheta=None, k: int = 0, depth: int = 10):
    """Time-domain object of a worked example (Example 7: its frequency profile)."""
    q = params.q
    if ex_id == 1:
        theta = Fraction(0) if theta is None else _exactify(theta)
        if not theta > -1:
            raise DomainError("example 1 needs theta > -1")
        return RadialProfile(params, {}, 1, 0, (Term(1, 0, theta),))
    if ex_id == 2:
        return RadialProfile(params, {}, 1, 0, (Term(0, -math.log(q), 0),))
    if ex_id == 3:
        return indicator(Ball.ideal(params, k))
    if ex_id == 4:
        theta, vartheta = _exactify(theta), _exactify(vartheta)
        if not (0 < theta < 1 and 0 < vartheta < 1 and 0 < theta + vartheta < 1):
            raise DomainError("example 4 needs 0 < theta, vartheta, theta + vartheta < 1")
        g = theta + vartheta
        const = (1 - qpow(q, -g)) / (1 - qpow(q, g - 1))
        return RadialProfile(params, {}, 1, 0, (Term(const, 0, g - 1),))
    if ex_id in (5, 6):
        from .fractals import cantor_truncate, weierstrass_truncate

        return weierstrass_truncate(depth) if ex_id == 5 else cantor_truncate(depth)
    if ex_id == 7:
        theta = Fraction(0) if theta is None else _exactify(theta)
        if params.c != 1:
            raise DomainError("example 7 is stated on K_p (c = 1)")
        return RadialProfile(params, {}, 1, 0, (Term(1),), (Term(1),), ((0, theta),) if theta != 0 else ())
    raise DomainError(f"no radial example {ex_id}")


def kappa_profile(params: FieldParams, s) -> RadialProfile:
    """Frequency profile (1 + |xi|^2)^(-s/2) of the Bessel-type kernel."""
    s = _exactify(s)
    expo = -s / 2
    return RadialProfile(params, {}, 1, 0, (Term(1),), (Term(1),), ((0, expo),) if expo != 0 else ())
