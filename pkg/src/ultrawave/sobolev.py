"""H^s(K_q) pairings of frequency-side step functions with Sobolev weights.

A ShellFunction is xi -> q^(half_power/2) * step(xi) * prod_l (1 + q^(2l)|xi|^2)^(sigma_l).
Off the origin |xi| is constant on every ball of a step function, so only the
ball around 0 needs a shell sum; it is done in closed form for nonnegative
integer exponents and otherwise with an explicit certified tail.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .cyclotomic import conj, is_exact, simplify
from .localfield import FieldElement, lam
from .radial import RadialProfile, weight_value
from .stepfn import StepFunction, exact_gram

__all__ = [
    "SobolevParams",
    "ShellFunction",
    "HsResult",
    "Threshold",
    "SupportError",
    "hs_inner",
    "hs_norm2",
    "hs_gram",
    "membership_threshold",
    "hs_converges",
    "series_slope",
    "bracket_series",
    "merge_weights",
]


class SupportError(ValueError):
    pass


@dataclass(frozen=True)
class SobolevParams:
    s: object = Fraction(0)
    backend: str = "exact"
    eps: float = 1e-12

    def __post_init__(self):
        if self.backend not in ("exact", "float"):
            raise ValueError("backend must be 'exact' or 'float'")
        if not self.eps > 0:
            raise ValueError("eps must be positive")
        s = self.s
        if isinstance(s, int) or (isinstance(s, float) and s.is_integer()):
            object.__setattr__(self, "s", Fraction(int(s)))


def merge_weights(*ws) -> tuple:
    """Sum exponents level-wise; drop levels whose exponent cancels."""
    acc = {}
    for w in ws:
        for level, sig in (w.items() if isinstance(w, dict) else w):
            acc[level] = acc.get(level, 0) + sig
    return tuple(sorted((l, s) for l, s in acc.items() if s != 0))


@dataclass(frozen=True)
class ShellFunction:
    step: StepFunction
    weights: tuple = ()
    half_power: int = 0

    def __post_init__(self):
        object.__setattr__(self, "weights", merge_weights(self.weights))

    @property
    def params(self):
        return self.step.params

    def scale_factor(self):
        return _half_q(self.params.q, self.half_power)

    def __call__(self, xi: FieldElement):
        v = self.step(xi)
        if v == 0:
            return Fraction(0)
        return simplify(v * self.scale_factor() * weight_value(self.weights, xi.norm, self.params.q))

    def same_shape(self, other) -> bool:
        return self.weights == other.weights


def _half_q(q, h):
    """q^(h/2), exact for even h."""
    if h % 2 == 0:
        return Fraction(q) ** (h // 2)
    return float(q) ** (h / 2)


@dataclass(frozen=True)
class HsResult:
    value: object
    error: float = 0.0
    exact: bool = True

    def __complex__(self):
        return complex(self.value)


def _ball_sum_exact(weights, k, q):
    """sum_{a <= -k} W(q^a) q^a (1 - 1/q) for nonnegative integer exponents."""
    poly = [Fraction(1)]
    for level, sig in weights:
        c = Fraction(q) ** (2 * level)
        for _ in range(int(sig)):
            poly = [a + (c * poly[i - 1] if i else 0) for i, a in enumerate(poly)] + [c * poly[-1]]
    total = Fraction(0)
    for i, coef in enumerate(poly):
        if coef:
            r = Fraction(q) ** (-(2 * i + 1))
            total += coef * Fraction(q) ** (-(2 * i + 1) * k) / (1 - r)
    return total * (1 - Fraction(1, q))


def _ball_sum_certified(weights, k, q, eps):
    """Same sum numerically; returns (value, error bound)."""
    sig_mass = sum(abs(float(s)) * float(q) ** (2 * l) for l, s in weights)
    # |W - 1| <= 2u on shells with u = sig_mass q^(2a) <= 1/2; below a0 the shells are replaced by W = 1
    a0 = -k
    while True:
        u = sig_mass * float(q) ** (2 * (a0 - 1))
        bound = 2 * sig_mass * (1 - 1 / q) * float(q) ** (3 * (a0 - 1)) / (1 - q**-3.0)
        if u <= 0.5 and bound <= eps / 10:
            break
        a0 -= 1
    total = 0.0
    for a in range(-k, a0 - 1, -1):
        total += float(weight_value(weights, Fraction(q) ** a, q)) * float(q) ** a * (1 - 1 / q)
    total += float(q) ** (a0 - 1)
    return total, bound


def hs_inner(F: ShellFunction, G: ShellFunction, sp: SobolevParams) -> HsResult:
    """<F, G>_{H^s} = int (1 + |xi|^2)^s F conj(G) dxi."""
    q = F.params.q
    prod = F.step * G.step.conj()
    weights = merge_weights(F.weights, G.weights, ((0, sp.s),))
    scale = _half_q(q, F.half_power + G.half_power)
    if not weights:
        val = simplify(prod.integrate() * scale)
        return _finish(HsResult(val, 0.0, is_exact(val)), sp)
    total = Fraction(0)
    err = 0.0
    for ball, v in prod.pieces:
        if ball.contains_zero():
            if all(isinstance(s, Fraction) and s.denominator == 1 and s >= 0 for _, s in weights):
                mass = _ball_sum_exact(weights, ball.level, q)
            else:
                mass, e = _ball_sum_certified(weights, ball.level, q, sp.eps)
                err += e * abs(complex(v)) * abs(float(scale))
        else:
            mass = weight_value(weights, ball.center.norm, q) * ball.measure
        total = total + v * mass
    val = simplify(total * scale)
    return _finish(HsResult(val, err, is_exact(val) and err == 0), sp)


def _finish(r: HsResult, sp: SobolevParams) -> HsResult:
    if sp.backend == "float":
        return HsResult(complex(r.value), r.error, False)
    return r


def hs_norm2(F: ShellFunction, sp: SobolevParams) -> HsResult:
    return hs_inner(F, F, sp)


def hs_gram(functions, sp: SobolevParams):
    """Gram matrix of H^s pairings.

    When every function carries the same weights and they cancel against
    the H^s weight, the pairing is an L2 pairing of the steps and the whole
    matrix comes out of one exact integer computation.
    """
    functions = list(functions)
    if not functions:
        return []
    w0 = functions[0].weights
    if all(f.weights == w0 for f in functions) and not merge_weights(w0, w0, ((0, sp.s),)):
        q = functions[0].params.q
        raw = exact_gram([f.step for f in functions])
        out = [[simplify(raw[a][b] * _half_q(q, fa.half_power + fb.half_power)) for b, fb in enumerate(functions)]
               for a, fa in enumerate(functions)]
        if sp.backend == "float":
            out = [[complex(x) for x in row] for row in out]
        return out
    return [[hs_inner(f, g, sp).value for g in functions] for f in functions]


# -- membership ------------------------------------------------------------------

@dataclass(frozen=True)
class Threshold:
    s_star: object  # Fraction, float or math.inf
    growth: object = None

    @property
    def all_s(self) -> bool:
        return self.s_star == math.inf

    def to_json(self):
        s = self.s_star
        return {"s_star": "inf" if s == math.inf else (str(s) if isinstance(s, Fraction) else float(s))}


def membership_threshold(f_hat: RadialProfile) -> Threshold:
    """Sup of s with int (1+|xi|^2)^s |f_hat|^2 finite, read off the outer tail.

    Shell m carries |F|^2 q^(2sm) q^m, so a tail q^(g m) converges iff 2g + 2s + 1 < 0.
    Polynomial factors in m do not move the threshold.
    """
    if not f_hat.outer:
        return Threshold(math.inf)
    gamma = max(t.gamma for t in f_hat.outer)
    growth = gamma + 2 * sum(s for _, s in f_hat.weight) if f_hat.weight else gamma
    s_star = -growth - Fraction(1, 2) if not isinstance(growth, float) else -growth - 0.5
    return Threshold(s_star, growth)


def hs_converges(f_hat: RadialProfile, s) -> bool:
    return s < membership_threshold(f_hat).s_star


def series_slope(f_hat: RadialProfile, s, ms) -> float:
    """Fitted log_q slope of the shell terms |F(q^m)|^2 (1+q^(2m))^s q^m.

    Negative slope: the H^s series converges; positive: it diverges.  An
    independent numeric cross-check of :func:`membership_threshold`.
    """
    import numpy as np

    q = f_hat.q
    ms = [int(m) for m in ms]
    logs = []
    for m in ms:
        v = abs(complex(f_hat.value(m))) ** 2 * (1 + float(q) ** (2 * m)) ** float(s) * float(q) ** m
        logs.append(math.log(v) / math.log(q))
    slope, _ = np.polyfit(np.array(ms, dtype=float), np.array(logs), 1)
    return float(slope)


# -- periodized bracket ------------------------------------------------------------

def bracket_series(F: ShellFunction, G: ShellFunction, sp: SobolevParams, j: int, xi: FieldElement, K=None):
    """sum_k (1 + q^(2j)|xi + lambda(k)|^2)^s F(xi + lambda(k)) conj(G(xi + lambda(k)))."""
    params = F.params
    q = params.q
    levels = [f.step.support_level() for f in (F, G)]
    if any(e is None for e in levels):
        return Fraction(0)
    depth = max(-min(levels), -(xi.valuation if xi.terms else 0), 0)
    if K is None:
        K = q**depth
    elif K < q**depth:
        raise SupportError(f"K={K} does not cover the supports (need q^{depth})")
    weights = merge_weights(F.weights, G.weights, ((j, sp.s),))
    scale = _half_q(q, F.half_power + G.half_power)
    total = Fraction(0)
    for k in range(K):
        x = xi + lam(k, params)
        a = F.step(x)
        if a == 0:
            continue
        b = G.step(x)
        if b == 0:
            continue
        total = total + a * conj(b) * weight_value(weights, x.norm, q)
    val = simplify(total * scale)
    return complex(val) if sp.backend == "float" else val
