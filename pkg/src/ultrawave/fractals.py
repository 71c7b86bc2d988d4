"""Depth-J truncations of the Weierstrass-type (K_2) and Cantor-type (K_3) functions.

Both live on P^1.  A truncation is constant on the level-(J+1) balls of P^1
and is within 2^-J of the limit function everywhere, so every derived
quantity carries an explicit, rational error bound.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from .cyclotomic import abs2, simplify
from .gfq import FieldParams, field_params
from .localfield import Ball, FieldElement, lam
from .mra import ScalingFamily, make_haar_bank, wavelet_packet
from .sobolev import ShellFunction, SobolevParams, hs_gram
from .stepfn import StepFunction, exact_gram, sf_dilate, sf_fourier, sf_translate

__all__ = [
    "TruncatedFractal",
    "SizeError",
    "weierstrass_truncate",
    "cantor_truncate",
    "fractal_ft_profile",
    "FTReport",
    "example_packets",
    "PacketReport",
    "WEIERSTRASS_MAX_DEPTH",
    "CANTOR_MAX_DEPTH",
]

WEIERSTRASS_MAX_DEPTH = 20
CANTOR_MAX_DEPTH = 13

# claimed constant transforms: (value, largest shell exponent l with |xi| = q^l)
CLAIMED_FT = {"weierstrass": (Fraction(1, 4), 1), "cantor": (Fraction(1, 2), 0)}


class SizeError(ValueError):
    pass


@dataclass(frozen=True)
class TruncatedFractal:
    kind: str
    depth: int
    approx: StepFunction
    sup_error: Fraction

    @property
    def params(self) -> FieldParams:
        return self.approx.params

    @property
    def support_measure(self) -> Fraction:
        return Fraction(1, self.params.q)


def _leaf(params, digits, first_exp):
    terms = tuple((first_exp + i, d) for i, d in enumerate(digits) if d)
    return Ball(FieldElement._raw(params, terms), first_exp + len(digits))


def weierstrass_truncate(J: int) -> TruncatedFractal:
    """sum_{j<=J} 2^-j x_j on P^1 of K_2, x_j the digit at t^j."""
    if J < 1:
        raise ValueError("depth must be >= 1")
    if J > WEIERSTRASS_MAX_DEPTH:
        raise SizeError(f"depth {J} exceeds {WEIERSTRASS_MAX_DEPTH}")
    params = FieldParams(2)
    pieces = []
    for digits in itertools.product((0, 1), repeat=J):
        v = sum((Fraction(x, 2**j) for j, x in enumerate(digits, start=1)), Fraction(0))
        if v:
            pieces.append((_leaf(params, digits, 1), v))
    return TruncatedFractal("weierstrass", J, StepFunction(params, pieces), Fraction(1, 2**J))


def cantor_value(digits) -> tuple:
    """(value, settled) for the prefix x_0..x_{J-1}.

    Settled when a zero digit x_{k-1} occurs: sum_{j<=k-2} 2^(-j-1)(x_j - 1) + 2^-k.
    Otherwise the prefix sum, which the limit exceeds by at most 2^-J.
    """
    total = Fraction(0)
    for j, x in enumerate(digits):
        if x == 0:
            return total + Fraction(1, 2 ** (j + 1)), True
        total += Fraction(x - 1, 2 ** (j + 1))
    return total, False


def cantor_truncate(J: int) -> TruncatedFractal:
    """Cantor-type function on P^1 of K_3, x_j the digit at t^(j+1)."""
    if J < 1:
        raise ValueError("depth must be >= 1")
    if J > CANTOR_MAX_DEPTH:
        raise SizeError(f"depth {J} exceeds {CANTOR_MAX_DEPTH}")
    params = FieldParams(3)
    pieces = []
    for digits in itertools.product((0, 1, 2), repeat=J):
        v, _ = cantor_value(digits)
        if v:
            pieces.append((_leaf(params, digits, 1), v))
    return TruncatedFractal("cantor", J, StepFunction(params, pieces), Fraction(1, 2**J))


# -- transforms --------------------------------------------------------------------

@dataclass
class FTReport:
    kind: str
    depth: int
    value_at_zero: Fraction
    integral: Fraction
    ft_error_bound: Fraction
    claimed: Fraction
    claim_shells: list
    shell_values: dict = field(default_factory=dict)
    max_claim_deviation: float = 0.0

    def to_json(self):
        return {
            "kind": self.kind,
            "depth": self.depth,
            "value_at_zero": self.value_at_zero,
            "integral": self.integral,
            "ft_error_bound": self.ft_error_bound,
            "claimed": self.claimed,
            "claim_shells": self.claim_shells,
            "shell_values": {str(k): v for k, v in sorted(self.shell_values.items())},
            "max_claim_deviation": self.max_claim_deviation,
            "status": "informational",
        }


def fractal_ft_profile(f: TruncatedFractal, shells=None):
    """Exact transform of the truncation plus an informational comparison."""
    ft = sf_fourier(f.approx)
    claimed, lmax = CLAIMED_FT[f.kind]
    if shells is None:
        shells = list(range(lmax - 4, lmax + 1))
    zero = FieldElement.zero(f.params)
    integral = f.approx.integrate()
    values = {m: _shell_average(ft, m) for m in shells}
    dev = max(abs(complex(v) - float(claimed)) for v in values.values())
    report = FTReport(f.kind, f.depth, ft(zero), integral, f.sup_error * f.support_measure, claimed,
                      list(shells), values, dev)
    return ft, report


def _shell_average(F: StepFunction, m: int):
    """Mean of F over the sphere |xi| = q^m."""
    params = F.params
    q = params.q
    total = Fraction(0)
    for u in range(1, q):
        total = total + _integrate_over(F, Ball(FieldElement._raw(params, ((-m, u),)), 1 - m))
    measure = Fraction(q) ** m * (1 - Fraction(1, q))
    return simplify(total / measure)


def _integrate_over(F: StepFunction, ball: Ball):
    total = Fraction(0)
    for b, c in F.pieces:
        if ball.contains_ball(b):
            total = total + c * b.measure
        elif b.contains_ball(ball):
            total = total + c * ball.measure
    return total


# -- packetized examples -------------------------------------------------------------

@dataclass
class PacketReport:
    example: int
    q: int
    j: int
    n: int
    s: object
    K: int
    gram: list
    exact_identity: bool
    max_offdiag: float
    max_diag_deviation: float
    bound: object = None
    frequency_check: object = None

    @property
    def within_bound(self) -> bool:
        if self.bound is None:
            return self.exact_identity
        return self.max_offdiag <= float(self.bound) and self.max_diag_deviation <= float(self.bound)

    def to_json(self):
        return {
            "example": self.example, "q": self.q, "j": self.j, "n": self.n, "s": self.s, "K": self.K,
            "exact_identity": self.exact_identity, "max_offdiag": self.max_offdiag,
            "max_diag_deviation": self.max_diag_deviation, "bound": self.bound,
            "within_bound": self.within_bound, "frequency_check": self.frequency_check,
        }


def _mother_packet(mother: StepFunction, bank, n: int) -> StepFunction:
    """Haar recursion started from ``mother`` instead of 1_D."""
    params = mother.params
    if n == 0:
        return mother
    rest, r = divmod(n, bank.q)
    prev = _mother_packet(mother, bank, rest)
    pieces = []
    for k, a in bank.column(r).items():
        g = sf_dilate(sf_translate(prev, lam(k, params)), -1)
        pieces.extend(g.scale(simplify(bank.q * a)).pieces)
    return StepFunction(params, pieces)


def _time_packet(wn: StepFunction, j: int, k: int) -> StepFunction:
    """w_n(t^-j x - lambda(k)) without the q^(j/2) factor."""
    return sf_dilate(sf_translate(wn, lam(k, wn.params)), -j)


def _gram_summary(G):
    off = diag = 0.0
    for a, row in enumerate(G):
        for b, v in enumerate(row):
            d = abs(complex(v) - (1 if a == b else 0))
            if a == b:
                diag = max(diag, d)
            else:
                off = max(off, d)
    return off, diag


def example_packets(ex_id: int, j: int = 0, n: int = 0, s=Fraction(1), K: int = None, q: int = 2, depth: int = None,
                    freq_check: bool = False) -> PacketReport:
    """Gram over translations k, l < K of the kappa-convolved packets of Examples 8-10."""
    s = Fraction(s) if not isinstance(s, float) else s
    sp = SobolevParams(s)
    if ex_id == 8:
        params = field_params(q)
        K = K or params.q**2
        bank = make_haar_bank(params)
        plain = ScalingFamily(params, Fraction(0))
        kap = ((0, -s / 2),)
        freqs = []
        for k in range(K):
            w = wavelet_packet(bank, plain, n, j, k).freq
            freqs.append(ShellFunction(w.step, kap, w.half_power))
        G = hs_gram(freqs, sp)
        off, diag = _gram_summary(G)
        return PacketReport(8, params.q, j, n, s, K, G, off == 0 and diag == 0, off, diag)
    if ex_id not in (9, 10):
        raise ValueError("example_packets handles examples 8, 9 and 10")
    frac = weierstrass_truncate(depth or 10) if ex_id == 9 else cantor_truncate(depth or 7)
    params = frac.params
    qq = params.q
    K = K or qq**2
    bank = make_haar_bank(params)
    wn = _mother_packet(frac.approx, bank, n)
    norm2 = _l2_norm2(frac.approx)
    steps = [_time_packet(wn, j, k) for k in range(K)]
    raw = exact_gram(steps)
    scale = Fraction(qq) ** j / norm2
    G = [[simplify(x * scale) for x in row] for row in raw]
    off, diag = _gram_summary(G)
    # exact vs truncated mother: relative L2 error delta, Gram entries move by <= 2 delta + delta^2
    mu = frac.support_measure
    delta = float(frac.sup_error) * float(mu) ** 0.5 / float(norm2) ** 0.5
    bound = 2 * delta + delta**2
    fcheck = None
    if freq_check:
        kap = ((0, -s / 2),)
        freqs = [ShellFunction(sf_fourier(st), kap, 0) for st in steps]
        Gf = hs_gram(freqs, sp)
        fcheck = all(simplify(Gf[a][b] * scale) == G[a][b] for a in range(K) for b in range(K))
    return PacketReport(ex_id, qq, j, n, s, K, G, off == 0 and diag == 0, off, diag, bound, fcheck)


def _l2_norm2(f: StepFunction) -> Fraction:
    return simplify(sum((abs2(c) * b.measure for b, c in f.pieces), Fraction(0)))
