"""Level-dependent MRA, filter banks and wavelet packets on K_q.

Conventions used throughout:

* filters carry no q^(-1/2) prefactor: m_l(xi) = sum_k alpha_{k,l} conj(chi_k(xi));
* the time recursion is w_{qn+r}(x) = q sum_k alpha_{k,r} w_n(t^-1 x - lambda(k)),
  whose transform is w^_{qn+r}(xi) = m_r(t xi) w^_n(t xi);
* sequence identities use blocks of length q: sum_t alpha_{t-qk,l} conj(alpha_{t,r});
* the level-j Sobolev weight is (1 + q^(2j)|xi|^2), the norm of the dilation t^-j
  squared, so the packet w_{j,k,n}(x) = q^(j/2) w_n(t^-j x - lambda(k)) has
  transform q^(-j/2) conj(chi_k(t^j xi)) w^_n(t^j xi) with weight at level 0.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, replace
from fractions import Fraction
from functools import cached_property, lru_cache

from .cyclotomic import abs2, conj, root_of_unity, simplify, to_complex
from .gfq import FieldParams
from .localfield import Ball, FieldElement, character, lam, pairing_exponent
from .sobolev import ShellFunction, SobolevParams, hs_gram, hs_inner
from .stepfn import StepFunction, _cells, character_step, indicator, sf_dilate, sf_translate

__all__ = [
    "qadic_digits",
    "FilterBank",
    "FilterReport",
    "make_haar_bank",
    "perturb_bank",
    "mix_bank",
    "shift_bank",
    "random_unitary_bank",
    "check_filter_bank",
    "sequence_identity",
    "filter_value",
    "filter_step",
    "filter_matrix",
    "ScalingFamily",
    "sobolev_haar_scaling",
    "WaveletPacket",
    "packet_freq_recursive",
    "packet_freq_product",
    "packet_time_recursive",
    "wavelet_packet",
    "packet_system",
    "packet_gram",
    "conv_packet_gram",
    "SplitResult",
    "split_sequence_system",
    "projection_demo",
    "MAX_PACKET_INDEX",
    "MAX_LEVEL",
]

MAX_PACKET_INDEX = 6  # n < q^6
MAX_LEVEL = 4


class PreconditionError(ValueError):
    pass


def qadic_digits(n: int, q: int) -> tuple:
    """Base-q digits of n, least significant first; () for n = 0."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    out = []
    while n:
        n, r = divmod(n, q)
        out.append(r)
    return tuple(out)


# -- filter banks -----------------------------------------------------------------

@dataclass(frozen=True)
class FilterBank:
    params: FieldParams
    taps_items: tuple  # ((k, l), alpha) sorted, zero taps dropped
    level: object = None  # None: the same bank at every level
    name: str = "custom"

    @classmethod
    def from_dict(cls, params, taps: dict, level=None, name="custom"):
        items = tuple(sorted(((int(k), int(l)), simplify(v)) for (k, l), v in taps.items() if v != 0))
        return cls(params, items, level, name)

    @cached_property
    def taps(self) -> dict:
        return dict(self.taps_items)

    @property
    def q(self):
        return self.params.q

    @cached_property
    def depth(self) -> int:
        """Digit length of the largest tap index: filters are constant on cosets of P^depth."""
        kmax = max((k for k, _ in self.taps), default=0)
        return max(len(qadic_digits(kmax, self.q)), 1)

    def column(self, l) -> dict:
        return {k: v for (k, ll), v in self.taps.items() if ll == l}

    def to_json(self):
        from .io import value_to_json

        return {"params": self.params.to_json(), "name": self.name,
                "taps": [{"k": k, "l": l, "value": value_to_json(v)} for (k, l), v in self.taps_items]}


def make_haar_bank(params: FieldParams) -> FilterBank:
    """alpha_{k,l} = q^-1 chi(lambda(l) lambda(k) t), k, l < q."""
    q = params.q
    t = FieldElement.prime(params)
    taps = {}
    for k in range(q):
        for l in range(q):
            taps[(k, l)] = simplify(Fraction(1, q) * character(lam(l, params) * lam(k, params) * t))
    return FilterBank.from_dict(params, taps, name="haar")


def perturb_bank(bank: FilterBank, k=0, l=0, delta=Fraction(1, 10)) -> FilterBank:
    taps = dict(bank.taps)
    taps[(k, l)] = simplify(taps.get((k, l), 0) + delta)
    return FilterBank.from_dict(bank.params, taps, bank.level, "perturbed")


def mix_bank(bank: FilterBank, U) -> FilterBank:
    """alpha'_{k,l} = sum_r alpha_{k,r} U[r][l]; unitary U keeps M unitary."""
    q = bank.q
    taps = {}
    ks = sorted({k for k, _ in bank.taps})
    for k in ks:
        for l in range(q):
            v = sum((bank.taps.get((k, r), 0) * U[r][l] for r in range(q)), Fraction(0))
            taps[(k, l)] = simplify(v)
    return FilterBank.from_dict(bank.params, taps, bank.level, "mixed")


def shift_bank(bank: FilterBank, shifts) -> FilterBank:
    """alpha'_{k + q s_l, l} = alpha_{k,l}: row l of M picks up a unimodular factor."""
    q = bank.q
    taps = {(k + q * shifts[l], l): v for (k, l), v in bank.taps.items()}
    return FilterBank.from_dict(bank.params, taps, bank.level, "shifted")


def _solve(A, B):
    """A^-1 B over the rationals (Gauss-Jordan, small sizes)."""
    n = len(A)
    M = [list(map(Fraction, A[i])) + list(map(Fraction, B[i])) for i in range(n)]
    for c in range(n):
        piv = next(r for r in range(c, n) if M[r][c] != 0)
        M[c], M[piv] = M[piv], M[c]
        inv = 1 / M[c][c]
        M[c] = [x * inv for x in M[c]]
        for r in range(n):
            if r != c and M[r][c] != 0:
                f = M[r][c]
                M[r] = [x - f * y for x, y in zip(M[r], M[c])]
    return [row[n:] for row in M]


def _cayley(n, rng):
    """Rational orthogonal matrix (I - A)(I + A)^-1 from a random skew A."""
    A = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            v = Fraction(rng.randint(-3, 3), rng.randint(1, 3))
            A[i][j], A[j][i] = v, -v
    I = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    minus = [[I[i][j] - A[i][j] for j in range(n)] for i in range(n)]
    plus = [[I[i][j] + A[i][j] for j in range(n)] for i in range(n)]
    # (I - A)(I + A)^-1 = (I + A)^-1 (I - A) since they commute
    return _solve(plus, minus)


def random_unitary_bank(params: FieldParams, rng: random.Random, max_shift: int = 1) -> FilterBank:
    """Haar bank with its high-pass columns mixed by a rational orthogonal matrix,
    root-of-unity phases and block shifts.

    The low-pass column stays the refinement filter of 1_D, so the packets
    built on it are still orthonormal.
    """
    q = params.q
    V = _cayley(q - 1, rng)
    phases = [root_of_unity(params.p, rng.randrange(params.p)) for _ in range(q - 1)]
    U = [[Fraction(int(r == l == 0)) for l in range(q)] for r in range(q)]
    for r in range(1, q):
        for l in range(1, q):
            U[r][l] = simplify(V[r - 1][l - 1] * phases[l - 1])
    bank = mix_bank(make_haar_bank(params), U)
    if max_shift:
        bank = shift_bank(bank, [0] + [rng.randint(0, max_shift) for _ in range(q - 1)])
    return FilterBank(bank.params, bank.taps_items, None, "random-unitary")


def filter_value(bank: FilterBank, l: int, xi: FieldElement):
    params = bank.params
    total = Fraction(0)
    for k, v in bank.column(l).items():
        total = total + v * root_of_unity(params.p, -pairing_exponent(lam(k, params), xi))
    return simplify(total)


def filter_step(bank: FilterBank, l: int, J: int, ball: Ball) -> StepFunction:
    """xi -> m_l(t^J xi) on ``ball``, as a StepFunction."""
    level = max(bank.depth - J, ball.level)
    cells = [ball] if level == ball.level else _cells(ball, level)
    return StepFunction(bank.params, [(c, filter_value(bank, l, c.center.shift(J))) for c in cells])


def filter_matrix(bank: FilterBank, xi: FieldElement) -> list:
    """M(xi)_{l,k} = m_l(t xi + t lambda(k)), k, l < q."""
    params = bank.params
    t = FieldElement.prime(params)
    return [[filter_value(bank, l, t * xi + t * lam(k, params)) for k in range(params.q)] for l in range(params.q)]


def sequence_identity(bank: FilterBank, l: int, r: int, k: int):
    """sum_t alpha_{t-qk,l} conj(alpha_{t,r})."""
    q = bank.q
    cl, cr = bank.column(l), bank.column(r)
    total = Fraction(0)
    for t, v in cr.items():
        a = cl.get(t - q * k)
        if a is not None:
            total = total + a * conj(v)
    return simplify(total)


@dataclass
class FilterReport:
    shift_orthonormal: bool
    shift_orthonormal_residual: float
    cross_orthogonal: bool
    cross_orthogonal_residual: float
    unitary: bool
    unitary_residual: float
    cond_a: bool
    cond_b: bool
    cosets: int
    exact_coverage: bool

    @property
    def passed(self) -> bool:
        return self.shift_orthonormal and self.cross_orthogonal and self.unitary and self.cond_a and self.cond_b

    def to_json(self):
        d = dict(self.__dict__)
        d["passed"] = self.passed
        return d


def _res(x) -> float:
    return abs(to_complex(x))


def check_filter_bank(bank: FilterBank, T: int = 3) -> FilterReport:
    if T < 1:
        raise ValueError("T must be >= 1")
    q, params = bank.q, bank.params
    kmax = max((k for k, _ in bank.taps), default=0) // q + 1
    res_i = res_ii = 0.0
    for l in range(q):
        for r in range(q):
            for k in range(-kmax, kmax + 1):
                target = Fraction(1, q) if (k == 0 and l == r) else Fraction(0)
                d = _res(sequence_identity(bank, l, r, k) - target)
                if l == r:
                    res_i = max(res_i, d)
                else:
                    res_ii = max(res_ii, d)
    res_u = 0.0
    ok_a = ok_b = True
    count = 0
    for digits in _digit_tuples(q, T):
        xi = FieldElement(params, {i: d for i, d in enumerate(digits)})
        M = filter_matrix(bank, xi)
        count += 1
        for l in range(q):
            for r in range(q):
                g = simplify(sum((M[l][k] * conj(M[r][k]) for k in range(q)), Fraction(0)))
                d = _res(g - (1 if l == r else 0))
                res_u = max(res_u, d)
                if d != 0:
                    if l == r:
                        ok_a = False
                    else:
                        ok_b = False
    return FilterReport(res_i == 0, res_i, res_ii == 0, res_ii, res_u == 0, res_u, ok_a, ok_b, count,
                        T >= bank.depth - 1)


def _digit_tuples(q, T):
    import itertools

    return itertools.product(range(q), repeat=T)


# -- scaling family and packets ------------------------------------------------------

def sobolev_haar_scaling(params: FieldParams, s, j: int) -> ShellFunction:
    """phi^(j)(xi) = (1 + q^(2j)|xi|^2)^(-s/2) 1_D(xi)."""
    s = Fraction(s) if not isinstance(s, float) else s
    return ShellFunction(indicator(Ball.ideal(params, 0)), ((j, -s / 2),))


@dataclass(frozen=True)
class ScalingFamily:
    params: FieldParams
    s: object = Fraction(0)

    def __call__(self, j: int) -> ShellFunction:
        return sobolev_haar_scaling(self.params, self.s, j)

    @property
    def weight_exponent(self):
        s = Fraction(self.s) if not isinstance(self.s, float) else self.s
        return -s / 2


@lru_cache(maxsize=4096)
def packet_freq_recursive(bank: FilterBank, n: int) -> StepFunction:
    """Step part of w^_n via w^_{qn'+r}(xi) = m_r(t xi) w^_{n'}(t xi)."""
    params = bank.params
    if n == 0:
        return indicator(Ball.ideal(params, 0))
    rest, r = divmod(n, bank.q)
    inner = sf_dilate(packet_freq_recursive(bank, rest), 1)
    ball = Ball.ideal(params, -len(qadic_digits(n, bank.q)))
    return inner * filter_step(bank, r, 1, ball)


def packet_freq_product(bank: FilterBank, n: int, pad: int = 0) -> StepFunction:
    """Step part of w^_n as the product prod_J m_{mu_J}(t^J xi) on P^-d, with ``pad`` extra m_0 factors."""
    params = bank.params
    digits = qadic_digits(n, bank.q)
    d = len(digits)
    ball = Ball.ideal(params, -d)
    out = indicator(ball)
    for J, mu in enumerate(digits + (0,) * pad, start=1):
        out = out * filter_step(bank, mu, J, ball)
    return out


def packet_time_recursive(bank: FilterBank, n: int) -> StepFunction:
    """w_n in time: w_0 = 1_D, w_{qn'+r}(x) = q sum_k alpha_{k,r} w_{n'}(t^-1 x - lambda(k))."""
    params = bank.params
    if n == 0:
        return indicator(Ball.ideal(params, 0))
    rest, r = divmod(n, bank.q)
    prev = packet_time_recursive(bank, rest)
    q = bank.q
    pieces = []
    for k, a in bank.column(r).items():
        g = sf_dilate(sf_translate(prev, lam(k, params)), -1)
        pieces.extend(g.scale(simplify(q * a)).pieces)
    return StepFunction(params, pieces)


@dataclass(frozen=True)
class WaveletPacket:
    n: int
    j: int
    k: int
    freq: ShellFunction
    digits: tuple

    def to_json(self):
        from .io import shell_to_json

        return {"n": self.n, "j": self.j, "k": self.k, "digits": list(self.digits), "freq": shell_to_json(self.freq)}


def _check_indices(q, n, j):
    if n >= q**MAX_PACKET_INDEX:
        raise ValueError(f"packet index n={n} beyond q^{MAX_PACKET_INDEX}")
    if abs(j) > MAX_LEVEL:
        raise ValueError(f"level |j|={abs(j)} beyond {MAX_LEVEL}")


def wavelet_packet(bank: FilterBank, fam: ScalingFamily, n: int, j: int, k: int, check=False) -> WaveletPacket:
    """w_{j,k,n}(x) = q^(j/2) w_n^(j)(t^-j x - lambda(k)), built in frequency."""
    params = bank.params
    q = params.q
    _check_indices(q, n, j)
    if k < 0:
        raise ValueError("k must be nonnegative")
    if check and not check_filter_bank(bank, max(bank.depth, 1)).passed:
        raise PreconditionError("filter bank fails the unitarity checks")
    digits = qadic_digits(n, q)
    base = sf_dilate(packet_freq_recursive(bank, n), j)
    support = Ball.ideal(params, -len(digits) - j)
    step = base * character_step(lam(k, params).shift(j), support, sign=-1)
    w = fam.weight_exponent
    freq = ShellFunction(step, ((0, w),) if w != 0 else (), -j)
    return WaveletPacket(n, j, k, freq, digits)


def packet_system(bank, fam, j, N, K):
    return [wavelet_packet(bank, fam, n, j, k) for n in range(N) for k in range(K)]


def packet_gram(bank: FilterBank, fam: ScalingFamily, j: int, N: int, K: int, sp: SobolevParams):
    """H^s Gram of w_{j,k,n}, rows and columns ordered by (n, k)."""
    packets = packet_system(bank, fam, j, N, K)
    return hs_gram([w.freq for w in packets], sp)


def conv_packet_gram(bank: FilterBank, j: int, n: int, m: int, k: int, l: int, sp: SobolevParams):
    """<kappa * w_{j,k,n}, kappa * w_{j,l,m}>_{H^s} with kappa^ = (1 + |xi|^2)^(-s/2)."""
    plain = ScalingFamily(bank.params, Fraction(0))
    s = sp.s
    kap = ((0, -(Fraction(s) if not isinstance(s, float) else s) / 2),)
    a = wavelet_packet(bank, plain, n, j, k).freq
    b = wavelet_packet(bank, plain, m, j, l).freq
    A = ShellFunction(a.step, kap, a.half_power)
    B = ShellFunction(b.step, kap, b.half_power)
    return hs_inner(A, B, sp).value


# -- abstract splitting ------------------------------------------------------------------

@dataclass
class SplitResult:
    index: list  # (k, l) per output sequence
    coeffs: list  # dict t -> value, without the sqrt(q) factor
    gram: list  # exact, includes the factor q
    orthonormal: bool
    residual: float


def split_sequence_system(bank: FilterBank, e_coeffs=None, K: int = 8) -> SplitResult:
    """phi_{k,l} = sqrt(q) sum_t alpha_{t-qk,l} e_t, k < K, l < q.

    ``e_coeffs`` lists the sequences e_t as dicts (position -> value); None means
    the standard basis.  The sqrt(q) is kept outside the coefficients, so the
    Gram is q times an exact finite sum.
    """
    q = bank.q
    index, coeffs = [], []
    for k in range(K):
        for l in range(q):
            c = {}
            for t, v in bank.column(l).items():
                c[t + q * k] = v
            index.append((k, l))
            coeffs.append(c)
    if e_coeffs is not None:
        vecs = []
        for c in coeffs:
            acc = {}
            for t, v in c.items():
                for pos, ev in e_coeffs[t].items():
                    acc[pos] = acc.get(pos, 0) + v * ev
            vecs.append(acc)
    else:
        vecs = coeffs
    gram = []
    residual = 0.0
    for a, va in enumerate(vecs):
        row = []
        for b, vb in enumerate(vecs):
            g = sum((x * conj(vb[t]) for t, x in va.items() if t in vb), Fraction(0))
            g = simplify(q * g)
            row.append(g)
            residual = max(residual, _res(g - (1 if a == b else 0)))
        gram.append(row)
    return SplitResult(index, coeffs, gram, residual == 0, residual)


def projection_demo(fam: ScalingFamily, h: ShellFunction, j_range, K=None):
    """||P_j h||^2_{H^s} = sum_k |<h, phi_{j,k}>|^2 over the translates meeting h."""
    params = fam.params
    q = params.q
    sp = SobolevParams(fam.s)
    haar = make_haar_bank(params)
    time_support = h.step.inverse_fourier().support_level()
    out = []
    for j in j_range:
        Kj = K if K is not None else q ** max(0, j - (time_support if time_support is not None else 0))
        total = Fraction(0)
        for k in range(Kj):
            phi = wavelet_packet(haar, fam, 0, j, k).freq
            # |c|^2 absorbs q^(h/2) exactly, so pair the unscaled parts
            c = hs_inner(replace(h, half_power=0), replace(phi, half_power=0), sp).value
            total = total + abs2(c) * Fraction(q) ** (h.half_power + phi.half_power)
        out.append(simplify(total))
    return out
