import itertools
from fractions import Fraction

import pytest

from ultrawave.cyclotomic import abs2
from ultrawave.fractals import (
    SizeError,
    cantor_truncate,
    cantor_value,
    example_packets,
    fractal_ft_profile,
    weierstrass_truncate,
)
from ultrawave.gfq import field_params
from ultrawave.localfield import Ball, FieldElement
from ultrawave.stepfn import sf_fourier


def sup_diff(f, g):
    d = f - g
    return max((abs2(c) for _, c in d.pieces), default=Fraction(0))


@pytest.mark.parametrize("J", range(1, 10))
def test_weierstrass_cauchy_bound(J):
    a, b = weierstrass_truncate(J), weierstrass_truncate(J + 1)
    assert sup_diff(a.approx, b.approx) <= Fraction(1, 4**J)


@pytest.mark.parametrize("J", range(1, 7))
def test_cantor_cauchy_bound(J):
    a, b = cantor_truncate(J), cantor_truncate(J + 1)
    assert sup_diff(a.approx, b.approx) <= Fraction(1, 4**J)


@pytest.mark.parametrize("J", (2, 5, 8))
def test_weierstrass_pointwise(J):
    f = weierstrass_truncate(J).approx
    params = field_params(2)
    for digits in itertools.islice(itertools.product((0, 1), repeat=J), 0, None, 7):
        x = FieldElement(params, {j: d for j, d in enumerate(digits, start=1)})
        expected = sum((Fraction(d, 2**j) for j, d in enumerate(digits, start=1)), Fraction(0))
        assert f(x) == expected
    # outside P^1 the function vanishes
    assert f(FieldElement.one(params)) == 0


def test_cantor_value_settles_at_first_zero():
    assert cantor_value((2, 2, 0, 1)) == (Fraction(0) + Fraction(1, 2) + Fraction(1, 4) + Fraction(1, 8), True)
    assert cantor_value((1, 1)) == (Fraction(0), False)
    assert cantor_value((0,)) == (Fraction(1, 2), True)


@pytest.mark.parametrize("kind, J", [("weierstrass", 6), ("cantor", 4)])
def test_ft_self_consistency(kind, J):
    make = weierstrass_truncate if kind == "weierstrass" else cantor_truncate
    a, b = make(J), make(J + 1)
    bound = Fraction(1, 2**J) * a.support_measure
    assert sup_diff(sf_fourier(a.approx), sf_fourier(b.approx)) <= bound**2


def test_weierstrass_ft_report():
    f = weierstrass_truncate(10)
    ft, rep = fractal_ft_profile(f)
    assert rep.integral == Fraction(1023, 4096)
    assert rep.value_at_zero == rep.integral
    assert rep.to_json()["status"] == "informational"
    assert ft(FieldElement.zero(f.params)) == rep.integral


def test_cantor_ft_report():
    f = cantor_truncate(7)
    _, rep = fractal_ft_profile(f)
    assert rep.integral == Fraction(1093, 6561)


def test_size_limits():
    with pytest.raises(SizeError):
        weierstrass_truncate(21)
    with pytest.raises(SizeError):
        cantor_truncate(14)
    with pytest.raises(ValueError):
        weierstrass_truncate(0)


@pytest.mark.parametrize("q, j", [(2, 0), (2, 1), (3, -1)])
def test_example8_gram(q, j):
    rep = example_packets(8, j=j, n=q - 1, s=Fraction(1), q=q)
    assert rep.exact_identity


@pytest.mark.parametrize("ex, n", [(9, 0), (9, 1), (10, 2)])
def test_examples_9_10_within_bound(ex, n):
    rep = example_packets(ex, j=0, n=n, depth=6 if ex == 9 else 4, freq_check=(n == 0))
    assert rep.within_bound
    assert rep.max_offdiag <= rep.bound
    if rep.frequency_check is not None:
        assert rep.frequency_check


def test_support_is_p1():
    f = weierstrass_truncate(4)
    P1 = Ball.ideal(f.params, 1)
    assert all(P1.contains_ball(b) for b, _ in f.approx.pieces)
