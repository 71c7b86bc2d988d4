import json
import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ultrawave.gfq import field_params
from ultrawave.radial import (
    DivergenceError,
    DomainError,
    RadialProfile,
    Term,
    decay_exponent,
    kappa_profile,
    make_example,
    radial_fourier,
    radial_to_step,
    step_to_radial,
)
from ultrawave.sobolev import membership_threshold
from ultrawave.stepfn import sf_fourier


def sphere_ft(q, a, m):
    """int over |x| = q^a of chi(-xi x), for |xi| = q^m."""
    if a + m <= 0:
        return Fraction(q) ** a * (1 - Fraction(1, q))
    if a + m == 1:
        return -(Fraction(q) ** (a - 1))
    return Fraction(0)


def brute_ft(window, q, m):
    return sum((v * sphere_ft(q, a, m) for a, v in window.items()), Fraction(0))


@given(st.sampled_from((2, 3, 4)), st.dictionaries(st.integers(-3, 3), st.fractions(-3, 3, max_denominator=4), max_size=5))
def test_compact_profile_matches_sphere_sums(q, window):
    params = field_params(q)
    window = {a: v for a, v in window.items() if v}
    lo, hi = (min(window), max(window)) if window else (1, 0)
    f = RadialProfile(params, window, lo, hi)
    F = radial_fourier(f)
    for m in range(-6, 7):
        assert F.value(m) == brute_ft(window, q, m)


@given(st.sampled_from((2, 3)), st.dictionaries(st.integers(-2, 2), st.integers(-3, 3), min_size=1, max_size=4))
def test_radial_and_step_transforms_agree(q, window):
    params = field_params(q)
    window = {a: Fraction(v) for a, v in window.items() if v}
    if not window:
        return
    f = RadialProfile(params, window, min(window), max(window))
    F = radial_fourier(f)
    G = step_to_radial(sf_fourier(radial_to_step(f)))
    for m in range(-5, 6):
        assert F.value(m) == G.value(m)


def tail_ft_oracle(q, theta, m, terms=400):
    """Example 1 by brute summation of the inner tail |x|^theta on D."""
    return sum(Fraction(q) ** (theta * a) * sphere_ft(q, a, m) for a in range(-terms, 1))


@pytest.mark.parametrize("q", (2, 3))
@pytest.mark.parametrize("theta", (Fraction(1), Fraction(2)))
def test_example1_against_truncated_sum(q, theta):
    F = radial_fourier(make_example(1, field_params(q), theta=theta))
    for m in range(-3, 8):
        approx = tail_ft_oracle(q, theta, m)
        assert abs(float(F.value(m) - approx)) < 1e-30


@pytest.mark.parametrize("q", (2, 3))
@pytest.mark.parametrize("theta", (Fraction(1, 2), Fraction(1), Fraction(2)))
def test_example1_head_decay_threshold(q, theta):
    F = radial_fourier(make_example(1, field_params(q), theta=theta))
    head = (1 - Fraction(1, q)) / (1 - float(q) ** float(-(1 + theta))) if theta.denominator > 1 else \
        (1 - Fraction(1, q)) / (1 - Fraction(q) ** int(-(1 + theta)))
    if isinstance(head, Fraction):
        assert F.value(0) == head and F.value(-5) == head
    else:
        assert abs(float(F.value(0)) - head) < 1e-12
    assert abs(decay_exponent(F, range(4, 13)) + (1 + theta)) < 1e-9
    assert membership_threshold(F).s_star == theta + Fraction(1, 2)


def test_example1_values_q2():
    F = radial_fourier(make_example(1, field_params(2), theta=Fraction(1)))
    assert F.value(0) == Fraction(2, 3)


@pytest.mark.parametrize("q", (2, 3, 5))
def test_example2(q):
    F = radial_fourier(make_example(2, field_params(q)))
    head = math.log(q) / q / (1 - 1 / q)
    assert abs(float(F.value(0)) - head) < 1e-10
    assert membership_threshold(F).s_star == Fraction(1, 2)


def test_example4_threshold():
    th, vt = Fraction(1, 5), Fraction(1, 3)
    F = radial_fourier(make_example(4, field_params(3), theta=th, vartheta=vt))
    assert membership_threshold(F).s_star == th + vt - Fraction(1, 2)


@pytest.mark.parametrize("theta", (Fraction(-1, 2), Fraction(0), Fraction(1, 2)))
def test_example7_threshold(theta):
    F = make_example(7, field_params(3), theta=theta)
    assert membership_threshold(F).s_star == -2 * theta - Fraction(1, 2)


@pytest.mark.parametrize("q", (2, 3))
def test_example3_all_s(q):
    for k in range(-3, 4):
        F = radial_fourier(step_to_radial(make_example(3, field_params(q), k=k)))
        assert membership_threshold(F).all_s


def test_kappa_profile():
    K = kappa_profile(field_params(3), -1)
    assert K.value(0) == pytest.approx(math.sqrt(2), abs=1e-15)  # (1 + 1)^(1/2)
    assert K.value(-4) == pytest.approx(math.sqrt(1 + 3**-8), abs=1e-15)
    assert kappa_profile(field_params(3), -2).value(1) == 10


def test_domain_errors():
    params = field_params(2)
    with pytest.raises(DomainError):
        make_example(1, params, theta=Fraction(-2))
    with pytest.raises(DomainError):
        make_example(4, params, theta=Fraction(1, 2), vartheta=Fraction(2, 3))
    with pytest.raises(DivergenceError):
        radial_fourier(RadialProfile(params, {}, 1, 0, (Term(1, 0, -2),)))


def test_json_round_trip():
    params = field_params(3)
    F = radial_fourier(make_example(1, params, theta=Fraction(1)))
    back = RadialProfile.from_json(params, json.loads(json.dumps(F.to_json())))
    assert all(back.value(m) == F.value(m) for m in range(-5, 8))
