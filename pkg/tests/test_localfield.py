from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import element_st, params_st
from ultrawave.cyclotomic import root_of_unity, simplify
from ultrawave.gfq import field_params
from ultrawave.localfield import (
    Ball,
    FieldElement,
    WindowError,
    character,
    chi_n,
    format_element,
    lam,
    parse_element,
)


@given(st.data())
def test_ring_axioms(data):
    params = data.draw(params_st())
    x, y, z = (data.draw(element_st(params, -3, 3)) for _ in range(3))
    zero, one = FieldElement.zero(params), FieldElement.one(params)
    assert x + y == y + x
    assert (x + y) + z == x + (y + z)
    assert x - x == zero
    assert x * one == x
    assert x * y == y * x
    assert x * (y + z) == x * y + x * z


@given(st.data())
def test_norm_is_multiplicative_and_ultrametric(data):
    params = data.draw(params_st())
    x, y = (data.draw(element_st(params, -3, 3)) for _ in range(2))
    assert (x * y).norm == x.norm * y.norm
    assert (x + y).norm <= max(x.norm, y.norm)
    if x.norm != y.norm:
        assert (x + y).norm == max(x.norm, y.norm)


def test_characteristic_p():
    params = field_params(9)
    x = parse_element("(1,2)*t^-2 + (0,1)*t^3", params)
    total = FieldElement.zero(params)
    for _ in range(3):
        total = total + x
    assert total.is_zero()


@given(st.data())
def test_character_is_a_homomorphism(data):
    params = data.draw(params_st())
    x, y = (data.draw(element_st(params, -3, 3)) for _ in range(2))
    assert simplify(character(x) * character(y)) == character(x + y)


def test_character_values():
    p2 = field_params(2)
    assert character(parse_element("t^-1", p2)) == -1
    assert character(parse_element("t^-2 + t^0 + t^5", p2)) == 1
    p3 = field_params(3)
    assert character(parse_element("2*t^-1", p3)) == root_of_unity(3, 2)


@given(st.data())
def test_character_trivial_on_integers(data):
    params = data.draw(params_st())
    x = data.draw(element_st(params, 0, 5))
    assert character(x) == 1


def test_lambda_digits():
    p3 = field_params(3)
    assert format_element(lam(0, p3)) == "0"
    assert format_element(lam(5, p3)) == "1*t^-2 + 2*t^-1"
    p4 = field_params(4)
    # index 3 is the GF(4) element 1 + x
    assert lam(3, p4).terms == ((-1, 3),)


@pytest.mark.parametrize("q", (2, 3, 4))
def test_lambda_translates_are_disjoint(q):
    params = field_params(q)
    balls = {Ball(lam(n, params), 0) for n in range(q**4)}
    assert len(balls) == q**4
    # and they tile P^-4
    big = Ball.ideal(params, -4)
    assert all(big.contains_ball(b) for b in balls)
    assert sum(b.measure for b in balls) == big.measure


@pytest.mark.parametrize("q", (2, 3))
def test_lambda_additive_on_digit_blocks(q):
    params = field_params(q)
    for n in range(q**3):
        for r in range(q):
            assert lam(q * n + r, params) == lam(q * n, params) + lam(r, params)
            assert lam(q * n, params) == lam(n, params).shift(-1)


def test_chi_n_pairs_lambda():
    params = field_params(3)
    x = parse_element("1*t^0 + 2*t^1", params)
    assert chi_n(1, x) == character(lam(1, params) * x)


def test_ball_geometry():
    params = field_params(2)
    b = Ball(parse_element("t^-1 + t^3", params), 2)
    assert format_element(b.center) == "1*t^-1"
    assert b.measure == Fraction(1, 4)
    kids = b.children()
    assert len(kids) == 2 and all(b.contains_ball(k) for k in kids)
    assert kids[0].disjoint(kids[1])
    assert b.contains(parse_element("t^-1 + t^2", params))
    assert not b.contains(parse_element("t^-1 + t^1", params))


@given(st.data())
def test_format_parse_round_trip(data):
    params = data.draw(params_st())
    x = data.draw(element_st(params, -5, 5))
    assert parse_element(format_element(x), params) == x


def test_parse_errors():
    params = field_params(3)
    with pytest.raises(ValueError):
        parse_element("3*t^1", params)
    with pytest.raises(ValueError):
        parse_element("t^^2", params)


def test_window_is_enforced():
    params = field_params(2)
    with pytest.raises(WindowError):
        FieldElement.monomial(params, 1, 10**6)
