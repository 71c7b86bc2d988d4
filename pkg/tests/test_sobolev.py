from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import params_st, step_st
from ultrawave.cyclotomic import conj, simplify
from ultrawave.gfq import field_params
from ultrawave.localfield import Ball, FieldElement
from ultrawave.mra import sobolev_haar_scaling
from ultrawave.radial import make_example, radial_fourier
from ultrawave.sobolev import (
    ShellFunction,
    SobolevParams,
    SupportError,
    bracket_series,
    hs_converges,
    hs_gram,
    hs_inner,
    hs_norm2,
    membership_threshold,
    merge_weights,
    series_slope,
)
from ultrawave.stepfn import indicator


def shell_sum(q, s, k_top=0, terms=200):
    """int over P^-k_top of (1+|xi|^2)^s, summed shell by shell."""
    total = 0.0
    for a in range(-terms, k_top + 1):
        total += (1 + q ** (2.0 * a)) ** s * q**a * (1 - 1 / q)
    return total


def test_indicator_h1_norm_is_11_over_7():
    params = field_params(2)
    r = hs_norm2(ShellFunction(indicator(Ball.ideal(params, 0))), SobolevParams(1))
    assert r.exact and r.value == Fraction(11, 7)
    rf = hs_norm2(ShellFunction(indicator(Ball.ideal(params, 0))), SobolevParams(1, "float", 1e-12))
    assert abs(rf.value - 11 / 7) < 1e-12


@pytest.mark.parametrize("q", (2, 3))
@pytest.mark.parametrize("s", (Fraction(-1, 2), Fraction(1, 2), Fraction(3, 2), -1, 2))
def test_ball_norm_against_shell_sum(q, s):
    params = field_params(q)
    r = hs_norm2(ShellFunction(indicator(Ball.ideal(params, 0))), SobolevParams(s, eps=1e-13))
    assert abs(complex(r.value) - shell_sum(q, float(s))) <= max(r.error, 0) + 1e-12


@given(st.data())
def test_inner_product_is_hermitian_and_linear(data):
    params = data.draw(params_st((2, 3)))
    f, g, h = (ShellFunction(data.draw(step_st(params))) for _ in range(3))
    sp = SobolevParams(data.draw(st.sampled_from((Fraction(-1), Fraction(0), Fraction(1), Fraction(2)))))
    fg_, gf_ = hs_inner(f, g, sp), hs_inner(g, f, sp)
    fg = ShellFunction(f.step + g.step)
    lhs, a, b = hs_inner(fg, h, sp), hs_inner(f, h, sp), hs_inner(g, h, sp)
    if all(r.exact for r in (fg_, gf_, lhs, a, b)):
        assert fg_.value == conj(gf_.value)
        assert lhs.value == simplify(a.value + b.value)
    else:
        tol = lhs.error + a.error + b.error + 1e-14
        assert abs(complex(fg_.value) - complex(gf_.value).conjugate()) <= fg_.error + gf_.error + 1e-14
        assert abs(complex(lhs.value) - complex(a.value) - complex(b.value)) <= tol
    assert complex(hs_norm2(f, sp).value).real >= 0


@given(st.data())
def test_weights_shift_the_exponent(data):
    # a kappa weight (1+|xi|^2)^(-s/2) on both sides turns H^s into L^2
    params = data.draw(params_st((2, 3)))
    s = data.draw(st.sampled_from((Fraction(1), Fraction(2), Fraction(-2))))
    f = data.draw(step_st(params))
    F = ShellFunction(f, ((0, -s / 2),))
    assert hs_norm2(F, SobolevParams(s)).value == hs_norm2(ShellFunction(f), SobolevParams(0)).value


def test_merge_weights_cancels():
    assert merge_weights(((0, Fraction(1, 2)), (1, 2)), ((0, Fraction(-1, 2)),)) == ((1, 2),)


def test_hs_gram_fast_path_matches_pairwise():
    params = field_params(3)
    s = Fraction(1)
    fs = [ShellFunction(indicator(Ball(FieldElement.monomial(params, d, -1), 0)), ((0, -s / 2),)) for d in range(3)]
    sp = SobolevParams(s)
    G = hs_gram(fs, sp)
    for a in range(3):
        for b in range(3):
            assert G[a][b] == hs_inner(fs[a], fs[b], sp).value


@pytest.mark.parametrize("q", (2, 3))
@pytest.mark.parametrize("s", (Fraction(-1), Fraction(-1, 2), Fraction(0), Fraction(1, 2), Fraction(1)))
@pytest.mark.parametrize("j", (-2, 0, 2))
def test_bracket_of_sobolev_haar_is_one(q, s, j):
    params = field_params(q)
    phi = sobolev_haar_scaling(params, s, j)
    sp = SobolevParams(s)
    D = Ball.ideal(params, 0)
    for cell in (D.children()[0], D.children()[-1]):
        for xi in (cell.center, cell.center + FieldElement.monomial(params, 1, 3)):
            assert bracket_series(phi, phi, sp, j, xi) == 1


def test_bracket_support_error():
    params = field_params(2)
    wide = ShellFunction(indicator(Ball.ideal(params, -2)))
    with pytest.raises(SupportError):
        bracket_series(wide, wide, SobolevParams(0), 0, FieldElement.zero(params), K=2)


@pytest.mark.parametrize("theta", (Fraction(1, 2), Fraction(1)))
def test_threshold_agrees_with_series_slope(theta):
    F = radial_fourier(make_example(1, field_params(2), theta=theta))
    s_star = membership_threshold(F).s_star
    for s in (s_star - Fraction(1, 4), s_star + Fraction(1, 4)):
        slope = series_slope(F, s, range(20, 41))
        assert (slope < 0) == hs_converges(F, s)


def test_float_backend_returns_complex():
    params = field_params(2)
    r = hs_norm2(ShellFunction(indicator(Ball.ideal(params, 0))), SobolevParams(Fraction(1, 2), "float", 1e-10))
    assert isinstance(r.value, complex) and not r.exact
    assert r.error <= 1e-10
    assert abs(r.value - shell_sum(2, 0.5)) <= 1e-10


def test_bad_backend():
    with pytest.raises(ValueError):
        SobolevParams(1, "quad")
