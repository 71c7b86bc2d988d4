import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ultrawave.cyclotomic import abs2, simplify
from ultrawave.gfq import field_params
from ultrawave.localfield import Ball, FieldElement, lam
from ultrawave.mra import (
    PreconditionError,
    ScalingFamily,
    check_filter_bank,
    conv_packet_gram,
    filter_matrix,
    filter_value,
    make_haar_bank,
    packet_freq_product,
    packet_freq_recursive,
    packet_gram,
    packet_time_recursive,
    perturb_bank,
    projection_demo,
    qadic_digits,
    random_unitary_bank,
    sequence_identity,
    split_sequence_system,
    wavelet_packet,
)
from ultrawave.sobolev import ShellFunction, SobolevParams, hs_norm2
from ultrawave.stepfn import indicator, sf_dilate, sf_fourier, sf_translate


@given(st.integers(0, 10**6), st.sampled_from((2, 3, 4, 9)))
def test_qadic_digits_reconstruct(n, q):
    digits = qadic_digits(n, q)
    assert sum(d * q**i for i, d in enumerate(digits)) == n
    assert all(0 <= d < q for d in digits)
    assert not digits or digits[-1] != 0


def test_haar_taps_q2():
    bank = make_haar_bank(field_params(2))
    h = Fraction(1, 2)
    assert bank.taps == {(0, 0): h, (1, 0): h, (0, 1): h, (1, 1): -h}


def test_haar_low_pass_is_one_at_zero():
    for q in (2, 3, 4):
        params = field_params(q)
        bank = make_haar_bank(params)
        zero = FieldElement.zero(params)
        assert filter_value(bank, 0, zero) == 1
        assert all(filter_value(bank, l, zero) == 0 for l in range(1, q))


def numeric_unitarity_residual(bank, T):
    params = bank.params
    q = params.q
    worst = 0.0
    for n in range(q**T):
        xi = lam(n, params).shift(T)  # runs over the level-T cosets of D
        M = np.array([[complex(v) for v in row] for row in filter_matrix(bank, xi)])
        worst = max(worst, np.abs(M @ M.conj().T - np.eye(q)).max())
    return worst


@pytest.mark.parametrize("q", (2, 3, 4))
def test_haar_bank_passes(q):
    bank = make_haar_bank(field_params(q))
    rep = check_filter_bank(bank, 3)
    assert rep.passed and rep.cosets == q**3
    assert numeric_unitarity_residual(bank, 2) < 1e-12


@given(st.integers(0, 10**6), st.sampled_from((2, 3)))
def test_random_unitary_banks_pass(seed, q):
    bank = random_unitary_bank(field_params(q), random.Random(seed))
    assert check_filter_bank(bank, 2).passed
    assert numeric_unitarity_residual(bank, 2) < 1e-12


@pytest.mark.parametrize("q", (2, 3))
def test_perturbed_bank_fails(q):
    bank = perturb_bank(make_haar_bank(field_params(q)))
    rep = check_filter_bank(bank, 2)
    assert not rep.passed and not rep.shift_orthonormal
    assert rep.shift_orthonormal_residual > 0
    assert numeric_unitarity_residual(bank, 2) > 1e-3


def test_sequence_identity_haar():
    bank = make_haar_bank(field_params(3))
    assert sequence_identity(bank, 1, 1, 0) == Fraction(1, 3)
    assert sequence_identity(bank, 1, 2, 0) == 0
    assert sequence_identity(bank, 0, 0, 1) == 0


@pytest.mark.parametrize("q", (2, 3))
def test_recursion_equals_product(q):
    bank = make_haar_bank(field_params(q))
    for n in range(q**3):
        d = len(qadic_digits(n, q))
        assert packet_freq_recursive(bank, n) == packet_freq_product(bank, n, pad=0) or d == 0
        assert packet_freq_product(bank, n, pad=2) == packet_freq_product(bank, n)


@pytest.mark.parametrize("q", (2, 3))
@pytest.mark.parametrize("kind", ("haar", "random"))
def test_time_and_frequency_constructions_agree(q, kind):
    params = field_params(q)
    bank = make_haar_bank(params) if kind == "haar" else random_unitary_bank(params, random.Random(q))
    for n in range(q**2):
        assert sf_fourier(packet_time_recursive(bank, n)) == packet_freq_recursive(bank, n)


@pytest.mark.parametrize("j", (-1, 0, 1))
def test_packet_matches_time_formula(j):
    # s = 0: inverse transform of w^_{j,k,n} is q^(j/2) w_n(t^-j x - lambda(k))
    params = field_params(3)
    bank = make_haar_bank(params)
    fam = ScalingFamily(params, 0)
    for n, k in ((1, 0), (4, 2), (7, 5)):
        w = wavelet_packet(bank, fam, n, j, k).freq
        assert w.half_power == -j
        time = sf_dilate(sf_translate(packet_time_recursive(bank, n), lam(k, params)), -j)
        assert w.step.inverse_fourier() == time.scale(Fraction(3) ** j)


@pytest.mark.parametrize("s", (Fraction(-1, 2), Fraction(1)))
@pytest.mark.parametrize("j", (-1, 1))
def test_packet_gram_is_identity_q2(s, j):
    params = field_params(2)
    G = packet_gram(make_haar_bank(params), ScalingFamily(params, s), j, 4, 4, SobolevParams(s))
    assert all(G[a][b] == (a == b) for a in range(16) for b in range(16))


def test_packet_gram_random_bank():
    params = field_params(2)
    bank = random_unitary_bank(params, random.Random(7))
    s = Fraction(1, 2)
    G = packet_gram(bank, ScalingFamily(params, s), 0, 4, 2, SobolevParams(s))
    assert all(G[a][b] == (a == b) for a in range(8) for b in range(8))


def test_packet_norms_float_backend():
    params = field_params(3)
    bank = make_haar_bank(params)
    s = Fraction(1, 3)
    w = wavelet_packet(bank, ScalingFamily(params, s), 5, 1, 2).freq
    r = hs_norm2(w, SobolevParams(s, "float", 1e-9))
    assert abs(r.value - 1) < 1e-9


@given(st.integers(0, 7), st.integers(0, 7), st.integers(0, 3), st.integers(0, 3), st.sampled_from((Fraction(-1), Fraction(1, 2))))
def test_convolution_form(n, m, k, l, s):
    bank = make_haar_bank(field_params(2))
    assert conv_packet_gram(bank, 0, n, m, k, l, SobolevParams(s)) == (1 if (n, k) == (m, l) else 0)


@pytest.mark.parametrize("q", (2, 3))
def test_split_sequences(q):
    params = field_params(q)
    assert split_sequence_system(make_haar_bank(params), K=4).orthonormal
    assert split_sequence_system(random_unitary_bank(params, random.Random(3)), K=4).orthonormal
    assert not split_sequence_system(perturb_bank(make_haar_bank(params)), K=4).orthonormal


def test_split_sequences_in_rotated_basis():
    # any orthonormal e_t works; use a signed permutation
    bank = make_haar_bank(field_params(2))
    e = {t: {(t + 3) % 10: (-1) ** t} for t in range(10)}
    assert split_sequence_system(bank, e, K=4).orthonormal


def test_projections_increase_to_the_norm():
    params = field_params(2)
    fam = ScalingFamily(params, 0)
    h = ShellFunction(indicator(Ball.ideal(params, -2), Fraction(1, 4)))
    norms = projection_demo(fam, h, range(0, 4))
    assert all(a <= b for a, b in zip(norms, norms[1:]))
    assert norms[-1] == hs_norm2(h, SobolevParams(0)).value


def test_packet_limits_and_preconditions():
    params = field_params(2)
    bank = make_haar_bank(params)
    fam = ScalingFamily(params, 0)
    with pytest.raises(ValueError):
        wavelet_packet(bank, fam, 2**6, 0, 0)
    with pytest.raises(ValueError):
        wavelet_packet(bank, fam, 0, 5, 0)
    with pytest.raises(PreconditionError):
        wavelet_packet(perturb_bank(bank), fam, 1, 0, 0, check=True)


def test_bank_hashable_and_json():
    bank = make_haar_bank(field_params(3))
    assert hash(bank) == hash(make_haar_bank(field_params(3)))
    d = bank.to_json()
    assert d["name"] == "haar" and len(d["taps"]) == 9
    assert abs2(simplify(bank.taps[(1, 1)])) == Fraction(1, 9)
