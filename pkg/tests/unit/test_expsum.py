import math

import numpy as np
import pytest

from sumprod import expsum, oracle
from sumprod.errors import DomainError
from sumprod.fpcore import full_set, make_field, mul_char, neg_set, random_set
from sumprod.transform import balanced, delta


def test_trilinear_full_field(f7):
    F = full_set(f7)
    result = expsum.trilinear_sum(F, F, F)
    assert result.value == pytest.approx(7 * 13, abs=1e-9)
    assert result.term_count == 343


def test_trilinear_with_zero_set(f101, make_set):
    X, Y = random_set(f101, 7, seed=1), random_set(f101, 9, seed=2)
    assert expsum.trilinear_sum(X, Y, make_set(f101, [0])).value == pytest.approx(63)


def test_trilinear_matches_triple_loop(f101, rng):
    X, Y, Z = (random_set(f101, n, seed=s) for n, s in ((6, 1), (8, 2), (5, 3)))
    alpha = np.exp(2j * np.pi * rng.random(6))
    value = expsum.trilinear_sum(X, Y, Z, alpha=alpha).value
    assert value == pytest.approx(oracle.trilinear(X, Y, Z, alpha, None, None), rel=1e-6)


def test_weights_must_be_bounded(f7, make_set):
    X = make_set(f7, [1, 2])
    with pytest.raises(DomainError):
        expsum.trilinear_sum(X, X, X, alpha=[2.0, 0.0])
    with pytest.raises(DomainError):
        expsum.trilinear_sum(X, X, X, beta=[1.0])


def test_bilinear_weights(f101, make_set):
    X, Y, Z = random_set(f101, 5, seed=4), random_set(f101, 6, seed=5), random_set(f101, 4, seed=6)
    zero = expsum.trilinear_bilinear_sum(X, Y, Z, rho=np.zeros((5, 6)))
    assert zero.value == 0
    ones = expsum.trilinear_bilinear_sum(X, Y, Z)
    assert ones.value == pytest.approx(expsum.trilinear_sum(X, Y, Z).value, abs=1e-9)


def test_bilinear_matches_oracle(rng):
    ctx = make_field(31)
    X, Y, Z = (random_set(ctx, n, seed=s) for n, s in ((4, 7), (5, 8), (3, 9)))
    rho, sigma, tau = rng.choice([-1.0, 1.0], (4, 5)), rng.choice([-1.0, 1.0], (4, 3)), rng.choice([-1.0, 1.0], (5, 3))
    fast = expsum.trilinear_bilinear_sum(X, Y, Z, rho, sigma, tau).value
    assert fast == pytest.approx(oracle.trilinear_bilinear(X, Y, Z, rho, sigma, tau), abs=1e-9)


def test_multilinear_examples(make_set):
    ctx = make_field(31)
    A, B, C = random_set(ctx, 4, seed=1), random_set(ctx, 5, seed=2), random_set(ctx, 3, seed=3)
    assert expsum.multilinear_sum(A, B, make_set(ctx, [0]), C).value == pytest.approx(60)
    assert expsum.multilinear_sum(A, B, C).value == pytest.approx(expsum.trilinear_sum(A, B, C).value, abs=1e-9)
    D = random_set(ctx, 3, seed=4)
    assert expsum.multilinear_sum(A, B, C, D).value == pytest.approx(oracle.multilinear(A, B, C, D), rel=1e-6)


def test_multilinear_arity(f7, make_set):
    A = make_set(f7, [1])
    with pytest.raises(DomainError):
        expsum.multilinear_sum(A, A)
    with pytest.raises(DomainError):
        expsum.multilinear_sum(A, A, A, A, A, A)


def test_bound_exponents():
    assert expsum.bound_exponent(1.0).exponent == pytest.approx(1 / 28)
    assert expsum.bound_exponent(0.5, r=4, variant="four-set").exponent == pytest.approx(0.5 / (16 * 25))
    assert expsum.bound_exponent(8.0).exponent == pytest.approx(2.0)
    k_free = expsum.bound_exponent(0.5, variant="k-free")
    assert k_free.k == math.ceil(math.log2(math.ceil(2 * math.log2(16))))
    with pytest.raises(DomainError):
        expsum.bound_exponent(0.0)
    with pytest.raises(DomainError):
        expsum.bound_exponent(1.0, variant="five-set")


def test_product_delta(f101):
    A = random_set(f101, 101, seed=1)
    assert expsum.product_delta(A, A) == pytest.approx(1.0)
    with pytest.raises(DomainError):
        expsum.product_delta(A, random_set(f101, 0, seed=1))


def test_instance_delta():
    assert expsum.instance_delta(10.0, 100.0, 10) == pytest.approx(1.0)
    assert expsum.instance_delta(0.0, 100.0, 10) == math.inf


def test_ps_new_ratio_rows(f101):
    rows = expsum.ps_new_ratio(*(random_set(f101, n, seed=n) for n in (12, 9, 7)))
    assert [row.claim_ref for row in rows] == ["c:PS_new (S)", "c:PS_new (T)"]


def test_special_sums_empty_b(f7, make_set):
    result = expsum.special_sums("inv-shift-e", make_set(f7, [1, 2]), make_set(f7, [3]), make_set(f7, []))
    assert result.value == 0
    assert result.skipped == 0


def test_special_sums_single_terms(f7, make_set):
    B = make_set(f7, [2])
    result = expsum.special_sums("inv-shift-e", delta(f7, 1), delta(f7, 4), B)
    assert abs(result.value) == pytest.approx(1.0)
    chi = mul_char(f7, 2)
    result = expsum.special_sums("inv-shift-chi", delta(f7, 1), delta(f7, 4), B, char=chi)
    assert abs(result.value) == pytest.approx(1.0)


def test_special_sums_skip_vanishing_denominators(f7, make_set):
    result = expsum.special_sums("inv-shift-e", delta(f7, 3), delta(f7, 1), make_set(f7, [4]))
    assert result.skipped == 1
    assert result.value == 0


def test_special_sums_need_a_character(f7, make_set):
    with pytest.raises(DomainError):
        expsum.special_sums("rational-chi", delta(f7, 1), delta(f7, 1), make_set(f7, [1]),
                            r1=((0, 1), (1,)), r2=((0, 0, 1), (1,)))


def test_special_sums_match_oracle(rng):
    ctx = make_field(101)
    f, g = balanced(random_set(ctx, 9, seed=1)), balanced(random_set(ctx, 7, seed=2))
    B = random_set(ctx, 3, seed=3)
    chi = mul_char(ctx, 2)
    r1, r2 = ((0, 1), (1,)), ((0, 0, 1), (1,))
    for kind in expsum.SPECIAL_KINDS:
        fast = expsum.special_sums(kind, f, g, B, char=chi, r1=r1, r2=r2)
        slow, skipped = oracle.special(kind, f.as_float().tolist(), g.as_float().tolist(), B, char=chi, r1=r1, r2=r2)
        assert fast.value == pytest.approx(slow, rel=1e-6, abs=1e-6)
        assert fast.skipped == skipped


def test_special_sums_report(f7, make_set):
    B = make_set(f7, [2])
    f, g = delta(f7, 1), delta(f7, 4)
    row = expsum.special_sums_report(expsum.special_sums("inv-shift-e", f, g, B), f, g, B, delta=0.25)
    assert row.kind == "RATIO"
    assert "f is not mean-zero" in row.note


def test_sums_respect_trivial_bound(f101):
    X, Y, Z = (random_set(f101, n, seed=s) for n, s in ((6, 1), (8, 2), (5, 3)))
    result = expsum.trilinear_sum(X, Y, Z)
    assert result.abs_bound == 240
    assert result.within_trivial()


def test_negating_every_set_conjugates_the_sum(f101):
    X, Y, Z = (random_set(f101, n, seed=s) for n, s in ((7, 4), (9, 5), (6, 6)))
    value = expsum.trilinear_sum(X, Y, Z).value
    negated = expsum.trilinear_sum(neg_set(X), neg_set(Y), neg_set(Z)).value
    assert abs(negated - value.conjugate()) < 1e-9
