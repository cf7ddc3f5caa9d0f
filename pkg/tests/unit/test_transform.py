import numpy as np
import pytest

from sumprod.errors import DomainError
from sumprod.fpcore import SetFp, make_field, random_set
from sumprod.transform import (
    EXCLUDE,
    add_conv,
    add_corr,
    balanced,
    constant,
    cyclic_convolve,
    delta,
    dft,
    dft_naive,
    energy_fourier,
    from_values,
    identity_suite,
    indicator,
    mul_conv,
    zero,
)


def test_delta_transforms_to_constant(f13):
    coeffs = dft(delta(f13)).coeffs
    assert np.allclose(coeffs, np.ones(13))


def test_constant_transforms_to_point_mass(f13):
    coeffs = dft(constant(f13)).coeffs
    expected = np.zeros(13, dtype=complex)
    expected[0] = 13
    assert np.allclose(coeffs, expected, atol=1e-9)


def test_balanced_function_has_zero_mean(f101):
    f = balanced(random_set(f101, 17, seed=3))
    assert f.total() == 0
    assert abs(dft(f)[0]) < 1e-9


def test_chirp_transform_matches_naive():
    ctx = make_field(257)
    f = from_values(ctx, np.random.Generator(np.random.PCG64(5)).integers(-4, 5, size=257))
    assert np.allclose(dft(f, method="chirp").coeffs, dft_naive(f).coeffs, atol=1e-7)


def test_add_conv_of_small_sets(f5, make_set):
    A = make_set(f5, [0, 1])
    assert add_conv(indicator(A), indicator(A)).values == (1, 2, 1, 0, 0)


def test_add_corr_is_difference_count(f5, make_set):
    A = make_set(f5, [0, 2])
    assert add_corr(indicator(A), indicator(A)).values == (2, 0, 1, 1, 0)


def test_mul_conv_singletons(f5, f7, make_set):
    out = mul_conv(indicator(make_set(f5, [1])), indicator(make_set(f5, [2])))
    assert out.values == (0, 0, 0, 1, 0)
    out = mul_conv(indicator(make_set(f7, [2])), indicator(make_set(f7, [3])))
    assert out.values == (0, 0, 0, 0, 0, 0, 1)


def test_mul_conv_zero_policies(f5, make_set):
    A = indicator(make_set(f5, [0, 1]))
    tracked = mul_conv(A, A)
    assert tracked.values[0] == 3
    assert tracked.values[1] == 1
    assert mul_conv(A, A, EXCLUDE).values[0] == 0
    with pytest.raises(DomainError):
        mul_conv(A, A, "ignore")


def test_ntt_and_naive_convolution_agree():
    gen = np.random.Generator(np.random.PCG64(11))
    a = gen.integers(-50, 50, size=600).tolist()
    b = gen.integers(-50, 50, size=600).tolist()
    assert cyclic_convolve(a, b, method="ntt") == cyclic_convolve(a, b, method="naive")


def test_cyclic_convolve_rejects_unequal_lengths():
    with pytest.raises(DomainError):
        cyclic_convolve([1, 2], [1])


def test_functions_on_different_fields_do_not_mix(f5, f7):
    with pytest.raises(DomainError):
        add_conv(delta(f5), delta(f7))


def test_energy_fourier_agrees(f101):
    A = random_set(f101, 20, seed=1)
    B = random_set(f101, 30, seed=2)
    exact, spectral = energy_fourier(A, B)
    assert spectral == pytest.approx(exact, rel=1e-9)


def test_identity_suite_passes_for_random_functions():
    ctx = make_field(257)
    gen = np.random.Generator(np.random.PCG64(2))
    f = from_values(ctx, gen.integers(-3, 4, size=257))
    g = balanced(random_set(ctx, 40, seed=9))
    rows = identity_suite(f, g)
    assert {row.claim_ref for row in rows} >= {"F_Par", "svertka", "f:inverse", "f:energy_Fourier"}
    assert not [row for row in rows if row.failed]


def test_identity_suite_on_deltas(f7):
    rows = identity_suite(delta(f7), delta(f7))
    svertka = next(row for row in rows if row.claim_ref == "svertka")
    assert svertka.lhs == 1
    assert svertka.rhs == pytest.approx(1)


def test_set_on_wrong_field_is_rejected(f7):
    with pytest.raises(DomainError):
        SetFp(field=f7, elems=(7,))


def test_pointwise_arithmetic(f5):
    f = from_values(f5, [1, 2, 3, 4, 5])
    g = from_values(f5, [2, 0, 1, 0, 1], denom=2)
    assert f.pointwise(g).values == (2, 0, 3, 0, 5)
    assert f.pointwise(g).at(4) == 2.5
    assert (f - f).is_zero()
    assert (f + zero(f5)).values == f.values
