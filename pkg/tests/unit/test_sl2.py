from fractions import Fraction

import numpy as np
import pytest

from sumprod import oracle, sl2
from sumprod.errors import DomainError, GuardExceeded, IndependenceError
from sumprod.fpcore import full_set, make_field, nonzero_set, random_set
from sumprod.transform import balanced, from_values, indicator, zero


def test_identity_acts_trivially():
    e = sl2.identity(7)
    assert [e.act(z) for z in range(8)] == list(range(8))


def test_infinity_convention():
    w = sl2.element(7, 0, -1, 1, 0)
    assert w.act(0) == 7
    assert w.act(7) == 0


def test_action_is_compatible_with_products(rng):
    for _ in range(200):
        g, h = sl2.random_sl2(101, rng), sl2.random_sl2(101, rng)
        z = int(rng.integers(0, 102))
        assert (g * h).act(z) == g.act(h.act(z))


def test_group_axioms_at_five():
    elems = sl2.sl2_elements(make_field(5))
    assert len(elems) == sl2.sl2_order(5) == 120
    for g in elems:
        assert g * g.inverse() == sl2.identity(5)


def test_element_validation():
    with pytest.raises(DomainError):
        sl2.element(7, 1, 2, 2, 4)
    with pytest.raises(DomainError):
        sl2.SL2Elem(1, 0, 0, 2, 7)
    assert isinstance(sl2.element(7, 2, 0, 0, 1), sl2.GL2Elem)
    assert not isinstance(sl2.element(7, 2, 0, 0, 1), sl2.SL2Elem)


def test_families(f13, make_set):
    B1, B2 = make_set(f13, [1, 2, 3]), make_set(f13, [4, 5, 6])
    S = sl2.family("S", (B1, B2))
    assert len(S) == 9
    assert all(g.det == 1 for g in S.elements)
    assert len(sl2.family("Sprime", (B1,))) == 3
    with pytest.raises(DomainError):
        sl2.family("S", (B1,))


def test_rational_family_shape(f13, make_set):
    B = make_set(f13, [1, 2, 3, 5])
    S = sl2.family("Srational", (B,), r1=((0, 1), (1,)), r2=((0, 0, 1), (1,)))
    for b, g in zip(sorted(B), sorted(S.elements, key=lambda g: g.b)):
        assert g.as_tuple() == (1, b, b * b % 13, (1 + b**3) % 13)
    assert S.degree == 2


def test_rational_family_rejects_dependence(f13, make_set):
    with pytest.raises(IndependenceError) as excinfo:
        sl2.family("Srational", (make_set(f13, [1]),), r1=((0, 1), (0, 2)), r2=((0, 0, 1), (1,)))
    assert "p1" in str(excinfo.value)


def test_gl2_family_skips_degenerate(f7, make_set):
    one = make_set(f7, [1])
    S = sl2.family("GL2fam", (one, one, one))
    assert len(S) == 0
    assert S.skipped == 1


def test_gconv_examples(f5, rng):
    f = from_values(f5, rng.integers(-3, 4, size=5))
    expected = [f.at(x) for x in range(5)] + [Fraction(0)]
    assert sl2.gconv(sl2.delta(5), f) == expected
    uniform = sl2.gconv(sl2.haar(f5), f)
    total = sum(expected)
    assert uniform == [total / 6] * 6
    g = sl2.element(5, 1, 1, 0, 1)
    pulled = sl2.gconv(sl2.delta(5, g), f)
    assert pulled == [expected[g.inverse().act(x)] for x in range(6)]


def test_group_conv_examples(f5, f7):
    g, h = sl2.element(5, 1, 1, 0, 1), sl2.element(5, 0, 4, 1, 0)
    assert sl2.group_conv(sl2.delta(5, g), sl2.delta(5, h)).weights == {g * h: Fraction(1)}
    haar = sl2.haar(f5)
    assert sl2.group_conv(haar, haar).weights == haar.weights
    mu = sl2.random_symmetric_measure(f7, 4, seed=3)
    assert sl2.group_conv(mu, mu).total_mass == 1


def test_flatten_profile_examples(f5):
    assert sl2.flatten_profile(sl2.haar(f5), 2) == [0, 0, 0]
    point = sl2.flatten_profile(sl2.delta(5), 3)
    assert point == [1 - Fraction(1, 120)] * 4


def test_flatten_profile_decreases_for_generating_measure(f5):
    seed = 0
    while True:
        mu = sl2.random_symmetric_measure(f5, 2, seed)
        if sl2.is_generating(mu.support(), 5):
            break
        seed += 1
    profile = sl2.flatten_profile(mu, 5)
    assert all(b <= a for a, b in zip(profile, profile[1:]))
    assert profile[5] < profile[0]
    rows = sl2.flatten_rows(profile, 5)
    assert not [row for row in rows if row.failed]


def test_flatten_profile_matches_oracle(f5):
    mu = sl2.random_symmetric_measure(f5, 2, seed=11)
    weights = {g.as_tuple(): w for g, w in mu.weights.items()}
    assert sl2.flatten_profile(mu, 2) == oracle.flatten(weights, 5, 2)


def test_flatten_profile_rejects_bad_measures(f5):
    g = sl2.element(5, 1, 1, 0, 1)
    with pytest.raises(DomainError):
        sl2.flatten_profile(sl2.delta(5, g), 1)
    with pytest.raises(DomainError):
        sl2.flatten_profile(sl2.GroupFn(5, {sl2.identity(5): Fraction(1, 2)}), 1)


def test_tripling_examples(f13):
    unipotent = [sl2.element(13, 1, b, 0, 1) for b in range(13)]
    assert sl2.tripling(unipotent).lhs == 13
    assert sl2.tripling([sl2.identity(13)]).lhs == 1
    mu = sl2.random_symmetric_measure(f13, 10, seed=1)
    row = sl2.tripling(mu.support())
    assert row.lhs == oracle.tripling([g.as_tuple() for g in mu.support()], 13)
    assert row.lhs > len(mu)


def test_detectors(f7):
    upper = [sl2.element(7, 1, b, 0, 1) for b in (1, 2)] + [sl2.element(7, 3, 1, 0, 5)]
    assert sl2.borel_detector(upper) == 7
    assert not sl2.unipotent_detector(upper)
    assert sl2.unipotent_detector(upper[:2])
    torus = [sl2.element(7, 2, 0, 0, 4)]
    assert sl2.dihedral_detector(torus)
    assert sl2.least_nonresidue(f7) == 3


def test_coset_escape_bounds(f13, make_set):
    S = sl2.family("S", (make_set(f13, [1, 2, 3]), make_set(f13, [4, 7])))
    rows = sl2.coset_escape(S)
    assert [row.claim_ref for row in rows] == ["f:intersection", "f:intersection+"]
    assert all(row.verdict for row in rows)


def test_coset_escape_prime_family_is_reported(f7, make_set):
    S = sl2.family("Sprime", (make_set(f7, [1, 2, 3, 4]),))
    rows = sl2.coset_escape(S)
    assert [row.kind for row in rows] == ["RATIO", "RATIO", "ASSERT"]
    violation = rows[-1]
    assert violation.claim_ref == "f:intersection fails for S'"
    assert violation.verdict
    assert violation.lhs == 4
    assert violation.rhs == 2.0


def test_coset_escape_single_prime_element_has_no_violation_row(f7, make_set):
    rows = sl2.coset_escape(sl2.family("Sprime", (make_set(f7, [3]),)))
    assert all(row.kind == "RATIO" for row in rows)


def test_coset_escape_empty_family(f7, make_set):
    one = make_set(f7, [1])
    rows = sl2.coset_escape(sl2.family("GL2fam", (one, one, one)))
    assert all(row.lhs == 0 for row in rows)


def test_cf_count_examples(f7, make_set):
    result = sl2.cf_count(nonzero_set(f7), 1)
    assert list(result.value) == [0, 1, 1, 1, 1, 1, 1, 0]
    result = sl2.cf_count(make_set(f7, [0, 2]), 1)
    assert result.value[7] == 1
    assert result.value[4] == 1


def test_cf_count_mass_and_oracle():
    ctx = make_field(31)
    A = random_set(ctx, 6, seed=2)
    result = sl2.cf_count(A, 3)
    assert sum(result.value) == 6**3
    assert list(result.value) == oracle.cf_counts(A, 3)
    assert not [row for row in result.rows if row.failed]


def test_cf_count_needs_positive_k(f7, make_set):
    with pytest.raises(DomainError):
        sl2.cf_count(make_set(f7, [1]), 0)


def test_action_count_examples(f7, make_set):
    A = make_set(f7, [1, 2, 5])
    S = sl2.family("Sprime", (make_set(f7, [0]),))
    assert sl2.action_count(S, zero(f7), A, depth=0).value == 0
    identity_family = sl2.MatrixFamily("S", 7, (), (sl2.identity(7),))
    assert sl2.action_count(identity_family, A, A, depth=0).value == 3


def test_action_count_matches_oracle(f13, rng):
    B = random_set(f13, 4, seed=5)
    S = sl2.family("S", (B, B))
    f1 = from_values(f13, rng.integers(-2, 3, size=13))
    f2 = from_values(f13, rng.integers(-2, 3, size=13))
    result = sl2.action_count(S, f1, f2)
    assert result.value == oracle.action_count([g.as_tuple() for g in S.elements], f1.values, f2.values, 13)
    assert "flattening depth" in result.rows[0].note or "unmeasured" in result.rows[0].note


def test_inverse_diff_examples(f7, make_set):
    one = make_set(f7, [1])
    assert sl2.inverse_diff_count(one, one, 1).value == 0
    F = nonzero_set(f7)
    assert sl2.inverse_diff_count(F, F, 1).value == 5
    with pytest.raises(DomainError):
        sl2.inverse_diff_count(F, F, 0)


def test_inverse_diff_with_shift_set(f101):
    A1, A2, B = random_set(f101, 20, seed=1), random_set(f101, 25, seed=2), random_set(f101, 10, seed=3)
    result = sl2.inverse_diff_count(A1, A2, 3, B)
    assert result.value == oracle.inverse_diff(A1, A2, 3)
    assert [row.claim_ref for row in result.rows] == ["f:1/A", "f:1/A_energy"]


def test_poly_shift_examples(f13, make_set):
    one = make_set(f13, [2])
    assert sl2.poly_shift_count(one, make_set(f13, [5]), (0, 1), (0, 1)).value == (1, 1)
    F = full_set(f13)
    collisions, image = sl2.poly_shift_count(F, F, (0, 1), (0, 1)).value
    assert (collisions, image) == oracle.poly_shift(F, F, (0, 1), (0, 1))
    with pytest.raises(DomainError):
        sl2.poly_shift_count(F, F, (3,), (0, 1))


def test_gl2_image_examples(f7, make_set):
    one = make_set(f7, [1])
    assert sl2.gl2_image(make_set(f7, [0]), one, one, make_set(f7, [2]), escape=False).size == 1
    result = sl2.gl2_image(full_set(f7), make_set(f7, [1]), make_set(f7, [2]), make_set(f7, [4]), escape=False)
    assert result.size == 7
    assert result.dets == {2: 1}


def test_gl2_image_leaves_out_singular_matrices(f7, make_set):
    zero, one = make_set(f7, [0]), make_set(f7, [1])
    result = sl2.gl2_image(zero, one, one, one, escape=False)
    assert (result.size, result.degenerate, result.dets) == (0, 1, {})
    assert oracle.gl2_image(zero, one, one, one) == 0
    mixed = sl2.gl2_image(zero, one, one, make_set(f7, [1, 2]), escape=False)
    assert (mixed.size, mixed.degenerate, mixed.dets) == (1, 1, {1: 1})
    assert oracle.gl2_image(zero, one, one, make_set(f7, [1, 2])) == 1


def test_gl2_image_matches_oracle(f101):
    A, B1, B2, B3 = (random_set(f101, n, seed=s) for n, s in ((8, 1), (3, 2), (3, 3), (4, 4)))
    assert sl2.gl2_image(A, B1, B2, B3, escape=False).size == oracle.gl2_image(A, B1, B2, B3)


def test_frobenius_inequality(f5, rng):
    f = balanced(random_set(f5, 2, seed=1))
    for _ in range(20):
        F = sl2.random_symmetric_measure(f5, int(rng.integers(1, 4)), int(rng.integers(2**31)))
        phi = from_values(f5, rng.integers(-3, 4, size=5))
        assert not sl2.frobenius_check(F, f, phi)[0].failed


def test_frobenius_power_iteration(f7):
    f = balanced(random_set(f7, 3, seed=4))
    rows = sl2.frobenius_check(None, f, mode="power-iteration")
    assert not [row for row in rows if row.failed]


def test_frobenius_needs_mean_zero(f5):
    with pytest.raises(DomainError):
        sl2.frobenius_check(sl2.delta(5), indicator(random_set(f5, 2, seed=1)), zero(f5))


def test_dense_group_guard():
    with pytest.raises(GuardExceeded):
        sl2.dense_group(17)


def test_measured_depth_of_generating_family(f7, make_set):
    S = sl2.family("S", (make_set(f7, [1, 2, 3]), make_set(f7, [2, 4])))
    depth = sl2.measured_depth(list(S.elements))
    assert depth is None or 0 <= depth <= 3
    assert sl2.measured_depth([]) is None


def test_gram_trace(f5):
    f = balanced(random_set(f5, 2, seed=2))
    K = sl2.gram_matrix(f)
    assert int(np.trace(K)) == 120 * sum(v * v for v in f.values)


def test_module_level_group_operations():
    g, h = sl2.element(11, 2, 3, 1, 2), sl2.element(11, 1, 4, 0, 1)
    assert sl2.sl2_mul(g, h) == g * h
    assert sl2.sl2_mul(g, sl2.sl2_inv(g)) == sl2.identity(11)
    assert sl2.act(g, 11) == 2


def test_fixed_points_and_indicator():
    u = sl2.element(7, 1, 1, 0, 1)
    assert sl2.fixed_points(u) == [7]
    assert sl2.fixed_points(sl2.identity(7)) == list(range(8))
    F = sl2.indicator_fn([u, u.inverse()])
    assert F.is_symmetric()
    assert F.total_mass == 2
    with pytest.raises(DomainError):
        sl2.indicator_fn([])
