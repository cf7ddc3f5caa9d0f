from fractions import Fraction

import numpy as np
import pytest

from sumprod import incidence, oracle
from sumprod.errors import DomainError
from sumprod.fpcore import full_set, make_field, random_set


def test_triples_of_full_field(f5):
    assert incidence.collinear_triples(full_set(f5)) == 3625


def test_triples_of_single_point(f7, make_set):
    assert incidence.collinear_triples(make_set(f7, [3])) == 1


def test_triples_match_determinant_oracle(f5, f7, make_set):
    for A in (make_set(f5, [0, 1]), make_set(f7, [0, 2, 3, 6]), make_set(f7, [1, 5])):
        assert incidence.collinear_triples(A) == oracle.collinear_triples(A)


def test_quadruples_of_single_point(f7, make_set):
    A = make_set(f7, [0])
    assert incidence.collinear_quadruples(A, A, A, A) == 1


def test_quadruples_match_oracle(f5, make_set):
    A = make_set(f5, [0, 1])
    assert incidence.collinear_quadruples(A) == oracle.collinear_quadruples(A, A, A, A)
    B, C = make_set(f5, [1, 3]), make_set(f5, [2])
    assert incidence.collinear_quadruples(A, B, C, A) == oracle.collinear_quadruples(A, B, C, A)


def test_q_function_total_matches_quadruples():
    ctx = make_field(31)
    A, B, C, D = (random_set(ctx, n, seed=s) for n, s in ((5, 1), (4, 2), (6, 3), (4, 4)))
    table = incidence.q_function(A, B, C, D)
    assert table.total == incidence.collinear_quadruples(A, B, C, D)


def test_q_function_singletons(f7, make_set):
    S = make_set(f7, [2])
    table = incidence.q_function(S, S, S, S)
    assert table.finite_sum == 0
    assert table.bucket == 1


def test_line_through_handles_vertical_lines():
    assert incidence.line_through(7, (2, 1), (2, 5)) == (7, 2)
    assert incidence.line_through(7, (0, 1), (1, 3)) == (2, 1)
    with pytest.raises(DomainError):
        incidence.line_through(7, (1, 1), (1, 1))


def test_line_set_rejects_bad_slope(f7):
    with pytest.raises(DomainError):
        incidence.LineSet.of(f7, [(8, 0)])


def test_normalize_plane():
    assert incidence.normalize_plane(7, 2, 4, 0, 6) == (1, 2, 0, 3)
    with pytest.raises(DomainError):
        incidence.normalize_plane(7, 0, 0, 0, 1)


def test_one_point_on_one_plane(f7):
    P = incidence.PointSet3.of(f7, [(1, 2, 3)])
    planes = incidence.PlaneSet.of(f7, [(1, 1, 1, 6)])
    assert incidence.point_plane_incidences(P, planes) == 1


def test_all_points_against_all_planes():
    ctx = make_field(3)
    P = incidence.PointSet3.of(ctx, [(x, y, z) for x in range(3) for y in range(3) for z in range(3)])
    planes = incidence.PlaneSet.all_planes(ctx)
    assert len(planes) == 39
    assert incidence.point_plane_incidences(P, planes) == 39 * 9


def test_weighted_point_plane(f7):
    P = incidence.PointSet3.of(f7, [(0, 0, 0), (1, 0, 0)])
    planes = incidence.PlaneSet.of(f7, [(1, 0, 0, 0)])
    alpha = {(0, 0, 0): Fraction(1, 2), (1, 0, 0): Fraction(5)}
    beta = {(1, 0, 0, 0): Fraction(3)}
    assert incidence.point_plane_incidences(P, planes, alpha, beta) == Fraction(3, 2)


def test_point_plane_matches_oracle(f7, rng):
    P = incidence.PointSet3.of(f7, rng.integers(0, 7, size=(15, 3)).tolist())
    raw = rng.integers(0, 7, size=(20, 4))
    raw[~raw[:, :3].any(axis=1), 0] = 1
    planes = incidence.PlaneSet.of(f7, raw.tolist())
    assert incidence.point_plane_incidences(P, planes) == oracle.point_plane(P.points, planes.planes, 7)


def test_max_collinear(f7):
    P = incidence.PointSet3.of(f7, [(0, 0, 0), (1, 1, 1), (2, 2, 2), (0, 1, 0)])
    assert incidence.max_collinear(P) == 3


def test_point_plane_report_rows(f7, rng):
    P = incidence.PointSet3.of(f7, rng.integers(0, 7, size=(10, 3)).tolist())
    rows = incidence.point_plane_report(P, incidence.PlaneSet.all_planes(f7))
    assert [row.claim_ref for row in rows] == ["f:Misha+", "f:Misha+_a"]
    assert rows[1].main_term == Fraction(len(P) * 399, 7)


def test_design_gram_entries():
    rows = incidence.design_bound_check(3, np.zeros(40), np.ones(40))
    gram = rows[0]
    assert gram.verdict is True
    assert (gram.lhs, gram.rhs) == (13, 4)
    assert rows[1].lhs == 0


def test_design_bound_holds_on_random_weights(rng):
    n = len(incidence.projective_points(5))
    for _ in range(20):
        alpha = rng.standard_normal(n)
        alpha -= alpha.mean()
        rows = incidence.design_bound_check(5, alpha, rng.standard_normal(n), check_matrix=False)
        assert not [row for row in rows if row.failed]


def test_design_requires_mean_zero(rng):
    with pytest.raises(DomainError):
        incidence.design_bound_check(2, np.ones(15), np.ones(15))
    with pytest.raises(DomainError):
        incidence.design_matrix(11)


def test_point_line_counts(f5):
    F = full_set(f5)
    L = incidence.LineSet.through(f5, (1, 2))
    assert incidence.count_point_line(F, F, L) == 30
    assert incidence.count_point_line(F, F, incidence.LineSet.of(f5, [])) == 0


def test_point_line_matches_oracle(f101, rng):
    A, B = random_set(f101, 12, seed=1), random_set(f101, 17, seed=2)
    L = incidence.LineSet.random(f101, 300, rng)
    row = incidence.point_line_incidences(A, B, L)
    assert row.lhs == oracle.point_line(A, B, L.lines)
    assert row.main_term == Fraction(12 * 17 * 300, 101)


def test_triples_report_lower_bound(f101):
    rows = incidence.triples_report(random_set(f101, 10, seed=3))
    assert rows[0].claim_ref.startswith("t:Q_new")
    assert len(rows) == 3


def test_lines_from_points(f7):
    P = incidence.PointSet2.of(f7, [(0, 0), (1, 1), (2, 2), (0, 1)])
    assert incidence.lines_from_points(P).lines == ((0, 1), (1, 0), (4, 1), (7, 0))


def test_every_point_lies_on_p_plus_one_lines(f5):
    F = full_set(f5)
    lines = incidence.LineSet.all_lines(f5)
    assert len(lines) == 30
    assert incidence.count_point_line(F, F, lines) == 25 * 6


def test_q_table_of_one_set_is_symmetric(f13):
    A = random_set(f13, 5, seed=3)
    q = incidence.q_function(A)
    assert np.array_equal(q.table, q.table.T)
    assert int(q.table.sum()) + q.bucket == len(A) ** 4
    assert q.bucket == len(A) ** 3


def test_q_table_swapping_b_and_d_transposes(f13):
    A, B, C, D = (random_set(f13, n, seed=s) for n, s in ((4, 1), (5, 2), (4, 3), (3, 4)))
    assert np.array_equal(incidence.q_function(A, D, C, B).table, incidence.q_function(A, B, C, D).table.T)
