from fractions import Fraction

import pytest

from sumprod.decompose import bw_decompose, misha_pigeonhole, verify_bw
from sumprod.errors import DomainError
from sumprod.fpcore import random_set


def test_pigeonhole_with_zero_shift(f101, make_set):
    A = random_set(f101, 12, seed=1)
    found = misha_pigeonhole(A, make_set(f101, [0]))
    assert found.A_star == A
    assert found.q == 1
    assert found.sigma == len(A)
    assert found.sandwich


def test_pigeonhole_picks_heaviest_class(f101, make_set):
    A = make_set(f101, [0, 1, 2, 3])
    found = misha_pigeonhole(A, make_set(f101, [100, 0, 1]))
    assert found.A_star == A
    assert (found.q, found.levels, found.sigma) == (2, 1, 10)
    assert found.sandwich


def test_pigeonhole_needs_symmetric_shift(f7, make_set):
    with pytest.raises(DomainError):
        misha_pigeonhole(make_set(f7, [1, 2]), make_set(f7, [1]))


def test_decomposition_of_random_set(f101):
    A = random_set(f101, 20, seed=4)
    X = random_set(f101, 15, seed=5)
    B, C, cert = bw_decompose(A, 2)
    assert cert.parts_ok
    assert len(B) + len(C) == len(A)
    rows = verify_bw(cert, X)
    assert [row.claim_ref for row in rows if row.failed] == []


def test_decomposition_of_progression_moves_elements(f101, make_set):
    A = make_set(f101, range(20))
    B, C, cert = bw_decompose(A, Fraction(5, 2))
    assert cert.iterations
    assert len(C) > 0
    assert all(it.sandwich for it in cert.iterations)
    rows = verify_bw(cert, random_set(f101, 10, seed=1))
    assert not [row for row in rows if row.failed]


def test_rerun_with_original_scale_is_stable(f101, make_set):
    A = make_set(f101, range(20))
    B, _, _ = bw_decompose(A, Fraction(5, 2))
    again, moved, cert = bw_decompose(B, Fraction(5, 2), scale=len(A))
    assert again == B
    assert len(moved) == 0
    assert cert.iterations == []


def test_m_must_be_in_range(f101):
    A = random_set(f101, 20, seed=4)
    with pytest.raises(DomainError):
        bw_decompose(A, Fraction(1, 2))
    with pytest.raises(DomainError):
        bw_decompose(A, 3)
