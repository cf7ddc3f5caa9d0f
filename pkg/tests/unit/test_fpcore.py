from pathlib import Path

import pytest

from sumprod.errors import DomainError, FieldError
from sumprod.fpcore import (
    SetFp,
    coset,
    factorize,
    gen_set,
    inverse_set,
    is_prime,
    legendre,
    make_field,
    neg_set,
    mul_char,
    null_combination,
    parse_rational,
    parse_set_spec,
    poly_degree,
    poly_eval,
    poly_mul,
    productset,
    quadratic_residues,
    subgroup,
    sumset,
)


def test_primitive_roots_are_least():
    assert make_field(5).g == 2
    assert make_field(7).g == 3
    assert make_field(13).g == 2


def test_make_field_rejects_non_primes():
    with pytest.raises(FieldError) as excinfo:
        make_field(4)
    assert "not an odd prime" in str(excinfo.value)
    with pytest.raises(FieldError):
        make_field(2)
    with pytest.raises(FieldError):
        make_field(1_048_583)


def test_dlog_inverts_power(f13):
    for x in range(1, 13):
        assert f13.power(f13.log(x)) == x
    with pytest.raises(DomainError):
        f13.log(0)


def test_factorize_and_primality():
    assert factorize(360) == {2: 3, 3: 2, 5: 1}
    assert is_prime(1009)
    assert not is_prime(1001)


def test_subgroups(f5, f7):
    assert subgroup(f7, 1).elems == (1,)
    assert subgroup(f7, 3).elems == (1, 2, 4)
    assert subgroup(f5, 4).elems == (1, 2, 3, 4)
    with pytest.raises(DomainError):
        subgroup(f7, 4)


def test_coset_and_residues(f7):
    assert coset(f7, 3, 3).elems == (3, 5, 6)
    assert quadratic_residues(f7).elems == (1, 2, 4)
    with pytest.raises(DomainError):
        coset(f7, 3, 0)


def test_legendre_symbol(f7):
    assert legendre(f7, 0) == 0
    assert legendre(f7, 2) == 1
    assert legendre(f7, 3) == -1


def test_quadratic_character_matches_legendre(f13):
    chi = mul_char(f13, 2)
    for x in range(13):
        assert chi(x) == pytest.approx(legendre(f13, x))


def test_mul_char_order_must_divide(f7):
    with pytest.raises(DomainError):
        mul_char(f7, 4)


def test_set_normalisation(f7):
    A = SetFp.of(f7, [9, 2, 16, -5])
    assert A.elems == (2,)
    with pytest.raises(DomainError):
        SetFp(field=f7, elems=(3, 1))


def test_sumset_productset_and_inverses(f7, make_set):
    A = make_set(f7, [0, 1, 3])
    assert sumset(A, A).elems == (0, 1, 2, 3, 4, 6)
    assert productset(A, A).elems == (0, 1, 2, 3)
    assert inverse_set(A).elems == (1, 5)


def test_interval_spec():
    assert gen_set(parse_set_spec("interval:p=11,lo=0,hi=3")).elems == (0, 1, 2, 3)


def test_explicit_spec_deduplicates():
    assert gen_set(parse_set_spec("explicit:p=11,{3,3,7}")).elems == (3, 7)


def test_random_spec_is_deterministic():
    first = gen_set(parse_set_spec("random:p=11,n=4,seed=1"))
    second = gen_set(parse_set_spec("random:p=11,n=4,seed=1"))
    assert first == second
    assert len(first) == 4


def test_random_spec_rejects_oversize():
    with pytest.raises(DomainError):
        gen_set(parse_set_spec("random:p=11,n=12,seed=1"))


@pytest.mark.parametrize(
    "text",
    ["interval", "nope:p=7", "interval:p=7,lo=x,hi=2", "interval:lo=1,hi=2", "interval:p=7,colour=3"],
)
def test_malformed_specs_are_rejected(text):
    with pytest.raises(DomainError):
        gen_set(parse_set_spec(text))


def test_file_spec(tmp_path: Path):
    path = tmp_path / "set.txt"
    path.write_text("# residues\n1\n5\n\n12\n", encoding="utf-8")
    A = gen_set(parse_set_spec(f"file:p=11,path={path}"))
    assert A.elems == (1, 5)


def test_file_spec_reports_bad_line(tmp_path: Path):
    path = tmp_path / "set.txt"
    path.write_text("1\ntwo\n", encoding="utf-8")
    with pytest.raises(DomainError) as excinfo:
        gen_set(parse_set_spec(f"file:p=11,path={path}"))
    assert ":2:" in str(excinfo.value)


def test_polynomial_helpers():
    assert poly_eval((1, 0, 1), 3, 7) == 3
    assert poly_degree((5, 7, 0), 7) == 0
    assert poly_mul((1, 1), (1, 6), 7) == (1, 0, 6)
    assert parse_rational(((0, 1), (1,))) == ((0, 1), (1,))
    with pytest.raises(DomainError):
        parse_rational(((0, 1),))


def test_null_combination_finds_dependence():
    assert null_combination([(1, 0), (0, 1)], 7) is None
    combo = null_combination([(1, 2), (2, 4)], 7)
    assert combo is not None
    assert all((combo[0] * a + combo[1] * b) % 7 == 0 for a, b in zip((1, 2), (2, 4)))


def test_set_algebra(f7, make_set):
    A, B = make_set(f7, [0, 1, 3]), make_set(f7, [3, 4])
    assert neg_set(A).elems == (0, 4, 6)
    assert A.intersection(B).elems == (3,)
    assert A.difference(B).elems == (0, 1)
    assert A.union(B).elems == (0, 1, 3, 4)
    assert make_set(f7, [0, 2, 5]).is_symmetric()
