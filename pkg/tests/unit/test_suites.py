import pytest

from sumprod import suites
from sumprod.errors import DomainError


def test_unknown_suite_is_rejected():
    with pytest.raises(DomainError) as excinfo:
        suites.run_suite("nope")
    assert "identities" in str(excinfo.value)


def test_suite_names_end_with_all():
    names = suites.suite_names()
    assert names[-1] == "all"
    assert set(names[:-1]) == set(suites.SUITES)


def test_identities_suite_small():
    report = suites.run_suite("identities", small=True)
    assert report.ok
    assert report.metadata["prng"] == "numpy.random.PCG64"
    assert {row.suite for row in report.rows} == {"identities"}


def test_suites_are_reproducible():
    first = suites.run_suite("identities", p=101, seed=3, small=True)
    second = suites.run_suite("identities", p=101, seed=3, small=True)
    assert [row.as_dict() for row in first.rows] == [row.as_dict() for row in second.rows]


def test_design_suite_small():
    assert suites.run_suite("design", small=True).ok


def test_escape_suite_small():
    report = suites.run_suite("escape", small=True)
    assert report.ok
    assert any(row.claim_ref == "f:intersection" for row in report.rows)
    assert any(row.claim_ref == "f:intersection fails for S'" and row.verdict for row in report.rows)


@pytest.mark.slow
def test_oracle_suite_small():
    report = suites.run_suite("oracle", small=True)
    assert [row.claim_ref for row in report.failed] == []


@pytest.mark.slow
def test_inequalities_suite_small():
    report = suites.run_suite("inequalities", small=True)
    assert [row.claim_ref for row in report.failed] == []


@pytest.mark.slow
def test_decompose_suite_small():
    report = suites.run_suite("decompose", small=True)
    assert [row.claim_ref for row in report.failed] == []


@pytest.mark.slow
def test_tq_suite_small():
    report = suites.run_suite("tq", small=True)
    assert [row.claim_ref for row in report.failed] == []
    claims = {row.claim_ref for row in report.rows}
    assert {"t:Q_new 0 <= T(A) - |A|^6/p", "t:Q_new", "f:Q_1"} <= claims


@pytest.mark.slow
def test_flatten_suite_small():
    report = suites.run_suite("flatten", small=True)
    assert report.ok
    claims = {row.claim_ref for row in report.rows}
    assert "t:flattering (e_6 < 10/|SL2|)" in claims
    assert "Haar e_k = 0, p=5" in claims
    assert "t:Harald_SL2" in claims


@pytest.mark.slow
def test_cf_suite_small():
    report = suites.run_suite("cf", small=True)
    assert report.ok
    mass = [row for row in report.rows if row.claim_ref == "t:CF_growth (mass)"]
    assert mass and all(row.verdict for row in mass)


@pytest.mark.slow
def test_multilinear_suite_small():
    report = suites.run_suite("multilinear", small=True)
    assert report.ok
    claims = {row.claim_ref for row in report.rows}
    assert "S(F_p,F_p,F_p) = p(2p-1), p=7" in claims
    assert {"f:etropy_exp_intr", "f:etropy_exp_2", "c:PS_new (S)"} <= claims
