import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from sumprod import energy, incidence, oracle
from sumprod.config import SumprodConfig, set_config
from sumprod.errors import DomainError, GuardExceeded
from sumprod.fpcore import SetFp, make_field

FIELD_SETTINGS = settings(max_examples=40, deadline=None, suppress_health_check=[HealthCheck.function_scoped_fixture])


@st.composite
def small_sets(draw, max_size=5):
    p = draw(st.sampled_from((5, 7, 11, 13)))
    elems = draw(st.sets(st.integers(0, p - 1), min_size=1, max_size=max_size))
    return SetFp.of(make_field(p), elems)


@FIELD_SETTINGS
@given(small_sets())
def test_energies_match_definitions(A):
    assert energy.energy("+", A) == oracle.additive_energy(A)
    assert energy.energy("x", A) == oracle.multiplicative_energy(A)
    assert energy.energy_k(A, 3) == oracle.energy_k(A, 3)
    assert energy.tk(A, 2) == oracle.tk(A, 2)


@FIELD_SETTINGS
@given(small_sets(max_size=4))
def test_product_quantities_match_definitions(A):
    assert energy.dtimes_k(A, 2) == oracle.dtimes_k(A, 2)
    assert energy.dprime_k(A, 2) == oracle.dprime_k(A, 2)
    assert energy.n_quantity(A) == oracle.n_quantity(A)
    assert energy.nprime(A) == oracle.nprime(A)


@FIELD_SETTINGS
@given(small_sets(max_size=3))
def test_collinear_triples_match_definition(A):
    assert incidence.collinear_triples(A) == oracle.collinear_triples(A)


@FIELD_SETTINGS
@given(small_sets(), st.integers(0, 12))
def test_representation_counts(A, x):
    for kind in ("A+B", "A-B", "A*B", "A/B"):
        assert energy.rep_fn(kind, A, A).values[x % A.p] == oracle.rep(kind, A, A, x)


def test_brute_dispatches_by_name(f7, make_set):
    A = make_set(f7, [1, 2, 4])
    assert oracle.brute("E+", A) == oracle.additive_energy(A)
    with pytest.raises(DomainError):
        oracle.brute("E-", A)


def test_guard_stops_large_enumerations(f7, make_set):
    set_config(SumprodConfig(tuple_guard=10))
    with pytest.raises(GuardExceeded) as excinfo:
        oracle.additive_energy(make_set(f7, [1, 2, 3]))
    assert excinfo.value.requested == 81
