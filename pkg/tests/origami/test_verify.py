import pytest

from backend.core.models import CountQuery
from backend.origami.verify import CheckResult, Verifier, divisor_sum


def test_divisor_sum():
    assert [divisor_sum(n) for n in range(1, 9)] == [1, 3, 4, 7, 6, 12, 8, 15]


@pytest.fixture
def torus_checks(store):
    return {result.name: result for result in Verifier(CountQuery(lmax=4, seed=3), store).run()}


def test_every_torus_check_passes(torus_checks):
    assert set(torus_checks) == {
        "census_sigma_oracle", "round_trip", "rotation_preserves_component", "dimension_identity",
        "engine_equality", "sandwich_bounds", "riemann_bounds", "lipschitz", "leading_constant_product",
    }
    failed = [r.detail for r in torus_checks.values() if not r.passed]
    assert failed == []


def test_product_constant_is_diagnostic(torus_checks):
    assert torus_checks["leading_constant_product"].diagnostic
    assert not torus_checks["engine_equality"].diagnostic


def test_genus_two_checks(h2, store):
    verifier = Verifier(CountQuery(stratum=h2, lmax=3), store, sample_cells=10)
    for check in (verifier.check_round_trip, verifier.check_dimension_identity, verifier.check_engine_equality):
        result = check()
        assert result.passed, result.detail


def test_type_listing(torus_type, store):
    verifier = Verifier(CountQuery(lmax=2), store)
    assert torus_type in verifier.horizontal_types()
    assert (torus_type, torus_type) in verifier.type_pairs()


def test_check_result_dict():
    result = CheckResult("lipschitz", False, "1 of 2 cells failed")
    assert result.to_dict() == {"name": "lipschitz", "passed": False, "detail": "1 of 2 cells failed", "diagnostic": False}
