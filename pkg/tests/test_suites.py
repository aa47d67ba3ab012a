import pytest

from skewlab.exceptions import UnknownSuiteError
from skewlab.models import CaseStatus
from skewlab.services.config_format import parse_config
from skewlab.services.suites import list_suites, run_suite, run_suites

from tests.conftest import PLANE_CONFIG, PRODUCT_CONFIG, TRUNCPOLY_CONFIG, ZMOD_CONFIG

SUITES = [
    "ring-axioms", "skew-validation", "theta", "jt-lemma", "graded", "neumann", "z-conjugation",
    "side-conversion", "limits", "orbit-decomposition", "tau-delta-equivalence", "induced-ideals",
    "contraction", "cutting-down", "lying-over", "closing-question", "quantum-relations",
]


def _statuses(report):
    return {record.case: record.status for record in report.records}


def test_registry_lists_every_suite():
    assert sorted(list_suites()) == sorted(SUITES)


@pytest.mark.parametrize("config_text", [ZMOD_CONFIG, TRUNCPOLY_CONFIG, PRODUCT_CONFIG],
                         ids=["zmod", "truncpoly", "product"])
@pytest.mark.parametrize("name", SUITES)
def test_suites_hold_on_shipped_towers(config_text, name):
    report = run_suite(parse_config(config_text), name)
    assert report.records
    failures = [(record.case, record.witness) for record in report.records if record.status == CaseStatus.FAIL]
    assert failures == []


def test_records_are_ordered_and_reproducible():
    config = parse_config(TRUNCPOLY_CONFIG)
    first = run_suite(config, "side-conversion", seed=5)
    second = run_suite(config, "side-conversion", seed=5)
    cases = [record.case for record in first.records]
    assert cases == sorted(cases)
    assert [(r.case, r.status, r.witness, r.note) for r in first.records] == \
        [(r.case, r.status, r.witness, r.note) for r in second.records]
    assert first.seed == 5


def test_seed_comes_from_config_budget():
    config = parse_config(ZMOD_CONFIG + "\n[budget]\nseed = 42\n")
    assert run_suite(config, "limits").seed == 42
    assert run_suite(config, "limits", seed=7).seed == 7


def test_inapplicable_suites_are_skipped():
    zmod = parse_config(ZMOD_CONFIG)
    assert _statuses(run_suite(zmod, "quantum-relations")) == {"inapplicable": CaseStatus.SKIPPED}
    field = parse_config("[base]\nfamily = field\nprime = 3\n")
    assert _statuses(run_suite(field, "jt-lemma")) == {"inapplicable": CaseStatus.SKIPPED}
    plane = parse_config(PLANE_CONFIG)
    assert _statuses(run_suite(plane, "quantum-relations")) == {"plane": CaseStatus.PASS}


def test_graded_skew_rule_skipped_for_tau_minus_id():
    statuses = _statuses(run_suite(parse_config(TRUNCPOLY_CONFIG), "graded"))
    assert statuses["skew-rule"] == CaseStatus.SKIPPED
    assert statuses["valuation-laws"] == CaseStatus.PASS


def test_orbit_decomposition_on_product():
    report = run_suite(parse_config(PRODUCT_CONFIG), "orbit-decomposition")
    assert [record.case for record in report.records] == ["ideal/<0>"]
    record = report.records[0]
    assert record.status == CaseStatus.PASS
    assert "not prime, orbit of 2 primes" in record.note


def test_lying_over_on_zmod():
    report = run_suite(parse_config(ZMOD_CONFIG), "lying-over")
    assert len(report.records) == 1
    assert report.records[0].note.startswith("1 maximal tau-ideals")


def test_budget_makes_suites_skip():
    report = run_suite(parse_config(ZMOD_CONFIG), "jt-lemma", budget=8)
    assert report.failed == 0
    assert report.skipped > 0


def test_unknown_suite():
    with pytest.raises(UnknownSuiteError):
        run_suite(parse_config(ZMOD_CONFIG), "no-such-suite")
    with pytest.raises(UnknownSuiteError):
        run_suites(parse_config(ZMOD_CONFIG), ["theta", "no-such-suite"])


def test_run_suites_uses_config_names():
    config = parse_config(ZMOD_CONFIG + "\n[suite]\nnames = theta, limits\n")
    assert [report.suite for report in run_suites(config)] == ["theta", "limits"]


def test_cutting_down_on_product_takes_one_prime_of_the_orbit():
    report = run_suite(parse_config(PRODUCT_CONFIG), "cutting-down")
    assert len(report.records) == 2
    assert report.records[0].case == "prime/<e1, e1*y, e2*y>"
    for record in report.records:
        assert record.status == CaseStatus.PASS
        assert record.note.startswith("segment of 1: ")
