import math

import pytest

from skewlab.exceptions import BudgetExceededError, NotInvertibleError, SkewDataError, UsageError
from skewlab.services.examples import build_truncpoly
from skewlab.services.filtered_ring import (
    GradedElement,
    ProductFieldRing,
    QuotientRing,
    TruncPolyRing,
    ZModRing,
    ring_axiom_report,
    validate_skew_data,
)


def test_zmod_filtration(zmod8):
    ring, _ = zmod8
    assert ring.name == "Z/8"
    assert ring.size() == 8
    assert ring.ideal_power(1) == frozenset({0, 2, 4, 6})
    assert ring.ideal_power(2) == frozenset({0, 4})
    assert ring.ideal_power(3) == frozenset({0})
    assert ring.reduce(7, 2) == 3


def test_zmod_valuation_and_leading_forms(zmod8):
    ring, _ = zmod8
    assert ring.valuation(3) == 0
    assert ring.valuation(6) == 1
    assert ring.valuation(4) == 2
    assert ring.valuation(0) == math.inf
    assert ring.leading_form(6) == GradedElement(1, 2)
    assert ring.graded_product(ring.leading_form(2), ring.leading_form(2)) == GradedElement(2, 4)
    assert ring.graded_product(ring.leading_form(4), ring.leading_form(2)).is_zero


def test_zmod_inverse(zmod8):
    ring, _ = zmod8
    assert ring.inverse(3) == 3
    assert ring.pow(3, -1) == 3
    with pytest.raises(NotInvertibleError) as excinfo:
        ring.inverse(2)
    assert excinfo.value.valuation == 1


def test_composite_modulus_rejected():
    with pytest.raises(UsageError):
        ZModRing(4, 2)


def test_truncpoly_arithmetic():
    ring = TruncPolyRing(2, 4)
    x = ring.x
    t = ring.from_coefficients((0, 1, 1))
    assert ring.render(t) == "x + x^2"
    assert ring.mul(x, ring.monomial(3)) == ring.zero
    assert ring.inverse(ring.add(ring.one, x)) == (1, 1, 1, 1)
    assert ring.compose(ring.compose(x, t), t) == x
    assert ring.compositional_inverse(t) == t
    assert ring.residues(2) == [ring.zero, ring.one, x, ring.add(ring.one, x)]
    with pytest.raises(NotInvertibleError):
        ring.compositional_inverse(ring.monomial(2))


def test_product_ring_is_discrete(swap):
    ring, alpha = swap
    assert ring.is_discrete
    assert ring.size() == 4
    assert alpha(ring.idempotent(0)) == ring.idempotent(1)
    assert ring.render(ring.one) == "e1 + e2"
    assert ring.render((1, 0)) == "e1"


def test_quotient_ring(zmod8):
    ring, _ = zmod8
    quotient = ring.quotient(2)
    assert isinstance(quotient, QuotientRing)
    assert quotient.elements() == [0, 1, 2, 3]
    assert quotient.mul(3, 3) == 1
    assert ring.quotient(3) is ring
    assert ring.quotient(2) is quotient


def test_enumeration_budget(zmod8):
    ring, _ = zmod8
    assert ring.enumerable(8)
    with pytest.raises(BudgetExceededError):
        ring.require_enumerable(4)


def test_valid_skew_data_is_certified(truncpoly):
    ring, skew = truncpoly
    report = validate_skew_data(ring, skew)
    assert report.ok
    assert report.exhaustive
    assert report.check("leibniz").checked == 256


def test_non_automorphism_is_refuted():
    ring, skew = build_truncpoly(2, 4, (0, 0, 1), validate=False)
    report = validate_skew_data(ring, skew)
    assert not report.ok
    assert not report.check("tau-inverse").passed
    with pytest.raises(SkewDataError) as excinfo:
        build_truncpoly(2, 4, (0, 0, 1))
    assert not excinfo.value.report.ok


def test_derivation_leaving_the_ideal_is_refuted():
    with pytest.raises(SkewDataError) as excinfo:
        build_truncpoly(2, 4, (0, 1), delta=(1,))
    check = excinfo.value.report.check("delta-into-ideal")
    assert not check.passed
    assert check.witness == "x"


def test_ring_axioms_exhaustive(zmod8_series):
    report = ring_axiom_report(zmod8_series)
    assert report.exhaustive
    assert report.ok
    assert report.check("associativity").checked == 64 ** 3


def test_ring_axioms_sampled_for_large_rings(plane):
    report = ring_axiom_report(plane.top, samples=20)
    assert not report.exhaustive
    assert report.ok
