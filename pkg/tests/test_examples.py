import pytest
from pydantic import ValidationError

from skewlab.exceptions import UsageError
from skewlab.models import RelationForm
from skewlab.schemas import QuantumMatrixSpec
from skewlab.services.examples import (
    build_delta_tau_minus_id,
    build_field,
    build_quantum_matrices,
    build_quantum_plane,
    product_skew,
    scaling_skew,
)
from skewlab.services.expressions import evaluate, render_result
from skewlab.services.filtered_ring import ProductFieldRing, TruncPolyRing, validate_skew_data
from skewlab.services.skew_series import SeriesRing


def test_field_is_discrete():
    ring, skew = build_field(5)
    assert ring.is_discrete
    assert ring.size() == 5
    assert skew.delta(3) == 0


def test_delta_tau_minus_id():
    ring = TruncPolyRing(2, 4)
    t = ring.from_coefficients((0, 1, 1))
    tau = lambda a: ring.compose(a, t)
    skew = build_delta_tau_minus_id(ring, tau, tau)
    assert skew.delta(ring.x) == ring.monomial(2)
    assert skew.delta_is_tau_minus_id


def test_product_skew_is_valid():
    ring = ProductFieldRing(3, 2)
    assert validate_skew_data(ring, product_skew(ring)).ok


def test_scaling_needs_a_unit(zmod8_series):
    algebra = zmod8_series
    with pytest.raises(UsageError):
        scaling_skew(SeriesRing(algebra.base, algebra.skew, 2), 2)


def test_quantum_plane(plane):
    inner, outer = plane.levels
    x = plane.lift(inner.y, 0)
    assert x == outer.constant(inner.y)
    assert outer.y * x == outer.mul(outer.constant(inner.monomial(2, 1)), outer.y)
    assert render_result(plane.top, evaluate(plane.top, "y*x")) == "2*x*y + O(j^6)"
    with pytest.raises(UsageError):
        build_quantum_plane(5, 10, 3)


def test_quantum_matrices_relations_hold():
    spec = QuantumMatrixSpec.from_upper(2, 2, {(1, 2): 3}, prime=5, precision=4)
    assert spec.p == [[1, 3], [2, 1]]
    tower = build_quantum_matrices(spec)
    assert [level.variable for level in tower.levels] == ["y11", "y12", "y21", "y22"]
    report = tower.relation_report
    assert report.ok
    assert len(report.relations) == 6
    assert [item.relation for item in report.printed_form_residuals] == ["y22*y11"]
    assert report.relation_form == RelationForm.STANDARD


def test_quantum_parameters_are_validated():
    with pytest.raises(ValidationError):
        QuantumMatrixSpec(n=2, lam=2, p=[[1, 3], [3, 1]], prime=5, precision=2)
    with pytest.raises(ValidationError):
        QuantumMatrixSpec.from_upper(2, 5, {}, prime=5, precision=2)
