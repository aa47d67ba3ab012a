import math
import random

import pytest

from skewlab.exceptions import ConvergenceError, NotInvertibleError, SkewDataError, UsageError
from skewlab.models import Direction, Side
from skewlab.services.examples import build_truncpoly
from skewlab.services.skew_poly import SkewPoly
from skewlab.services.skew_series import (
    SeriesRing,
    conjugate_by_z,
    convert_side_series,
    invert_one_plus,
    j_valuation,
    jt_filtration_set,
    limit_of_sequence,
    right_form_product,
    scale_variable,
    series_from_poly,
    ts_inverse,
)


def test_canonical_coefficients(zmod8_series):
    algebra = zmod8_series
    f = algebra.series([9, 7, 3])
    assert f.coeffs == (1, 3, 1)
    assert algebra.monomial(1, 3) == algebra.zero
    assert algebra.size() == 64


def test_rendering(zmod8_series):
    algebra = zmod8_series
    inverse = invert_one_plus(algebra.y)
    assert algebra.render(inverse) == "1 + 3*y + y^2"
    assert str(inverse) == "1 + 3*y + y^2 + O(j^3)"
    assert algebra.render_truncated(algebra.zero) == "0 + O(j^3)"
    assert algebra.coefficient_dump(inverse) == [
        {"index": 0, "modulus_exponent": 3, "residue": "1"},
        {"index": 1, "modulus_exponent": 2, "residue": "3"},
        {"index": 2, "modulus_exponent": 1, "residue": "1"},
    ]


def test_jt_description_of_ideal_powers(zmod8_series):
    algebra = zmod8_series
    assert len(algebra.ideal_power(1)) == 32
    assert len(algebra.ideal_power(2)) == 8
    for ell in (1, 2, 3):
        assert algebra.ideal_power(ell) == jt_filtration_set(algebra, ell)


def test_j_valuation(zmod8_series):
    algebra = zmod8_series
    assert j_valuation(algebra.one) == 0
    assert j_valuation(algebra.constant(4)) == 2
    assert j_valuation(algebra.monomial(2, 1)) == 2
    assert j_valuation(algebra.monomial(1, 2)) == 2
    assert j_valuation(algebra.zero) == math.inf
    for f in algebra.elements():
        assert j_valuation(f) == algebra.valuation(f)


@pytest.mark.parametrize("N", range(2, 9))
def test_neumann_inverse_over_zmod(zmod8, N):
    ring, skew = zmod8
    algebra = SeriesRing(ring, skew, N)
    z = algebra.one + algebra.y
    inverse = invert_one_plus(algebra.y)
    assert z * inverse == algebra.one
    assert inverse * z == algebra.one
    assert inverse == algebra.series([(-1) ** k for k in range(N)])


@pytest.mark.parametrize("N", range(2, 9))
def test_neumann_inverse_over_truncpoly(truncpoly, N):
    ring, skew = truncpoly
    algebra = SeriesRing(ring, skew, N)
    z = algebra.one + algebra.y
    assert z * invert_one_plus(algebra.y) == algebra.one
    assert invert_one_plus(algebra.y) * z == algebra.one


def test_inverse_needs_unit_constant_term(zmod8_series):
    algebra = zmod8_series
    with pytest.raises(NotInvertibleError) as excinfo:
        invert_one_plus(algebra.one)
    assert excinfo.value.valuation == 0
    with pytest.raises(NotInvertibleError):
        ts_inverse(algebra.y)
    f = algebra.constant(3) + algebra.y
    assert f * ts_inverse(f) == algebra.one


def test_precision_mismatch(zmod8):
    ring, skew = zmod8
    low, high = SeriesRing(ring, skew, 2), SeriesRing(ring, skew, 3)
    with pytest.raises(UsageError, match="precision mismatch"):
        low.add(low.y, high.y)


def test_z_conjugation(truncpoly):
    ring, skew = truncpoly
    algebra = SeriesRing(ring, skew, 4)
    for r in ring.elements():
        assert conjugate_by_z(algebra.constant(r)) == algebra.constant(skew.tau(r))
    assert conjugate_by_z(algebra.y) == algebra.y
    rng = random.Random(0)
    for _ in range(256):
        f, g = algebra.random_element(rng), algebra.random_element(rng)
        assert conjugate_by_z(f * g) == conjugate_by_z(f) * conjugate_by_z(g)


def test_z_conjugation_requires_tau_minus_id():
    ring, skew = build_truncpoly(2, 4, (0, 1), delta=(0, 0, 1))
    algebra = SeriesRing(ring, skew, 3)
    with pytest.raises(SkewDataError):
        conjugate_by_z(algebra.y)


def test_side_conversion(truncpoly_series):
    algebra = truncpoly_series
    rng = random.Random(7)
    for _ in range(200):
        f = algebra.random_element(rng)
        right = convert_side_series(f, Direction.LEFT_TO_RIGHT)
        assert right.side == Side.RIGHT
        assert convert_side_series(right, Direction.RIGHT_TO_LEFT) == f
    for _ in range(100):
        f, g = algebra.random_element(rng), algebra.random_element(rng)
        product = right_form_product(convert_side_series(f, Direction.LEFT_TO_RIGHT),
                                     convert_side_series(g, Direction.LEFT_TO_RIGHT))
        assert convert_side_series(product, Direction.RIGHT_TO_LEFT) == f * g


def test_limits(zmod8_series):
    algebra = zmod8_series
    partial, sums = algebra.zero, []
    for m in range(5):
        partial = partial + algebra.monomial(1, m)
        sums.append(partial)
    assert limit_of_sequence(sums) == algebra.series([1, 1, 1])
    with pytest.raises(ConvergenceError) as excinfo:
        limit_of_sequence([algebra.zero, algebra.one, algebra.zero, algebra.one])
    assert excinfo.value.index == 3


def test_limits_need_every_coefficient_to_settle(zmod8_series):
    algebra = zmod8_series
    y = algebra.monomial(1, 1)
    with pytest.raises(ConvergenceError) as excinfo:
        limit_of_sequence([algebra.zero, y, algebra.zero, y])
    assert "coefficient 1" in str(excinfo.value)
    assert excinfo.value.index == 3
    with pytest.raises(ConvergenceError) as excinfo:
        limit_of_sequence([algebra.one, algebra.one + y])
    assert "coefficient 1" in str(excinfo.value)
    drifting = [algebra.constant(2) + y * y, algebra.constant(4) + y * y, algebra.constant(4) + y * y]
    assert limit_of_sequence(drifting) == algebra.series([4, 0, 1])


def test_polynomials_embed(truncpoly_series):
    algebra = truncpoly_series
    skew = algebra.skew
    ring = algebra.base
    f = SkewPoly.variable(skew) * SkewPoly.constant(skew, ring.x)
    assert series_from_poly(f, algebra) == algebra.y * algebra.constant(ring.x)


def test_scaling(plane):
    inner = plane.levels[0]
    assert scale_variable(inner.y, 2) == inner.monomial(2, 1)
    assert inner.render(scale_variable(inner.y, 2)) == "2*x"
