import pytest

from skewlab.config import get_settings, run_settings

from skewlab.exceptions import UsageError
from skewlab.models import Direction, Side
from skewlab.services.examples import build_truncpoly
from skewlab.services.skew_poly import (
    SkewPoly,
    SkewPolyRing,
    convert_side,
    render_poly,
    spoly_apply_extended_tau,
    spoly_mul,
    theta,
    theta_row,
    y_times,
)


def test_commutation_rule(truncpoly):
    ring, skew = truncpoly
    x = ring.x
    product = spoly_mul(SkewPoly.variable(skew), SkewPoly.constant(skew, x))
    assert render_poly(product) == "x^2 + (x + x^2)*y"
    assert y_times(SkewPoly.constant(skew, x)) == product


def test_theta_small_orders(truncpoly):
    ring, skew = truncpoly
    x = ring.x
    assert theta_row(skew, 0, x) == (x,)
    assert theta(skew, 1, 0, x) == skew.delta(x)
    assert theta(skew, 1, 1, x) == skew.tau(x)
    assert theta(skew, 2, 2, x) == x
    assert theta(skew, 2, 3, x) == ring.zero
    assert theta(skew, 2, -1, x) == ring.zero


def test_theta_expansion_matches_multiplication(truncpoly):
    ring, skew = truncpoly
    for i in range(6):
        y_power = SkewPoly.monomial(skew, ring.one, i)
        for r in ring.elements():
            assert spoly_mul(y_power, SkewPoly.constant(skew, r)) == SkewPoly(skew, theta_row(skew, i, r))


def test_theta_filtration(truncpoly):
    ring, skew = truncpoly
    for i in range(6):
        for r in ring.elements():
            for k in range(i + 1):
                assert ring.in_ideal_power(theta(skew, i, k, r), i - k)


def test_right_form_conversion(truncpoly):
    ring, skew = truncpoly
    x = ring.x
    left = SkewPoly(skew, [ring.zero, x])
    right = convert_side(left, Direction.LEFT_TO_RIGHT)
    assert right == SkewPoly(skew, [ring.monomial(2), skew.tau(x)], Side.RIGHT)
    assert convert_side(right, Direction.RIGHT_TO_LEFT) == left


def test_conversion_needs_matching_side(truncpoly):
    ring, skew = truncpoly
    with pytest.raises(UsageError):
        convert_side(SkewPoly.variable(skew), Direction.RIGHT_TO_LEFT)


def test_mixed_skew_data_rejected(truncpoly, zmod8):
    _, skew = truncpoly
    _, other = zmod8
    with pytest.raises(UsageError):
        SkewPoly.variable(skew) + SkewPoly.variable(other)


def test_extended_tau(truncpoly):
    ring, skew = truncpoly
    f = SkewPoly(skew, [ring.x, ring.one])
    assert spoly_apply_extended_tau(f) == SkewPoly(skew, [skew.tau(ring.x), ring.one])


def test_polynomial_ring_facade(truncpoly):
    ring, skew = truncpoly
    algebra = SkewPolyRing(skew)
    names = algebra.generators()
    assert set(names) == {"x", "y"}
    product = algebra.mul(names["y"], names["x"])
    assert algebra.render(product) == "x^2 + (x + x^2)*y"
    assert algebra.pow(names["y"], 3).degree == 3
    assert algebra.inverse(algebra.from_int(1)) == algebra.one


def test_theta_rows_are_cached_within_bounds(truncpoly):
    ring, skew = truncpoly
    first = theta_row(skew, 4, ring.x)
    info = skew.theta_rows.cache_info()
    assert info.maxsize == get_settings().mul_cache_size
    assert theta_row(skew, 4, ring.x) == first
    assert skew.theta_rows.cache_info().hits > info.hits

    with run_settings(mul_cache_size=2):
        ring, small = build_truncpoly(2, 4, (0, 1, 1), "tau-minus-id")
    for r in ring.elements():
        assert theta_row(small, 4, r) == theta_row(skew, 4, r)
    assert small.theta_rows.cache_info().currsize <= 2
