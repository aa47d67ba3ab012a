import pytest

from skewlab.exceptions import ExpressionError
from skewlab.services.expressions import evaluate, render_result, strip_precision_tag, tokenize
from skewlab.services.skew_series import SeriesRing


@pytest.mark.parametrize(
    "text,expected",
    [
        ("inv(1+y)", "1 + 3*y + y^2 + O(j^3)"),
        ("(1+y)^0", "1 + O(j^3)"),
        ("(1+y)^-1", "1 + 3*y + y^2 + O(j^3)"),
        ("4*y", "0 + O(j^3)"),
        ("-1", "7 + O(j^3)"),
        ("y^3", "0 + O(j^3)"),
        ("2 - 3", "7 + O(j^3)"),
    ],
)
def test_evaluation_over_zmod(zmod8_series, text, expected):
    assert render_result(zmod8_series, evaluate(zmod8_series, text)) == expected


def test_rendered_output_parses_back(zmod8_series):
    algebra = zmod8_series
    value = evaluate(algebra, "inv(1+y)")
    assert evaluate(algebra, render_result(algebra, value)) == value
    assert strip_precision_tag("1 + y + O(j^3)") == "1 + y"


def test_noncommuting_product(truncpoly):
    ring, skew = truncpoly
    algebra = SeriesRing(ring, skew, 4)
    assert render_result(algebra, evaluate(algebra, "y*x")) == "x^2 + (x + x^2)*y + O(j^4)"
    assert render_result(algebra, evaluate(algebra, "x*y")) == "x*y + O(j^4)"


def test_base_ring_rendering(truncpoly):
    ring, _ = truncpoly
    assert render_result(ring, evaluate(ring, "(1 + x)^2")) == "1 + x^2"


@pytest.mark.parametrize(
    "text,position",
    [
        ("inv(2)", 0),
        ("1 + z", 4),
        ("(1 + y", 6),
        ("y^x", 2),
        ("1 $ 2", 2),
    ],
)
def test_expression_errors(zmod8_series, text, position):
    with pytest.raises(ExpressionError) as excinfo:
        evaluate(zmod8_series, text)
    assert excinfo.value.position == position


def test_empty_expression(zmod8_series):
    with pytest.raises(ExpressionError):
        evaluate(zmod8_series, "  ")
    assert [token.kind for token in tokenize("y^2")] == ["name", "op", "int", "end"]
