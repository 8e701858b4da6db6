import pytest

from domivar.expr import ExpressionError, parse_expression, parse_predicate


@pytest.mark.parametrize("src,v,want", [
    ("y[0] + 2*y[1]", [1, 3], 7),
    ("-y[0]*y[0]", [3], -9),
    ("--y[0]", [3], 3),
    ("abs(y[0]) / (2*abs(y[0]) + 1)", [-1], 1 / 3),
    ("min(y[0], y[1]) - max(1, 2)", [4, -1], -3),
    ("pow2(y[0])", [3], 8),
    ("sqrt(y[0])", [9], 3),
    ("1e-1 * 10", [0], 1),
])
def test_expression_values(src, v, want):
    assert parse_expression(src)(v) == pytest.approx(want)


def test_numbers_and_variable_name():
    assert parse_expression(2.5)([]) == 2.5
    assert parse_expression("x[1]", var="x")([0, 7]) == 7
    with pytest.raises(ExpressionError):
        parse_expression("x[1]", var="y")


def test_max_index_tracked():
    assert parse_expression("y[0] + y[3]").max_index == 3


@pytest.mark.parametrize("src", ["y[0] +", "(1", "foo(1)", "y[0] ** 2", "y[0]^2", "1 2", "y[-1]", ""])
def test_syntax_errors(src):
    with pytest.raises(ExpressionError):
        parse_expression(src)


def test_runtime_errors():
    with pytest.raises(ExpressionError):
        parse_expression("y[2]")([1, 2])
    with pytest.raises(ExpressionError):
        parse_expression("1 / y[0]")([0])
    with pytest.raises(ExpressionError):
        parse_expression("sqrt(y[0])")([-1])


def test_predicates():
    assert parse_predicate("true")([5])
    p = parse_predicate("y[0] == y[1] and y[0] < 0")
    assert p([-1, -1]) and not p([0, 0]) and not p([-1, -2])
    assert parse_predicate("y[0] >= 1 and y[0] <= 2 and y[0] = 1")([1])
    with pytest.raises(ExpressionError):
        parse_predicate("y[0] != 1")
    assert not parse_predicate("y[0] > 0")([0])


def test_predicate_exact_comparison():
    # no tolerance: rounding error is visible
    assert not parse_predicate("y[0] == 0.3")([0.1 + 0.2])
    assert parse_predicate("y[0] == 0.3")([0.3])
