import math

import numpy as np
import pytest

from funceq.core.exprparse import (
    BinOp,
    Expression,
    Neg,
    Num,
    Var,
    eval_ast,
    parse,
    to_source,
)
from funceq.exceptions import EvaluationError, ParseError

ROUND_TRIP_CORPUS = [
    "x",
    "pi",
    "0.5",
    "1e-3*x",
    ".25 + x",
    "-x",
    "--x",
    "x^2",
    "2^3^2",
    "-2^2",
    "2^-1",
    "(x + 1)*(x - 1)",
    "x/2/3",
    "x - 1 - 2",
    "sin(pi*x/2)",
    "cos(x)^2 + sin(x)^2",
    "exp(-x)",
    "sqrt(abs(x - 0.5))",
    "min(x, 0.5)",
    "max(x^2, 1 - x)",
    "0.1*x + 0.9",
    "0.2*x",
    "(1 - 0.7^4)*x^4 / ((0.3*x + 0.7)^4 - 0.7^4 * x^4)",
    "x*(x + -2.85)/(1 + -2.85)",
    "((((x))))",
    "-(x + 1)^2",
    "2*-x",
    "exp(sin(cos(x)))",
    "max(min(x, 0.2), 0.1) * 3",
    "1.5e2 - x^0.5",
]


class TestEvaluation:
    def test_variable(self):
        assert eval_ast(parse("x"), 0.7) == 0.7

    def test_sine(self):
        assert eval_ast(parse("sin(pi*x/2)"), 1.0) == pytest.approx(1.0, abs=1e-15)

    def test_right_associative_power(self):
        assert eval_ast(parse("2^3^2"), 0.0) == 512.0

    def test_paradise_coefficient(self):
        assert eval_ast(parse("0.1*x + 0.9"), 1.0) == 1.0

    def test_exact_family_coefficient(self):
        source = "(1 - 0.7^4)*x^4 / ((0.3*x + 0.7)^4 - 0.7^4 * x^4)"
        assert eval_ast(parse(source), 0.5) == pytest.approx(0.093676, abs=1e-6)

    def test_vectorised(self):
        x = np.linspace(0.0, 1.0, 5)
        np.testing.assert_allclose(Expression("x^2 + 1")(x), x**2 + 1)

    def test_constant_broadcasts(self):
        assert Expression("0.5")(np.zeros(3)).shape == (3,)

    @pytest.mark.parametrize(
        "source, x",
        [("1/x", 0.0), ("sqrt(x - 1)", 0.5), ("(x - 1)^0.5", 0.25), ("x^-1", 0.0), ("exp(x*1000)", 1.0)],
    )
    def test_evaluation_errors_carry_x(self, source, x):
        with pytest.raises(EvaluationError) as info:
            eval_ast(parse(source), x)
        assert info.value.x == x

    def test_error_reports_first_offending_point(self):
        with pytest.raises(EvaluationError) as info:
            Expression("1/(x - 0.5)")(np.linspace(0.0, 1.0, 5))
        assert info.value.x == 0.5

    def test_integer_powers_of_negative_bases(self):
        assert eval_ast(parse("(x - 1)^3"), 0.0) == -1.0


@pytest.mark.parametrize(
    "source, expected",
    [
        ("1 + 2*3", 7.0),
        ("2*3 + 1", 7.0),
        ("1 - 2 - 3", -4.0),
        ("8/4/2", 1.0),
        ("2*3^2", 18.0),
        ("2^3*2", 16.0),
        ("-2^2", -4.0),
        ("2^-1", 0.5),
        ("-2*3", -6.0),
        ("(1 + 2)*3", 9.0),
        ("6/2*3", 9.0),
        ("2^-1^2", 0.5),
    ],
)
def test_precedence(source, expected):
    assert eval_ast(parse(source), 0.0) == pytest.approx(expected)


def test_tree_shape():
    assert parse("-x^2") == Neg(BinOp("^", Var(), Num(2.0)))
    assert parse("1 - x - 2") == BinOp("-", BinOp("-", Num(1.0), Var()), Num(2.0))


@pytest.mark.parametrize("source", ROUND_TRIP_CORPUS)
def test_round_trip(source):
    tree = parse(source)
    assert parse(to_source(tree)) == tree


@pytest.mark.parametrize(
    "source, offset",
    [
        ("y", 0),
        ("x + foo", 4),
        ("sin(x", 5),
        ("min(x)", 0),
        ("x +", 3),
        ("x x", 2),
        ("x + 1 )", 6),
        ("x @ 2", 2),
        ("é + x", 0),
        ("x + é", 4),
        ("", 0),
        ("()", 1),
    ],
)
def test_parse_errors(source, offset):
    with pytest.raises(ParseError) as info:
        parse(source)
    assert info.value.offset == offset
    assert info.value.expected
    assert info.value.found


def test_deep_nesting_is_a_parse_error():
    with pytest.raises(ParseError):
        parse("(" * 5000 + "x" + ")" * 5000)


def test_fuzz_corpus_never_escapes():
    rng = np.random.default_rng(2024)
    alphabet = list("x0123456789.+-*/^(), eE") + ["sin", "pi", "min", "é"]
    for _ in range(500):
        source = "".join(rng.choice(alphabet, size=int(rng.integers(0, 12))))
        try:
            parse(source)
        except ParseError as e:
            assert 0 <= e.offset <= len(source.encode("utf-8"))


def test_pi_constant():
    assert eval_ast(parse("pi"), 0.3) == math.pi
