import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy import QQ

from algebra import X, Y, from_terms, poly2
from errors import InputError, ParseError
from expression import parse_expression, parse_polynomial, render_poly, tokenize


coefficients = st.fractions(min_value=-5, max_value=5, max_denominator=4).filter(bool)
terms_strategy = st.dictionaries(
    st.tuples(st.integers(0, 4), st.integers(0, 4)), coefficients, min_size=1, max_size=6,
)


@pytest.mark.parametrize('text, expected', [
    ('4xy', 4 * X * Y),
    ('4*x*y', 4 * X * Y),
    ('y^2 - x^3', Y**2 - X**3),
    ('y**2 - x**3', Y**2 - X**3),
    ('(1/2)*x + y', sp.Rational(1, 2) * X + Y),
    ('3/2*x', sp.Rational(3, 2) * X),
    ('(x + y)/4', (X + Y) / 4),
    ('2(x + y)^2', 2 * (X + Y)**2),
    ('-y - x^2*y', -Y - X**2 * Y),
    ('- -x', X),
])
def test_parse(text, expected):
    assert parse_polynomial(text) == poly2(expected)


def test_parse_expression_is_expanded():
    assert parse_expression('(x + 1)^2') == X**2 + 2 * X + 1


@pytest.mark.parametrize('text, line, column', [
    ('x + * y', 1, 5),
    ('x $ y', 1, 3),
    ('x / y', 1, 3),
    ('(x + y', 1, 7),
    ('x +\n z', 2, 2),
    ('x^y', 1, 3),
    ('', 1, 1),
])
def test_parse_errors_carry_position(text, line, column):
    with pytest.raises(ParseError) as info:
        parse_polynomial(text)
    assert (info.value.line, info.value.column) == (line, column)
    assert str(info.value).startswith(f'{line}:{column}:')


def test_parse_error_is_an_input_error():
    with pytest.raises(InputError):
        parse_polynomial('x / 0')


def test_unknown_variable():
    with pytest.raises(ParseError, match='unknown variable'):
        tokenize('x + z')


def test_render():
    assert render_poly(poly2(Y**2 - X**3)) == 'y^2 - x^3'
    assert render_poly(poly2(X / 2 - 3 * X * Y)) == '1/2*x - 3*x*y'
    assert render_poly(poly2(-Y + X)) == 'x - y'
    assert render_poly(poly2(0)) == '0'


@settings(max_examples=50, deadline=None)
@given(terms_strategy)
def test_render_then_parse(terms):
    f = from_terms({m: QQ(c.numerator, c.denominator) for m, c in terms.items()})
    assert parse_polynomial(render_poly(f)) == f
