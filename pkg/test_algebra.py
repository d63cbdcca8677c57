import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy import QQ

from algebra import (RATIONALS, T, X, Y, affine, compose2, evaluate_univariate, from_terms,
                     gcd, homogeneous_part, initial_form, is_locally_reduced, is_unit,
                     linear_change, order, poly2, restrict_to_axis, resultant, split_extension,
                     squarefree_part, terms_of, translate, univariate_order)
from errors import InputError


terms_strategy = st.dictionaries(
    st.tuples(st.integers(0, 3), st.integers(0, 3)),
    st.integers(-5, 5).filter(bool),
    min_size=1, max_size=5,
)


def test_order_and_initial_form():
    f = poly2(X**2 + X * Y + Y**3)
    assert order(f) == 2
    assert initial_form(f) == poly2(X**2 + X * Y)
    assert homogeneous_part(f, 3) == poly2(Y**3)


def test_order_of_zero_raises():
    with pytest.raises(InputError):
        order(poly2(0))


def test_is_unit():
    assert is_unit(poly2(1 + X))
    assert not is_unit(poly2(X + Y**2))


@settings(max_examples=30, deadline=None)
@given(terms_strategy, terms_strategy)
def test_order_is_multiplicative(a, b):
    f, g = from_terms(a), from_terms(b)
    assert order(f * g) == order(f) + order(g)


def test_from_terms_drops_zero_coefficients():
    f = from_terms({(1, 0): QQ(2), (0, 1): QQ(0)})
    assert terms_of(f) == {(1, 0): QQ(2)}


def test_restrict_to_axis():
    f = poly2(Y**2 + X * Y + X**3)
    assert restrict_to_axis(f, X).as_expr() == Y**2
    assert restrict_to_axis(f, Y).as_expr() == X**3


def test_univariate_order_and_evaluate():
    p = sp.Poly(T**5 + 3 * T**2, T, domain=QQ)
    assert univariate_order(p) == 2
    assert evaluate_univariate(p, QQ(1)) == QQ(4)


def test_resultant_eliminates_requested_variable():
    f, g = poly2(Y - X**2), poly2(Y)
    res = resultant(f, g, Y)
    assert res.gens == (X,)
    assert univariate_order(res) == 2


def test_gcd_and_local_reducedness():
    f = poly2((X + Y) * X)
    assert gcd(f, poly2(X * Y)).as_expr() == X
    assert is_locally_reduced(poly2(X * Y))
    assert not is_locally_reduced(poly2(X**2 * Y))
    assert is_locally_reduced(poly2((1 + X)**2 * Y))


def test_compose_translate_and_linear_change():
    f = poly2(X * Y)
    assert compose2(f, affine(QQ(1), QQ(1), QQ(0), QQ), poly2(Y)) == poly2(X * Y + Y**2)
    assert translate(poly2(X), 0, 0) == poly2(X)
    assert translate(poly2(X**2), 1, 0) == poly2(X**2 + 2 * X + 1)
    assert linear_change(poly2(X), ((0, 1), (1, 0))) == poly2(Y)


def test_linear_change_rejects_singular_matrix():
    with pytest.raises(InputError):
        linear_change(poly2(X), ((1, 1), (2, 2)))


def test_split_extension_rational_roots():
    roots = split_extension(sp.Poly(T**2 - 1, T, domain=QQ))
    assert sorted(r.value for r in roots) == [QQ(-1), QQ(1)]
    assert all(r.weight == 1 and r.field == RATIONALS for r in roots)


def test_split_extension_adjoins_orbit_representative():
    roots = split_extension(sp.Poly(T**2 - 2, T, domain=QQ))
    assert len(roots) == 1
    root = roots[0]
    assert root.weight == 2
    assert root.field.depth == 1
    assert not root.field.is_rational
    lifted = root.field.lift(sp.Poly(T**2 - 2, T, domain=QQ))
    assert not evaluate_univariate(lifted, root.value)


def test_split_extension_mixed_factors():
    roots = split_extension(sp.Poly((T - 3) * (T**2 + 1), T, domain=QQ))
    weights = sorted(r.weight for r in roots)
    assert weights == [1, 2]


def test_resultant_of_crossing_lines():
    res = resultant(poly2(Y - X), poly2(Y + X), Y)
    assert res.as_expr() in (2 * X, -2 * X)


def test_squarefree_part():
    assert squarefree_part(poly2(X**2 * Y)) == poly2(X * Y)
    with pytest.raises(InputError):
        squarefree_part(poly2(0))


@settings(max_examples=30, deadline=None)
@given(terms_strategy, st.integers(-3, 3), st.integers(-3, 3), st.integers(-3, 3),
       st.integers(-3, 3))
def test_linear_change_preserves_order(terms, a, b, c, d):
    f = from_terms({m: QQ(v) for m, v in terms.items()})
    if a * d - b * c == 0:
        return
    assert order(linear_change(f, ((a, b), (c, d)))) == order(f)


@settings(max_examples=30, deadline=None)
@given(terms_strategy, terms_strategy, terms_strategy, st.booleans())
def test_resultant_vanishes_exactly_on_common_y_factors(a, b, c, shared):
    f = from_terms({m: QQ(v) for m, v in a.items()})
    g = from_terms({m: QQ(v) for m, v in b.items()})
    if shared:
        h = from_terms({m: QQ(v) for m, v in c.items()})
        f, g = f * h, g * h
    if f.degree(Y) <= 0 and g.degree(Y) <= 0:
        return
    res = resultant(f, g, Y)
    assert res.is_zero == (gcd(f, g).degree(Y) > 0)
