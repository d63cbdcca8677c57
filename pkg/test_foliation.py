import numpy as np
import pytest

from algebra import X, Y, linear_change, poly2
from conftest import dulac_form, make_curve, make_form, saddle_node_form
from errors import InputError
from foliation import (MeromorphicFunction, OneForm, PlaneCurve, PolarSampler,
                       algebraic_multiplicity, generic_polar_intersection, is_invariant,
                       milnor_foliation, multiplicity_along, polar, polar_of_differential,
                       tangency_index, tangency_order)
from localring import milnor_curve


def test_form_rejects_common_factor():
    with pytest.raises(InputError):
        make_form('x*y', 'x^2')


def test_form_rejects_zero():
    with pytest.raises(InputError):
        OneForm(poly2(0), poly2(0))


def test_common_unit_factor_is_allowed():
    F = make_form('(1 + x)*y', '(1 + x)*x')
    assert F.is_singular()


def test_curve_must_be_reduced_and_through_origin():
    with pytest.raises(InputError, match='not reduced'):
        make_curve('y^2')
    with pytest.raises(InputError, match='not reduced'):
        make_curve('x*y^2 - y^3')
    with pytest.raises(InputError, match='origin'):
        make_curve('1 + x')
    assert PlaneCurve(poly2(1 + X), unit=True).label() == 'x + 1'


def test_algebraic_multiplicity(four_xy, fk3, radial):
    assert algebraic_multiplicity(four_xy) == 1
    assert algebraic_multiplicity(fk3) == 3
    assert algebraic_multiplicity(radial) == 1


def test_milnor_numbers(four_xy, fk3, radial):
    assert milnor_foliation(radial) == 1
    assert milnor_foliation(four_xy) == 3
    assert milnor_foliation(fk3) == 15
    assert milnor_foliation(dulac_form(2)) == 1


@pytest.mark.parametrize('k', [1, 2, 3])
@pytest.mark.parametrize('lam', [0, 1])
def test_saddle_node_milnor_and_index(k, lam):
    F = saddle_node_form(k, lam)
    assert milnor_foliation(F) == k + 1
    assert tangency_index(F, make_curve('y')) == k + 1


def test_invariance(four_xy, radial):
    assert is_invariant(four_xy, make_curve('y'))
    assert not is_invariant(four_xy, make_curve('x'))
    for line in ('x', 'y', 'x - y', 'x + 3*y'):
        assert is_invariant(radial, make_curve(line))
    assert is_invariant(dulac_form(2), make_curve('x'))


def test_invariance_of_a_differential():
    h = MeromorphicFunction(poly2(X * Y), poly2(X + Y))
    assert is_invariant(h, make_curve('x'))
    assert is_invariant(h, make_curve('x + y'))
    assert not is_invariant(h, make_curve('x - y'))


def test_polar_rejects_degenerate_parameters(four_xy):
    with pytest.raises(InputError):
        polar(four_xy, 0, 0)


def test_polar_of_differential_drops_unit_denominator():
    curve = polar_of_differential(MeromorphicFunction(poly2(X * Y), poly2(1)), 1, 2)
    assert curve.denominator is None
    assert curve.numerator == poly2(Y + 2 * X)


def test_sampler_is_seeded_and_nonzero():
    first = PolarSampler(7).take(10)
    assert first == PolarSampler(7).take(10)
    assert all(a and b for a, b in first)


def test_generic_polar_intersection_of_radial_lines(radial):
    # polar a*(-y) + b*x is a generic line through the origin
    assert generic_polar_intersection(radial, make_curve('x')) == 1
    assert generic_polar_intersection(radial, make_curve('x*y*(x - y)')) == 3


def test_tangency_order(four_xy):
    assert tangency_order(four_xy, make_curve('y - x^3')) == 4
    with pytest.raises(InputError):
        tangency_order(four_xy, make_curve('y'))


def test_tangency_index_needs_smooth_branch(four_xy):
    with pytest.raises(InputError):
        tangency_index(four_xy, make_curve('y^2 - x^3'))


def test_multiplicity_along(four_xy, fk3):
    assert multiplicity_along(four_xy, make_curve('y')) == 2
    assert multiplicity_along(fk3, make_curve('y')) == 5
    assert multiplicity_along(fk3, make_curve('x')) == 3
    assert multiplicity_along(dulac_form(2), make_curve('x')) == 1
    with pytest.raises(InputError):
        multiplicity_along(four_xy, make_curve('x'))


@pytest.mark.parametrize('text', ['y - x^2', 'x*y', 'y^2 - x^3', 'y^2 - x^5', 'x*y*(x - y)',
                                  'y^3 - x^7 + x^5*y'])
def test_polar_of_exact_form_meets_curve_in_milnor_plus_multiplicity(text):
    C = make_curve(text)
    expected = milnor_curve(C.f) + C.multiplicity - 1
    assert generic_polar_intersection(OneForm.hamiltonian(C.f), C) == expected


def _pull_back(F, matrix):
    """The form in coordinates (u, v) with x = a u + b v, y = c u + d v."""
    (a, b), (c, d) = matrix
    P, Q = linear_change(F.P, matrix), linear_change(F.Q, matrix)
    return OneForm(P * a + Q * c, P * b + Q * d)


@pytest.mark.parametrize('seed', range(4))
def test_generic_polar_intersection_ignores_linear_coordinates(four_xy, seed):
    rng = np.random.default_rng(seed)
    while True:
        a, b, c, d = (int(v) for v in rng.integers(-3, 4, size=4))
        if a * d - b * c:
            break
    matrix = ((a, b), (c, d))
    G = _pull_back(four_xy, matrix)
    for text in ('y', 'y - x^3', 'x*y'):
        f = make_curve(text).f
        assert generic_polar_intersection(G, linear_change(f, matrix)) == \
            generic_polar_intersection(four_xy, f)
