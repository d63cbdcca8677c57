import pytest
import sympy as sp
from sympy import QQ

from algebra import X, Y, Field, poly2
from conftest import dulac_form, make_curve, make_divisor
from divisors import (DICRITICAL, ISOLATED, SeparatrixDivisor, adapted_equation,
                      attach_branches, degree, is_adapted, weighted_multiplicity)
from errors import InputError
from foliation import OneForm, PlaneCurve
from resolution import reduce


def test_degree_and_multiplicities(radial_divisor):
    assert degree(radial_divisor) == 2
    assert weighted_multiplicity(radial_divisor) == 2
    assert radial_divisor.unweighted_multiplicity() == 4
    assert radial_divisor.is_reduced()
    assert not radial_divisor.is_effective()
    assert not make_divisor(('y', 2)).is_reduced()


def test_label(radial_divisor):
    assert radial_divisor.label() == '(x) + (y) + (x - y) - (x + y)'
    assert make_divisor(('y', 2), ('x', -3)).label() == '2(y) - 3(x)'


def test_zero_weights_are_dropped():
    divisor = make_divisor(('x', 1), ('y', 0))
    assert len(divisor) == 1


def test_rejects_shared_components_and_units():
    with pytest.raises(InputError):
        make_divisor(('x', 1), ('x*y', 1))
    with pytest.raises(InputError):
        make_divisor(('1 + x', 1))


def test_is_adapted(radial_divisor):
    assert is_adapted(radial_divisor, make_curve('x*y'))
    assert is_adapted(radial_divisor, make_curve('x*y*(x - y)'))
    assert not is_adapted(radial_divisor, make_curve('x + y'))


def test_adapted_equation(radial_divisor):
    h = adapted_equation(radial_divisor, make_curve('x'))
    assert h.numerator == poly2(X * Y * (X - Y))
    assert h.denominator == poly2(X + Y)
    with pytest.raises(InputError):
        adapted_equation(radial_divisor, make_curve('x + y'))


def test_radial_divisor_is_balanced(radial, radial_divisor):
    certificate = attach_branches(reduce(radial), radial_divisor)
    assert certificate.balanced
    assert all(a.kind == DICRITICAL for a in certificate.attachments.values())
    assert certificate.dicritical_sums[1] == (2, 2)
    assert certificate.to_dict()['dicritical_sums'] == {'D1': {'sum': 2, 'required': 2}}


def test_radial_missing_line_is_not_balanced(radial):
    certificate = attach_branches(reduce(radial), make_divisor(('x', 1), ('y', 1), ('x - y', 1)))
    assert not certificate.balanced
    assert certificate.dicritical_sums[1] == (3, 2)
    assert certificate.problems


def test_adapted_for_swaps_sign_on_a_dicritical_component(radial, radial_divisor):
    certificate = attach_branches(reduce(radial), radial_divisor)
    pole = make_curve('x + y')
    swapped = radial_divisor.adapted_for(pole, certificate)
    assert swapped is not None
    assert swapped.in_zero_part(pole)
    assert swapped.degree == radial_divisor.degree
    assert radial_divisor.adapted_for(make_curve('x'), certificate) is radial_divisor
    assert attach_branches(reduce(radial), swapped).balanced


def test_fk3_axes_are_balanced(fk3, fk3_divisor):
    certificate = attach_branches(reduce(fk3), fk3_divisor)
    assert certificate.balanced
    assert certificate.attachments['x'].kind == DICRITICAL
    assert certificate.attachments['y'].kind == ISOLATED
    assert certificate.dicritical_sums[1] == (1, 1)


def test_fk3_without_dicritical_separatrix(fk3):
    certificate = attach_branches(reduce(fk3), make_divisor(('y', 1)))
    assert not certificate.balanced
    assert certificate.dicritical_sums[1] == (0, 1)


def test_dulac_axis_is_balanced():
    certificate = attach_branches(reduce(dulac_form(2)), make_divisor(('x', 1)))
    assert certificate.balanced


def test_cusp_is_an_isolated_separatrix():
    F = OneForm.hamiltonian(poly2(Y**2 - X**3))
    certificate = attach_branches(reduce(F), make_divisor(('y^2 - x^3', 1)))
    assert certificate.attachments['y^2 - x^3'].kind == ISOLATED
    assert certificate.balanced
    assert not certificate.dicritical_sums


def test_isolated_separatrix_needs_weight_one():
    F = OneForm.hamiltonian(poly2(Y**2 - X**3))
    certificate = attach_branches(reduce(F), make_divisor(('y^2 - x^3', 2)))
    assert not certificate.balanced


def test_non_invariant_branch_is_rejected(four_xy):
    with pytest.raises(InputError):
        attach_branches(reduce(four_xy), make_divisor(('x', 1)))


def test_of_builds_from_pairs():
    divisor = SeparatrixDivisor(((make_curve('x'), 1), (make_curve('y'), -1)))
    assert divisor.degree == 0
    assert [b.label() for b, _ in divisor.pole_part] == ['y']


def test_balance_is_unchanged_by_splitting_an_orbit():
    F = OneForm.hamiltonian(poly2(Y**3 - 2 * X**2 * Y))
    base = Field(QQ.algebraic_field(sp.sqrt(2)), 1)
    merged = attach_branches(reduce(F), make_divisor(('y', 1)))
    split_tree = reduce(F, base_field=base)
    axis = PlaneCurve(poly2(Y, domain=base.domain), 'y')
    split = attach_branches(split_tree, SeparatrixDivisor(((axis, 1),)))
    assert sum(merged.isolated_slots.values()) == sum(split.isolated_slots.values()) == 3
    assert not merged.balanced
    assert not split.balanced
    lines = [PlaneCurve(poly2(Y - s * sp.sqrt(2) * X, domain=base.domain), name)
             for s, name in ((1, 'y - r*x'), (-1, 'y + r*x'))]
    full = SeparatrixDivisor(((axis, 1), (lines[0], 1), (lines[1], 1)))
    assert attach_branches(split_tree, full).balanced


def test_balance_ignores_branch_order(radial, radial_divisor):
    tree = reduce(radial)
    reordered = SeparatrixDivisor(tuple(reversed(radial_divisor.entries)))
    assert attach_branches(tree, reordered).balanced
    assert attach_branches(tree, radial_divisor).balanced
