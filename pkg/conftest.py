"""Shared fixtures: the worked example foliations and their separatrix divisors."""

import pytest

from divisors import SeparatrixDivisor
from expression import parse_polynomial
from foliation import OneForm, PlaneCurve


def poly(text):
    return parse_polynomial(text)


def make_form(P, Q):
    return OneForm(poly(P), poly(Q))


def make_curve(text, name=''):
    return PlaneCurve(poly(text), name or text)


def make_divisor(*pairs):
    return SeparatrixDivisor(tuple((make_curve(text), weight) for text, weight in pairs))


def saddle_node_form(k, lam):
    return make_form(f'-y - {lam}*x^{k}*y', f'x^{k + 1}')


def dulac_form(n):
    return make_form(f'{n}*y + x^{n}', '-x')


@pytest.fixture
def radial():
    return make_form('-y', 'x')


@pytest.fixture
def radial_divisor():
    return make_divisor(('x', 1), ('y', 1), ('x - y', 1), ('x + y', -1))


@pytest.fixture
def four_xy():
    return make_form('4*x*y', 'y - 2*x^2')


@pytest.fixture
def fk3():
    return make_form('2*x^4*y + 2*x^2*y^2 - y^3', 'x*y^2 - x^3*y - x^5')


@pytest.fixture
def fk3_divisor():
    return make_divisor(('y', 1), ('x', 1))
