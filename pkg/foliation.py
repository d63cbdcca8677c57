"""
Foliation germs at the origin and their direct invariants.

A germ is given by a 1-form P dx + Q dy with P, Q coprime at the origin.
Everything parametrization-based (tangency order, tangency index, multiplicity
along a separatrix) is expressed through local intersection numbers.
"""

import logging
import os
from dataclasses import dataclass, field

import numpy as np
import sympy as sp
from sympy import QQ

from algebra import X, Y, gcd, initial_form, is_unit, order, squarefree_part, terms_of
from errors import InputError
from localring import INFINITE, intersection_number

logger = logging.getLogger(__name__)

DEFAULT_SEED = int(os.getenv('FOLIATION_SEED', '0'))
MIN_POLAR_SAMPLES = int(os.getenv('FOLIATION_MIN_SAMPLES', '4'))
MAX_POLAR_SAMPLES = int(os.getenv('FOLIATION_MAX_SAMPLES', '24'))
POLAR_PARAMETER_BOUND = 30


@dataclass(frozen=True)
class OneForm:
    """The 1-form P dx + Q dy in a chart with coordinates ``names``."""

    P: sp.Poly
    Q: sp.Poly
    names: tuple = ('x', 'y')

    def __post_init__(self):
        if self.P.is_zero and self.Q.is_zero:
            raise InputError('the zero form does not define a foliation')
        P, Q = self.P.unify(self.Q)
        if P.get_domain().is_ZZ:
            P, Q = P.set_domain(QQ), Q.set_domain(QQ)
        object.__setattr__(self, 'P', P)
        object.__setattr__(self, 'Q', Q)
        if not is_unit(gcd(P, Q)):
            raise InputError(
                f'P and Q share a factor through the origin: {gcd(P, Q).as_expr()}')

    @classmethod
    def hamiltonian(cls, f):
        """The exact form df."""
        return cls(f.diff(X), f.diff(Y))

    @property
    def domain(self):
        return self.P.get_domain()

    def is_singular(self):
        return not (is_unit(self.P) or is_unit(self.Q))

    def __str__(self):
        a, b = self.names
        return f'({self.P.as_expr()}) d{a} + ({self.Q.as_expr()}) d{b}'


@dataclass(frozen=True)
class PlaneCurve:
    """A reduced plane curve germ f = 0 through the origin.

    ``unit`` admits an f with f(0, 0) != 0, the empty germ.
    """

    f: sp.Poly
    name: str = ''
    unit: bool = False

    def __post_init__(self):
        if self.f.is_zero:
            raise InputError('the zero polynomial does not define a curve')
        if self.f.get_domain().is_ZZ:
            object.__setattr__(self, 'f', self.f.set_domain(QQ))
        if is_unit(self.f) and not self.unit:
            raise InputError(f'curve {self.label()} does not pass through the origin')
        if squarefree_part(self.f).total_degree() != self.f.total_degree():
            raise InputError(f'curve {self.label()} is not reduced')

    @property
    def multiplicity(self):
        return order(self.f)

    def is_smooth(self):
        return self.multiplicity == 1

    def label(self):
        return self.name or str(self.f.as_expr())


@dataclass(frozen=True)
class MeromorphicFunction:
    """A quotient f/g of polynomials, used for balanced equations of divisors."""

    numerator: sp.Poly
    denominator: sp.Poly

    def __post_init__(self):
        num, den = self.numerator.unify(self.denominator)
        if num.get_domain().is_ZZ:
            num, den = num.set_domain(QQ), den.set_domain(QQ)
        if num.is_zero or den.is_zero:
            raise InputError('meromorphic function needs nonzero numerator and denominator')
        object.__setattr__(self, 'numerator', num)
        object.__setattr__(self, 'denominator', den)

    def differential_coefficients(self):
        """(P, Q) of g df - f dg, the numerator of d(f/g)."""
        f, g = self.numerator, self.denominator
        return g * f.diff(X) - f * g.diff(X), g * f.diff(Y) - f * g.diff(Y)


@dataclass(frozen=True)
class PolarCurve:
    """Polar curve of parameter (a:b); the curve is numerator/denominator = 0."""

    a: int
    b: int
    numerator: sp.Poly
    denominator: sp.Poly = field(default=None)

    def intersection(self, C, cache=None):
        """i(numerator, C) - i(denominator, C)."""
        value = intersection_number(self.numerator, C, cache)
        if self.denominator is not None and value != INFINITE:
            value -= intersection_number(self.denominator, C, cache)
        return value


def _check_parameters(a, b):
    if a == 0 and b == 0:
        raise InputError('polar parameters (0:0) are not a point of the projective line')


def polar(F, a, b):
    """Polar curve a P + b Q = 0 of the form F."""
    _check_parameters(a, b)
    numerator = F.P.mul_ground(a) + F.Q.mul_ground(b)
    if numerator.is_zero:
        raise InputError(f'polar ({a}:{b}) of {F} vanishes identically')
    return PolarCurve(a, b, numerator)


def polar_of_differential(h, a, b):
    """Polar curve of d(f/g): numerator g(a f_x + b f_y) - f(a g_x + b g_y) over g^2."""
    _check_parameters(a, b)
    f, g = h.numerator, h.denominator
    numerator = g * (f.diff(X).mul_ground(a) + f.diff(Y).mul_ground(b)) \
        - f * (g.diff(X).mul_ground(a) + g.diff(Y).mul_ground(b))
    if numerator.is_zero:
        raise InputError(f'polar ({a}:{b}) of d({f.as_expr()}/{g.as_expr()}) vanishes identically')
    denominator = g * g
    return PolarCurve(a, b, numerator, None if is_unit(denominator) else denominator)


def polar_of(source, a, b):
    if isinstance(source, MeromorphicFunction):
        return polar_of_differential(source, a, b)
    return polar(source, a, b)


class PolarSampler:
    """Seeded stream of polar parameters (a, b), both nonzero integers."""

    def __init__(self, seed=DEFAULT_SEED, bound=POLAR_PARAMETER_BOUND):
        self.seed = seed
        self.bound = bound

    def __iter__(self):
        rng = np.random.default_rng(self.seed)
        while True:
            a, b = (int(v) for v in rng.integers(1, self.bound + 1, size=2))
            sa, sb = rng.integers(0, 2, size=2)
            yield (a if sa else -a), (b if sb else -b)

    def take(self, n):
        out = []
        for pair in self:
            out.append(pair)
            if len(out) == n:
                return out


def _curve_poly(C):
    return C.f if isinstance(C, PlaneCurve) else C


def generic_polar_intersection(source, C, seed=DEFAULT_SEED, cache=None):
    """Intersection of a generic polar of ``source`` with the curve C.

    ``source`` is a OneForm or a MeromorphicFunction (through its differential).
    The generic value is the minimum over seeded samples, accepted once at
    least MIN_POLAR_SAMPLES finite values are in and the newest one repeats
    the running minimum.
    """
    f = _curve_poly(C)
    values = []
    drawn = 0
    for a, b in PolarSampler(seed):
        drawn += 1
        try:
            value = polar_of(source, a, b).intersection(f, cache)
        except InputError:
            value = INFINITE
        logger.debug('polar (%s:%s) against %s: %s', a, b, f.as_expr(), value)
        if value != INFINITE:
            values.append(value)
            if len(values) >= MIN_POLAR_SAMPLES and value == min(values):
                return min(values)
        if drawn >= MAX_POLAR_SAMPLES:
            break
    if not values:
        raise InputError(f'every sampled polar contains {f.as_expr()}')
    logger.warning('polar sampling hit the cap of %d draws against %s', MAX_POLAR_SAMPLES,
                   f.as_expr())
    return min(values)


def algebraic_multiplicity(F):
    """nu(F) = min(order P, order Q)."""
    return min(order(c) for c in (F.P, F.Q) if not c.is_zero)


def _tangency_polynomial(P, Q, f):
    return P * f.diff(Y) - Q * f.diff(X)


def _source_coefficients(source):
    if isinstance(source, MeromorphicFunction):
        return source.differential_coefficients()
    return source.P, source.Q


def is_invariant(F, C):
    """True when the curve C is invariant: f divides P f_y - Q f_x near the origin."""
    f = _curve_poly(C)
    if f.is_zero:
        raise InputError('the zero polynomial does not define a curve')
    P, Q = _source_coefficients(F)
    f, P = f.unify(P)
    f, Q = f.unify(Q)
    h = _tangency_polynomial(P, Q, f)
    if h.is_zero:
        return True
    return is_unit(f.exquo(gcd(f, h)))


def milnor_foliation(F, cache=None):
    """mu(F) = i(P, Q)."""
    value = intersection_number(F.P, F.Q, cache)
    if value == INFINITE:
        raise InputError(f'non-isolated singularity: {F}')
    return value


def tangency_order(F, C, cache=None):
    """tang(F, C) = i(f, P f_y - Q f_x) for a non-invariant curve C."""
    f = _curve_poly(C)
    if is_invariant(F, f):
        raise InputError(f'{f.as_expr()} is invariant; tangency order is undefined')
    return intersection_number(f, _tangency_polynomial(F.P, F.Q, f), cache)


def tangency_index(F, B, cache=None):
    """Ind(F, B) for a smooth branch B.

    In coordinates where B is tangent to the first axis this is the order of
    the second coefficient along B, i.e. i(Q, B); a vertical tangent swaps the
    roles of P and Q.
    """
    f = _curve_poly(B)
    if order(f) != 1:
        raise InputError(f'tangency index is supported for smooth branches only, got {f.as_expr()}')
    linear = terms_of(initial_form(f))
    if linear.get((0, 1)):
        return intersection_number(F.Q, f, cache)
    return intersection_number(F.P, f, cache)


def multiplicity_along(F, B, seed=DEFAULT_SEED, cache=None):
    """mu(F, B) = i(generic polar, B) - nu(B) + 1 for an invariant branch B."""
    f = _curve_poly(B)
    if not is_invariant(F, f):
        raise InputError(f'{f.as_expr()} is not invariant')
    return generic_polar_intersection(F, f, seed, cache) - order(f) + 1
