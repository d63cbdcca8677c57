"""
Exact polynomial helpers over Q and finite algebraic extensions of Q.

Bivariate polynomials are sympy ``Poly`` objects in the generators ``(x, y)``;
univariate ones are ``Poly`` objects in a single generator (``x``, ``y`` or ``t``).
The coefficient field is always the Poly's domain: ``QQ`` or an
``AlgebraicField`` built by :func:`split_extension`.
"""

import logging
from dataclasses import dataclass
from functools import cached_property

import sympy as sp
from sympy import QQ

from errors import InputError, InconsistencyError

logger = logging.getLogger(__name__)

X, Y = sp.symbols('x y')
T = sp.Symbol('t')
_Z = sp.Symbol('z')

# digits used when separating conjugate roots numerically
_ROOT_PRECISION = 40


@dataclass(frozen=True)
class Field:
    """A coefficient field: Q or a tower of simple extensions of Q.

    ``depth`` counts how many times :func:`split_extension` adjoined a root
    on the way from Q to this field.
    """

    domain: object = QQ
    depth: int = 0

    @property
    def is_rational(self):
        return not self.domain.is_AlgebraicField

    @cached_property
    def minimal_polynomial(self):
        """Minimal polynomial of the field generator over Q (None for Q)."""
        if self.is_rational:
            return None
        return sp.Poly(self.domain.mod.to_list(), T, domain=QQ)

    def convert(self, value):
        return self.domain.convert(value)

    def lift(self, f):
        """Re-express ``f`` over this field (the field must contain f's coefficients)."""
        if f.get_domain() == self.domain:
            return f
        return f.set_domain(self.domain)

    def to_sympy(self, value):
        return self.domain.to_sympy(value)

    def label(self):
        if self.is_rational:
            return 'QQ'
        return f'QQ<{self.minimal_polynomial.as_expr()}>'


RATIONALS = Field()


@dataclass(frozen=True)
class Root:
    """One representative of a Galois orbit of roots.

    ``weight`` is the orbit size over the field the polynomial was given in.
    """

    value: object
    field: Field
    weight: int = 1

    def label(self):
        return str(self.field.to_sympy(self.value))


def field_of(f):
    """Wrap the domain of ``f`` as a :class:`Field` of unknown depth."""
    domain = f.get_domain()
    if domain.is_ZZ:
        domain = QQ
    return Field(domain, 0 if not domain.is_AlgebraicField else 1)


def poly2(expr, domain=QQ):
    """Build a bivariate polynomial in (x, y) from a sympy expression."""
    return sp.Poly(expr, X, Y, domain=domain)


def from_terms(terms, domain=QQ, gens=(X, Y)):
    """Build a Poly from an exponent -> coefficient mapping (copied, never mutated)."""
    terms = {m: c for m, c in terms.items() if c}
    if not terms:
        return sp.Poly(0, *gens, domain=domain)
    return sp.Poly.from_dict(dict(terms), *gens, domain=domain)


def terms_of(f):
    """Native-coefficient term dict of ``f`` (empty for the zero polynomial)."""
    if f.is_zero:
        return {}
    return f.as_dict(native=True)


def constant_term(f):
    return terms_of(f).get((0,) * len(f.gens), f.get_domain().zero)


def is_unit(f):
    """True when ``f`` does not vanish at the origin."""
    return bool(constant_term(f))


def order(f):
    """Order of ``f`` at the origin: least total degree of a nonzero term."""
    if f.is_zero:
        raise InputError('order of the zero polynomial is undefined')
    return min(sum(m) for m in f.monoms())


def initial_form(f):
    """Homogeneous part of ``f`` of degree ``order(f)``."""
    d = order(f)
    return from_terms({m: c for m, c in terms_of(f).items() if sum(m) == d},
                      f.get_domain(), f.gens)


def homogeneous_part(f, degree):
    return from_terms({m: c for m, c in terms_of(f).items() if sum(m) == degree},
                      f.get_domain(), f.gens)


def restrict_to_axis(f, var):
    """Restriction of a bivariate ``f`` to ``var = 0`` as a univariate Poly.

    Restricting to x = 0 gives a polynomial in y and vice versa.
    """
    if var == X:
        keep, gen = 0, Y
    else:
        keep, gen = 1, X
    terms = {(m[1 - keep],): c for m, c in terms_of(f).items() if m[keep] == 0}
    return from_terms(terms, f.get_domain(), (gen,))


def univariate_order(p):
    """Order at 0 of a nonzero univariate polynomial."""
    if p.is_zero:
        raise InputError('order of the zero polynomial is undefined')
    return min(m[0] for m in p.monoms())


def evaluate_univariate(p, value):
    """Value of a univariate ``p`` at a native element of its domain."""
    K = p.get_domain()
    total = K.zero
    for (k,), c in terms_of(p).items():
        total += c * value ** k
    return total


def resultant(f, g, var):
    """Resultant of bivariate ``f`` and ``g`` eliminating ``var``.

    The result is a univariate Poly in the remaining generator.
    """
    if f.is_zero or g.is_zero:
        raise InputError('resultant with the zero polynomial')
    f, g = f.unify(g)
    if var == Y:
        f, g = f.reorder(Y, X), g.reorder(Y, X)
    res = f.resultant(g)
    if not isinstance(res, sp.Poly):
        other = X if var == Y else Y
        res = sp.Poly(res, other, domain=f.get_domain())
    return res


def gcd(f, g):
    f, g = f.unify(g)
    return f.gcd(g)


def squarefree_part(f):
    if f.is_zero:
        raise InputError('squarefree part of the zero polynomial')
    return f.sqf_part()


def is_locally_reduced(f):
    """True when no repeated factor of ``f`` passes through the origin."""
    for factor, multiplicity in f.sqf_list()[1]:
        if multiplicity > 1 and not is_unit(factor):
            return False
    return True


def _power_table(base):
    powers = [sp.Poly(1, *base.gens, domain=base.get_domain())]

    def power(n):
        while len(powers) <= n:
            powers.append(powers[-1] * base)
        return powers[n]

    return power


def compose2(f, u, v):
    """Substitute x -> u, y -> v in a bivariate ``f``."""
    K = f.get_domain()
    u = u.set_domain(K) if u.get_domain() != K else u
    v = v.set_domain(K) if v.get_domain() != K else v
    upow, vpow = _power_table(u), _power_table(v)
    result = sp.Poly(0, X, Y, domain=K)
    for (i, j), c in terms_of(f).items():
        result += (upow(i) * vpow(j)).mul_ground(c)
    return result


def affine(a, b, c, domain):
    """The linear polynomial a*x + b*y + c over ``domain``."""
    return from_terms({(1, 0): a, (0, 1): b, (0, 0): c}, domain)


def translate(f, dx, dy):
    """f(x + dx, y + dy)."""
    K = f.get_domain()
    return compose2(f, affine(K.one, K.zero, K.convert(dx), K),
                    affine(K.zero, K.one, K.convert(dy), K))


def linear_change(f, matrix):
    """f(a x + b y, c x + d y) for an invertible matrix ((a, b), (c, d))."""
    K = f.get_domain()
    (a, b), (c, d) = [[K.convert(e) for e in row] for row in matrix]
    if not (a * d - b * c):
        raise InputError('linear change of coordinates is not invertible')
    return compose2(f, affine(a, b, K.zero, K), affine(c, d, K.zero, K))


def _norm_over_rationals(h, field):
    """Norm of a univariate ``h`` over Q(theta) down to Q, as a Poly in T."""
    modulus = field.domain.mod.to_list()
    terms = {}
    for (k,), coeff in terms_of(h).items():
        rep = coeff.rep if hasattr(coeff, 'rep') else [coeff]
        top = len(rep) - 1
        for idx, q in enumerate(rep):
            if q:
                key = (top - idx, k)
                terms[key] = terms.get(key, QQ.zero) + QQ.convert(q)
    H = from_terms(terms, QQ, (_Z, T))
    top = len(modulus) - 1
    M = from_terms({(top - idx, 0): QQ.convert(q) for idx, q in enumerate(modulus)}, QQ, (_Z, T))
    return M.resultant(H)


def _numeric_residual(h, field, beta):
    value = sp.Integer(0)
    b = sp.N(beta, _ROOT_PRECISION)
    for (k,), coeff in terms_of(h).items():
        value += sp.N(field.to_sympy(coeff), _ROOT_PRECISION) * b ** k
    return abs(sp.N(value, _ROOT_PRECISION))


def _adjoin_root(h, field):
    """Adjoin one root of the irreducible ``h`` to ``field``.

    Returns the extended field and the root as an element of it.
    """
    if field.is_rational:
        candidates = [sp.CRootOf(h.as_expr(), h.gens[0], 0)]
    else:
        norm = _norm_over_rationals(h, field)
        candidates = []
        for g, _ in norm.factor_list()[1]:
            if g.degree() < h.degree():
                continue
            candidates.extend(sp.CRootOf(g.as_expr(), T, i) for i in range(g.degree()))
        candidates.sort(key=lambda beta: _numeric_residual(h, field, beta))
    for beta in candidates:
        if field.is_rational:
            domain = QQ.algebraic_field(beta)
        else:
            domain = field.domain.algebraic_field(beta)
        extended = Field(domain, field.depth + 1)
        value = domain.from_sympy(beta)
        if not evaluate_univariate(extended.lift(h), value):
            logger.debug('adjoined root of %s, new field %s', h.as_expr(), extended.label())
            return extended, value
    raise InconsistencyError(f'could not isolate a root of {h.as_expr()} over {field.label()}')


def split_extension(p, field=None):
    """Roots of a univariate ``p``, one representative per Galois orbit.

    Each irreducible factor of ``p`` over ``field`` contributes one
    :class:`Root`. Linear factors give roots in ``field`` itself with weight 1;
    a factor of degree d > 1 gives a root in a new field one level deeper,
    weighted by d.
    """
    if p.is_zero:
        raise InputError('roots of the zero polynomial are undefined')
    if field is None:
        field = field_of(p)
    p = field.lift(p)
    roots = []
    for factor, _ in p.factor_list()[1]:
        degree = factor.degree()
        if degree == 0:
            continue
        if degree == 1:
            c = terms_of(factor)
            K = field.domain
            value = -c.get((0,), K.zero) / c[(1,)]
            roots.append(Root(value, field, 1))
        else:
            extended, value = _adjoin_root(factor, field)
            roots.append(Root(value, extended, degree))
    return roots
