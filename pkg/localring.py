"""
Computations in the local ring of the plane at the origin.

Standard bases are computed for a local degree order (smaller total degree is
larger, ties broken by the power of x) in the truncation O/m^N. Once the
staircase of I + m^N has no monomial of degree N - 1, Nakayama gives
m^(N-1) in I and the truncated staircase is the staircase of I; otherwise N
grows. Intersection numbers come from two independent routes, the staircase of
a local standard basis and the x-order of a resultant after a shear, and the
two must agree.
"""

import logging
import math
import os
from dataclasses import dataclass
from functools import reduce as fold

import numpy as np
from sympy import QQ

from algebra import (X, Y, from_terms, gcd, is_locally_reduced, is_unit, restrict_to_axis,
                     resultant, terms_of, univariate_order, homogeneous_part, affine, compose2)
from data_cache import pair_key
from errors import InconsistencyError, InputError

logger = logging.getLogger(__name__)

INFINITE = math.inf

# shears x -> x + c*y tried before seeded random ones
_SHEARS = (0, 1, -1, 2, -2, 3, -3, 5, 7)
_RANDOM_SHEARS = int(os.getenv('FOLIATION_RANDOM_SHEARS', '32'))
_SHEAR_SEED = int(os.getenv('FOLIATION_SEED', '0'))

# first truncation degree when no colength hint is given
_START_TRUNCATION = 8


def _leading_monomial(terms):
    return max(terms, key=lambda m: (-(m[0] + m[1]), m[0]))


def _divides(a, b):
    return a[0] <= b[0] and a[1] <= b[1]


def _lcm(a, b):
    return (max(a[0], b[0]), max(a[1], b[1]))


def _truncate(terms, cap):
    return {m: c for m, c in terms.items() if m[0] + m[1] < cap}


def _monic(terms):
    lead = terms[_leading_monomial(terms)]
    return {m: c / lead for m, c in terms.items()}


def _sub_multiple(h, coeff, shift, g, cap, zero):
    """h - coeff * x^shift[0] y^shift[1] * g on term dicts, dropping degrees >= cap."""
    result = dict(h)
    for (i, j), c in g.items():
        key = (i + shift[0], j + shift[1])
        if key[0] + key[1] >= cap:
            continue
        value = result.get(key, zero) - coeff * c
        if value:
            result[key] = value
        else:
            result.pop(key, None)
    return result


def _normal_form(h, reducers, cap, zero):
    """Leading-term normal form of ``h`` in O/m^cap against monic ``reducers``.

    Each step removes the leading monomial and only adds smaller ones, and
    there are finitely many monomials below ``cap``, so the loop ends.
    """
    while h:
        lm = _leading_monomial(h)
        for g, glm in reducers:
            if _divides(glm, lm):
                h = _sub_multiple(h, h[lm], (lm[0] - glm[0], lm[1] - glm[1]), g, cap, zero)
                break
        else:
            return _monic(h)
    return h


def _s_polynomial(f, lf, g, lg, cap, K):
    lcm = _lcm(lf, lg)
    scaled = {}
    for (i, j), c in f.items():
        key = (i + lcm[0] - lf[0], j + lcm[1] - lf[1])
        if key[0] + key[1] < cap:
            scaled[key] = c
    return _sub_multiple(scaled, K.one, (lcm[0] - lg[0], lcm[1] - lg[1]), g, cap, K.zero)


def truncated_basis(generators, cap, K):
    """Minimal monic standard basis of (generators) + m^cap, as term dicts.

    Buchberger's algorithm with the product and chain criteria; elements are
    kept monic and the basis is pruned to leading monomials that no other
    leading monomial divides.
    """
    basis = []
    for g in generators:
        terms = _truncate(g, cap)
        if terms:
            basis.append((_monic(terms), _leading_monomial(terms)))
    if any(lm == (0, 0) for _, lm in basis):
        return [{(0, 0): K.one}]
    pairs = {(i, j) for j in range(len(basis)) for i in range(j)}
    while pairs:
        i, j = min(pairs, key=lambda p: sum(_lcm(basis[p[0]][1], basis[p[1]][1])))
        pairs.discard((i, j))
        (f, lf), (g, lg) = basis[i], basis[j]
        lcm = _lcm(lf, lg)
        if lcm[0] + lcm[1] >= cap:
            continue
        if min(lf[0], lg[0]) == 0 and min(lf[1], lg[1]) == 0:
            continue
        if any(k not in (i, j) and _divides(lk, lcm)
               and (min(i, k), max(i, k)) not in pairs
               and (min(j, k), max(j, k)) not in pairs
               for k, (_, lk) in enumerate(basis)):
            continue
        h = _normal_form(_s_polynomial(f, lf, g, lg, cap, K), basis, cap, K.zero)
        if not h:
            continue
        lm = _leading_monomial(h)
        if lm == (0, 0):
            return [{(0, 0): K.one}]
        basis.append((h, lm))
        n = len(basis) - 1
        pairs.update((k, n) for k in range(n))
    return _minimal(basis)


def _minimal(basis):
    """Drop elements whose leading monomial another element's divides (first one wins on ties)."""
    minimal = []
    for k, (g, lm) in enumerate(basis):
        if any(_divides(other, lm) and (other != lm or m < k)
               for m, (_, other) in enumerate(basis) if m != k):
            continue
        minimal.append(g)
    return minimal


def _ecart(terms, lm):
    return max(m[0] + m[1] for m in terms) - (lm[0] + lm[1])


def _mora_normal_form(h, basis, zero):
    """Mora's weak normal form of ``h`` against monic ``basis`` pairs, untruncated."""
    reducers = list(basis)
    while h:
        lm = _leading_monomial(h)
        ecart_h = _ecart(h, lm)
        candidates = [(g, glm) for g, glm in reducers if _divides(glm, lm)]
        if not candidates:
            return _monic(h)
        g, glm = min(candidates, key=lambda pair: _ecart(*pair))
        if _ecart(g, glm) > ecart_h:
            reducers.append((_monic(h), lm))
        h = _sub_multiple(h, h[lm] / g[glm], (lm[0] - glm[0], lm[1] - glm[1]), g, math.inf,
                          zero)
    return h


def mora_basis(generators, K):
    """Standard basis by Mora's tangent-cone algorithm, for ideals of infinite colength."""
    basis = [(_monic(g), _leading_monomial(g)) for g in generators if g]
    pairs = [(i, j) for j in range(len(basis)) for i in range(j)]
    while pairs:
        i, j = pairs.pop()
        (f, lf), (g, lg) = basis[i], basis[j]
        if min(lf[0], lg[0]) == 0 and min(lf[1], lg[1]) == 0:
            continue
        h = _mora_normal_form(_s_polynomial(f, lf, g, lg, math.inf, K), basis, K.zero)
        if not h:
            continue
        basis.append((h, _leading_monomial(h)))
        n = len(basis) - 1
        pairs.extend((k, n) for k in range(n))
    return _minimal(basis)


def _bezout_bound(generators):
    """deg a * deg b for the first pair without a common factor through 0, else None."""
    for j, b in enumerate(generators):
        for a in generators[:j]:
            common = gcd(a, b)
            if is_unit(common):
                a_, b_ = a.exquo(common), b.exquo(common)
                return a_.total_degree() * b_.total_degree()
    return None


@dataclass(frozen=True)
class LocalIdeal:
    """Ideal of the local ring at the origin generated by bivariate Polys."""

    generators: tuple

    def __post_init__(self):
        gens = tuple(g for g in self.generators if not g.is_zero)
        if not gens:
            raise InputError('local ideal needs a nonzero generator')
        object.__setattr__(self, 'generators', gens)

    @property
    def domain(self):
        domain = self.generators[0].get_domain()
        return QQ if domain.is_ZZ else domain

    def polys(self):
        K = self.domain
        return [g.set_domain(K) if g.get_domain() != K else g for g in self.generators]

    def is_finite(self):
        """True when the generators share no factor through the origin."""
        return is_unit(fold(gcd, self.polys()))

    def standard_basis(self, hint=None):
        """Local standard basis as a list of Polys."""
        return local_std_basis(self, hint)

    def staircase(self, hint=None):
        """Standard monomials, or None when the staircase is infinite.

        ``hint`` is a guess of the colength; a wrong guess only costs time.
        """
        found = self._certified(hint)
        return None if found is None else found[1]

    def _certified(self, hint):
        if not self.is_finite():
            return None
        polys = self.polys()
        terms = [terms_of(g) for g in polys]
        bound = _bezout_bound(polys)
        cap = hint + 1 if hint is not None else _START_TRUNCATION
        if bound is not None:
            cap = min(cap, bound + 1)
        while True:
            basis = truncated_basis(terms, cap, self.domain)
            lms = [_leading_monomial(g) for g in basis]
            stairs = [(i, d - i) for d in range(cap) for i in range(d, -1, -1)
                      if not any(_divides(m, (i, d - i)) for m in lms)]
            if all(i + j < cap - 1 for i, j in stairs):
                return basis, stairs
            if bound is not None and cap > bound:
                raise InconsistencyError(
                    f'staircase exceeds the Bezout bound {bound} for {self.generators}')
            logger.debug('staircase reaches degree %s, raising truncation', cap - 1)
            cap = 2 * cap if bound is None else min(2 * cap, bound + 1)


def local_std_basis(ideal, hint=None):
    """Standard basis of ``ideal`` for the local degree order, as Polys.

    Finite colength goes through the certified truncation; otherwise Mora's
    tangent-cone algorithm runs on the full polynomials.
    """
    K = ideal.domain
    found = ideal._certified(hint)
    if found is not None:
        basis = found[0]
    else:
        basis = mora_basis([terms_of(g) for g in ideal.polys()], K)
    return [from_terms(g, K) for g in basis]


def quotient_dim(ideal, hint=None):
    """dim of O/I at the origin: an int, or INFINITE."""
    stairs = ideal.staircase(hint)
    if stairs is None:
        return INFINITE
    return len(stairs)


def _staircase_intersection(f, g, hint=None):
    return quotient_dim(LocalIdeal((f, g)), hint)


def _shear(f, c):
    K = f.get_domain()
    return compose2(f, affine(K.one, c, K.zero, K), affine(K.zero, K.one, K.zero, K))


def _sheared_pair(f, g, c):
    """f and g sheared by x -> x + c*y, or None when c is not admissible.

    Admissible means both top-degree forms keep a pure power of y and the two
    sheared curves meet the line x = 0 only at the origin.
    """
    K = f.get_domain()
    c = K.convert(c)
    for h in (f, g):
        top = homogeneous_part(h, h.total_degree())
        if not sum((coeff * c ** i for (i, _), coeff in terms_of(top).items()), K.zero):
            return None
    fs, gs = _shear(f, c), _shear(g, c)
    common = restrict_to_axis(fs, X).gcd(restrict_to_axis(gs, X))
    if len(common.monoms()) != 1:
        return None
    return fs, gs


def _shear_candidates(seed):
    yield from _SHEARS
    rng = np.random.default_rng(seed)
    for value in rng.integers(-97, 98, size=_RANDOM_SHEARS):
        yield int(value)


def _resultant_intersection(f, g, seed=_SHEAR_SEED):
    for c in _shear_candidates(seed):
        sheared = _sheared_pair(f, g, c)
        if sheared is None:
            continue
        fs, gs = sheared
        res = resultant(fs, gs, Y)
        logger.debug('resultant route used shear x -> x + %s*y', c)
        return univariate_order(res)
    raise InconsistencyError('no admissible shear found for the resultant route')


def intersection_number(f, g, cache=None):
    """Local intersection number i(f, g) at the origin.

    Units give 0; a common factor through the origin gives INFINITE. Otherwise
    the staircase and resultant routes are both evaluated and must agree.
    """
    if is_unit(f) or is_unit(g):
        return 0
    if f.is_zero or g.is_zero:
        return INFINITE
    f, g = f.unify(g)
    if f.get_domain().is_ZZ:
        f, g = f.set_domain(QQ), g.set_domain(QQ)
    key = None
    if cache is not None:
        key = pair_key(f, g)
        cached = cache.get(key)
        if cached is not None:
            return cached
    common = gcd(f, g)
    if common.total_degree() > 0:
        if not is_unit(common):
            value = INFINITE
            if cache is not None:
                cache.set(key, value)
            return value
        f, g = f.exquo(common), g.exquo(common)
    by_resultant = _resultant_intersection(f, g)
    by_staircase = _staircase_intersection(f, g, hint=by_resultant)
    if by_staircase != by_resultant:
        raise InconsistencyError(
            f'intersection routes disagree for ({f.as_expr()}, {g.as_expr()}): '
            f'staircase {by_staircase}, resultant {by_resultant}')
    if cache is not None:
        cache.set(key, by_staircase)
    return by_staircase


def milnor_curve(f, cache=None):
    """Milnor number i(f_x, f_y); INFINITE when f has a repeated factor at 0."""
    return intersection_number(f.diff(X), f.diff(Y), cache)


def tjurina_curve(f):
    """Tjurina number dim O/(f, f_x, f_y) of a locally reduced curve."""
    if not is_locally_reduced(f):
        raise InputError(f'Tjurina number needs a reduced curve, got {f.as_expr()}')
    mu = milnor_curve(f)
    # tau <= mu
    hint = None if mu == INFINITE else mu
    return quotient_dim(LocalIdeal((f, f.diff(X), f.diff(Y))), hint)
