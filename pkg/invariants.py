"""
Polar excess, GSV-index, Tjurina numbers of foliations and the identity table.

``InvariantContext`` owns one reduction tree, one balanced-divisor certificate and
one intersection cache, and memoises every per-branch number so the identity rows
below share them. Row failures are data; only oracle disagreements raise.
"""

import logging
from dataclasses import asdict, dataclass, field
from functools import cached_property
from itertools import combinations

import pandas as pd

from algebra import is_locally_reduced, order
from data_cache import poly_key
from divisors import attach_branches
from errors import InconsistencyError, InputError
from foliation import (DEFAULT_SEED, MeromorphicFunction, PlaneCurve, algebraic_multiplicity,
                       generic_polar_intersection, is_invariant, milnor_foliation,
                       tangency_index, tangency_order)
from localring import (INFINITE, LocalIdeal, intersection_number, milnor_curve, quotient_dim,
                       tjurina_curve)
from resolution import LITERAL, MAX_DEPTH, POLAR, reduce, tangency_blowup_steps

logger = logging.getLogger(__name__)

PASS = 'pass'
FAIL = 'fail'
SKIPPED = 'skipped'

IDENTITIES = {
    'multiplicity_balance': 'i',
    'polar_excess_zero_divisor': 'ii',
    'polar_intersection': 'iii',
    'milnor_chi': 'iv',
    'milnor_formula': 'v',
    'polar_excess_milnor': 'vi',
    'polar_excess_multiplicities': 'vii',
    'generalized_curve_multiplicities': 'viii',
    'gsv_polar_excess': 'ix',
    'gsv_zero_divisor': 'x',
    'gsv_milnor': 'xi',
    'gsv_tjurina': 'xii',
    'milnor_tjurina_curve': 'xiii',
    'milnor_tjurina_divisor': 'xiv',
    'milnor_tjurina_branches': 'xv',
    'tangency_excess_probe': 'xvi',
    'generalized_curve_polar_excess': 'xvii',
    'chi_properties': '',
    'generalized_curve_tjurina': '',
    'tjurina_total_union': '',
    'smooth_branch_gsv': '',
    'gsv_adjunction': '',
    'gsv_effective': '',
    'polar_excess_nonnegative': '',
    'tangency_blowup': '',
}


def _poly(C):
    return C.f if isinstance(C, PlaneCurve) else C


def _one_like(f):
    return f ** 0


def polar_excess(F, B, divisor, seed=DEFAULT_SEED, cache=None):
    """Delta(F, B) = i(P^F, B) - i(P^{dF_B}, B) with F_B the balanced equation of ``divisor``."""
    equation = divisor.adapted_equation(B)
    f = _poly(B)
    return generic_polar_intersection(F, f, seed, cache) \
        - generic_polar_intersection(equation, f, seed, cache)


def _check_reduced_invariant(F, f):
    if not is_locally_reduced(f):
        raise InputError(f'{f.as_expr()} is not reduced')
    if not is_invariant(F, f):
        raise InputError(f'{f.as_expr()} is not invariant')


def gsv_by_polars(F, C, seed=DEFAULT_SEED, cache=None):
    """i(P^F, C) - i(P^{df}, C)."""
    f = _poly(C)
    df = MeromorphicFunction(f, _one_like(f))
    return generic_polar_intersection(F, f, seed, cache) \
        - generic_polar_intersection(df, f, seed, cache)


def tjurina_foliation(F, C):
    """tau(F, C) = dim O/(f, P, Q)."""
    f = _poly(C)
    f, P = f.unify(F.P)
    f, Q = f.unify(F.Q)
    value = quotient_dim(LocalIdeal((f, P, Q)))
    if value == INFINITE:
        raise InputError(f'tau(F, {f.as_expr()}) is infinite')
    return value


def gsv_by_tjurina(F, C):
    f = _poly(C)
    return tjurina_foliation(F, f) - tjurina_curve(f)


def gsv(F, C, seed=DEFAULT_SEED, cache=None):
    """GSV index of F along the reduced invariant curve C; both routes must agree."""
    f = _poly(C)
    _check_reduced_invariant(F, f)
    by_polars = gsv_by_polars(F, f, seed, cache)
    by_tjurina = gsv_by_tjurina(F, f)
    if by_polars != by_tjurina:
        raise InconsistencyError(
            f'GSV routes disagree along {f.as_expr()}: polar {by_polars}, tjurina {by_tjurina}')
    return by_polars


def tjurina_sum(F, divisor):
    """T(F, B) = sum of a_B tau(F, B)."""
    return sum(w * tjurina_foliation(F, b) for b, w in divisor)


@dataclass
class IdentityRow:
    id: str
    ref: str
    lhs: object = None
    rhs: object = None
    status: str = SKIPPED
    mode: str = None
    subject: str = ''
    reason: str = ''
    other: dict = None

    def to_record(self):
        record = asdict(self)
        if record['other'] is None:
            record.pop('other')
        return record


def _compare(lhs, rhs, relation):
    if relation == '>=':
        return lhs >= rhs
    return lhs == rhs


def _row(ident, lhs, rhs, subject='', relation='=', mode=None):
    status = PASS if _compare(lhs, rhs, relation) else FAIL
    return IdentityRow(ident, IDENTITIES[ident], lhs, rhs, status, mode, subject)


def _skip(ident, reason, subject=''):
    return IdentityRow(ident, IDENTITIES[ident], subject=subject, reason=reason)


@dataclass
class BranchReport:
    name: str
    weight: int
    nu: int
    mu_curve: int = None
    tau_curve: int = None
    tau_foliation: int = None
    gsv: int = None
    mu_along: int = None
    mu_adapted: int = None
    polar_excess: int = None
    index: int = None
    attachment: dict = None


@dataclass
class InvariantReport:
    nu: int
    mu: int
    xi: int
    chi: dict
    mode: str
    dicritical: bool
    second_type: bool
    generalized_curve: bool
    branches: list = field(default_factory=list)
    probes: list = field(default_factory=list)
    divisor: dict = field(default_factory=dict)
    identities: list = field(default_factory=list)

    def to_dict(self):
        return {
            'nu_F': self.nu,
            'mu_F': self.mu,
            'xi_F': self.xi,
            'chi': dict(self.chi),
            'chi_mode': self.mode,
            'dicritical': self.dicritical,
            'second_type': self.second_type,
            'generalized_curve': self.generalized_curve,
            'branches': [asdict(b) for b in self.branches],
            'probes': list(self.probes),
            **self.divisor,
            'identities': [row.to_record() for row in self.identities],
        }


class InvariantContext:
    """Shared state for one analysis of a foliation against a separatrix divisor."""

    def __init__(self, form, divisor=None, probes=(), mode=POLAR, seed=DEFAULT_SEED,
                 max_depth=MAX_DEPTH, tree=None):
        if mode not in (POLAR, LITERAL):
            raise InputError(f'unknown chi mode {mode!r}')
        self.form = form
        self.divisor = divisor
        self.probes = list(probes)
        self.mode = mode
        self.seed = seed
        self.tree = tree or reduce(form, max_depth)
        self.cache = self.tree.cache
        self._polar = {}
        self._adapted_polar = {}

    # foliation numbers

    @cached_property
    def nu(self):
        return algebraic_multiplicity(self.form)

    @cached_property
    def mu(self):
        return milnor_foliation(self.form, self.cache)

    @cached_property
    def xi(self):
        return self.tree.tangency_excess(self.tree.root)

    @cached_property
    def chi(self):
        values = {LITERAL: self.tree.chi_number(LITERAL, self.seed),
                  POLAR: self.tree.chi_number(POLAR, self.seed)}
        if values[LITERAL] != values[POLAR]:
            logger.warning('chi differs between modes: literal %d, polar %d',
                           values[LITERAL], values[POLAR])
        return values

    @cached_property
    def certificate(self):
        if not self.divisor:
            return None
        return attach_branches(self.tree, self.divisor, self.form)

    @property
    def balanced(self):
        return self.certificate is not None and self.certificate.balanced

    @property
    def non_dicritical(self):
        return not self.tree.is_dicritical()

    # curve numbers

    def i(self, f, g):
        return intersection_number(_poly(f), _poly(g), self.cache)

    def polar_with(self, C):
        """i(P^F, C) for a generic polar."""
        f = _poly(C)
        key = poly_key(f)
        if key not in self._polar:
            self._polar[key] = generic_polar_intersection(self.form, f, self.seed, self.cache)
        return self._polar[key]

    def polar_of_equation(self, equation, C):
        f = _poly(C)
        key = (poly_key(equation.numerator), poly_key(equation.denominator), poly_key(f))
        if key not in self._adapted_polar:
            self._adapted_polar[key] = generic_polar_intersection(equation, f, self.seed,
                                                                  self.cache)
        return self._adapted_polar[key]

    def mu_curve(self, C):
        return milnor_curve(_poly(C), self.cache)

    def tau_curve(self, C):
        return tjurina_curve(_poly(C))

    def tau_foliation(self, C):
        return tjurina_foliation(self.form, C)

    def gsv_polar(self, C):
        f = _poly(C)
        return self.polar_with(f) - self.polar_of_equation(MeromorphicFunction(f, _one_like(f)), f)

    def gsv_tjurina(self, C):
        return self.tau_foliation(C) - self.tau_curve(C)

    def mu_along(self, B):
        """mu(F, B)."""
        return self.polar_with(B) - order(_poly(B)) + 1

    # divisor numbers

    def adapted_divisor(self, B):
        if self.certificate is None:
            return None
        return self.divisor.adapted_for(B, self.certificate)

    def adapted_equation(self, B):
        adapted = self.adapted_divisor(B)
        return None if adapted is None else adapted.adapted_equation(B)

    def mu_adapted(self, B):
        """mu(dF_B, B), or None without an adapted balanced divisor."""
        equation = self.adapted_equation(B)
        if equation is None:
            return None
        return self.polar_of_equation(equation, B) - order(_poly(B)) + 1

    def polar_excess(self, B):
        equation = self.adapted_equation(B)
        if equation is None:
            return None
        return self.polar_with(B) - self.polar_of_equation(equation, B)

    def weighted_sum(self, function, part=None):
        """sum of a_B function(B); None if any term is None."""
        total = 0
        for b, w in (part if part is not None else self.divisor):
            value = function(b)
            if value is None:
                return None
            total += w * value
        return total

    def zero_curve(self):
        return self.divisor.zero_curve() if self.divisor.zero_part else None

    def zero_branches(self):
        return [b for b, _ in self.divisor.zero_part]

    @cached_property
    def delta_zero(self):
        """Delta(F, B_0)."""
        return self.weighted_sum(self.polar_excess, self.divisor.zero_part)

    @cached_property
    def delta(self):
        """Delta(F, B) = Delta(F, B_0) - Delta(F, B_inf)."""
        return self.weighted_sum(self.polar_excess)

    @cached_property
    def tjurina_total(self):
        return self.weighted_sum(self.tau_foliation)


def _zero_minus(ctx, B):
    """i(B, (F_B)_0 - B) - i(B, (F_B)_inf) for the divisor adapted to B."""
    adapted = ctx.adapted_divisor(B)
    if adapted is None:
        return None
    total = 0
    for c, w in adapted:
        if c.label() == B.label():
            continue
        total += w * ctx.i(B, c)
    return total


def _mode_row(ident, ctx, sides, subject=''):
    """Row evaluated for both chi modes; status follows the selected one."""
    rows = {}
    for mode in (POLAR, LITERAL):
        lhs, rhs = sides(ctx.chi[mode])
        rows[mode] = _row(ident, lhs, rhs, subject, mode=mode)
    row = rows[ctx.mode]
    other = rows[LITERAL if ctx.mode == POLAR else POLAR]
    row.other = {'mode': other.mode, 'lhs': other.lhs, 'rhs': other.rhs, 'status': other.status}
    return row


def _needs_balanced(ctx, reduced=False, non_dicritical=False, effective=False):
    """Reason string when a row's hypotheses fail, else None."""
    if ctx.divisor is None or not len(ctx.divisor):
        return 'no separatrix divisor given'
    if not ctx.balanced:
        return 'divisor is not balanced'
    if reduced and not ctx.divisor.is_reduced():
        return 'divisor is not reduced'
    if non_dicritical and not ctx.non_dicritical:
        return 'foliation is dicritical'
    if effective and not ctx.divisor.is_effective():
        return 'divisor is not effective'
    if not ctx.divisor.zero_part:
        return 'divisor has no zero part'
    return None


def multiplicity_balance(ctx):
    reason = _needs_balanced(ctx)
    if reason:
        return [_skip('multiplicity_balance', reason)]
    weighted = ctx.divisor.weighted_multiplicity()
    unweighted = ctx.divisor.unweighted_multiplicity()
    if weighted != unweighted:
        logger.warning('nu(B) weighted %d differs from unweighted %d', weighted, unweighted)
    return [_row('multiplicity_balance', ctx.nu, weighted - 1 + ctx.xi)]


def polar_excess_zero_divisor(ctx):
    reason = _needs_balanced(ctx, reduced=True)
    if reason:
        return [_skip('polar_excess_zero_divisor', reason)]
    f0, g = ctx.zero_curve(), ctx.divisor.pole_curve()
    rhs = ctx.polar_with(f0) + ctx.i(f0, g) - ctx.mu_curve(f0) - order(f0) + 1
    return [_row('polar_excess_zero_divisor', ctx.delta_zero, rhs)]


def polar_intersection(ctx):
    reason = _needs_balanced(ctx)
    if reason:
        return [_skip('polar_intersection', reason)]
    lhs = ctx.weighted_sum(ctx.polar_with)
    return [_mode_row('polar_intersection', ctx,
                      lambda chi: (lhs, ctx.mu + ctx.nu - (chi + ctx.xi)))]


def milnor_chi(ctx):
    reason = _needs_balanced(ctx)
    if reason:
        return [_skip('milnor_chi', reason)]
    total = ctx.weighted_sum(ctx.mu_along)
    degree = ctx.divisor.degree
    return [_mode_row('milnor_chi', ctx, lambda chi: (ctx.mu, total + chi - degree + 1))]


def milnor_formula(ctx):
    if ctx.divisor is None or not ctx.divisor.zero_part:
        return [_skip('milnor_formula', 'no zero part')]
    branches = ctx.zero_branches()
    f0 = ctx.zero_curve()
    lhs = ctx.mu_curve(f0) + len(branches) - 1
    rhs = sum(ctx.mu_curve(b) for b in branches) \
        + 2 * sum(ctx.i(a, b) for a, b in combinations(branches, 2))
    return [_row('milnor_formula', lhs, rhs)]


def polar_excess_milnor(ctx):
    reason = _needs_balanced(ctx)
    if reason:
        return [_skip('polar_excess_milnor', reason)]
    adapted = ctx.weighted_sum(ctx.mu_adapted)
    if ctx.delta is None or adapted is None:
        return [_skip('polar_excess_milnor', 'a pole branch has no adapted balanced divisor')]
    degree = ctx.divisor.degree
    return [_mode_row('polar_excess_milnor', ctx,
                      lambda chi: (ctx.delta, ctx.mu - adapted + degree - 1 - chi))]


def polar_excess_multiplicities(ctx):
    reason = _needs_balanced(ctx)
    if reason:
        return [_skip('polar_excess_multiplicities', reason)]
    adapted = ctx.weighted_sum(ctx.mu_adapted)
    if ctx.delta is None or adapted is None:
        return [_skip('polar_excess_multiplicities',
                      'a pole branch has no adapted balanced divisor')]
    return [_row('polar_excess_multiplicities', ctx.delta,
                 ctx.weighted_sum(ctx.mu_along) - adapted)]


def generalized_curve_multiplicities(ctx):
    reason = _needs_balanced(ctx, reduced=True,
                             non_dicritical=True, effective=True)
    if reason:
        return [_skip('generalized_curve_multiplicities', reason)]
    equal = all(ctx.mu_along(b) == ctx.mu_adapted(b) for b in ctx.zero_branches())
    return [_row('generalized_curve_multiplicities', ctx.tree.is_generalized_curve(), equal)]


def gsv_polar_excess(ctx):
    reason = _needs_balanced(ctx, reduced=True)
    if reason:
        return [_skip('gsv_polar_excess', reason)]
    f0, g = ctx.zero_curve(), ctx.divisor.pole_curve()
    rows = []
    for b in ctx.zero_branches():
        rest = sum(ctx.i(b, c) for c in ctx.zero_branches() if c.label() != b.label())
        rhs = ctx.polar_excess(b) + rest - ctx.i(b, g)
        rows.append(_row('gsv_polar_excess', ctx.gsv_polar(b), rhs, b.label()))
    rhs = ctx.delta_zero - ctx.i(f0, g)
    rows.append(_row('gsv_polar_excess', ctx.gsv_polar(f0), rhs, 'B0'))
    return rows


def gsv_zero_divisor(ctx):
    reason = _needs_balanced(ctx, reduced=True)
    if reason:
        return [_skip('gsv_zero_divisor', reason)]
    f0 = ctx.zero_curve()
    rhs = ctx.polar_with(f0) - ctx.mu_curve(f0) - order(f0) + 1
    return [_row('gsv_zero_divisor', ctx.gsv_polar(f0), rhs)]


def gsv_milnor(ctx):
    reason = _needs_balanced(ctx, reduced=True, non_dicritical=True,
                             effective=True)
    if reason:
        return [_skip('gsv_milnor', reason)]
    f0 = ctx.zero_curve()
    lhs, mu_c = ctx.gsv_polar(f0), ctx.mu_curve(f0)
    return [_mode_row('gsv_milnor', ctx, lambda chi: (lhs, ctx.mu - mu_c - chi))]


def gsv_tjurina(ctx):
    if ctx.divisor is None or not len(ctx.divisor):
        return [_skip('gsv_tjurina', 'no separatrix divisor given')]
    rows = []
    curves = [(b.label(), b.f) for b in ctx.divisor.branches]
    if len(ctx.zero_branches()) > 1:
        curves.append(('B0', ctx.zero_curve()))
    for name, f in curves:
        rows.append(_row('gsv_tjurina', ctx.gsv_tjurina(f), ctx.gsv_polar(f), name))
    return rows


def milnor_tjurina_curve(ctx):
    reason = _needs_balanced(ctx, reduced=True, non_dicritical=True,
                             effective=True)
    if reason:
        return [_skip('milnor_tjurina_curve', reason)]
    f0 = ctx.zero_curve()
    lhs = ctx.mu - ctx.tau_foliation(f0)
    mu_c, tau_c = ctx.mu_curve(f0), ctx.tau_curve(f0)
    return [_mode_row('milnor_tjurina_curve', ctx, lambda chi: (lhs, mu_c - tau_c + chi))]


def milnor_tjurina_divisor(ctx):
    reason = _needs_balanced(ctx, reduced=True)
    if reason:
        return [_skip('milnor_tjurina_divisor', reason)]
    adapted = ctx.weighted_sum(ctx.mu_adapted)
    crossing = ctx.weighted_sum(lambda b: _zero_minus(ctx, b))
    if adapted is None or crossing is None:
        return [_skip('milnor_tjurina_divisor', 'a pole branch has no adapted balanced divisor')]
    lhs = ctx.mu - ctx.tjurina_total
    base = adapted - ctx.weighted_sum(ctx.tau_curve) - ctx.divisor.degree + 1 - crossing
    return [_mode_row('milnor_tjurina_divisor', ctx, lambda chi: (lhs, base + chi))]


def milnor_tjurina_branches(ctx):
    reason = _needs_balanced(ctx, reduced=True, non_dicritical=True,
                             effective=True)
    if reason:
        return [_skip('milnor_tjurina_branches', reason)]
    branches = ctx.zero_branches()
    f0 = ctx.zero_curve()
    lhs = ctx.mu - sum(ctx.tau_foliation(b) for b in branches)
    crossing = sum(ctx.i(a, b) for a in branches for b in branches if a.label() != b.label())
    base = ctx.mu_curve(f0) - sum(ctx.tau_curve(b) for b in branches) - crossing
    return [_mode_row('milnor_tjurina_branches', ctx, lambda chi: (lhs, base + chi))]


def _probe_multiplicity_sum(ctx, probe):
    """sum over the tree of w_q nu_q(B) xi_q."""
    tree = ctx.tree
    reached = tree.track_curve(probe.f)
    return sum(tree.relative_weight(tree.root, p) * reached[p.ident] * tree.tangency_excess(p)
               for p in tree.points if p.ident in reached)


def tangency_excess_probe(ctx):
    if not ctx.probes:
        return [_skip('tangency_excess_probe', 'no probe branches')]
    reason = _needs_balanced(ctx)
    if reason:
        return [_skip('tangency_excess_probe', reason)]
    rows = []
    for probe in ctx.probes:
        lhs = sum(w * ctx.i(b, probe) for b, w in ctx.divisor)
        rhs = tangency_order(ctx.form, probe.f, ctx.cache) - _probe_multiplicity_sum(ctx, probe) + 1
        rows.append(_row('tangency_excess_probe', lhs, rhs, probe.label()))
    return rows


def generalized_curve_polar_excess(ctx):
    reason = _needs_balanced(ctx)
    if reason:
        return [_skip('generalized_curve_polar_excess', reason)]
    if ctx.delta_zero is None:
        return [_skip('generalized_curve_polar_excess', 'polar excess unavailable')]
    return [_row('generalized_curve_polar_excess', ctx.delta_zero == 0,
                 ctx.tree.is_generalized_curve())]


def chi_properties(ctx):
    second = ctx.tree.is_second_type()

    def holds(chi):
        return chi >= 0 and (not second or chi == 0) and (not (ctx.nu > 1 and chi == 0) or second)

    return [_mode_row('chi_properties', ctx, lambda chi: (True, holds(chi)))]


def generalized_curve_tjurina(ctx):
    reason = _needs_balanced(ctx, reduced=True)
    if reason:
        return [_skip('generalized_curve_tjurina', reason)]
    f0, g = ctx.zero_curve(), ctx.divisor.pole_curve()
    holds = ctx.tau_curve(f0) - ctx.tau_foliation(f0) == ctx.i(f0, g)
    return [_row('generalized_curve_tjurina', ctx.tree.is_generalized_curve(), holds)]


def tjurina_total_union(ctx):
    reason = _needs_balanced(ctx, reduced=True, non_dicritical=True,
                             effective=True)
    if reason:
        return [_skip('tjurina_total_union', reason)]
    branches = ctx.zero_branches()
    f0 = ctx.zero_curve()
    lhs = sum(ctx.tau_foliation(b) for b in branches) - ctx.tau_foliation(f0)
    rhs = sum(ctx.tau_curve(b) for b in branches) - ctx.tau_curve(f0) \
        + 2 * sum(ctx.i(a, b) for a, b in combinations(branches, 2))
    return [_row('tjurina_total_union', lhs, rhs)]


def smooth_branch_gsv(ctx):
    if ctx.divisor is None or not len(ctx.divisor):
        return [_skip('smooth_branch_gsv', 'no separatrix divisor given')]
    rows = [_row('smooth_branch_gsv', ctx.mu_along(b), ctx.gsv_polar(b), b.label())
            for b in ctx.divisor.branches if b.is_smooth()]
    return rows or [_skip('smooth_branch_gsv', 'no smooth branch')]


def gsv_adjunction(ctx):
    branches = ctx.zero_branches() if ctx.divisor is not None else []
    if len(branches) < 2:
        return [_skip('gsv_adjunction', 'fewer than two zero-part branches')]
    rows = []
    for a, b in combinations(branches, 2):
        union = a.f * b.f
        rhs = ctx.gsv_polar(a) + ctx.gsv_polar(b) - 2 * ctx.i(a, b)
        rows.append(_row('gsv_adjunction', ctx.gsv_polar(union), rhs,
                         f'{a.label()}, {b.label()}'))
    return rows


def gsv_effective(ctx):
    reason = _needs_balanced(ctx, reduced=True, effective=True)
    if reason:
        return [_skip('gsv_effective', reason)]
    return [_row('gsv_effective', ctx.gsv_polar(ctx.zero_curve()), ctx.delta)]


def polar_excess_nonnegative(ctx):
    reason = _needs_balanced(ctx)
    if reason:
        return [_skip('polar_excess_nonnegative', reason)]
    return [_row('polar_excess_nonnegative', ctx.polar_excess(b), 0, b.label(), relation='>=')
            for b in ctx.zero_branches()]


def tangency_blowup(ctx):
    if not ctx.probes:
        return [_skip('tangency_blowup', 'no probe branches')]
    rows = []
    for probe in ctx.probes:
        for ident, lhs, rhs in tangency_blowup_steps(ctx.tree, probe.f, ctx.cache):
            subject = f'{probe.label()} at {ctx.tree.point(ident).name}'
            rows.append(_row('tangency_blowup', lhs, rhs, subject))
    return rows


CHECKS = {
    'multiplicity_balance': multiplicity_balance,
    'polar_excess_zero_divisor': polar_excess_zero_divisor,
    'polar_intersection': polar_intersection,
    'milnor_chi': milnor_chi,
    'milnor_formula': milnor_formula,
    'polar_excess_milnor': polar_excess_milnor,
    'polar_excess_multiplicities': polar_excess_multiplicities,
    'generalized_curve_multiplicities': generalized_curve_multiplicities,
    'gsv_polar_excess': gsv_polar_excess,
    'gsv_zero_divisor': gsv_zero_divisor,
    'gsv_milnor': gsv_milnor,
    'gsv_tjurina': gsv_tjurina,
    'milnor_tjurina_curve': milnor_tjurina_curve,
    'milnor_tjurina_divisor': milnor_tjurina_divisor,
    'milnor_tjurina_branches': milnor_tjurina_branches,
    'tangency_excess_probe': tangency_excess_probe,
    'generalized_curve_polar_excess': generalized_curve_polar_excess,
    'chi_properties': chi_properties,
    'generalized_curve_tjurina': generalized_curve_tjurina,
    'tjurina_total_union': tjurina_total_union,
    'smooth_branch_gsv': smooth_branch_gsv,
    'gsv_adjunction': gsv_adjunction,
    'gsv_effective': gsv_effective,
    'polar_excess_nonnegative': polar_excess_nonnegative,
    'tangency_blowup': tangency_blowup,
}


def select_checks(checks=None):
    """Check ids for a selection of ids or roman refs; all checks when empty."""
    if not checks:
        return list(CHECKS)
    by_ref = {ref: ident for ident, ref in IDENTITIES.items() if ref}
    selected = []
    for name in checks:
        ident = by_ref.get(name, name)
        if ident not in CHECKS:
            raise InputError(f'unknown identity {name!r}')
        if ident not in selected:
            selected.append(ident)
    return selected


def run_checks(ctx, checks=None):
    rows = []
    for ident in select_checks(checks):
        try:
            rows.extend(CHECKS[ident](ctx))
        except InputError as e:
            rows.append(_skip(ident, str(e)))
    failed = [r for r in rows if r.status == FAIL]
    for row in failed:
        logger.warning('identity %s (%s) fails: %s != %s', row.id, row.subject or '-',
                       row.lhs, row.rhs)
    logger.info('identities: %d pass, %d fail, %d skipped',
                sum(r.status == PASS for r in rows), len(failed),
                sum(r.status == SKIPPED for r in rows))
    return rows


def verify_identities(form, divisor, probes=(), mode=POLAR, seed=DEFAULT_SEED,
                      max_depth=MAX_DEPTH, checks=None):
    """Identity verdict table for a foliation and a separatrix divisor."""
    ctx = InvariantContext(form, divisor, probes, mode, seed, max_depth)
    return run_checks(ctx, checks)


def _branch_report(ctx, branch, weight):
    f = branch.f
    polar_route = ctx.gsv_polar(f)
    tjurina_route = ctx.gsv_tjurina(f)
    if polar_route != tjurina_route:
        logger.warning('GSV routes disagree along %s: polar %d, tjurina %d', branch.label(),
                       polar_route, tjurina_route)
    where = ctx.certificate.attachments.get(branch.label()) if ctx.certificate else None
    balanced = ctx.balanced
    return BranchReport(
        name=branch.label(),
        weight=weight,
        nu=branch.multiplicity,
        mu_curve=ctx.mu_curve(f),
        tau_curve=ctx.tau_curve(f),
        tau_foliation=ctx.tau_foliation(f),
        gsv=polar_route,
        mu_along=ctx.mu_along(branch),
        mu_adapted=ctx.mu_adapted(branch) if balanced else None,
        polar_excess=ctx.polar_excess(branch) if balanced else None,
        index=tangency_index(ctx.form, f, ctx.cache) if branch.is_smooth() else None,
        attachment=None if where is None else {'kind': where.kind, 'target': where.target},
    )


def _divisor_summary(ctx):
    divisor = ctx.divisor
    if divisor is None or not len(divisor):
        return {}
    summary = {
        'divisor': divisor.label(),
        'degree': divisor.degree,
        'nu_B': divisor.weighted_multiplicity(),
        'nu_B_unweighted': divisor.unweighted_multiplicity(),
        'balanced': ctx.certificate.to_dict(),
        'tjurina_sum': ctx.tjurina_total,
    }
    if ctx.balanced:
        summary['delta_B'] = ctx.delta
        summary['delta_B0'] = ctx.delta_zero
    if divisor.zero_part:
        f0 = ctx.zero_curve()
        summary['mu_B0'] = ctx.mu_curve(f0)
        summary['gsv_B0'] = ctx.gsv_polar(f0)
    return summary


def analyze(form, divisor=None, probes=(), mode=POLAR, seed=DEFAULT_SEED, max_depth=MAX_DEPTH,
            checks=None):
    """Full InvariantReport of a foliation, a separatrix divisor and probe branches."""
    ctx = InvariantContext(form, divisor, probes, mode, seed, max_depth)
    branches = [_branch_report(ctx, b, w) for b, w in (divisor or ())]
    probe_rows = [{'name': p.label(), 'tangency_order': tangency_order(form, p.f, ctx.cache),
                   'intersection_with_divisor': sum(w * ctx.i(b, p) for b, w in divisor or ())}
                  for p in ctx.probes]
    return InvariantReport(
        nu=ctx.nu, mu=ctx.mu, xi=ctx.xi, chi=ctx.chi, mode=mode,
        dicritical=ctx.tree.is_dicritical(),
        second_type=ctx.tree.is_second_type(),
        generalized_curve=ctx.tree.is_generalized_curve(),
        branches=branches, probes=probe_rows, divisor=_divisor_summary(ctx),
        identities=run_checks(ctx, checks),
    )


def verdict_frame(rows):
    """Identity rows as a DataFrame, one row per identity and subject."""
    columns = ['id', 'ref', 'subject', 'mode', 'lhs', 'rhs', 'status', 'reason']
    return pd.DataFrame([{c: getattr(r, c) for c in columns} for r in rows], columns=columns,
                        dtype=object)
