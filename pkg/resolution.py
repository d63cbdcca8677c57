"""
Reduction of singularities by point blow-ups.

Every non-reduced singular point is blown up. Chart A is y = t x (exceptional
divisor x = 0) and chart B is x = s y (exceptional divisor y = 0); chart A
covers every point of the new divisor except the origin of chart B. Points on
the divisor are found from the restriction of the transformed form and kept
one per Galois orbit, with the orbit size as weight.

Divisor components through a point are always coordinate axes of its chart,
which keeps proximity and valence bookkeeping to a lookup on ``axes``.
"""

import logging
import os
from collections import Counter
from dataclasses import dataclass, field
from typing import Optional

import sympy as sp
from sympy import QQ

from algebra import (X, Y, Field, Root, affine, compose2, constant_term, field_of, from_terms,
                     homogeneous_part, order, restrict_to_axis, split_extension, terms_of,
                     translate)
from data_cache import IntersectionCache
from errors import InconsistencyError, InputError, ReductionDepthError
from foliation import (DEFAULT_SEED, MIN_POLAR_SAMPLES, OneForm, PolarSampler,
                       algebraic_multiplicity, polar, tangency_index, tangency_order)

logger = logging.getLogger(__name__)

MAX_DEPTH = int(os.getenv('FOLIATION_MAX_DEPTH', '64'))

REGULAR = 'regular'
NON_DEGENERATE = 'non-degenerate'
SADDLE_NODE = 'saddle-node'
NON_REDUCED = 'non-reduced'

LITERAL = 'literal'
POLAR = 'polar'

CHART_ROOT, CHART_A, CHART_B = 'root', 'A', 'B'


@dataclass(frozen=True)
class SingularityClass:
    kind: str
    ratio: Optional[str] = None
    ratio_in_q_plus: Optional[bool] = None
    weak_direction: Optional[tuple] = None
    strong_direction: Optional[tuple] = None
    weak_axis: Optional[str] = None
    weak_component: Optional[int] = None
    index: Optional[int] = None

    @property
    def is_reduced(self):
        return self.kind in (NON_DEGENERATE, SADDLE_NODE)

    @property
    def is_tangent_saddle_node(self):
        return self.kind == SADDLE_NODE and self.weak_component is not None

    def label(self):
        if self.kind == NON_DEGENERATE:
            return f'{self.kind} ({self.ratio})'
        if self.kind == SADDLE_NODE:
            suffix = f', tangent, Ind {self.index}' if self.is_tangent_saddle_node else ''
            return f'{self.kind}{suffix}'
        return self.kind


@dataclass
class DivisorComponent:
    ident: int
    created_at: int
    dicritical: bool
    weight: int = 1
    curvette_multiplicity: int = 1
    valence: int = 0
    incident: list = field(default_factory=list)

    @property
    def name(self):
        return f'D{self.ident}'


@dataclass
class InfNearPoint:
    """A singular point of the reduction process.

    ``axes`` maps 'x' (the axis x = 0) and 'y' (the axis y = 0) to the divisor
    component lying on it, or None.
    """

    ident: int
    depth: int
    chart: str
    parent: Optional[int]
    center: Optional[Root]
    field: Field
    weight: int
    total_weight: int
    form: OneForm
    axes: dict
    nu: int
    classification: SingularityClass = None
    dicritical: Optional[bool] = None
    created_component: Optional[int] = None
    children: list = field(default_factory=list)

    @property
    def name(self):
        return f'p{self.ident}'

    @property
    def is_leaf(self):
        return self.created_component is None

    def components(self):
        return [c for c in (self.axes.get('x'), self.axes.get('y')) if c is not None]

    def location(self):
        if self.chart == CHART_ROOT:
            return 'origin'
        if self.chart == CHART_B:
            return 'chart B origin'
        return f't = {self.center.label()}'


def _rational_value(value, fld):
    """value as a sympy Rational when it lies in Q, else None."""
    if fld.is_rational:
        return QQ.to_sympy(value)
    rep = value.rep
    if len(rep) > 1:
        return None
    return QQ.to_sympy(rep[0]) if rep else sp.Integer(0)


def _is_rational_square(r):
    return r >= 0 and sp.sqrt(r).is_Rational


def _linear_coefficient(f, monomial, K):
    return terms_of(f).get(monomial, K.zero)


def _axis_poly(axis, domain):
    return from_terms({(1, 0) if axis == 'x' else (0, 1): domain.one}, domain)


def classify(F, axes=None, components=None, cache=None):
    """Classify the singularity of F at the origin of its chart.

    ``axes`` and ``components`` describe the divisor through the point; they
    decide whether a saddle-node is tangent (weak direction along an invariant
    divisor component).
    """
    axes = axes or {}
    components = components or {}
    if not F.is_singular():
        return SingularityClass(REGULAR)
    K = F.domain
    fld = field_of(F.P)
    p10 = _linear_coefficient(F.P, (1, 0), K)
    p01 = _linear_coefficient(F.P, (0, 1), K)
    q10 = _linear_coefficient(F.Q, (1, 0), K)
    q01 = _linear_coefficient(F.Q, (0, 1), K)
    # Jacobian of the dual vector field (-Q, P)
    a, b, c, d = -q10, -q01, p10, p01
    if not (a or b or c or d):
        return SingularityClass(NON_REDUCED)
    tr = a + d
    det = a * d - b * c
    if det:
        m = tr * tr / det
        m_value = _rational_value(m, fld)
        m_expr = fld.to_sympy(m)
        ratio = sp.simplify(((m_expr - 2) + sp.sqrt(m_expr * (m_expr - 4))) / 2)
        in_q_plus = (m_value is not None and m_value >= 4
                     and _is_rational_square(m_value * (m_value - 4)))
        if in_q_plus:
            return SingularityClass(NON_REDUCED, str(ratio), True)
        return SingularityClass(NON_DEGENERATE, str(ratio), False)
    if not tr:
        return SingularityClass(NON_REDUCED)
    kernel = (-b, a) if (a or b) else (-d, c)
    strong = (b, d) if (b or d) else (a, c)
    weak_axis = None
    if not kernel[0]:
        weak_axis = 'x'
    elif not kernel[1]:
        weak_axis = 'y'
    weak_component = None
    index = None
    if weak_axis is not None:
        comp = axes.get(weak_axis)
        if comp is not None and not components[comp].dicritical:
            weak_component = comp
            index = tangency_index(F, _axis_poly(weak_axis, K), cache)
    return SingularityClass(
        SADDLE_NODE,
        weak_direction=tuple(str(fld.to_sympy(v)) for v in kernel),
        strong_direction=tuple(str(fld.to_sympy(v)) for v in strong),
        weak_axis=weak_axis,
        weak_component=weak_component,
        index=index,
    )


def is_dicritical_blowup(F, nu=None):
    """x P_nu + y Q_nu vanishes identically."""
    nu = algebraic_multiplicity(F) if nu is None else nu
    K = F.domain
    Pn, Qn = homogeneous_part(F.P, nu), homogeneous_part(F.Q, nu)
    return (affine(K.one, K.zero, K.zero, K) * Pn + affine(K.zero, K.one, K.zero, K) * Qn).is_zero


def _divide_by_axis(f, axis, power):
    if f.is_zero or power == 0:
        return f
    idx = 0 if axis == 'x' else 1
    terms = {}
    for m, c in terms_of(f).items():
        if m[idx] < power:
            raise InconsistencyError(f'{f.as_expr()} is not divisible by {axis}^{power}')
        shifted = list(m)
        shifted[idx] -= power
        terms[tuple(shifted)] = c
    return from_terms(terms, f.get_domain())


def _chart_maps(chart, K, c=None):
    """(u, v) with x = u, y = v in the new chart coordinates."""
    c = K.zero if c is None else c
    if chart == CHART_A:
        return (from_terms({(1, 0): K.one}, K), from_terms({(1, 1): K.one, (1, 0): c}, K))
    return (from_terms({(1, 1): K.one}, K), from_terms({(0, 1): K.one}, K))


def _chart_names(names, chart, depth):
    if chart == CHART_A:
        return (names[0], f't{depth}')
    return (f's{depth}', names[1])


def blowup(F, chart, depth=1):
    """Transform of F in one chart of the blow-up at the origin.

    Returns the saturated form and the dicritical flag; the pullback is
    divided by the exceptional coordinate to the power nu, or nu + 1 when the
    blow-up is dicritical.
    """
    if not F.is_singular():
        raise InputError('blow-up is only applied at singular points')
    nu = algebraic_multiplicity(F)
    dicritical = is_dicritical_blowup(F, nu)
    power = nu + 1 if dicritical else nu
    K = F.domain
    u, v = _chart_maps(chart, K)
    Pc, Qc = compose2(F.P, u, v), compose2(F.Q, u, v)
    x_poly = from_terms({(1, 0): K.one}, K)
    y_poly = from_terms({(0, 1): K.one}, K)
    if chart == CHART_A:
        P1 = Pc + y_poly * Qc
        Q1 = x_poly * Qc
        axis = 'x'
    else:
        P1 = y_poly * Pc
        Q1 = x_poly * Pc + Qc
        axis = 'y'
    P1, Q1 = _divide_by_axis(P1, axis, power), _divide_by_axis(Q1, axis, power)
    return OneForm(P1, Q1, _chart_names(F.names, chart, depth)), dicritical


def chart_form(F, chart, root=None, depth=1):
    """Transform of F at the point of the new divisor given by chart and root."""
    G, dicritical = blowup(F, chart, depth)
    if chart == CHART_B or root is None:
        return G, dicritical
    P, Q = root.field.lift(G.P), root.field.lift(G.Q)
    return OneForm(translate(P, 0, root.value), translate(Q, 0, root.value), G.names), dicritical


def strict_transform(f, chart, root=None):
    """Strict transform of a curve through the origin into the given chart point.

    Returns None when f does not vanish at the origin.
    """
    m = order(f)
    if m == 0:
        return None
    if root is not None:
        f = root.field.lift(f)
    K = f.get_domain()
    c = root.value if (chart == CHART_A and root is not None) else None
    u, v = _chart_maps(chart, K, c)
    return _divide_by_axis(compose2(f, u, v), 'x' if chart == CHART_A else 'y', m)


def divisor_points(G, chart_a_field):
    """Singular points of a chart-A transform on its divisor x = 0, one per orbit."""
    p, q = restrict_to_axis(G.P, X), restrict_to_axis(G.Q, X)
    if p.is_zero and q.is_zero:
        raise InconsistencyError(f'transform {G} is singular along the whole divisor')
    common = q if p.is_zero else (p if q.is_zero else p.gcd(q))
    if common.is_zero or common.degree() <= 0:
        return []
    return split_extension(common, chart_a_field)


@dataclass
class ReductionTree:
    """Infinitely near singular points and divisor components of one reduction."""

    points: list = field(default_factory=list)
    components: dict = field(default_factory=dict)
    max_depth: int = MAX_DEPTH
    cache: IntersectionCache = field(default_factory=IntersectionCache)

    @property
    def root(self):
        return self.points[0]

    def point(self, ident):
        return self.points[ident]

    def path(self, point):
        """Points from the root down to ``point``, inclusive."""
        chain = [point]
        while chain[-1].parent is not None:
            chain.append(self.points[chain[-1].parent])
        return list(reversed(chain))

    def is_ancestor(self, a, b):
        """True when a lies on the path from the root to b (a == b included)."""
        return any(p.ident == a.ident for p in self.path(b))

    def subtree(self, point):
        out, stack = [], [point]
        while stack:
            node = stack.pop()
            out.append(node)
            stack.extend(self.points[c] for c in node.children)
        return out

    def relative_weight(self, base, point):
        """Product of orbit weights on the path strictly below ``base`` down to ``point``."""
        weight = 1
        for node in self.path(point):
            if node.depth > base.depth:
                weight *= node.weight
        return weight

    def leaves(self):
        return [p for p in self.points if p.is_leaf]

    def blown_up(self):
        return [p for p in self.points if p.created_component is not None]

    def tangent_saddle_nodes(self):
        return [p for p in self.points if p.classification.is_tangent_saddle_node]

    def saddle_nodes(self):
        return [p for p in self.points if p.classification.kind == SADDLE_NODE]

    def dicritical_components(self):
        return [c for c in self.components.values() if c.dicritical]

    @property
    def depth(self):
        return max(p.depth for p in self.points)

    def curvette_multiplicity(self, component, base=None):
        """nu(D) for the component, measured at ``base`` (default the root).

        Backward proximity: the curvette has multiplicity 1 at the point D was
        created from, and at each earlier point the sum of its multiplicities at
        the later points proximate to it.
        """
        creator = self.points[self.components[component].created_at]
        base = base or self.root
        chain = [p for p in self.path(creator) if p.depth >= base.depth]
        if chain[0].ident != base.ident:
            raise InputError(f'{self.components[component].name} was not created above {base.name}')
        mult = {creator.ident: 1}
        for i in range(len(chain) - 2, -1, -1):
            a = chain[i]
            total = 0
            for later in chain[i + 1:]:
                if a.created_component in later.components():
                    total += mult[later.ident]
            mult[a.ident] = total
        return mult[base.ident]

    def _adjacent(self, upper, lower):
        """Whether the components created at ``upper`` and ``lower`` meet at the end."""
        da, db = upper.created_component, lower.created_component
        if da not in lower.components():
            return False
        return not any(da in c.components() and db in c.components() for c in self.blown_up())

    def _update_valences(self):
        blown = self.blown_up()
        for comp in self.components.values():
            comp.incident = []
        for upper in blown:
            for lower in blown:
                if lower.ident == upper.ident or not self.is_ancestor(upper, lower):
                    continue
                if self._adjacent(upper, lower):
                    da = self.components[upper.created_component]
                    db = self.components[lower.created_component]
                    da.incident.append((db.ident, self.relative_weight(upper, lower)))
                    db.incident.append((da.ident, 1))
        for comp in self.components.values():
            comp.valence = sum(w for _, w in comp.incident)
            comp.curvette_multiplicity = self.curvette_multiplicity(comp.ident)

    def tangency_excess(self, point):
        """xi at ``point``: tangent saddle-nodes above it whose weak separatrix lies
        on a component created at or above it, weighted by nu(D) relative to it."""
        if point.classification.is_reduced or point.is_leaf:
            return 0
        total = 0
        for node in self.subtree(point):
            if node.ident == point.ident or not node.classification.is_tangent_saddle_node:
                continue
            cls = node.classification
            creator = self.points[self.components[cls.weak_component].created_at]
            if not self.is_ancestor(point, creator):
                continue
            nu_d = self.curvette_multiplicity(cls.weak_component, point)
            total += self.relative_weight(point, node) * nu_d * (cls.index - 1)
        return total

    def track_curve(self, f):
        """Multiplicity of the strict transforms of f at every tree point they reach."""
        reached = {}
        stack = [(self.root, f)]
        while stack:
            node, g = stack.pop()
            m = order(g)
            if m == 0:
                continue
            reached[node.ident] = m
            for cid in node.children:
                child = self.points[cid]
                h = strict_transform(g, child.chart, child.center)
                if h is not None and not constant_term(h):
                    stack.append((child, h))
        return reached

    def polar_multiplicities(self, seed=DEFAULT_SEED):
        """Multiplicities of a generic polar's strict transforms at the tree points.

        The most frequent multiplicity vector over the seeded samples is used.
        """
        vectors = []
        for a, b in PolarSampler(seed).take(MIN_POLAR_SAMPLES + 1):
            try:
                curve = polar(self.root.form, a, b).numerator
            except InputError:
                continue
            reached = self.track_curve(curve)
            vectors.append(tuple(reached.get(p.ident, 0) for p in self.points))
        if not vectors:
            raise InputError('no usable polar curve for the polar multiplicities')
        best = Counter(vectors).most_common(1)[0][0]
        return {p.ident: m for p, m in zip(self.points, best)}

    def chi_number(self, mode=POLAR, seed=DEFAULT_SEED):
        """chi = sum of w_q nu_q xi_q over the tree minus xi at the root."""
        if mode == LITERAL:
            nus = {p.ident: p.nu for p in self.points}
        elif mode == POLAR:
            nus = self.polar_multiplicities(seed)
        else:
            raise InputError(f'unknown chi mode {mode!r}')
        total = 0
        for point in self.points:
            xi = self.tangency_excess(point)
            if xi:
                total += self.relative_weight(self.root, point) * nus[point.ident] * xi
        return total - self.tangency_excess(self.root)

    def is_second_type(self):
        return not self.tangent_saddle_nodes()

    def is_generalized_curve(self):
        return not self.saddle_nodes()

    def is_dicritical(self):
        return bool(self.dicritical_components())

    def infinitely_near_points(self):
        return list(self.points)


def _classify_point(tree, point):
    point.classification = classify(point.form, point.axes, tree.components, tree.cache)
    logger.debug('%s at %s (%s): %s, nu=%d', point.name, point.location(), point.form,
                 point.classification.label(), point.nu)


def _new_point(tree, depth, chart, parent, center, fld, weight, form, axes):
    parent_weight = tree.points[parent].total_weight if parent is not None else 1
    point = InfNearPoint(
        ident=len(tree.points), depth=depth, chart=chart, parent=parent, center=center,
        field=fld, weight=weight, total_weight=parent_weight * weight, form=form, axes=axes,
        nu=algebraic_multiplicity(form) if form.is_singular() else 0)
    tree.points.append(point)
    if parent is not None:
        tree.points[parent].children.append(point.ident)
    _classify_point(tree, point)
    return point


def _blow_up_point(tree, point):
    comp_id = len(tree.components) + 1
    F = point.form
    depth = point.depth + 1
    G_a, dicritical = blowup(F, CHART_A, depth)
    G_b, _ = blowup(F, CHART_B, depth)
    point.dicritical = dicritical
    point.created_component = comp_id
    tree.components[comp_id] = DivisorComponent(comp_id, point.ident, dicritical,
                                                weight=point.total_weight)
    logger.debug('blow-up of %s: nu=%d dicritical=%s creates D%d', point.name, point.nu,
                 dicritical, comp_id)
    created = []
    for root in divisor_points(G_a, point.field):
        P, Q = root.field.lift(G_a.P), root.field.lift(G_a.Q)
        form = OneForm(translate(P, 0, root.value), translate(Q, 0, root.value), G_a.names)
        through_y = point.axes.get('y') if not root.value else None
        axes = {'x': comp_id, 'y': through_y}
        created.append(_new_point(tree, depth, CHART_A, point.ident, root, root.field,
                                  root.weight, form, axes))
    if not (constant_term(G_b.P) or constant_term(G_b.Q)):
        axes = {'x': point.axes.get('x'), 'y': comp_id}
        created.append(_new_point(tree, depth, CHART_B, point.ident, None, point.field, 1,
                                  G_b, axes))
    return created


def reduce(F, max_depth=MAX_DEPTH, base_field=None):
    """Reduction tree of F: blow up until every singular point is reduced.

    ``base_field`` optionally fixes a larger coefficient field from the start, which
    splits Galois orbits that would otherwise be carried with weights.
    """
    if base_field is not None:
        F = OneForm(base_field.lift(F.P), base_field.lift(F.Q), F.names)
    fld = base_field or field_of(F.P)
    tree = ReductionTree(max_depth=max_depth)
    root = _new_point(tree, 0, CHART_ROOT, None, None, fld, 1, F, {'x': None, 'y': None})
    stack = [root]
    while stack:
        point = stack.pop()
        if point.classification.kind != NON_REDUCED:
            continue
        if point.depth >= max_depth:
            tree._update_valences()
            raise ReductionDepthError(max_depth, tree)
        stack.extend(_blow_up_point(tree, point))
    tree._update_valences()
    logger.info('reduction: %d points, %d components, %d tangent saddle-nodes, depth %d',
                len(tree.points), len(tree.components), len(tree.tangent_saddle_nodes()),
                tree.depth)
    return tree


def tangency_excess(tree, point=None):
    return tree.tangency_excess(point or tree.root)


def chi_number(tree, mode=POLAR, seed=DEFAULT_SEED):
    return tree.chi_number(mode, seed)


def is_second_type(tree):
    return tree.is_second_type()


def is_generalized_curve(tree):
    return tree.is_generalized_curve()


def infinitely_near_points(tree):
    return tree.infinitely_near_points()


def tangent_line_point(f, point):
    """Where the strict transform of a branch f meets the divisor created at ``point``.

    Returns (chart, root) with root None for chart B. A tangent cone made of
    more than one line means f is not a branch.
    """
    m = order(f)
    cone = homogeneous_part(f, m)
    dehomogenised = from_terms({(j,): c for (i, j), c in terms_of(cone).items()},
                               cone.get_domain(), (Y,))
    degree = dehomogenised.degree()
    if degree == 0:
        return CHART_B, None
    if degree < m:
        raise InputError(f'{f.as_expr()} is not a branch: its tangent cone has several lines')
    roots = split_extension(dehomogenised, point.field)
    if len(roots) != 1 or roots[0].weight != 1:
        raise InputError(f'{f.as_expr()} is not a branch over the rationals: '
                         'its tangent cone has several lines')
    return CHART_A, roots[0]


def child_at(tree, point, chart, root):
    """The tree child of ``point`` at the given divisor point, if it is singular."""
    for cid in point.children:
        child = tree.points[cid]
        if child.chart != chart:
            continue
        if chart == CHART_B:
            return child
        if child.center.field.domain == root.field.domain and child.center.value == root.value:
            return child
    return None


def branch_path(tree, f):
    """Follow a branch through the tree.

    Returns the list of (point, transform of f there) along the branch and the
    divisor point (chart, root) where it leaves the tree, or None when it ends
    at a leaf.
    """
    point, g = tree.root, f
    steps = [(point, g)]
    while not point.is_leaf:
        chart, root = tangent_line_point(g, point)
        child = child_at(tree, point, chart, root)
        if child is None:
            return steps, (chart, root)
        g = strict_transform(g, chart, root)
        point = child
        steps.append((point, g))
    return steps, None


def tangency_blowup_steps(tree, f, cache=None):
    """Blow-up recursion of the tangency order along a non-invariant branch.

    Each step records tang at a point p and nu_p(F) nu_p(B) + tang at the next
    point (with nu_p(F) + 1 for dicritical blow-ups).
    """
    cache = cache if cache is not None else tree.cache
    steps, exit_point = branch_path(tree, f)
    rows = []
    for i, (point, g) in enumerate(steps):
        if point.is_leaf:
            break
        if i + 1 < len(steps):
            nxt, h = steps[i + 1]
            form = nxt.form
        else:
            chart, root = exit_point
            form, _ = chart_form(point.form, chart, root, point.depth + 1)
            h = strict_transform(g, chart, root)
        lhs = tangency_order(point.form, g, cache)
        factor = point.nu + 1 if point.dicritical else point.nu
        rhs = factor * order(g) + tangency_order(form, h, cache)
        rows.append((point.ident, lhs, rhs))
    return rows
