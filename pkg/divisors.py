"""
Divisors of separatrices and the balanced-divisor certificate.

A divisor is a finite sum of invariant branches with nonzero integer weights.
Each branch is followed through the reduction tree to the place where its
strict transform meets the final divisor: a reduced leaf (isolated separatrix)
or a regular point of a dicritical component (dicritical separatrix).
"""

import logging
from dataclasses import dataclass, field
from functools import reduce as fold

from algebra import gcd, is_unit, order
from errors import InputError
from foliation import MeromorphicFunction, PlaneCurve, is_invariant
from resolution import CHART_B, REGULAR, branch_path

logger = logging.getLogger(__name__)

ISOLATED = 'isolated'
DICRITICAL = 'dicritical'


@dataclass(frozen=True)
class SeparatrixDivisor:
    """Sum of branches with integer weights, stored as ((PlaneCurve, weight), ...)."""

    entries: tuple

    def __post_init__(self):
        entries = tuple((b, int(w)) for b, w in self.entries if int(w) != 0)
        names = [b.label() for b, _ in entries]
        if len(set(names)) != len(names):
            raise InputError(f'branch names must be unique: {names}')
        for i, (b1, _) in enumerate(entries):
            if is_unit(b1.f):
                raise InputError(f'{b1.label()} does not pass through the origin')
            for b2, _ in entries[i + 1:]:
                if not is_unit(gcd(b1.f, b2.f)):
                    raise InputError(f'branches {b1.label()} and {b2.label()} share a component')
        object.__setattr__(self, 'entries', entries)

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)

    @property
    def branches(self):
        return [b for b, _ in self.entries]

    def weight(self, branch):
        for b, w in self.entries:
            if b.label() == branch.label():
                return w
        return 0

    @property
    def zero_part(self):
        return [(b, w) for b, w in self.entries if w > 0]

    @property
    def pole_part(self):
        return [(b, -w) for b, w in self.entries if w < 0]

    def _power_product(self, part):
        polys = [b.f ** w for b, w in part]
        if not polys:
            return self.entries[0][0].f ** 0 if self.entries else None
        return fold(lambda a, b: a * b, polys)

    @property
    def zero_poly(self):
        return self._power_product(self.zero_part)

    @property
    def pole_poly(self):
        return self._power_product(self.pole_part)

    def zero_curve(self):
        """The reduced curve supporting the zero part."""
        return fold(lambda a, b: a * b, [b.f for b, _ in self.zero_part])

    def pole_curve(self):
        part = [b.f for b, _ in self.pole_part]
        if not part:
            return self.entries[0][0].f ** 0
        return fold(lambda a, b: a * b, part)

    @property
    def degree(self):
        return sum(w for _, w in self.entries)

    def weighted_multiplicity(self):
        """nu(B_0) - nu(B_inf), weights counted."""
        return sum(w * b.multiplicity for b, w in self.entries)

    def unweighted_multiplicity(self):
        """Sum of branch multiplicities over the support."""
        return sum(b.multiplicity for b, _ in self.entries)

    def is_reduced(self):
        return all(abs(w) == 1 for _, w in self.entries)

    def is_effective(self):
        return all(w > 0 for _, w in self.entries)

    def in_zero_part(self, branch):
        return self.weight(branch) > 0

    def is_adapted(self, C):
        """B_0 - C >= 0: every factor of C through the origin sits in the zero part."""
        f = C.f if isinstance(C, PlaneCurve) else C
        zero = self.zero_poly
        if zero is None:
            return False
        return is_unit(f.exquo(gcd(f, zero)))

    def adapted_equation(self, branch):
        """Balanced equation zero_poly / pole_poly; the branch must be in the zero part."""
        if not self.in_zero_part(branch):
            raise InputError(f'divisor is not adapted to {branch.label()}')
        return MeromorphicFunction(self.zero_poly, self.pole_poly)

    def adapted_for(self, branch, certificate):
        """A balanced divisor adapted to ``branch``.

        For a pole branch, its sign is exchanged with a zero-part branch attached
        to the same dicritical component. Returns None when no such partner exists.
        """
        if self.in_zero_part(branch):
            return self
        where = certificate.attachments.get(branch.label())
        if where is None or where.kind != DICRITICAL:
            return None
        for other, w in self.entries:
            partner = certificate.attachments.get(other.label())
            if w > 0 and partner is not None and partner.kind == DICRITICAL \
                    and partner.target == where.target:
                a, b = self.weight(branch), w
                swapped = []
                for c, wc in self.entries:
                    if c.label() == branch.label():
                        swapped.append((c, -a))
                    elif c.label() == other.label():
                        swapped.append((c, -b))
                    else:
                        swapped.append((c, wc))
                return SeparatrixDivisor(tuple(swapped))
        return None

    def label(self):
        parts = []
        for b, w in self.entries:
            sign = '-' if w < 0 else '+'
            coeff = '' if abs(w) == 1 else f'{abs(w)}'
            parts.append(f'{sign} {coeff}({b.label()})')
        text = ' '.join(parts)
        return text[2:] if text.startswith('+ ') else text


def degree(divisor):
    return divisor.degree


def weighted_multiplicity(divisor):
    return divisor.weighted_multiplicity()


def is_adapted(divisor, C):
    return divisor.is_adapted(C)


def adapted_equation(divisor, branch):
    return divisor.adapted_equation(branch)


@dataclass(frozen=True)
class Attachment:
    kind: str
    target: int
    depth: int = 0


@dataclass
class BalancedCertificate:
    attachments: dict = field(default_factory=dict)
    isolated_slots: dict = field(default_factory=dict)
    isolated_filled: dict = field(default_factory=dict)
    dicritical_sums: dict = field(default_factory=dict)
    problems: list = field(default_factory=list)

    @property
    def balanced(self):
        return not self.problems

    def to_dict(self):
        return {
            'balanced': self.balanced,
            'attachments': {name: {'kind': a.kind, 'target': a.target}
                            for name, a in self.attachments.items()},
            'isolated_slots': self.isolated_slots,
            'dicritical_sums': {f'D{k}': {'sum': s, 'required': r}
                                for k, (s, r) in self.dicritical_sums.items()},
            'problems': list(self.problems),
        }


def _leaf_slots(tree, leaf):
    invariant_axes = sum(1 for c in leaf.components() if not tree.components[c].dicritical)
    base = 1 if leaf.classification.kind == REGULAR else 2
    return max(base - invariant_axes, 0)


def locate_branch(tree, branch):
    """Where the strict transform of a branch meets the final divisor."""
    steps, exit_point = branch_path(tree, branch.f)
    point, _ = steps[-1]
    if exit_point is None:
        if _leaf_slots(tree, point) == 0:
            raise InputError(f'{branch.label()} reaches a corner of the divisor at {point.name}')
        return Attachment(ISOLATED, point.ident, point.depth)
    chart, root = exit_point
    component = tree.components[point.created_component]
    if not component.dicritical:
        raise InputError(
            f'{branch.label()} crosses the invariant component {component.name} at a regular point')
    corner = point.axes.get('x') if chart == CHART_B else (
        point.axes.get('y') if not root.value else None)
    if corner is not None:
        raise InputError(f'{branch.label()} meets {component.name} at a corner')
    return Attachment(DICRITICAL, component.ident, point.depth + 1)


def attach_branches(tree, divisor, form=None):
    """Balanced-divisor certificate of ``divisor`` against the reduction tree."""
    form = form or tree.root.form
    certificate = BalancedCertificate()
    for branch, _ in divisor:
        if order(branch.f) < 1:
            raise InputError(f'{branch.label()} does not pass through the origin')
        if not is_invariant(form, branch):
            raise InputError(f'{branch.label()} is not invariant')
        certificate.attachments[branch.label()] = locate_branch(tree, branch)
    for leaf in tree.leaves():
        if not (leaf.classification.is_reduced or leaf.classification.kind == REGULAR):
            continue
        slots = _leaf_slots(tree, leaf) * tree.relative_weight(tree.root, leaf)
        if slots:
            certificate.isolated_slots[leaf.name] = slots
            certificate.isolated_filled[leaf.name] = 0
    for branch, weight in divisor:
        where = certificate.attachments[branch.label()]
        if where.kind == ISOLATED:
            name = tree.point(where.target).name
            certificate.isolated_filled[name] = certificate.isolated_filled.get(name, 0) + 1
            if weight != 1:
                certificate.problems.append(
                    f'isolated separatrix {branch.label()} has weight {weight}, expected 1')
    for name, slots in certificate.isolated_slots.items():
        filled = certificate.isolated_filled.get(name, 0)
        if filled != slots:
            certificate.problems.append(
                f'{name} has {slots} isolated separatrices, divisor supplies {filled}')
    for component in tree.dicritical_components():
        total = sum(w for b, w in divisor
                    if certificate.attachments[b.label()].kind == DICRITICAL
                    and certificate.attachments[b.label()].target == component.ident)
        required = (2 - component.valence) * component.weight
        certificate.dicritical_sums[component.ident] = (total, required)
        if total != required:
            certificate.problems.append(
                f'{component.name}: weights sum to {total}, balance needs {required}')
    if certificate.problems:
        logger.info('divisor %s is not balanced: %s', divisor.label(),
                    '; '.join(certificate.problems))
    return certificate
