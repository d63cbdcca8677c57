"""
Command-line front end.

    python cli.py analyze  CASE [--mode polar|literal] [--seed N] [--max-depth N] [--json]
    python cli.py reduce   CASE [--dot PATH] [--png PATH] [--json]
    python cli.py intersect F G [--json]
    python cli.py check    CASE [--checks ids|all] [--json]

CASE is a JSON file (``-`` reads stdin):

    {"form": {"P": "4*x*y", "Q": "y - 2*x^2"},
     "curves": [{"name": "B1", "equation": "y", "weight": 1},
                {"name": "probe", "equation": "y - x^3", "role": "probe"}],
     "options": {"mode": "polar", "seed": 0, "max_depth": 64, "checks": "all"}}

Exit codes: 0 success, 1 input error, 2 failing identity (check), 3 internal
inconsistency.
"""

import argparse
import json
import logging
import os
import sys
from dataclasses import dataclass, field

from divisors import SeparatrixDivisor
from errors import FoliationError, InputError, ReductionDepthError
from expression import parse_polynomial, render_poly
from foliation import DEFAULT_SEED, OneForm, PlaneCurve
from invariants import FAIL, analyze, select_checks, verdict_frame, verify_identities
from localring import INFINITE, intersection_number
from plotting import format_verdicts, render_tree
from resolution import LITERAL, MAX_DEPTH, POLAR, reduce

logger = logging.getLogger(__name__)

LOG_LEVEL = os.getenv('FOLIATION_LOG_LEVEL', 'WARNING')

SEPARATRIX = 'separatrix'
PROBE = 'probe'


@dataclass
class Case:
    form: OneForm
    divisor: SeparatrixDivisor = None
    probes: list = field(default_factory=list)
    options: dict = field(default_factory=dict)


def _parse_field(text, where):
    if not isinstance(text, str):
        raise InputError(f'{where}: expected an expression string')
    try:
        return parse_polynomial(text)
    except InputError as e:
        raise InputError(f'{where}: {e}') from e


def parse_case(data):
    """Case from the decoded JSON document."""
    if not isinstance(data, dict) or 'form' not in data:
        raise InputError('case file needs a "form" object')
    form_data = data['form']
    if not isinstance(form_data, dict) or 'P' not in form_data or 'Q' not in form_data:
        raise InputError('"form" needs "P" and "Q"')
    form = OneForm(_parse_field(form_data['P'], 'form.P'), _parse_field(form_data['Q'], 'form.Q'))
    entries, probes, names = [], [], set()
    for i, curve in enumerate(data.get('curves', [])):
        name = curve.get('name') or f'C{i + 1}'
        if name in names:
            raise InputError(f'duplicate curve name {name!r}')
        names.add(name)
        branch = PlaneCurve(_parse_field(curve.get('equation'), f'curves[{i}].equation'), name)
        role = curve.get('role', SEPARATRIX)
        if role == PROBE:
            probes.append(branch)
            continue
        if role != SEPARATRIX:
            raise InputError(f'curves[{i}]: unknown role {role!r}')
        weight = curve.get('weight', 1)
        if isinstance(weight, bool) or not isinstance(weight, int) or weight == 0:
            raise InputError(f'curves[{i}]: weight must be a nonzero integer')
        entries.append((branch, weight))
    divisor = SeparatrixDivisor(tuple(entries)) if entries else None
    return Case(form, divisor, probes, dict(data.get('options', {})))


def load_case(source):
    try:
        if source == '-':
            data = json.load(sys.stdin)
        else:
            with open(source, encoding='utf-8') as fh:
                data = json.load(fh)
    except OSError as e:
        raise InputError(f'cannot read case file {source}: {e}') from e
    except json.JSONDecodeError as e:
        raise InputError(f'{source}:{e.lineno}:{e.colno}: invalid JSON: {e.msg}') from e
    return parse_case(data)


def resolve_options(case_options, args):
    """Flags override the case file, which overrides the environment."""
    options = {'mode': POLAR, 'seed': DEFAULT_SEED, 'max_depth': MAX_DEPTH, 'checks': None}
    for key in options:
        if case_options.get(key) is not None:
            options[key] = case_options[key]
        flag = getattr(args, key, None)
        if flag is not None:
            options[key] = flag
    checks = options['checks']
    if isinstance(checks, str):
        checks = None if checks == 'all' else [c.strip() for c in checks.split(',') if c.strip()]
    options['checks'] = checks
    if options['mode'] not in (POLAR, LITERAL):
        raise InputError(f'unknown mode {options["mode"]!r}')
    return options


def tree_to_dict(tree):
    points = []
    for p in tree.points:
        points.append({
            'name': p.name,
            'depth': p.depth,
            'chart': p.chart,
            'parent': None if p.parent is None else tree.point(p.parent).name,
            'center': None if p.center is None else p.center.label(),
            'field': p.field.label(),
            'weight': p.total_weight,
            'form': {'P': render_poly(p.form.P), 'Q': render_poly(p.form.Q)},
            'nu': p.nu,
            'class': p.classification.label(),
            'dicritical_blowup': p.dicritical,
            'component': None if p.created_component is None
            else tree.components[p.created_component].name,
            'on': [tree.components[c].name for c in p.components()],
            'children': [tree.point(c).name for c in p.children],
        })
    components = [{
        'name': c.name,
        'created_at': tree.point(c.created_at).name,
        'dicritical': c.dicritical,
        'weight': c.weight,
        'nu': c.curvette_multiplicity,
        'valence': c.valence,
    } for c in tree.components.values()]
    return {'points': points, 'components': components}


def tree_to_dot(tree):
    """Graphviz text: one node per infinitely near point and per divisor component."""
    lines = ['digraph reduction {', '  node [fontname="Helvetica", fontsize=10];']
    for p in tree.points:
        label = f'{p.name}\\nnu={p.nu}\\n{p.classification.label()}\\nw={p.total_weight}'
        lines.append(f'  {p.name} [shape=ellipse, label="{label}"];')
    for c in tree.components.values():
        style = 'dashed' if c.dicritical else 'solid'
        kind = 'dicritical' if c.dicritical else 'invariant'
        label = f'{c.name}\\nnu={c.curvette_multiplicity} Val={c.valence}\\n{kind}'
        lines.append(f'  {c.name} [shape=box, style={style}, label="{label}"];')
    for p in tree.points:
        for child in p.children:
            lines.append(f'  {p.name} -> {tree.point(child).name};')
        if p.created_component is not None:
            lines.append(f'  {p.name} -> {tree.components[p.created_component].name} '
                         '[style=dotted, arrowhead=none];')
    lines.append('}')
    return '\n'.join(lines) + '\n'


def cmd_analyze(case, options):
    report = analyze(case.form, case.divisor, case.probes, options['mode'], options['seed'],
                     options['max_depth'], options['checks'])
    return report.to_dict(), 0


def cmd_reduce(case, options, dot_path=None, png_path=None):
    try:
        tree = reduce(case.form, options['max_depth'])
    except ReductionDepthError as e:
        if dot_path and e.partial_tree is not None:
            _write_text(dot_path, tree_to_dot(e.partial_tree))
        raise
    if dot_path:
        _write_text(dot_path, tree_to_dot(tree))
    if png_path:
        with open(png_path, 'wb') as fh:
            fh.write(render_tree(tree).getvalue())
    return tree_to_dict(tree), 0


def cmd_intersect(f_text, g_text):
    value = intersection_number(_parse_field(f_text, 'f'), _parse_field(g_text, 'g'))
    return {'intersection': 'inf' if value == INFINITE else value}, 0


def cmd_check(case, options):
    select_checks(options['checks'])
    rows = verify_identities(case.form, case.divisor, case.probes, options['mode'],
                             options['seed'], options['max_depth'], options['checks'])
    code = 2 if any(r.status == FAIL for r in rows) else 0
    return {'identities': [r.to_record() for r in rows], 'rows': rows}, code


def _write_text(path, text):
    if path == '-':
        sys.stdout.write(text)
        return
    with open(path, 'w', encoding='utf-8') as fh:
        fh.write(text)


def _emit(payload, as_json, command):
    if command == 'check':
        rows = payload.pop('rows')
        if not as_json:
            print(format_verdicts(verdict_frame(rows)))
            return
    if command == 'intersect' and not as_json:
        print(payload['intersection'])
        return
    print(json.dumps(payload, indent=2, default=str))


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--json', action='store_true', help='machine-readable output')
    common.add_argument('--log-level', default=None, help='logging level (default WARNING)')

    analysis = argparse.ArgumentParser(add_help=False)
    analysis.add_argument('case', help='case file (JSON) or - for stdin')
    analysis.add_argument('--mode', choices=(POLAR, LITERAL), default=None,
                          help='reading of nu_q in the chi-number (default polar)')
    analysis.add_argument('--seed', type=int, default=None, help='polar sampling seed')
    analysis.add_argument('--max-depth', dest='max_depth', type=int, default=None,
                          help='reduction depth cap')

    ap = argparse.ArgumentParser(prog='foliation',
                                 description='Local invariants of singular plane foliations.')
    sub = ap.add_subparsers(dest='command', required=True)
    p_analyze = sub.add_parser('analyze', parents=[common, analysis], help='full report')
    p_analyze.add_argument('--checks', default=None, help='comma list of identity ids, or all')
    p_reduce = sub.add_parser('reduce', parents=[common, analysis], help='reduction tree')
    p_reduce.add_argument('--dot', default=None, help='write the tree as DOT (- for stdout)')
    p_reduce.add_argument('--png', default=None, help='write the tree as PNG')
    p_intersect = sub.add_parser('intersect', parents=[common], help='intersection number')
    p_intersect.add_argument('f')
    p_intersect.add_argument('g')
    p_check = sub.add_parser('check', parents=[common, analysis], help='identity verdicts')
    p_check.add_argument('--checks', default=None, help='comma list of identity ids, or all')
    return ap


def run(args):
    """Dispatch a parsed command; returns (payload, exit code)."""
    if args.command == 'intersect':
        return cmd_intersect(args.f, args.g)
    case = load_case(args.case)
    options = resolve_options(case.options, args)
    if args.command == 'analyze':
        return cmd_analyze(case, options)
    if args.command == 'reduce':
        return cmd_reduce(case, options, args.dot, args.png)
    return cmd_check(case, options)


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=(args.log_level or LOG_LEVEL).upper(), stream=sys.stderr,
                        format='%(levelname)s %(name)s: %(message)s')
    try:
        payload, code = run(args)
    except FoliationError as e:
        logger.debug('command %s failed', args.command, exc_info=True)
        if args.json:
            print(json.dumps({'error': str(e)}))
        else:
            print(f'error: {e}', file=sys.stderr)
        return e.exit_code
    _emit(payload, args.json, args.command)
    return code


if __name__ == '__main__':
    sys.exit(main())
