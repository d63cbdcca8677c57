import logging

import numpy as np
import pytest

from algebra import X, Y, poly2
from conftest import dulac_form, make_curve, make_divisor, saddle_node_form
from errors import InputError
from foliation import OneForm
from invariants import (FAIL, PASS, SKIPPED, InvariantContext, analyze, gsv, select_checks,
                        tjurina_foliation, tjurina_sum, verdict_frame, verify_identities)
from resolution import LITERAL, POLAR


def _rows(rows, ident):
    return [r for r in rows if r.id == ident]


def _status(rows, ident):
    [row] = _rows(rows, ident)
    return row.status


def _random_branch(rng):
    a = int(rng.integers(-3, 4))
    c = int(rng.integers(1, 4))
    kind = int(rng.integers(0, 4))
    if kind == 0:
        return f'y + ({a})*x', 1
    if kind == 1:
        return f'x + ({a})*y', 1
    if kind == 2:
        return f'y + ({a})*x + ({c})*x^2', 2
    return f'(y + ({a})*x)^2 - x^3', 3


def _random_hamiltonian(seed):
    """A reduced curve of 2 or 3 branches, total degree <= 5, and its divisor."""
    rng = np.random.default_rng(seed)
    while True:
        picks = [_random_branch(rng) for _ in range(int(rng.integers(2, 4)))]
        if sum(d for _, d in picks) > 5:
            continue
        try:
            divisor = make_divisor(*((text, 1) for text, _ in picks))
        except InputError:
            continue
        return divisor


def test_radial_full_divisor(radial, radial_divisor):
    ctx = InvariantContext(radial, radial_divisor)
    f0 = ctx.zero_curve()
    assert ctx.mu_curve(f0) == 4
    assert sum(b.multiplicity for b, _ in radial_divisor.zero_part) == 3
    assert ctx.i(f0, radial_divisor.pole_curve()) == 3
    assert ctx.polar_with(f0) == 3
    assert ctx.delta_zero == 0
    assert ctx.tree.is_generalized_curve()
    rows = verify_identities(radial, radial_divisor)
    assert _status(rows, 'polar_excess_zero_divisor') == PASS
    assert _status(rows, 'generalized_curve_polar_excess') == PASS


@pytest.mark.parametrize('k', [1, 2, 3])
@pytest.mark.parametrize('lam', [0, 1])
def test_saddle_node_normal_form(k, lam):
    F = saddle_node_form(k, lam)
    divisor = make_divisor(('x', 1), ('y', 1))
    report = analyze(F, divisor)
    assert report.mu == k + 1
    gsv_values = {b.name: b.gsv for b in report.branches}
    assert gsv_values == {'x': 1, 'y': k + 1}
    [y_branch] = [b for b in report.branches if b.name == 'y']
    assert y_branch.index == k + 1
    ctx = InvariantContext(F, divisor)
    xy = poly2(X * Y)
    assert ctx.gsv_polar(xy) == k
    assert ctx.tau_foliation(xy) == k + 1
    assert ctx.tau_curve(xy) == 1
    assert _status(report.identities, 'gsv_adjunction') == PASS
    assert not [r for r in report.identities if r.status == FAIL]
    assert report.second_type
    assert not report.generalized_curve


def test_four_xy_chi_discrepancy_is_surfaced(four_xy, caplog):
    divisor = make_divisor(('y', 1))
    ctx = InvariantContext(four_xy, divisor)
    assert ctx.nu == 1
    assert ctx.mu == 3
    assert ctx.tau_foliation(make_curve('y')) == 2
    assert ctx.tau_curve(make_curve('y')) == 0
    assert ctx.gsv_polar(make_curve('y')) == ctx.gsv_tjurina(make_curve('y')) == 2
    with caplog.at_level(logging.WARNING, logger='invariants'):
        assert ctx.chi == {LITERAL: 2, POLAR: 1}
    assert 'chi differs' in caplog.text
    rows = verify_identities(four_xy, divisor, mode=POLAR, checks=['gsv_milnor'])
    [row] = rows
    assert row.status == PASS
    assert row.other['mode'] == LITERAL
    assert row.other['status'] == FAIL
    [literal] = verify_identities(four_xy, divisor, mode=LITERAL, checks=['xi'])
    assert literal.status == FAIL
    assert not ctx.tree.is_second_type()


@pytest.mark.parametrize('n', [2, 3])
def test_dulac_counterexample(n):
    F = dulac_form(n)
    divisor = make_divisor(('x', 1))
    ctx = InvariantContext(F, divisor)
    assert ctx.mu == 1
    assert ctx.tau_foliation(make_curve('x')) == 1
    assert ctx.tau_curve(make_curve('x')) == 0
    assert ctx.mu_adapted(make_curve('x')) == 0
    assert ctx.tjurina_total == 1
    assert ctx.xi == 1
    assert ctx.chi[POLAR] == 0
    rows = verify_identities(F, divisor, checks=['milnor_chi', 'milnor_tjurina_divisor'])
    assert _status(rows, 'milnor_chi') == PASS
    # the chi-free form of the Tjurina identity holds although F is not of second type
    [row] = _rows(rows, 'milnor_tjurina_divisor')
    assert (row.mode, row.lhs, row.rhs, row.status) == (POLAR, 0, 0, PASS)
    assert not ctx.tree.is_second_type()


def test_fk3_with_axes(fk3, fk3_divisor):
    ctx = InvariantContext(fk3, fk3_divisor)
    assert ctx.nu == 3
    assert ctx.xi == 2
    intermediate = ctx.tree.point(ctx.tree.root.children[0])
    assert ctx.tree.tangency_excess(intermediate) == 2
    assert ctx.chi == {LITERAL: 8, POLAR: 8}
    assert ctx.mu == 15
    assert ctx.tjurina_total == 8
    assert tjurina_sum(fk3, fk3_divisor) == 8
    assert all(ctx.tau_curve(b) == 0 for b in fk3_divisor.branches)
    assert ctx.weighted_sum(ctx.mu_adapted) == 2
    rows = verify_identities(fk3, fk3_divisor)
    assert _status(rows, 'milnor_tjurina_divisor') == PASS
    assert not [r for r in rows if r.status == FAIL]


@pytest.mark.parametrize('seed', range(20))
def test_hamiltonian_properties(seed):
    divisor = _random_hamiltonian(seed)
    f = divisor.zero_curve()
    F = OneForm.hamiltonian(f)
    ctx = InvariantContext(F, divisor)
    assert ctx.balanced
    assert ctx.mu == ctx.mu_curve(f)
    assert ctx.delta_zero == 0
    assert ctx.chi == {LITERAL: 0, POLAR: 0}
    assert ctx.xi == 0
    assert ctx.gsv_polar(f) == 0
    assert ctx.gsv_tjurina(f) == 0
    rows = verify_identities(F, divisor, checks=['milnor_formula'])
    assert _status(rows, 'milnor_formula') == PASS


def test_probe_rows_for_four_xy(four_xy):
    rows = verify_identities(four_xy, make_divisor(('y', 1)), [make_curve('y - x^3')],
                             checks=['xvi'])
    [row] = rows
    assert (row.lhs, row.rhs, row.status) == (3, 3, PASS)


def test_probe_rows_for_dulac():
    rows = verify_identities(dulac_form(2), make_divisor(('x', 1)), [make_curve('y')],
                             checks=['tangency_excess_probe'])
    [row] = rows
    assert (row.lhs, row.rhs, row.status) == (1, 1, PASS)


def test_tangency_blowup_rows(four_xy):
    rows = verify_identities(four_xy, make_divisor(('y', 1)), [make_curve('y - x^3')],
                             checks=['tangency_blowup'])
    assert rows
    assert all(r.status == PASS for r in rows)


def test_gsv_routes(four_xy):
    assert gsv(four_xy, make_curve('y')) == 2
    assert tjurina_foliation(four_xy, make_curve('y')) == 2
    with pytest.raises(InputError):
        gsv(four_xy, make_curve('x'))
    with pytest.raises(InputError):
        gsv(four_xy, poly2(Y**2))


def test_rows_without_divisor_are_skipped(four_xy):
    rows = verify_identities(four_xy, None)
    assert not [r for r in rows if r.status == FAIL]
    assert _status(rows, 'milnor_chi') == SKIPPED
    assert _status(rows, 'chi_properties') == PASS


def test_unbalanced_divisor_skips_balanced_rows(fk3):
    rows = verify_identities(fk3, make_divisor(('y', 1)), checks=['i', 'iv'])
    assert [r.status for r in rows] == [SKIPPED, SKIPPED]
    assert rows[0].reason == 'divisor is not balanced'


def test_select_checks():
    assert select_checks(['iv', 'milnor_chi', 'v']) == ['milnor_chi', 'milnor_formula']
    assert len(select_checks()) == 25
    with pytest.raises(InputError):
        select_checks(['nope'])


def test_report_dict(radial, radial_divisor):
    data = analyze(radial, radial_divisor).to_dict()
    assert data['mu_F'] == 1
    assert data['nu_F'] == 1
    assert data['delta_B0'] == 0
    assert data['mu_B0'] == 4
    assert data['balanced']['balanced']
    assert {b['name'] for b in data['branches']} == {'x', 'y', 'x - y', 'x + y'}


def test_verdict_frame(fk3, fk3_divisor):
    rows = verify_identities(fk3, fk3_divisor, checks=['i', 'xii'])
    frame = verdict_frame(rows)
    assert list(frame.columns) == ['id', 'ref', 'subject', 'mode', 'lhs', 'rhs', 'status',
                                   'reason']
    assert len(frame) == len(rows)
    assert set(frame['ref']) == {'i', 'xii'}
    assert set(frame['status']) == {PASS}


def test_chi_properties_in_both_modes(four_xy):
    [row] = verify_identities(four_xy, None, checks=['chi_properties'])
    assert (row.mode, row.status) == (POLAR, PASS)
    assert row.other['mode'] == LITERAL
    assert row.other['status'] == PASS
