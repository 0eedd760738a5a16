#!/usr/bin/env python3
# -*- encoding: utf-8 -*-
"""
Pytest for vd_roots.py
"""

import io
import json
import logging as log
import math
import numpy as np
import pytest
from vdspec.vd_charfun import CharFn, Variant, char_zform, s_to_zform
from vdspec.vd_model import SystemParams
from vdspec.vd_roots import SearchWindow, count_zeros, durand_kerner, figure_preset, figure_window, find_roots, \
    quasi_polynomial_oracle, residual_magnitude, roots_in

log.basicConfig(level=log.INFO)

open_loop = CharFn(Variant.OPEN_INVISCID, SystemParams())
prop_loop = CharFn(Variant.PROP_INVISCID, SystemParams(kp=0.75))
perturbed = CharFn(Variant.DEADBEAT_INVISCID_PERTURBED, SystemParams(eps=0.1))
LN2 = math.log(2)


def close_sets(a, b, tol):
    a, b = np.asarray(a, dtype=complex), np.asarray(b, dtype=complex)
    if len(a) != len(b):
        return False
    return all(np.min(np.abs(b - x)) <= tol for x in a) and all(np.min(np.abs(a - y)) <= tol for y in b)


def test_search_window():
    window = SearchWindow.from_string('-8, 1, -60, 60')
    assert window.rect == (-8.0, 1.0, -60.0, 60.0)
    assert window.is_symmetric() and window.contains(0j) and not window.contains(2 + 0j)
    assert window.covers(SearchWindow(-1, 0, -1, 1))
    assert str(window) == '[-8, 1]x[-60, 60]'
    for bad in ('1,2,3', '1,0,-1,1', '0,1,1,1', '0,1,nan,1'):
        with pytest.raises(ValueError):
            SearchWindow.from_string(bad)


def test_count_zeros():
    assert count_zeros(open_loop, SearchWindow(-1, 1, -1, 4)) == 2
    assert count_zeros(prop_loop, SearchWindow(-1, 1, -1, 8)) == 3
    assert count_zeros(prop_loop, SearchWindow(-1, 1, -1, 13)) == 5
    assert count_zeros(open_loop, SearchWindow(0.5, 1, 0.5, 1)) == 0


def test_count_zeros_boundary_nudge():
    # s=0 lies on the left edge
    assert count_zeros(open_loop, SearchWindow(0, 1, -1, 1)) == 1


def test_find_roots_prop():
    spectrum = find_roots(prop_loop, SearchWindow(-1, 1, -1, 13))
    expected = [-LN2, complex(-LN2, 2 * math.pi), complex(-LN2, 4 * math.pi),
                complex(LN2, math.pi), complex(LN2, 3 * math.pi)]
    assert spectrum.counted_total == 5
    assert close_sets(spectrum.values, expected, 1e-9)
    assert all(root.certified for root in spectrum.roots)
    sigma, attained_at = spectrum.abscissa()
    assert sigma == pytest.approx(LN2)
    assert attained_at == pytest.approx(complex(LN2, math.pi))


def test_find_roots_open_loop_symmetric():
    spectrum = find_roots(open_loop, SearchWindow(-1, 1, -10, 10))
    assert spectrum.counted_total == 7
    values = spectrum.values
    assert np.allclose(np.sort_complex(values), np.sort_complex(np.conj(values)))
    assert close_sets(values, [1j * math.pi * k for k in range(-3, 4)], 1e-9)
    sigma, attained_at = spectrum.abscissa()
    assert abs(sigma) < 1e-10
    assert abs(attained_at) < 1e-10


def test_empty_window():
    spectrum = find_roots(open_loop, SearchWindow(0.5, 1, 0.5, 1))
    assert len(spectrum) == 0
    assert spectrum.abscissa() == (float('-inf'), None)
    result = spectrum.to_json()
    assert result['spectral_abscissa'] == {'sigma_hat': None, 'finite': False, 'attained_at': None}
    json.dumps(result)


def test_oracle_agreement():
    window = SearchWindow(-2, 1, -70, 70)
    spectrum = find_roots(perturbed, window)
    oracle = quasi_polynomial_oracle([-1.0] + [1.0] + [0.0] * 19 + [-1.0], 1 / 11, window)
    assert len(oracle) == spectrum.counted_total
    assert close_sets(spectrum.values, oracle, 1e-8)
    sigma, _ = spectrum.abscissa()
    assert sigma > 0


def test_oracle_reparametrized():
    window = SearchWindow(-2, 1, -70, 70)
    coarse = quasi_polynomial_oracle([-1.0, 1.0] + [0.0] * 19 + [-1.0], 1 / 11, window)
    # the same quasi-polynomial in q = exp(-s/22): q^40 - q^42 - 1
    fine_coeffs = np.zeros(43)
    fine_coeffs[0], fine_coeffs[2], fine_coeffs[42] = -1.0, 1.0, -1.0
    fine = quasi_polynomial_oracle(fine_coeffs, 1 / 22, window)
    assert close_sets(coarse, fine, 1e-9)


def test_quasi_polynomial_oracle_open_loop():
    zeros = quasi_polynomial_oracle([-1.0, 0.0, 1.0], 1.0, SearchWindow(-1, 1, -1, 4))
    assert close_sets(zeros, [0, 1j * math.pi], 1e-12)


def test_durand_kerner():
    assert close_sets(durand_kerner([1, 0, -1]), [1, -1], 1e-12)
    coeffs = np.poly([0.5, -2, 1j, -1j, 3])
    assert close_sets(durand_kerner(coeffs), [0.5, -2, 1j, -1j, 3], 1e-9)
    assert len(durand_kerner([2.0])) == 0


def test_threads_do_not_change_roots():
    window = SearchWindow(-2, 1, -30, 30)
    reference = find_roots(perturbed, window, threads=1)
    for threads in (2, 8):
        spectrum = find_roots(perturbed, window, threads=threads)
        assert np.array_equal(spectrum.values, reference.values)


def test_zform_cross_check():
    eta = 0.1
    spectrum = find_roots(CharFn(Variant.DEADBEAT_VISCOUS, SystemParams(eta=eta)), figure_window('fig3'))
    assert not spectrum.unresolved
    assert spectrum.resolved_total == spectrum.counted_total > 0
    zform = CharFn(Variant.ZFORM, SystemParams(eta=eta))
    matched = 0
    for root in spectrum.roots:
        assert root.residual < 1e-8, root.s
        if abs(root.s + 1 / (4 * eta)) < 1e-6:
            # s = -1/(4 eta) maps to z = 0, where X_eta vanishes
            assert char_zform(0.0, eta).is_zero() or abs(char_zform(0.0, eta).to_complex()[0]) < 1e-300
            matched += root.multiplicity
            continue
        z = complex(s_to_zform(root.s, eta))
        assert residual_magnitude(zform, z, 1e-3) < 1e-8, root.s
        radius = 1e-4 * (1 + abs(z))
        zeros_near = count_zeros(zform, SearchWindow(z.real - radius, z.real + radius, z.imag - radius,
                                                     z.imag + radius))
        assert zeros_near == root.multiplicity, root.s
        # X_eta is odd, so -z is a zero as well
        assert abs(char_zform(-z, eta).log_abs() - char_zform(z, eta).log_abs()) < 1e-9
        matched += zeros_near
    assert matched == spectrum.counted_total



def test_confluent_point_is_a_root():
    spectrum = find_roots(CharFn(Variant.DEADBEAT_VISCOUS, SystemParams(eta=0.1)), SearchWindow(-3, -2, -0.5, 0.5))
    assert len(roots_in(spectrum.values, SearchWindow(-2.5 - 1e-6, -2.5 + 1e-6, -1e-6, 1e-6))) == 1


def test_spectrum_output():
    spectrum = find_roots(prop_loop, SearchWindow(-1, 1, -1, 8))
    buffer = io.StringIO()
    spectrum.write_csv(buffer)
    lines = buffer.getvalue().splitlines()
    assert lines[0] == 're,im,residual,multiplicity'
    assert len(lines) == 4
    assert float(lines[1].split(',')[0]) == pytest.approx(-LN2)
    result = spectrum.to_json()
    assert result['counted_total'] == 3
    assert result['source']['variant'] == 'prop-inviscid'
    assert result['spectral_abscissa']['finite'] is True


def test_figure_windows():
    assert figure_window('fig3').rect == (-8.0, 1.0, -60.0, 60.0)
    functions = figure_preset('fig6').char_functions()
    assert [fn.variant for fn in functions] == [Variant.DEADBEAT_INVISCID_PERTURBED,
                                               Variant.DEADBEAT_VISCOUS_PERTURBED,
                                               Variant.DEADBEAT_VISCOUS_PERTURBED]
    assert [(fn.params.eta, fn.params.eps) for fn in functions] == [(0.0, 0.1), (0.1, 0.0), (0.1, 0.1)]
    with pytest.raises(ValueError):
        figure_window('fig99')
