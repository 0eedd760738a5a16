#!/usr/bin/env python3
# -*- encoding: utf-8 -*-
"""
Pytest for vd_margin.py
"""

import json
import logging as log
import math
import numpy as np
import pytest
from vdspec.vd_margin import DEGENERATE, BoundaryMatrix, DimensionError, char_poly, eigen_check_M, jacobi_eigenvalues, \
    margin_report, rho2_closed_form, rho2_numeric, rho_bar_numeric, spectral_norm, spectral_radius

log.basicConfig(level=log.INFO)

rng = np.random.default_rng(11)


def test_from_string():
    assert BoundaryMatrix.from_string('identity3').n == 3
    assert not BoundaryMatrix.from_string('zero2').entries.any()
    assert BoundaryMatrix.from_string('simpler').entries.tolist() == [[1.0, -1.0], [1.0, -1.0]]
    controller = BoundaryMatrix.from_string('controller:0.5, 1')
    assert controller.gains == (0.5, 1.0)
    assert controller.entries.tolist() == [[-1.0, 1.0, -1.0], [1.0, 0.0, 0.0], [1.0, 0.0, 0.0]]
    assert BoundaryMatrix.from_string('1,-1; 1,-1').entries.tolist() == [[1.0, -1.0], [1.0, -1.0]]
    for bad in ('1,2;3', '1', '1,2,3;4,5,6'):
        with pytest.raises(DimensionError):
            BoundaryMatrix.from_string(bad)
    with pytest.raises(ValueError):
        BoundaryMatrix.from_string('a,b;c,d')
    with pytest.raises(ValueError):
        BoundaryMatrix(np.array([[np.inf, 0], [0, 1]]))


def test_linear_algebra_helpers():
    a = rng.standard_normal((5, 5))
    symmetric = a + a.T
    assert np.allclose(jacobi_eigenvalues(symmetric), np.linalg.eigvalsh(symmetric))
    assert spectral_norm(a) == pytest.approx(np.linalg.norm(a, 2))
    assert np.allclose(char_poly(a), np.poly(a))
    stack = rng.standard_normal((6, 3, 3)) + 1j * rng.standard_normal((6, 3, 3))
    expected = [np.max(np.abs(np.linalg.eigvals(m))) for m in stack]
    assert np.allclose(spectral_radius(stack), expected)
    larger = rng.standard_normal((2, 6, 6))
    assert np.allclose(spectral_radius(larger), [np.max(np.abs(np.linalg.eigvals(m))) for m in larger])


def test_rho2_closed_form():
    assert rho2_closed_form(0, 1) == pytest.approx(math.sqrt(2))
    assert rho2_closed_form(1, 2) == pytest.approx(3.0)
    assert rho2_closed_form(-1, -2) == pytest.approx(3.0)


@pytest.mark.parametrize('k1,k2', [(0.0, 1.0), (1.0, 2.0), (0.3, 0.5)])
def test_controller_matrix_margin(k1, k2):
    k = BoundaryMatrix.controller_matrix(k1, k2)
    result = margin_report(k)
    assert result.rho2 == pytest.approx(rho2_closed_form(k1, k2), abs=1e-4)
    assert result.rho_bar == pytest.approx(rho2_closed_form(k1, k2), abs=1e-4)
    assert result.consistent
    assert not result.robust
    assert result.rho2_closed == pytest.approx(rho2_closed_form(k1, k2))


def test_controller_matrix_grid():
    gains = np.linspace(-3.0, 3.0, 13)
    worst = 0.0
    for k1 in gains:
        for k2 in gains:
            estimate = rho2_numeric(BoundaryMatrix.controller_matrix(k1, k2))
            assert estimate.value >= 1.0 - 1e-12
            worst = max(worst, abs(estimate.value - rho2_closed_form(k1, k2)))
            if k2 == 0.0:
                # the optimal third scaling theta3^2 = |k2| collapses to 0
                assert DEGENERATE in estimate.flags, k1
    assert worst < 1e-4


def test_controller_matrix_phases():
    for k1 in (-3.0, -1.5, 0.0, 1.5, 3.0):
        for k2 in (-3.0, -1.5, 0.0, 1.5, 3.0):
            k = BoundaryMatrix.controller_matrix(k1, k2)
            estimate = rho_bar_numeric(k)
            assert estimate.value == pytest.approx(rho2_closed_form(k1, k2), abs=1e-4), (k1, k2)
            assert estimate.phases[0] == 0.0
            assert spectral_radius(k.rotated(estimate.phases[None, 1:]))[0] == pytest.approx(estimate.value)


def test_identity_and_zero():
    identity = margin_report(BoundaryMatrix.identity(3))
    assert identity.rho2 == pytest.approx(1.0, abs=1e-9)
    assert identity.rho_bar == pytest.approx(1.0, abs=1e-9)
    assert identity.consistent and not identity.robust
    zero = margin_report(BoundaryMatrix.zeros(2))
    assert zero.rho2 == pytest.approx(0.0, abs=1e-12)
    assert zero.rho_bar == pytest.approx(0.0, abs=1e-12)
    assert zero.robust


def test_simpler_matrix():
    result = margin_report(BoundaryMatrix.simpler_matrix())
    assert result.rho_bar == pytest.approx(2.0, abs=1e-6)
    assert result.rho2 == pytest.approx(2.0, abs=1e-4)
    assert result.consistent
    assert any('not reproduced' in note for note in result.notes)


def test_rho_bar_phases():
    estimate = rho_bar_numeric(BoundaryMatrix.controller_matrix(0, 1))
    assert estimate.value == pytest.approx(math.sqrt(2), abs=1e-9)
    assert estimate.phases[0] == 0.0
    # |exp(-i theta2) - exp(-i theta3)| = 2 at the maximum
    assert abs(np.exp(-1j * estimate.phases[1]) - np.exp(-1j * estimate.phases[2])) == pytest.approx(2.0, abs=1e-6)


def test_rho2_scaling():
    estimate = rho2_numeric(BoundaryMatrix.controller_matrix(0, 1))
    assert estimate.scaling[0] == 1.0
    k = BoundaryMatrix.controller_matrix(0, 1)
    assert spectral_norm(k.scaled(np.log(estimate.scaling[1:]))) == pytest.approx(estimate.value)


def test_eigen_check_M():
    assert eigen_check_M(0, 0, 1, 1) == pytest.approx((3.0, 2.0, 2.0))
    beta, gamma, lambda_max = eigen_check_M(0, 1, 1, 1)
    assert (beta, gamma) == pytest.approx((4.0, 4.0))
    assert math.sqrt(lambda_max) == pytest.approx(math.sqrt(2))
    beta, gamma, lambda_max = eigen_check_M(0.7, 1.3, 0.8, 1.9)
    assert lambda_max > 0
    with pytest.raises(ValueError):
        eigen_check_M(0, 1, 0, 1)


def test_margin_json():
    result = margin_report(BoundaryMatrix.controller_matrix(0, 1))
    data = json.loads(json.dumps(result.to_json()))
    assert data['consistent'] is True and data['delay_robust'] is False
    assert data['matrix']['entries'][0] == [0.0, 1.0, -1.0]
    assert len(data['optimal_scaling']) == 3 and len(data['optimal_phases']) == 3
