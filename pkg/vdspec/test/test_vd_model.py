#!/usr/bin/env python3
# -*- encoding: utf-8 -*-
"""
Pytest for vd_model.py
"""

import logging as log
import math
import numpy as np
import pytest
from vdspec.vd_model import ScaledComplex, SystemParams, f_transport, f_viscous, lambda_pair, open_loop_G, x_eta

log.basicConfig(level=log.INFO)

rng = np.random.default_rng(20)
viscous = SystemParams(eta=0.1)


def random_points(n, scale=5.0):
    return scale * (rng.standard_normal(n) + 1j * rng.standard_normal(n))


def test_params_delay_and_validation():
    assert SystemParams().tau == 1.0
    assert SystemParams(velocity=2.0).tau == 0.5
    assert SystemParams.from_delay(0.5).velocity == 2.0
    assert SystemParams(velocity=2.0).replace(velocity=4.0).tau == 0.25
    assert SystemParams(eps=0.1).plant_delay == pytest.approx(1 / 1.1)
    for bad in (dict(velocity=0.0), dict(eta=-0.1), dict(eps=-1.0), dict(velocity=2.0, tau=1.0)):
        with pytest.raises(ValueError):
            SystemParams(**bad)


def test_scaled_complex_beyond_double_range():
    big = ScaledComplex.exp(1000 + 1j)
    assert big.log_abs() == pytest.approx(1000.0)
    assert big.phase() == pytest.approx(1.0)
    product = ScaledComplex.exp(800 + 0.3j) * ScaledComplex.exp(-790 + 0.4j)
    assert product.to_complex() == pytest.approx(np.exp(10 + 0.7j), rel=1e-12)
    assert (ScaledComplex(3.0) + ScaledComplex(4j)).to_complex() == pytest.approx(3 + 4j)
    zero = ScaledComplex(0.0)
    assert zero.is_zero() and zero.exponent == 0.0
    assert (big - big).is_zero()


def test_scaled_complex_phase_matches_plain_arithmetic():
    a, b = random_points(1000), random_points(1000)
    x, y = rng.uniform(-300, 300, 1000), rng.uniform(-300, 300, 1000)
    scaled_a = ScaledComplex(a) * ScaledComplex.exp(x)
    scaled_b = ScaledComplex(b) * ScaledComplex.exp(y)
    mantissa = np.abs(scaled_a.mantissa)
    assert np.all((mantissa >= 1) & (mantissa < 2))
    product = (scaled_a * scaled_b).phase()
    assert np.allclose(np.angle(np.exp(1j * (product - np.angle(a * b)))), 0, atol=1e-12)
    # sums where both terms are representable
    total = ScaledComplex(a) + ScaledComplex(b)
    assert np.allclose(total.to_complex(), a + b, rtol=1e-13)


def test_lambda_pair():
    pair = lambda_pair(0.0, viscous)
    assert pair.lambda1 == pytest.approx(10.0) and pair.lambda2 == pytest.approx(0.0)
    pair = lambda_pair(-2.5, viscous)
    assert pair.lambda1 == pytest.approx(5.0) and pair.lambda2 == pytest.approx(5.0)
    pair = lambda_pair(1.0, SystemParams(eta=0.25))
    assert pair.lambda1 == pytest.approx(2 * (1 + math.sqrt(2)))
    assert pair.lambda2 == pytest.approx(2 * (1 - math.sqrt(2)))
    with pytest.raises(ValueError):
        lambda_pair(1.0, SystemParams())


def test_vieta_identities():
    for eta, eps in ((0.01, 0.0), (0.1, 0.05), (1.0, -0.3)):
        params = SystemParams(eta=eta, eps=eps)
        s = random_points(10000, scale=50.0)
        assert np.max(lambda_pair(s, params).vieta_residual(s, params)) < 1e-12


def test_f_transport():
    assert f_transport(0.0, 1.0) == 1
    assert f_transport(1j * math.pi, 1.0) == pytest.approx(-1)
    assert f_transport(math.log(2), 1.0) == pytest.approx(0.5)


def test_f_viscous():
    for eta in (0.01, 0.1, 1.0):
        assert abs(f_viscous(0.0, SystemParams(eta=eta)).to_complex() - 1) < 1e-12
    assert f_viscous(1.0, SystemParams(eta=1e-6)).to_complex() == pytest.approx(math.exp(-1), abs=1e-3)
    confluent = f_viscous(-2.5, viscous).to_complex()
    assert confluent == pytest.approx(math.exp(5) / 6, rel=1e-12)
    for offset in (1e-8, -1e-8, 1e-8j):
        assert f_viscous(-2.5 + offset, viscous).to_complex() == pytest.approx(confluent, rel=1e-6)


def test_f_viscous_continuous_across_confluence_switch():
    eta = 0.1
    limit = f_viscous(-2.5, SystemParams(eta=eta)).to_complex()
    # |sqrt(1 + 4 eta s)| = 2e-6 on the ring, twice the switching threshold
    radius = (2e-6) ** 2 / (4 * eta)
    ring = -2.5 + radius * np.exp(2j * np.pi * np.arange(16) / 16)
    values = f_viscous(ring, SystemParams(eta=eta)).to_complex()
    assert np.max(np.abs(values - limit)) / abs(limit) < 1e-8


def test_conjugate_symmetry():
    s = random_points(200)
    for params in (viscous, SystemParams(eta=0.02, eps=0.1)):
        values = f_viscous(s, params).to_complex()
        mirrored = f_viscous(np.conj(s), params).to_complex()
        assert np.allclose(mirrored, np.conj(values), rtol=1e-12)


def test_open_loop_G():
    s = math.log(1 + math.sqrt(2))
    expected = (1 + math.sqrt(2)) / ((1 + math.sqrt(2)) ** 2 - 1)
    assert open_loop_G(s, SystemParams()).to_complex() == pytest.approx(expected)
    assert open_loop_G(0.0, viscous).is_pole()
    assert open_loop_G(1j * math.pi / 2, SystemParams()).to_complex() == pytest.approx(-0.5j)


def test_x_eta():
    assert x_eta(0.0, 0.1).is_zero() or abs(x_eta(0.0, 0.1).to_complex()) < 1e-300
    assert x_eta(1.0, 0.5).to_complex() == pytest.approx(1.0)
    assert x_eta(-1.0, 0.5).to_complex() == pytest.approx(-1.0)
    z = random_points(50, scale=2.0)
    assert np.allclose(x_eta(-z, 0.3).to_complex(), -x_eta(z, 0.3).to_complex(), rtol=1e-12)
