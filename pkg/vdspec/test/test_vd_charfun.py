#!/usr/bin/env python3
# -*- encoding: utf-8 -*-
"""
Pytest for vd_charfun.py
"""

import logging as log
import math
import numpy as np
import pytest
from vdspec.vd_charfun import CharFn, Variant, char_deadbeat_inviscid_perturbed, char_deadbeat_viscous, \
    char_open_inviscid, char_prop_inviscid, char_simpler, char_zform, oracle_coefficients, s_to_zform, \
    schur_poly_roots, zform_to_s
from vdspec.vd_model import SystemParams, f_viscous, viscous_numerator_denominator

log.basicConfig(level=log.INFO)

rng = np.random.default_rng(7)
nominal = SystemParams()
prop = SystemParams(kp=0.75)
viscous = SystemParams(eta=0.1)


def random_points(n, scale=5.0):
    return scale * (rng.standard_normal(n) + 1j * rng.standard_normal(n))


def value(residual):
    return complex(residual.to_complex())


def test_char_open_inviscid():
    assert abs(value(char_open_inviscid(0.0, nominal))) < 1e-15
    assert abs(value(char_open_inviscid(1j * math.pi, nominal))) < 1e-12
    assert value(char_open_inviscid(math.log(2), nominal)) == pytest.approx(3.0)


def test_char_prop_inviscid():
    assert abs(value(char_prop_inviscid(-math.log(2), prop))) < 1e-12
    assert abs(value(char_prop_inviscid(math.log(2) + 1j * math.pi, prop))) < 1e-12
    assert abs(value(char_prop_inviscid(0.0, nominal))) < 1e-15


def test_schur_poly_roots():
    assert schur_poly_roots(0, 1) == (0, 0, True)
    w1, w2, stable = schur_poly_roots(0, 0)
    assert {w1, w2} == {1, -1} and not stable
    w1, w2, stable = schur_poly_roots(1, 1)
    assert (w1, w2) == (0, -2) and not stable


def test_char_deadbeat_viscous():
    assert abs(value(char_deadbeat_viscous(-2.5, viscous))) < 1e-12
    assert value(char_deadbeat_viscous(0.0, viscous)) == pytest.approx(-100.0, rel=1e-12)
    perturbed = viscous.replace(eps=0.1)
    assert abs(value(char_deadbeat_viscous(-1.1 ** 2 / 0.4, perturbed))) < 1e-12


def test_pole_clearing_matches_meromorphic_form():
    s = random_points(1000, scale=3.0)
    numerator, denominator = viscous_numerator_denominator(s, viscous)
    cleared = (char_deadbeat_viscous(s, viscous) / denominator.square()).to_complex()
    f = f_viscous(s, viscous).to_complex()
    direct = f * f - f * np.exp(-s) - 1
    assert np.allclose(cleared, direct, rtol=1e-9, atol=1e-9)


def test_char_zform():
    assert abs(value(char_zform(0.0, 0.1))) < 1e-15
    assert value(char_zform(1.0, 0.5)) == pytest.approx(1.0)
    z = random_points(200, scale=1.5)
    s = zform_to_s(z, 0.1)
    assert np.allclose(char_zform(z, 0.1).to_complex(), -0.01 * char_deadbeat_viscous(s, viscous).to_complex(),
                       rtol=1e-8, atol=1e-9)
    assert np.allclose(zform_to_s(s_to_zform(s, 0.1), 0.1), s)


def test_char_simpler():
    # 1 + exp(-i pi) = 0 leaves -exp(v/eta)
    assert value(char_simpler(1j * math.pi, viscous)) == pytest.approx(-math.exp(10.0), rel=1e-9)
    small_delta = -2.5 + 1e-9
    assert np.isfinite(value(char_simpler(small_delta, viscous)))


def test_char_deadbeat_inviscid_perturbed():
    s = random_points(20, scale=2.0)
    assert np.allclose(char_deadbeat_inviscid_perturbed(s, nominal).to_complex(), -1.0)
    assert value(char_deadbeat_inviscid_perturbed(200.0, SystemParams(eps=0.1))) == pytest.approx(-1.0)


def test_conjugate_symmetry_all_variants():
    s = random_points(100, scale=4.0)
    for variant in Variant:
        params = SystemParams(eta=0.1 if variant.viscous else 0.0, eps=0.0, kp=0.4, k1=0.2, k2=0.7)
        fn = CharFn(variant, params)
        values = fn(s).to_complex()
        mirrored = fn(np.conj(s)).to_complex()
        assert np.allclose(mirrored, np.conj(values), rtol=1e-10, atol=1e-12), variant


def test_charfn_validation():
    with pytest.raises(ValueError):
        CharFn(Variant.DEADBEAT_VISCOUS, SystemParams())
    with pytest.raises(ValueError):
        CharFn(Variant.OPEN_INVISCID, viscous)
    with pytest.raises(ValueError):
        CharFn(Variant.DEADBEAT_VISCOUS, viscous.replace(eps=0.1))
    with pytest.raises(ValueError):
        Variant.from_name('no-such-variant')
    fn = CharFn.build('deadbeat_viscous', eta=0.1)
    assert fn.variant is Variant.DEADBEAT_VISCOUS and fn.params.eta == 0.1
    assert fn.describe()['variable'] == 's'


def test_oracle_coefficients():
    coeffs, unit = oracle_coefficients(CharFn(Variant.DEADBEAT_INVISCID_PERTURBED, SystemParams(eps=0.1)))
    # q^20 - q^21 - 1 with q = exp(-s/11)
    assert len(coeffs) == 22
    assert coeffs[0] == -1 and coeffs[1] == 1 and coeffs[-1] == -1
    assert np.count_nonzero(coeffs) == 3
    assert unit == pytest.approx(1 / 11)
    coeffs, unit = oracle_coefficients(CharFn(Variant.PROP_INVISCID, prop))
    assert list(coeffs) == [-1.0, 1.5, 1.0] and unit == 1.0
    assert oracle_coefficients(CharFn(Variant.DEADBEAT_VISCOUS, viscous)) is None
    assert oracle_coefficients(CharFn(Variant.DEADBEAT_INVISCID_PERTURBED, SystemParams(eps=math.pi / 100))) is None
