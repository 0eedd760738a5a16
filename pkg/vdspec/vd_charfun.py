#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Characteristic functions of the open and closed loops, as entire (branch-free, pole-cleared) residuals.
Every function takes s (scalar or numpy array) and returns a ScaledComplex; the zero set is the spectrum.
Viscous variants are cleared of the denominator D of f = N/D, so that the argument principle counts zeros only.
Examples:
  from vdspec.vd_charfun import CharFn, Variant
  CharFn(Variant.DEADBEAT_VISCOUS, SystemParams(eta=0.1))(-2.5)   # confluent point, residual 0
"""
# -*- encoding: utf-8 -*-

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
import logging as log
from typing import Callable, Dict, Optional, Tuple
import numpy as np
from vdspec.vd_model import ArrayLike, ScaledComplex, SystemParams, discriminant_root, \
    viscous_numerator_denominator, x_eta

log.basicConfig(level=log.INFO)

ORACLE_MAX_DENOMINATOR = 64
SINHC_SERIES_RADIUS = 1e-3


class Variant(Enum):
    OPEN_INVISCID = 'open-inviscid'
    PROP_INVISCID = 'prop-inviscid'
    DYN_INVISCID = 'dyn-inviscid'
    DEADBEAT_INVISCID_PERTURBED = 'deadbeat-inviscid-perturbed'
    DYN_INVISCID_PERTURBED = 'dyn-inviscid-perturbed'
    OPEN_VISCOUS = 'open-viscous'
    DEADBEAT_VISCOUS = 'deadbeat-viscous'
    DEADBEAT_VISCOUS_PERTURBED = 'deadbeat-viscous-perturbed'
    DYN_VISCOUS = 'dyn-viscous'
    SIMPLER = 'simpler'
    ZFORM = 'zform'

    @property
    def viscous(self) -> bool:
        return self in VISCOUS_VARIANTS

    @property
    def variable(self) -> str:
        """Name of the complex variable the residual is a function of."""
        return 'z' if self is Variant.ZFORM else 's'

    @classmethod
    def from_name(cls, name: str) -> 'Variant':
        try:
            return cls(name.strip().lower().replace('_', '-'))
        except ValueError:
            raise ValueError(f'Unknown variant {name!r} (choose from {", ".join(v.value for v in cls)})')


VISCOUS_VARIANTS = frozenset({Variant.OPEN_VISCOUS, Variant.DEADBEAT_VISCOUS, Variant.DEADBEAT_VISCOUS_PERTURBED,
                              Variant.DYN_VISCOUS, Variant.SIMPLER, Variant.ZFORM})
NOMINAL_ONLY_VARIANTS = frozenset({Variant.DYN_INVISCID, Variant.DEADBEAT_VISCOUS, Variant.ZFORM})


def _s(s: ArrayLike) -> np.ndarray:
    return np.asarray(s, dtype=complex)


def char_open_inviscid(s: ArrayLike, params: SystemParams) -> ScaledComplex:
    """exp(2 s tau) - 1: poles of the open transport loop (roots i k pi / tau)."""
    return ScaledComplex.exp(2.0 * _s(s) * params.plant_delay) - 1.0


def char_prop_inviscid(s: ArrayLike, params: SystemParams) -> ScaledComplex:
    """exp(2 s tau) + 2 kp exp(s tau) - 1 for U(t) = -2 kp Y(t)."""
    s = _s(s)
    tau = params.plant_delay
    return ScaledComplex.exp(2.0 * s * tau) + 2.0 * params.kp * ScaledComplex.exp(s * tau) - 1.0


def char_dyn_inviscid(s: ArrayLike, params: SystemParams) -> ScaledComplex:
    """exp(2 s tau) + 2 k1 exp(s tau) + (k2 - 1) for U(t) = -2 k1 Y(t) - k2 Y(t - tau).
    Zero free for the dead beat gains k1=0, k2=1."""
    s = _s(s)
    tau = params.tau
    return (ScaledComplex.exp(2.0 * s * tau) + 2.0 * params.k1 * ScaledComplex.exp(s * tau)
            + (params.k2 - 1.0))


def schur_poly_roots(k1: float, k2: float) -> Tuple[complex, complex, bool]:
    """Roots of w^2 + 2 k1 w + (k2 - 1) and whether both lie strictly inside the unit circle."""
    root = np.sqrt(complex(k1 * k1 - (k2 - 1.0)))
    w1, w2 = complex(-k1 + root), complex(-k1 - root)
    return w1, w2, max(abs(w1), abs(w2)) < 1.0


def char_dyn_inviscid_perturbed(s: ArrayLike, params: SystemParams) -> ScaledComplex:
    """exp(-2 s tau') - 2 k1 exp(-s tau') - k2 exp(-s (tau' + tau)) - 1 with plant delay tau' = tau / (1+eps)
    and the controller delay kept at the nominal tau."""
    s = _s(s)
    plant, nominal = params.plant_delay, params.tau
    return (ScaledComplex.exp(-2.0 * s * plant) - 2.0 * params.k1 * ScaledComplex.exp(-s * plant)
            - params.k2 * ScaledComplex.exp(-s * (plant + nominal)) - 1.0)


def char_deadbeat_inviscid_perturbed(s: ArrayLike, params: SystemParams) -> ScaledComplex:
    """Dead beat instance of char_dyn_inviscid_perturbed: exp(-2s/(1+eps)) - exp(-s(1/(1+eps)+1)) - 1 for tau=1."""
    return char_dyn_inviscid_perturbed(s, params.replace(k1=0.0, k2=1.0))


def char_open_viscous(s: ArrayLike, params: SystemParams) -> ScaledComplex:
    """N^2 - D^2, i.e. f_eta^2 - 1 multiplied by D^2. Vanishes at the open loop pole s=0."""
    numerator, denominator = viscous_numerator_denominator(_s(s), params)
    return numerator.square() - denominator.square()


def char_dyn_viscous(s: ArrayLike, params: SystemParams) -> ScaledComplex:
    """N^2 - 2 k1 N D - k2 N D exp(-s tau) - D^2, i.e. f^2 - 2 k1 f - k2 f exp(-s tau) - 1 multiplied by D^2.
    N and D both change sign under lambda1 <-> lambda2, so the result does not depend on the square root branch."""
    s = _s(s)
    numerator, denominator = viscous_numerator_denominator(s, params)
    cross = numerator * denominator
    return (numerator.square() - 2.0 * params.k1 * cross
            - params.k2 * cross * ScaledComplex.exp(-s * params.tau) - denominator.square())


def char_deadbeat_viscous(s: ArrayLike, params: SystemParams) -> ScaledComplex:
    """P(s) = N^2 - N D exp(-s) - D^2 for the dead beat controller (k1=0, k2=1); eps != 0 gives the perturbed loop."""
    return char_dyn_viscous(s, params.replace(k1=0.0, k2=1.0))


def char_zform(z: ArrayLike, eta: float) -> ScaledComplex:
    """X_eta(z)^2 + z exp(-(z^2-1)/(4 eta)) X_eta(z) - z^2, equal to -eta^2 P(s) at s = (z^2-1)/(4 eta)."""
    z = _s(z)
    x = x_eta(z, eta)
    return x.square() + ScaledComplex(z) * ScaledComplex.exp(-(z * z - 1.0) / (4.0 * eta)) * x \
        - ScaledComplex(z * z)


def zform_to_s(z: ArrayLike, eta: float) -> np.ndarray:
    return (_s(z) ** 2 - 1.0) / (4.0 * eta)


def s_to_zform(s: ArrayLike, eta: float) -> np.ndarray:
    """Principal z = sqrt(1 + 4 eta s); -z is the other preimage."""
    return np.sqrt(1.0 + 4.0 * eta * _s(s))


def _half_sum_cosh_sinhc(c: float, delta: np.ndarray) -> ScaledComplex:
    """exp(c) * (c sinh(delta)/delta + cosh(delta)), even in delta; Re delta >= 0 is assumed."""
    small = np.abs(delta) < SINHC_SERIES_RADIUS
    d2 = delta * delta
    series = c * (1.0 + d2 / 6.0 + d2 * d2 / 120.0) + np.cosh(np.where(small, delta, 0.0))
    near = ScaledComplex.exp(np.full(delta.shape, complex(c))) * ScaledComplex(series)
    safe = np.where(small, 1.0, delta)
    tail = np.exp(-2.0 * safe)
    far = ScaledComplex.exp(c + safe) * ScaledComplex((c * (1.0 - tail) / safe + (1.0 + tail)) / 2.0)
    return ScaledComplex.where(small, near, far)


def char_simpler(s: ArrayLike, params: SystemParams) -> ScaledComplex:
    """F_eta(s) - 1 for the viscous line looped through one transport line, cleared to an entire form.
    With c = v/(2 eta) and delta = sqrt(v^2 + 4 eta s)/(2 eta), lambda_{1,2} = c +- delta and
      (lambda1 e^lambda1 - lambda2 e^lambda2) / (lambda1 - lambda2) = exp(c) (c sinh(delta)/delta + cosh(delta)) =: B,
    so F_eta - 1 = 0 is equivalent to B (1 + exp(-s tau)) - exp(2c) = 0, which is even in delta."""
    s = _s(s)
    c = params.plant_velocity / (2.0 * params.eta)
    delta = discriminant_root(s, params) / (2.0 * params.eta)
    b = _half_sum_cosh_sinhc(c, delta)
    return b * (1.0 + ScaledComplex.exp(-s * params.tau)) - ScaledComplex.exp(np.full(s.shape, complex(2.0 * c)))


CHAR_FUNCTIONS: Dict[Variant, Callable[[np.ndarray, SystemParams], ScaledComplex]] = {
    Variant.OPEN_INVISCID: char_open_inviscid,
    Variant.PROP_INVISCID: char_prop_inviscid,
    Variant.DYN_INVISCID: char_dyn_inviscid,
    Variant.DEADBEAT_INVISCID_PERTURBED: char_deadbeat_inviscid_perturbed,
    Variant.DYN_INVISCID_PERTURBED: char_dyn_inviscid_perturbed,
    Variant.OPEN_VISCOUS: char_open_viscous,
    Variant.DEADBEAT_VISCOUS: char_deadbeat_viscous,
    Variant.DEADBEAT_VISCOUS_PERTURBED: char_deadbeat_viscous,
    Variant.DYN_VISCOUS: char_dyn_viscous,
    Variant.SIMPLER: char_simpler,
    Variant.ZFORM: lambda z, params: char_zform(z, params.eta),
}


@dataclass(frozen=True)
class CharFn:
    """Characteristic function handle: variant + parameters, callable on scalars or arrays."""
    variant: Variant
    params: SystemParams

    def __post_init__(self):
        if self.variant.viscous and not self.params.eta > 0:
            raise ValueError(f'Variant {self.variant.value} needs eta > 0 (got eta={self.params.eta})')
        if not self.variant.viscous and self.params.eta != 0:
            raise ValueError(f'Variant {self.variant.value} is inviscid, but eta={self.params.eta}')
        if self.variant in NOMINAL_ONLY_VARIANTS and self.params.eps != 0:
            raise ValueError(f'Variant {self.variant.value} has no velocity perturbation (eps={self.params.eps}); '
                             f'use a perturbed variant')

    @classmethod
    def build(cls, variant, params: Optional[SystemParams] = None, **kwargs) -> 'CharFn':
        if isinstance(variant, str):
            variant = Variant.from_name(variant)
        if params is None:
            params = SystemParams(**kwargs)
        elif kwargs:
            params = params.replace(**kwargs)
        return cls(variant, params)

    @property
    def name(self) -> str:
        return self.variant.value

    def __call__(self, s: ArrayLike) -> ScaledComplex:
        return CHAR_FUNCTIONS[self.variant](_s(s), self.params)

    def describe(self) -> dict:
        return {'variant': self.variant.value, 'variable': self.variant.variable, 'params': self.params.to_dict()}


def _delay_grid(ratio: float) -> Optional[Tuple[int, int]]:
    """Integers (a, b) with b/a = ratio exactly (to rounding), a and b coprime, a <= ORACLE_MAX_DENOMINATOR."""
    fraction = Fraction(ratio).limit_denominator(ORACLE_MAX_DENOMINATOR)
    if abs(fraction.numerator - ratio * fraction.denominator) > 1e-12 * max(fraction.numerator, 1):
        return None
    return fraction.denominator, fraction.numerator


def oracle_coefficients(fn: CharFn) -> Optional[Tuple[np.ndarray, float]]:
    """Polynomial (highest degree first) in q = exp(-s u) whose roots give the zeros of fn, together with u.
    None for viscous variants and for delay ratios that are not rational with a small denominator."""
    variant, params = fn.variant, fn.params
    if variant.viscous:
        return None
    if variant in (Variant.OPEN_INVISCID, Variant.PROP_INVISCID):
        # exp(2s tau)(1 + 2 kp q - q^2) with q = exp(-s tau)
        kp = params.kp if variant is Variant.PROP_INVISCID else 0.0
        return np.array([-1.0, 2.0 * kp, 1.0]), params.plant_delay
    if variant is Variant.DYN_INVISCID:
        return np.trim_zeros(np.array([params.k2 - 1.0, 2.0 * params.k1, 1.0]), 'f'), params.tau
    k1, k2 = (0.0, 1.0) if variant is Variant.DEADBEAT_INVISCID_PERTURBED else (params.k1, params.k2)
    grid = _delay_grid(params.tau / params.plant_delay)
    if grid is None:
        log.info(f'No rational delay ratio for eps={params.eps}; polynomial oracle unavailable')
        return None
    a, b = grid
    unit = params.plant_delay / a
    degree = max(2 * a, a + b)
    coeffs = np.zeros(degree + 1)
    # coeffs[degree - k] multiplies q^k
    coeffs[degree - 2 * a] += 1.0
    coeffs[degree - a] += -2.0 * k1
    coeffs[degree - (a + b)] += -k2
    coeffs[degree] += -1.0
    return np.trim_zeros(coeffs, 'f'), unit
