#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
System parameters and overflow-safe transfer functions of the transport / advection-diffusion loops.
Transfer functions such as f_eta(s) involve factors like exp(lambda_1(s)) that overflow double precision
for moderate |s|/eta, while root counting only needs their phase. All such values are therefore carried
as ScaledComplex (mantissa * exp(exponent)).
Examples:
  from vdspec.vd_model import SystemParams, f_viscous
  f_viscous(1.0, SystemParams(eta=0.1)).to_complex()
"""
# -*- encoding: utf-8 -*-

import dataclasses
from dataclasses import dataclass
import logging as log
import math
from typing import Optional, Union
import numpy as np


log.basicConfig(level=log.INFO)

CONFLUENCE_RTOL = 1e-6  # |sqrt((1+eps)^2 + 4 eta s)| below CONFLUENCE_RTOL * (1+eps) -> confluent limit form
LN2 = math.log(2.0)

ArrayLike = Union[complex, float, np.ndarray]


@dataclass(frozen=True)
class SystemParams:
    """Physical and controller constants shared by every system variant.
    velocity: nominal transport velocity upsilon; tau = 1/upsilon is the nominal delay (also the controller delay)
    eta: viscosity (0 selects the pure transport/delay code paths)
    eps: relative perturbation of the plant velocity, which becomes upsilon * (1 + eps)
    k1, k2: gains of the delayed controller U(t) = -2 k1 Y(t) - k2 Y(t - tau) (dead beat: k1=0, k2=1)
    kp: gain of the proportional controller U(t) = -2 kp Y(t)"""
    velocity: float = 1.0
    eta: float = 0.0
    eps: float = 0.0
    k1: float = 0.0
    k2: float = 1.0
    kp: float = 0.0
    tau: Optional[float] = None

    def __post_init__(self):
        for name in ('velocity', 'eta', 'eps', 'k1', 'k2', 'kp'):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f'SystemParams.{name} must be finite, not {getattr(self, name)}')
        if self.velocity <= 0:
            raise ValueError(f'Transport velocity must be positive, not {self.velocity}')
        if self.eta < 0:
            raise ValueError(f'Viscosity eta must be nonnegative, not {self.eta}')
        if 1.0 + self.eps <= 0:
            raise ValueError(f'Velocity perturbation must satisfy 1+eps > 0, not eps={self.eps}')
        if self.tau is None:
            object.__setattr__(self, 'tau', 1.0 / self.velocity)
        elif abs(self.tau * self.velocity - 1.0) > 1e-15:
            raise ValueError(f'Delay tau={self.tau} is not 1/velocity (velocity={self.velocity})')

    @classmethod
    def from_delay(cls, tau: float, **kwargs) -> 'SystemParams':
        """Build parameters from the nominal delay instead of the velocity."""
        if tau <= 0:
            raise ValueError(f'Delay tau must be positive, not {tau}')
        return cls(velocity=1.0 / tau, tau=tau, **kwargs)

    @property
    def plant_velocity(self) -> float:
        return self.velocity * (1.0 + self.eps)

    @property
    def plant_delay(self) -> float:
        """Transit time of the (perturbed) plant, tau / (1 + eps)."""
        return self.tau / (1.0 + self.eps)

    @property
    def is_viscous(self) -> bool:
        return self.eta > 0

    def replace(self, **changes) -> 'SystemParams':
        if 'velocity' in changes and 'tau' not in changes:
            changes['tau'] = None
        return dataclasses.replace(self, **changes)

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


def _normalize(mantissa: np.ndarray, exponent: np.ndarray):
    """Rescale mantissas to magnitude [1, 2) by exact powers of two; zero becomes (0, 0).
    Non-finite mantissas (pole flags) are kept with exponent 0."""
    m = np.array(mantissa, dtype=complex)
    x = np.array(exponent, dtype=float)
    m, x = np.broadcast_arrays(m, x)
    m, x = m.copy(), x.copy()
    a = np.abs(m)
    regular = np.isfinite(a) & (a > 0)
    if regular.any():
        _, k = np.frexp(a[regular])  # a = f * 2**k with f in [0.5, 1)
        k = k - 1
        mr = m[regular]
        m[regular] = np.ldexp(mr.real, -k) + 1j * np.ldexp(mr.imag, -k)
        x[regular] = x[regular] + k * LN2
    zero = a == 0
    m[zero] = 0
    x[zero] = 0.0
    special = ~np.isfinite(a)
    x[special] = 0.0
    return m, x


class ScaledComplex:
    """Complex value mantissa * exp(exponent) with |mantissa| in [1, 2) (or exactly 0).
    The phase of the value is the phase of the mantissa, so values far outside the double range keep an
    exact phase. Works elementwise on numpy arrays; a non-finite mantissa flags a pole."""
    __slots__ = ('mantissa', 'exponent')

    def __init__(self, mantissa: ArrayLike, exponent: ArrayLike = 0.0, normalize: bool = True):
        if normalize:
            mantissa, exponent = _normalize(mantissa, exponent)
        self.mantissa = mantissa
        self.exponent = exponent

    @classmethod
    def exp(cls, z: ArrayLike) -> 'ScaledComplex':
        """exp(z) without overflow: mantissa exp(i Im z), exponent Re z."""
        z = np.asarray(z, dtype=complex)
        return cls(np.exp(1j * z.imag), z.real)

    @classmethod
    def coerce(cls, value) -> 'ScaledComplex':
        return value if isinstance(value, ScaledComplex) else cls(value)

    @classmethod
    def where(cls, condition, a: 'ScaledComplex', b: 'ScaledComplex') -> 'ScaledComplex':
        a, b = cls.coerce(a), cls.coerce(b)
        return cls(np.where(condition, a.mantissa, b.mantissa), np.where(condition, a.exponent, b.exponent),
                   normalize=False)

    @classmethod
    def pole(cls, shape=()) -> 'ScaledComplex':
        return cls(np.full(shape, complex(np.inf, 0.0)), np.zeros(shape), normalize=False)

    @property
    def shape(self):
        return np.shape(self.mantissa)

    def __len__(self):
        return len(self.mantissa)

    def __getitem__(self, index) -> 'ScaledComplex':
        return ScaledComplex(self.mantissa[index], self.exponent[index], normalize=False)

    def __mul__(self, other) -> 'ScaledComplex':
        other = ScaledComplex.coerce(other)
        return ScaledComplex(self.mantissa * other.mantissa, self.exponent + other.exponent)

    __rmul__ = __mul__

    def __truediv__(self, other) -> 'ScaledComplex':
        other = ScaledComplex.coerce(other)
        with np.errstate(divide='ignore', invalid='ignore'):
            mantissa = self.mantissa / other.mantissa
        return ScaledComplex(mantissa, self.exponent - other.exponent)

    def __rtruediv__(self, other) -> 'ScaledComplex':
        return ScaledComplex.coerce(other) / self

    def __add__(self, other) -> 'ScaledComplex':
        other = ScaledComplex.coerce(other)
        x1 = np.where(self.mantissa == 0, -np.inf, self.exponent)
        x2 = np.where(other.mantissa == 0, -np.inf, other.exponent)
        top = np.maximum(x1, x2)
        both_zero = np.isneginf(top)
        top = np.where(both_zero, 0.0, top)
        with np.errstate(invalid='ignore', over='ignore'):
            mantissa = self.mantissa * np.exp(x1 - top) + other.mantissa * np.exp(x2 - top)
        mantissa = np.where(both_zero, 0.0, mantissa)
        return ScaledComplex(mantissa, top)

    __radd__ = __add__

    def __neg__(self) -> 'ScaledComplex':
        return ScaledComplex(-self.mantissa, self.exponent, normalize=False)

    def __sub__(self, other) -> 'ScaledComplex':
        return self + (-ScaledComplex.coerce(other))

    def __rsub__(self, other) -> 'ScaledComplex':
        return ScaledComplex.coerce(other) - self

    def square(self) -> 'ScaledComplex':
        return self * self

    def conj(self) -> 'ScaledComplex':
        return ScaledComplex(np.conj(self.mantissa), self.exponent, normalize=False)

    def phase(self) -> np.ndarray:
        return np.angle(self.mantissa)

    def log_abs(self) -> np.ndarray:
        """Natural log of the magnitude (-inf for zero)."""
        with np.errstate(divide='ignore'):
            return np.log(np.abs(self.mantissa)) + self.exponent

    def is_zero(self) -> np.ndarray:
        return self.mantissa == 0

    def is_pole(self) -> np.ndarray:
        return ~np.isfinite(self.mantissa)

    def to_complex(self) -> np.ndarray:
        """Plain complex value; may overflow to inf or underflow to 0."""
        with np.errstate(over='ignore', invalid='ignore'):
            return self.mantissa * np.exp(self.exponent)

    def __repr__(self):
        return f'ScaledComplex(mantissa={self.mantissa!r}, exponent={self.exponent!r})'


@dataclass(frozen=True)
class LambdaPair:
    """Roots lambda_1 (+sqrt) and lambda_2 (-sqrt) of eta lambda^2 - v lambda - s = 0, v = plant velocity."""
    lambda1: np.ndarray
    lambda2: np.ndarray

    def vieta_residual(self, s: ArrayLike, params: SystemParams) -> np.ndarray:
        """Largest relative deviation from lambda1+lambda2 = v/eta and lambda1*lambda2 = -s/eta."""
        s = np.asarray(s, dtype=complex)
        total = params.plant_velocity / params.eta
        product = -s / params.eta
        sum_err = np.abs(self.lambda1 + self.lambda2 - total) / max(abs(total), 1.0)
        scale = np.maximum(np.abs(self.lambda1) * np.abs(self.lambda2), np.maximum(np.abs(product), 1.0))
        prod_err = np.abs(self.lambda1 * self.lambda2 - product) / scale
        return np.maximum(sum_err, prod_err)


def _require_viscous(params: SystemParams):
    if not params.eta > 0:
        raise ValueError('Viscous evaluation needs eta > 0 (the pure delay path is f_transport)')


def discriminant_root(s: ArrayLike, params: SystemParams) -> np.ndarray:
    """Principal square root of v^2 + 4 eta s (branch cut on the negative real axis of the radicand)."""
    s = np.asarray(s, dtype=complex)
    v = params.plant_velocity
    return np.sqrt(v * v + 4.0 * params.eta * s)


def lambda_pair(s: ArrayLike, params: SystemParams) -> LambdaPair:
    _require_viscous(params)
    root = discriminant_root(s, params)
    v = params.plant_velocity
    return LambdaPair((v + root) / (2.0 * params.eta), (v - root) / (2.0 * params.eta))


def confluent_point(params: SystemParams) -> float:
    """The s at which lambda_1 = lambda_2, -v^2 / (4 eta)."""
    _require_viscous(params)
    return -params.plant_velocity ** 2 / (4.0 * params.eta)


def f_transport(s: ArrayLike, tau: float) -> np.ndarray:
    """Pure delay transfer function exp(-s tau)."""
    return np.exp(-np.asarray(s, dtype=complex) * tau)


def viscous_numerator_denominator(s: ArrayLike, params: SystemParams):
    """N = lambda1 - lambda2 and D = lambda1 exp(-lambda2) - lambda2 exp(-lambda1), both as ScaledComplex.
    Swapping lambda1 and lambda2 flips the sign of both, so f = N/D, N^2, N*D and D^2 are branch free."""
    pair = lambda_pair(s, params)
    numerator = ScaledComplex(pair.lambda1 - pair.lambda2)
    denominator = (ScaledComplex(pair.lambda1) * ScaledComplex.exp(-pair.lambda2)
                   - ScaledComplex(pair.lambda2) * ScaledComplex.exp(-pair.lambda1))
    return numerator, denominator


def f_viscous(s: ArrayLike, params: SystemParams) -> ScaledComplex:
    """Transfer function f_eta (f_eta,eps for eps != 0) of one viscous transport line, y(s,1)/y(s,0).
    Near the confluent point the quotient 0/0 is replaced by its limit exp(c)/(1+c), c = v/(2 eta).
    A denominator that vanishes elsewhere is returned as a pole (see ScaledComplex.is_pole)."""
    _require_viscous(params)
    s = np.asarray(s, dtype=complex)
    numerator, denominator = viscous_numerator_denominator(s, params)
    value = numerator / denominator
    c = params.plant_velocity / (2.0 * params.eta)
    confluent = np.abs(discriminant_root(s, params)) < CONFLUENCE_RTOL * (1.0 + params.eps)
    limit = ScaledComplex.exp(np.full(s.shape, c)) / (1.0 + c)
    value = ScaledComplex.where(confluent, limit, value)
    pole = denominator.is_zero() & ~confluent
    if np.any(pole):
        log.debug(f'f_viscous: pole at s={s[pole] if s.ndim else s}')
        value = ScaledComplex.where(pole, ScaledComplex.pole(s.shape), value)
    return value


def plant_transfer(s: ArrayLike, params: SystemParams) -> ScaledComplex:
    """f_eta for eta > 0, otherwise the pure delay over the plant transit time."""
    if params.is_viscous:
        return f_viscous(s, params)
    return ScaledComplex.exp(-np.asarray(s, dtype=complex) * params.plant_delay)


def open_loop_G(s: ArrayLike, params: SystemParams) -> ScaledComplex:
    """Input-output transfer function G = f / (1 - f^2) of the open loop. Roots of 1 - f^2 are flagged as poles."""
    s = np.asarray(s, dtype=complex)
    f = plant_transfer(s, params)
    denominator = 1.0 - f.square()
    value = f / denominator
    pole = denominator.is_zero() | f.is_pole()
    if np.any(pole):
        value = ScaledComplex.where(pole, ScaledComplex.pole(s.shape), value)
    return value


def x_eta(z: ArrayLike, eta: float) -> ScaledComplex:
    """X_eta(z) = (1+z)/2 exp(-(1-z)/(2 eta)) - (1-z)/2 exp(-(1+z)/(2 eta)); odd in z."""
    if not eta > 0:
        raise ValueError(f'x_eta needs eta > 0, not {eta}')
    z = np.asarray(z, dtype=complex)
    return (ScaledComplex((1.0 + z) / 2.0) * ScaledComplex.exp(-(1.0 - z) / (2.0 * eta))
            - ScaledComplex((1.0 - z) / 2.0) * ScaledComplex.exp(-(1.0 + z) / (2.0 * eta)))
