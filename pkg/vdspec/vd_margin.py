#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Delay-robustness margin of a boundary coupling matrix K:
  rho_bar(K) = max over phases theta of the spectral radius of diag(exp(-i theta)) K
  rho_2(K)   = inf over positive diagonal D of the spectral norm of D K D^-1
The two agree, and for the delayed controller matrix K(k1, k2) rho_2 = |k1| + sqrt(1 + k1^2 + |k2|).
Exponential stability of the delayed closed loop is robust to small delay changes only if rho_bar(K) < 1.
Examples:
  from vdspec.vd_margin import BoundaryMatrix, margin_report
  margin_report(BoundaryMatrix.controller_matrix(0, 1)).rho2   # sqrt(2)
"""
# -*- encoding: utf-8 -*-

from dataclasses import dataclass, field
import itertools
import logging as log
import math
from typing import List, NamedTuple, Optional, Tuple
import numpy as np
import regex
from scipy.optimize import minimize, minimize_scalar

log.basicConfig(level=log.INFO)

LOG_SCALE_CAP = 30.0
PHASE_GRID = 64
MAX_PHASE_POINTS = 2 ** 18
CHAR_POLY_MAX_N = 4
DEGENERATE = 'DEGENERATE'
CONVERGENCE_WARN = 'CONVERGENCE_WARN'


class ConsistencyError(ArithmeticError):
    """An internal cross-check between two independent computations failed."""
    pass


class DimensionError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class BoundaryMatrix:
    """Square coupling matrix (2 <= n <= 8) from the outflow values at x=1 to the inflow values at x=0."""
    entries: np.ndarray
    name: str = ''
    gains: Optional[Tuple[float, float]] = None

    def __post_init__(self):
        entries = np.array(self.entries, dtype=float)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
            raise DimensionError(f'Boundary matrix must be square, not of shape {entries.shape}')
        if not 2 <= entries.shape[0] <= 8:
            raise DimensionError(f'Boundary matrix size must be between 2 and 8, not {entries.shape[0]}')
        if not np.all(np.isfinite(entries)):
            raise ValueError('Boundary matrix entries must be finite')
        entries.setflags(write=False)
        object.__setattr__(self, 'entries', entries)

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    @classmethod
    def controller_matrix(cls, k1: float, k2: float) -> 'BoundaryMatrix':
        """K for (y1, y2, y2_hat) under U(t) = -2 k1 Y(t) - k2 Y(t - tau), y2_hat being the controller delay line."""
        return cls(np.array([[-2.0 * k1, 1.0, -k2], [1.0, 0.0, 0.0], [1.0, 0.0, 0.0]]), f'controller:{k1:g},{k2:g}',
                   (float(k1), float(k2)))

    @classmethod
    def simpler_matrix(cls) -> 'BoundaryMatrix':
        """K for (y, y_hat) of the viscous line looped through one transport line."""
        return cls(np.array([[1.0, -1.0], [1.0, -1.0]]), 'simpler')

    @classmethod
    def identity(cls, n: int = 3) -> 'BoundaryMatrix':
        return cls(np.eye(n), f'identity{n}')

    @classmethod
    def zeros(cls, n: int = 2) -> 'BoundaryMatrix':
        return cls(np.zeros((n, n)), f'zero{n}')

    @classmethod
    def from_string(cls, spec: str) -> 'BoundaryMatrix':
        """'identity3', 'zero2', 'simpler', 'controller:k1,k2' or rows such as '1,-1;1,-1'."""
        spec = spec.strip()
        if m := regex.fullmatch(r'identity(\d)', spec):
            return cls.identity(int(m.group(1)))
        if m := regex.fullmatch(r'zeros?(\d)', spec):
            return cls.zeros(int(m.group(1)))
        if spec == 'simpler':
            return cls.simpler_matrix()
        number = r'[-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?'
        if m := regex.fullmatch(rf'controller:({number}),({number})', spec.replace(' ', '')):
            return cls.controller_matrix(float(m.group(1)), float(m.group(2)))
        rows = [row for row in regex.split(r'\s*;\s*', spec) if row]
        try:
            entries = [[float(x) for x in regex.split(r'[,\s]+', row.strip())] for row in rows]
        except ValueError:
            raise ValueError(f'Cannot parse matrix {spec!r}')
        if len({len(row) for row in entries}) != 1:
            raise DimensionError(f'Rows of {spec!r} differ in length')
        return cls(np.array(entries), spec)

    def scaled(self, log_scaling: np.ndarray) -> np.ndarray:
        """D K D^-1 with D = diag(1, exp(log_scaling))."""
        d = np.exp(np.concatenate(([0.0], np.asarray(log_scaling, dtype=float))))
        return self.entries * np.outer(d, 1.0 / d)

    def rotated(self, phases: np.ndarray) -> np.ndarray:
        """diag(exp(-i theta)) K with theta_1 = 0; phases may carry leading batch dimensions."""
        phases = np.asarray(phases, dtype=float)
        theta = np.concatenate((np.zeros(phases.shape[:-1] + (1,)), phases), axis=-1)
        return np.exp(-1j * theta)[..., :, None] * self.entries

    def __repr__(self):
        return f'BoundaryMatrix({self.name or self.entries.tolist()})'


def jacobi_eigenvalues(a: np.ndarray, eps: float = 1e-14, max_sweeps: int = 60) -> np.ndarray:
    """Eigenvalues of a real symmetric matrix by cyclic Jacobi rotations, ascending."""
    a = np.array(a, dtype=float)
    n, m = a.shape
    if n != m:
        raise DimensionError('Matrix must be square')
    scale = np.max(np.abs(a)) if a.size else 0.0
    if scale == 0:
        return np.zeros(n)
    if np.max(np.abs(a - a.T)) > 1e-12 * scale:
        raise ValueError('Matrix must be symmetric')
    a = (a + a.T) / 2
    for _sweep in range(max_sweeps):
        if np.sqrt(np.sum(np.triu(a, 1) ** 2)) <= eps * scale:
            break
        for p in range(n):
            for q in range(p + 1, n):
                if a[p, q] == 0.0:
                    continue
                phi = 0.5 * math.atan2(2 * a[p, q], a[q, q] - a[p, p])
                c, s = math.cos(phi), math.sin(phi)
                # A <- R^T A R, R = rotation by phi in the (p, q) plane
                col_p, col_q = a[:, p].copy(), a[:, q].copy()
                a[:, p], a[:, q] = c * col_p - s * col_q, s * col_p + c * col_q
                row_p, row_q = a[p, :].copy(), a[q, :].copy()
                a[p, :], a[q, :] = c * row_p - s * row_q, s * row_p + c * row_q
                a[p, q] = a[q, p] = 0.0
    else:
        log.warning(f'Jacobi rotations did not converge in {max_sweeps} sweeps')
    return np.sort(np.diag(a))


def spectral_norm(a: np.ndarray) -> float:
    """Largest singular value, from the Jacobi eigenvalues of A^T A."""
    a = np.asarray(a, dtype=float)
    return math.sqrt(max(jacobi_eigenvalues(a.T @ a)[-1], 0.0))


def char_poly(a: np.ndarray) -> np.ndarray:
    """Characteristic polynomial coefficients (highest degree first, monic) by the Faddeev-LeVerrier recursion.
    Accepts a stack of matrices (..., n, n)."""
    a = np.asarray(a)
    n = a.shape[-1]
    coeffs = np.zeros(a.shape[:-2] + (n + 1,), dtype=np.result_type(a.dtype, float))
    coeffs[..., 0] = 1.0
    m = np.zeros_like(a, dtype=coeffs.dtype)
    eye = np.eye(n)
    for k in range(1, n + 1):
        m = a @ m + coeffs[..., k - 1, None, None] * eye
        coeffs[..., k] = -np.trace(a @ m, axis1=-2, axis2=-1) / k
    return coeffs


def _companion_roots(coeffs: np.ndarray) -> np.ndarray:
    n = coeffs.shape[-1] - 1
    companion = np.zeros(coeffs.shape[:-1] + (n, n), dtype=coeffs.dtype)
    companion[..., 0, :] = -coeffs[..., 1:]
    if n > 1:
        companion[..., np.arange(1, n), np.arange(n - 1)] = 1.0
    return np.linalg.eigvals(companion)


def spectral_radius(a: np.ndarray) -> np.ndarray:
    """Spectral radius of each matrix in a stack (..., n, n): polynomial roots for n <= 4, eigvals otherwise."""
    a = np.asarray(a)
    if a.shape[-1] <= CHAR_POLY_MAX_N:
        eigenvalues = _companion_roots(char_poly(a))
    else:
        eigenvalues = np.linalg.eigvals(a)
    return np.max(np.abs(eigenvalues), axis=-1)


def rho2_closed_form(k1: float, k2: float) -> float:
    return abs(k1) + math.sqrt(1.0 + k1 * k1 + abs(k2))


class Rho2Estimate(NamedTuple):
    value: float
    scaling: np.ndarray
    flags: List[str]


class RhoBarEstimate(NamedTuple):
    value: float
    phases: np.ndarray
    flags: List[str]


def _coordinate_descent(objective, x: np.ndarray, cap: float, max_sweeps: int, tol: float) -> Tuple[np.ndarray, bool]:
    value = objective(x)
    for _ in range(max_sweeps):
        previous = value
        for i in range(len(x)):
            def along(t, i=i):
                trial = x.copy()
                trial[i] = t
                return objective(trial)
            lo, hi = max(x[i] - 4.0, -cap), min(x[i] + 4.0, cap)
            result = minimize_scalar(along, bounds=(lo, hi), method='bounded', options={'xatol': 1e-10})
            if result.fun < value:
                x[i], value = result.x, result.fun
        if previous - value <= tol * max(1.0, value):
            return x, True
    return x, False


def rho2_numeric(k: BoundaryMatrix, cap: float = LOG_SCALE_CAP, n_starts: int = 3, max_sweeps: int = 200,
                 tol: float = 1e-14) -> Rho2Estimate:
    """inf over D = diag(1, exp(x)) of ||D K D^-1||_2: coordinate descent on x from the best points of a
    log grid, followed by a Nelder-Mead polish; x is capped at +-cap."""
    dim = k.n - 1

    def objective(x):
        return spectral_norm(k.scaled(np.clip(x, -cap, cap)))

    grid = [np.array(point) for point in itertools.product((-2.0, 0.0, 2.0), repeat=dim)]
    grid.sort(key=lambda point: (objective(point), tuple(point)))
    best_x, best_value, converged_all = None, math.inf, True
    for start in grid[:n_starts]:
        x, converged = _coordinate_descent(objective, start.copy(), cap, max_sweeps, tol)
        polished = minimize(objective, x, method='Nelder-Mead',
                            options={'xatol': 1e-10, 'fatol': 1e-15, 'maxiter': 600 * dim})
        if polished.fun < objective(x):
            x = np.clip(polished.x, -cap, cap)
            x, converged = _coordinate_descent(objective, x, cap, max_sweeps, tol)
        value = objective(x)
        if value < best_value - 1e-15 or best_x is None:
            best_x, best_value, converged_all = x, value, converged
    # coordinates drifting off toward +-infinity are pushed to the cap when that does not increase the norm
    for i in np.nonzero(np.abs(best_x) > 10.0)[0]:
        trial = best_x.copy()
        trial[i] = math.copysign(cap, best_x[i])
        trial_value = objective(trial)
        if trial_value <= best_value * (1 + 1e-12):
            best_x, best_value = trial, min(trial_value, best_value)
    flags = []
    if np.any(np.abs(best_x) >= cap - 1e-3):
        flags.append(DEGENERATE)
        log.warning(f'rho2 of {k!r}: optimal scaling runs into the cap +-{cap:g}; infimum not attained')
    if not converged_all:
        flags.append(CONVERGENCE_WARN)
        log.warning(f'rho2 of {k!r}: coordinate descent hit {max_sweeps} sweeps; returning best value')
    scaling = np.exp(np.concatenate(([0.0], np.clip(best_x, -cap, cap))))
    return Rho2Estimate(best_value, scaling, flags)


def _phase_grid_size(n: int) -> int:
    if n < 2:
        return 1
    if PHASE_GRID ** (n - 1) <= MAX_PHASE_POINTS:
        return PHASE_GRID
    return max(4, int(MAX_PHASE_POINTS ** (1.0 / (n - 1))))


def rho_bar_numeric(k: BoundaryMatrix, grid_size: Optional[int] = None, refine_passes: int = 3,
                    chunk: int = 2 ** 15) -> RhoBarEstimate:
    """max over theta (theta_1 = 0) of the spectral radius of diag(exp(-i theta)) K: uniform grid, then bounded
    scalar refinement per angle. Ties on the grid go to the lexicographically smallest theta."""
    dim = k.n - 1
    grid_size = grid_size or _phase_grid_size(k.n)
    angles = 2 * np.pi * np.arange(grid_size) / grid_size
    total = grid_size ** dim
    best_index, best_value = 0, -math.inf
    for begin in range(0, total, chunk):
        index = np.arange(begin, min(begin + chunk, total))
        # lexicographic order: the first angle varies slowest
        digits = np.stack(np.unravel_index(index, (grid_size,) * dim), axis=-1)
        radii = spectral_radius(k.rotated(angles[digits]))
        position = int(np.argmax(radii))
        if radii[position] > best_value + 1e-13:
            best_index, best_value = int(index[position]), float(radii[position])
    theta = angles[np.array(np.unravel_index(best_index, (grid_size,) * dim))].astype(float)

    def radius(phases):
        return float(spectral_radius(k.rotated(np.asarray(phases)[None, :]))[0])

    step = 2 * np.pi / grid_size
    value = radius(theta)
    for _ in range(refine_passes):
        previous = value
        for i in range(dim):
            def negative(t, i=i):
                trial = theta.copy()
                trial[i] = t
                return -radius(trial)
            result = minimize_scalar(negative, bounds=(theta[i] - step, theta[i] + step), method='bounded',
                                     options={'xatol': 1e-12})
            if -result.fun > value:
                theta[i], value = result.x, -result.fun
        if value - previous <= 1e-15 * max(1.0, value):
            break
    return RhoBarEstimate(value, np.concatenate(([0.0], np.mod(theta, 2 * np.pi))), [])


def eigen_check_M(k1: float, k2: float, theta2: float, theta3: float, tol: float = 1e-10) \
        -> Tuple[float, float, float]:
    """beta, gamma and lambda_max = (beta + sqrt(beta^2 - 4 gamma))/2 of M = (D K D^-1)^T (D K D^-1),
    D = diag(1, theta2, theta3), checked against the explicitly formed M."""
    if not (theta2 > 0 and theta3 > 0):
        raise ValueError(f'theta2 and theta3 must be positive, not {theta2}, {theta3}')
    beta = 4 * k1 ** 2 + (theta2 ** 2 + theta2 ** -2) + (theta3 ** 2 + k2 ** 2 * theta3 ** -2)
    gamma = 1 + theta2 ** -2 * theta3 ** 2 + k2 ** 2 + k2 ** 2 * theta2 ** 2 * theta3 ** -2
    discriminant = beta ** 2 - 4 * gamma
    if discriminant < -tol * max(1.0, beta ** 2):
        raise ConsistencyError(f'beta^2 - 4 gamma = {discriminant} < 0 for a symmetric M')
    lambda_max = (beta + math.sqrt(max(discriminant, 0.0))) / 2
    a = BoundaryMatrix.controller_matrix(k1, k2).scaled(np.log([theta2, theta3]))
    m = a.T @ a
    scale = max(1.0, lambda_max)
    largest = jacobi_eigenvalues(m)[-1]
    if abs(largest - lambda_max) > tol * scale:
        raise ConsistencyError(f'lambda_max {lambda_max} differs from the largest eigenvalue {largest} of M')
    expected = np.array([1.0, -beta, gamma, 0.0])
    coefficients = char_poly(m)
    if np.max(np.abs(coefficients - expected) / np.maximum(1.0, np.abs(expected))) > tol * scale ** 2:
        raise ConsistencyError(f'det(lambda I - M) coefficients {coefficients} differ from {expected}')
    return beta, gamma, lambda_max


@dataclass
class MarginResult:
    rho2: float
    rho_bar: float
    optimal_scaling: np.ndarray
    optimal_phases: np.ndarray
    tolerance: float = 1e-4
    rho2_closed: Optional[float] = None
    flags: List[str] = field(default_factory=list)
    notes: List[str] = field(default_factory=list)
    matrix: Optional[BoundaryMatrix] = None

    @property
    def consistent(self) -> bool:
        return abs(self.rho2 - self.rho_bar) <= self.tolerance

    @property
    def robust(self) -> bool:
        """Delay-robust exponential stability needs rho_bar < 1."""
        return self.rho_bar < 1.0

    def to_json(self) -> dict:
        result = {'rho2': self.rho2, 'rho_bar': self.rho_bar, 'rho2_closed_form': self.rho2_closed,
                  'optimal_scaling': self.optimal_scaling.tolist(), 'optimal_phases': self.optimal_phases.tolist(),
                  'tolerance': self.tolerance, 'consistent': self.consistent, 'delay_robust': self.robust,
                  'flags': self.flags, 'notes': self.notes}
        if self.matrix is not None:
            result['matrix'] = {'name': self.matrix.name, 'entries': self.matrix.entries.tolist()}
        return result


def margin_report(k: BoundaryMatrix, tolerance: float = 1e-4) -> MarginResult:
    rho2 = rho2_numeric(k)
    rho_bar = rho_bar_numeric(k)
    result = MarginResult(rho2.value, rho_bar.value, rho2.scaling, rho_bar.phases, tolerance,
                          flags=sorted(set(rho2.flags + rho_bar.flags)), matrix=k)
    if k.gains is not None:
        result.rho2_closed = rho2_closed_form(*k.gains)
        if abs(result.rho2_closed - rho2.value) > tolerance:
            result.notes.append(f'numeric rho2 {rho2.value:.10g} differs from the closed form '
                                f'{result.rho2_closed:.10g}')
    if not result.consistent:
        note = f'rho2 {rho2.value:.10g} and rho_bar {rho_bar.value:.10g} differ by more than {tolerance:g}'
        result.notes.append(note)
        log.warning(f'{k!r}: {note}')
    if k.name == 'simpler':
        note = (f'rho_bar from the definition is {rho_bar.value:.10g} (|exp(-i t1) - exp(-i t2)| reaches 2); '
                f'the value sqrt(2) quoted for this matrix is not reproduced')
        result.notes.append(note)
        log.warning(f'{k!r}: {note}')
    return result
