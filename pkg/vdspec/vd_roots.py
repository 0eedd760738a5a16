#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Zeros of entire characteristic functions inside a rectangular search window.
Counting uses the argument principle: phase increments of f along the window boundary, bisecting any boundary
segment whose increment exceeds pi/2. Location uses off-centre quadrisection down to cells holding one zero,
then Newton iteration with a central difference derivative computed in scaled arithmetic.
Examples:
  from vdspec.vd_roots import SearchWindow, find_roots
  spectrum = find_roots(char_fn, SearchWindow(-8, 1, -60, 60), threads=4)
  spectrum.write_csv('spectrum.csv')
"""
# -*- encoding: utf-8 -*-

from concurrent.futures import ThreadPoolExecutor
import csv
from dataclasses import dataclass, field
import json
import logging as log
import math
from pathlib import Path
from typing import Callable, Dict, Iterable, List, Optional, Sequence, TextIO, Tuple, Union
import numpy as np
import regex
from vdspec.vd_charfun import CharFn, Variant
from vdspec.vd_model import ScaledComplex, SystemParams

log.basicConfig(level=log.INFO)
data_dir = Path(__file__).parent / 'data'

PHASE_STEP_MAX = math.pi / 2
BOUNDARY_SPACING = 0.25
CELL_BOUNDARY_SAMPLES = 64
BOUNDARY_NUDGES = (1e-4, 3e-4, 1e-3)
SPLIT_FRACTIONS = (0.5137, 0.4729, 0.5521, 0.4411)
NEWTON_MAX_ITER = 60
TIE_TOLERANCE = 1e-10
MAX_LEVELS = 80

Residual = Callable[[np.ndarray], ScaledComplex]


class BoundaryZeroError(RuntimeError):
    """Boundary refinement did not settle; a zero (or pole) on or very near the segment is suspected."""
    def __init__(self, message: str, segment: Tuple[complex, complex]):
        super().__init__(f'{message} (segment {segment[0]:.12g} -> {segment[1]:.12g})')
        self.segment = segment


class RootFindingError(RuntimeError):
    """Zero counts could not be made consistent."""
    pass


@dataclass(frozen=True)
class SearchWindow:
    re_min: float
    re_max: float
    im_min: float
    im_max: float
    max_depth: int = 24
    boundary_samples: int = 256

    def __post_init__(self):
        for name in ('re_min', 're_max', 'im_min', 'im_max'):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f'SearchWindow.{name} must be finite')
        if not self.re_min < self.re_max:
            raise ValueError(f'Empty window: re_min={self.re_min} >= re_max={self.re_max}')
        if not self.im_min < self.im_max:
            raise ValueError(f'Empty window: im_min={self.im_min} >= im_max={self.im_max}')
        if self.boundary_samples < 64:
            raise ValueError(f'boundary_samples must be at least 64, not {self.boundary_samples}')
        if self.max_depth < 1:
            raise ValueError(f'max_depth must be positive, not {self.max_depth}')

    @classmethod
    def from_string(cls, spec: str, **kwargs) -> 'SearchWindow':
        """'re_min,re_max,im_min,im_max', e.g. '-8,1,-60,60'."""
        parts = [part for part in spec.replace(' ', '').split(',') if part]
        if len(parts) != 4:
            raise ValueError(f'Window {spec!r} does not have the form re_min,re_max,im_min,im_max')
        return cls(*(float(part) for part in parts), **kwargs)

    @property
    def width(self) -> float:
        return self.re_max - self.re_min

    @property
    def height(self) -> float:
        return self.im_max - self.im_min

    @property
    def diagonal(self) -> float:
        return math.hypot(self.width, self.height)

    @property
    def center(self) -> complex:
        return complex((self.re_min + self.re_max) / 2, (self.im_min + self.im_max) / 2)

    @property
    def rect(self) -> Tuple[float, float, float, float]:
        return self.re_min, self.re_max, self.im_min, self.im_max

    def is_symmetric(self) -> bool:
        return self.im_min == -self.im_max

    def contains(self, s: complex) -> bool:
        """Strictly inside."""
        return self.re_min < s.real < self.re_max and self.im_min < s.imag < self.im_max

    def covers(self, other: 'SearchWindow') -> bool:
        return (self.re_min <= other.re_min and other.re_max <= self.re_max
                and self.im_min <= other.im_min and other.im_max <= self.im_max)

    def expanded(self, margin: float) -> 'SearchWindow':
        return SearchWindow(self.re_min - margin, self.re_max + margin, self.im_min - margin, self.im_max + margin,
                            self.max_depth, self.boundary_samples)

    def with_rect(self, re_min: float, re_max: float, im_min: float, im_max: float) -> 'SearchWindow':
        return SearchWindow(re_min, re_max, im_min, im_max, self.max_depth, self.boundary_samples)

    def to_dict(self) -> dict:
        return {'re_min': self.re_min, 're_max': self.re_max, 'im_min': self.im_min, 'im_max': self.im_max,
                'max_depth': self.max_depth, 'boundary_samples': self.boundary_samples}

    def __str__(self):
        return f'[{self.re_min:g}, {self.re_max:g}]x[{self.im_min:g}, {self.im_max:g}]'


Rect = Tuple[float, float, float, float]


def _boundary_points(rect: Rect, n_samples: int, spacing: float) -> np.ndarray:
    """Closed counter-clockwise polygon (first point repeated at the end) along the rectangle boundary."""
    re0, re1, im0, im1 = rect
    corners = [complex(re0, im0), complex(re1, im0), complex(re1, im1), complex(re0, im1), complex(re0, im0)]
    perimeter = 2 * ((re1 - re0) + (im1 - im0))
    step = min(spacing, perimeter / n_samples)
    pieces = []
    for a, b in zip(corners[:-1], corners[1:]):
        n = max(2, int(math.ceil(abs(b - a) / step)))
        pieces.append(a + (b - a) * np.arange(n) / n)
    pieces.append(np.array([corners[0]]))
    return np.concatenate(pieces)


def _mantissas(fn: Residual, points: np.ndarray) -> np.ndarray:
    values = fn(points)
    mantissa = np.broadcast_to(values.mantissa, points.shape)
    bad = (mantissa == 0) | ~np.isfinite(mantissa)
    if bad.any():
        at = points[np.argmax(bad)]
        raise BoundaryZeroError('Zero or non-finite value on the boundary', (at, at))
    return mantissa


def winding_number(fn: Residual, rect: Rect, n_samples: int = CELL_BOUNDARY_SAMPLES, max_depth: int = 24,
                   spacing: float = BOUNDARY_SPACING) -> int:
    """Number of zeros of the entire function fn inside rect (argument principle)."""
    points = _boundary_points(rect, n_samples, spacing)
    mantissa = _mantissas(fn, points)
    increments = np.angle(mantissa[1:] * np.conj(mantissa[:-1]))
    for _depth in range(max_depth + 1):
        bad = np.abs(increments) > PHASE_STEP_MAX
        if not bad.any():
            break
        if _depth == max_depth:
            worst = int(np.argmax(np.abs(increments)))
            raise BoundaryZeroError(f'Boundary refinement depth {max_depth} exhausted',
                                    (complex(points[worst]), complex(points[worst + 1])))
        index = np.nonzero(bad)[0]
        midpoints = (points[index] + points[index + 1]) / 2
        mid_mantissa = _mantissas(fn, midpoints)
        points = np.insert(points, index + 1, midpoints)
        mantissa = np.insert(mantissa, index + 1, mid_mantissa)
        increments = np.angle(mantissa[1:] * np.conj(mantissa[:-1]))
    turns = increments.sum() / (2 * math.pi)
    count = int(round(turns))
    if abs(turns - count) > 0.1:
        raise RootFindingError(f'Non-integral winding {turns:.4f} on {rect}')
    if count < 0:
        raise RootFindingError(f'Negative winding {count} on {rect}: residual is not entire there')
    return count


def _window_count(fn: Residual, window: SearchWindow) -> int:
    return winding_number(fn, window.rect, window.boundary_samples, window.max_depth)


def _count_nudged(fn: Residual, window: SearchWindow) -> Tuple[int, SearchWindow]:
    """Count zeros, moving the window boundary outward if a zero sits on it."""
    try:
        return _window_count(fn, window), window
    except BoundaryZeroError as error:
        last_error = error
    for nudge in BOUNDARY_NUDGES:
        nudged = window.expanded(nudge)
        log.info(f'Boundary zero suspected near {last_error.segment[0]:.6g}; window {window} nudged by {nudge:g}')
        try:
            return _window_count(fn, nudged), nudged
        except BoundaryZeroError as error:
            last_error = error
    raise last_error


def count_zeros(fn: Residual, window: SearchWindow) -> int:
    """Winding number of fn along the window boundary (nudged outward by up to 1e-3 when needed)."""
    return _count_nudged(fn, window)[0]


@dataclass(frozen=True)
class SpectrumRoot:
    s: complex
    residual: float
    multiplicity: int = 1
    certified: bool = True

    def to_dict(self) -> dict:
        return {'re': self.s.real, 'im': self.s.imag, 'residual': self.residual, 'multiplicity': self.multiplicity,
                'certified': self.certified}


@dataclass(frozen=True)
class UnresolvedCell:
    rect: Rect
    count: int

    def to_dict(self) -> dict:
        return {'rect': list(self.rect), 'count': self.count}


def abscissa_to_json(sigma: float) -> dict:
    """-inf becomes null plus finite=false."""
    if math.isfinite(sigma):
        return {'sigma_hat': sigma, 'finite': True}
    return {'sigma_hat': None, 'finite': False}


@dataclass
class Spectrum:
    """Zeros found in a window. counted_total is the boundary winding number; it equals the sum of root
    multiplicities plus the counts of unresolved cells."""
    roots: List[SpectrumRoot]
    window: SearchWindow
    counted_total: int
    effective_window: Optional[SearchWindow] = None
    unresolved: List[UnresolvedCell] = field(default_factory=list)
    source: Optional[dict] = None

    def __post_init__(self):
        if self.effective_window is None:
            self.effective_window = self.window
        self.roots = sorted(self.roots, key=lambda r: (r.s.real, r.s.imag))

    def __len__(self):
        return len(self.roots)

    @property
    def values(self) -> np.ndarray:
        return np.array([root.s for root in self.roots], dtype=complex)

    @property
    def resolved_total(self) -> int:
        return sum(root.multiplicity for root in self.roots)

    def abscissa(self) -> Tuple[float, Optional[complex]]:
        """(max Re, attained_at) over the roots; ties within TIE_TOLERANCE go to the smallest |Im|, then Im >= 0.
        Unresolved cells contribute their right edge. (-inf, None) without roots."""
        candidates = [(root.s.real, root.s) for root in self.roots]
        candidates += [(cell.rect[1], complex(cell.rect[1], (cell.rect[2] + cell.rect[3]) / 2))
                       for cell in self.unresolved]
        if not candidates:
            return float('-inf'), None
        top = max(re for re, _ in candidates)
        tied = [s for re, s in candidates if re >= top - TIE_TOLERANCE]
        best = min(tied, key=lambda s: (abs(s.imag), -s.imag))
        return top, best

    def to_json(self) -> dict:
        sigma, attained_at = self.abscissa()
        result = {'window': self.window.to_dict(),
                  'effective_window': self.effective_window.to_dict(),
                  'counted_total': self.counted_total,
                  'roots': [root.to_dict() for root in self.roots],
                  'unresolved': [cell.to_dict() for cell in self.unresolved],
                  'spectral_abscissa': dict(abscissa_to_json(sigma),
                                            attained_at=None if attained_at is None
                                            else [attained_at.real, attained_at.imag])}
        if self.source is not None:
            result['source'] = self.source
        return result

    def write_csv(self, out: Union[str, Path, TextIO]) -> None:
        if isinstance(out, (str, Path)):
            with open(out, 'w', newline='', encoding='utf-8') as f_out:
                self.write_csv(f_out)
            return
        writer = csv.writer(out, lineterminator='\n')
        writer.writerow(['re', 'im', 'residual', 'multiplicity'])
        for root in self.roots:
            writer.writerow([repr(root.s.real), repr(root.s.imag), repr(root.residual), root.multiplicity])

    def write_json(self, out: Union[str, Path, TextIO]) -> None:
        if isinstance(out, (str, Path)):
            with open(out, 'w', encoding='utf-8') as f_out:
                self.write_json(f_out)
            return
        json.dump(self.to_json(), out, indent=2)
        out.write('\n')


def _cell_size(rect: Rect) -> float:
    return math.hypot(rect[1] - rect[0], rect[3] - rect[2])


def _in_rect(s: complex, rect: Rect) -> bool:
    return rect[0] <= s.real <= rect[1] and rect[2] <= s.imag <= rect[3]


def newton(fn: Residual, start: complex, h: float, tol: float, max_iter: int = NEWTON_MAX_ITER) \
        -> Tuple[complex, bool]:
    """Newton iteration with the derivative from central differences (step h) in scaled arithmetic."""
    s = complex(start)
    offsets = np.array([0.0, h, -h])
    for _ in range(max_iter):
        values = fn(s + offsets)
        value = values[0]
        if value.is_zero():
            return s, True
        derivative = (values[1] - values[2]) / (2.0 * h)
        if derivative.is_zero() or not np.isfinite(derivative.mantissa):
            return s, False
        step = complex((value / derivative).to_complex())
        if not np.isfinite(step):
            return s, False
        s -= step
        if abs(step) <= tol + 4 * np.finfo(float).eps * abs(s):
            return s, True
    return s, False


def residual_magnitude(fn: Residual, s: complex, radius: float, n_points: int = 16) -> float:
    """|f(s)| relative to max |f| on a circle of the given radius around s."""
    circle = s + radius * np.exp(2j * np.pi * np.arange(n_points) / n_points)
    at_root = float(fn(np.array([s])).log_abs()[0])
    around = float(np.max(fn(circle).log_abs()))
    if not math.isfinite(around):
        return float('inf')
    return math.exp(min(at_root - around, 0.0)) if math.isfinite(at_root) else 0.0


def certify(fn: Residual, s: complex, multiplicity: int, radius: float) -> bool:
    """Winding number on a small square around s equals the multiplicity."""
    rect = (s.real - radius, s.real + radius, s.imag - radius, s.imag + radius)
    try:
        return winding_number(fn, rect, CELL_BOUNDARY_SAMPLES, 30, spacing=radius) == multiplicity
    except (BoundaryZeroError, RootFindingError):
        return False


@dataclass(frozen=True)
class _Cell:
    rect: Rect
    count: int


class _Subdivision:
    """One level-synchronous quadrisection; each cell is an independent work item."""

    def __init__(self, fn: Residual, tol: float, min_cell: float):
        self.fn = fn
        self.tol = tol
        self.min_cell = min_cell

    def split(self, cell: _Cell) -> Optional[List[_Cell]]:
        re0, re1, im0, im1 = cell.rect
        for fraction in SPLIT_FRACTIONS:
            re_mid = re0 + fraction * (re1 - re0)
            im_mid = im0 + (1.0 - fraction) * (im1 - im0)
            children = [(re0, re_mid, im0, im_mid), (re_mid, re1, im0, im_mid),
                        (re0, re_mid, im_mid, im1), (re_mid, re1, im_mid, im1)]
            try:
                counts = [winding_number(self.fn, child) for child in children]
            except (BoundaryZeroError, RootFindingError) as error:
                log.debug(f'Split at fraction {fraction} failed: {error}')
                continue
            if sum(counts) != cell.count:
                log.debug(f'Split at fraction {fraction}: counts {counts} do not add up to {cell.count}')
                continue
            return [_Cell(child, count) for child, count in zip(children, counts) if count > 0]
        return None

    def process(self, cell: _Cell) -> Tuple[List[SpectrumRoot], List[_Cell], List[UnresolvedCell]]:
        size = _cell_size(cell.rect)
        center = complex((cell.rect[0] + cell.rect[1]) / 2, (cell.rect[2] + cell.rect[3]) / 2)
        small = size <= self.min_cell
        if cell.count == 1 or small:
            s, converged = newton(self.fn, center, 1e-6 * size, self.tol)
            if converged and _in_rect(s, cell.rect):
                return [self.finish(s, cell.count)], [], []
            if small:
                if cell.count >= 2:
                    log.info(f'Cluster of {cell.count} zeros near {center:.10g}')
                    return [self.finish(s if _in_rect(s, cell.rect) else center, cell.count)], [], []
                log.warning(f'Newton did not converge in cell {cell.rect}; reported unresolved')
                return [], [], [UnresolvedCell(cell.rect, cell.count)]
        children = self.split(cell)
        if children is None:
            log.warning(f'Could not split cell {cell.rect} consistently; reported unresolved')
            return [], [], [UnresolvedCell(cell.rect, cell.count)]
        return [], children, []

    def finish(self, s: complex, multiplicity: int) -> SpectrumRoot:
        radius = 1e-3 * (1.0 + abs(s))
        return SpectrumRoot(s, residual_magnitude(self.fn, s, radius), multiplicity,
                            certify(self.fn, s, multiplicity, radius))


def _locate(fn: Residual, rect: Rect, count: int, tol: float, min_cell: float, executor) \
        -> Tuple[List[SpectrumRoot], List[UnresolvedCell]]:
    subdivision = _Subdivision(fn, tol, min_cell)
    roots, unresolved = [], []
    level = [_Cell(rect, count)] if count > 0 else []
    n_levels = 0
    while level:
        n_levels += 1
        if n_levels > MAX_LEVELS:
            unresolved.extend(UnresolvedCell(cell.rect, cell.count) for cell in level)
            break
        results = list(executor.map(subdivision.process, level)) if executor else \
            [subdivision.process(cell) for cell in level]
        level = []
        for cell_roots, children, cell_unresolved in results:
            roots.extend(cell_roots)
            level.extend(children)
            unresolved.extend(cell_unresolved)
    return roots, unresolved


def _mirror_strip(window: SearchWindow, fn: Residual, total: int) -> Optional[Tuple[Rect, int, Rect, int]]:
    """For a window symmetric about the real axis: a strip [-b, b] and the upper part [b, im_max] with
    strip + 2 * upper = total, or None."""
    b0 = min(0.5, window.im_max / 2)
    for b in (b0, 0.83 * b0, 1.17 * b0, 0.71 * b0):
        strip = (window.re_min, window.re_max, -b, b)
        upper = (window.re_min, window.re_max, b, window.im_max)
        try:
            n_strip = winding_number(fn, strip, window.boundary_samples, window.max_depth)
            n_upper = winding_number(fn, upper, window.boundary_samples, window.max_depth)
        except (BoundaryZeroError, RootFindingError):
            continue
        if n_strip + 2 * n_upper == total:
            return strip, n_strip, upper, n_upper
        log.info(f'Mirror split at b={b:g} inconsistent: {n_strip} + 2*{n_upper} != {total}')
    return None


def _symmetrize_strip(roots: List[SpectrumRoot], n_strip: int) -> List[SpectrumRoot]:
    """Snap near-real roots to the real axis and replace lower roots by mirrors of upper ones."""
    real, upper = [], []
    for root in roots:
        snap = 1e-9 * (1.0 + abs(root.s))
        if abs(root.s.imag) <= snap:
            real.append(SpectrumRoot(complex(root.s.real, 0.0), root.residual, root.multiplicity, root.certified))
        elif root.s.imag > 0:
            upper.append(root)
    symmetric = real + upper + [_conjugate(root) for root in upper]
    if sum(root.multiplicity for root in symmetric) != n_strip:
        log.warning('Strip roots are not closed under conjugation; kept as found')
        return roots
    return symmetric


def _conjugate(root: SpectrumRoot) -> SpectrumRoot:
    return SpectrumRoot(root.s.conjugate(), root.residual, root.multiplicity, root.certified)


def find_roots(fn: Residual, window: SearchWindow, tol: float = 1e-12, threads: int = 1,
               min_cell: Optional[float] = None, conjugate_symmetric: Optional[bool] = None) -> Spectrum:
    """All zeros of the entire function fn inside window.
    For windows symmetric about the real axis, zeros of real-coefficient residuals (all CharFn variants) are
    located in the upper part and mirrored, so that the spectrum is exactly closed under conjugation.
    The result does not depend on the number of threads."""
    total, effective = _count_nudged(fn, window)
    if min_cell is None:
        min_cell = 1e-7 * max(1.0, effective.diagonal)
    if conjugate_symmetric is None:
        conjugate_symmetric = isinstance(fn, CharFn)
    source = fn.describe() if isinstance(fn, CharFn) else None
    executor = ThreadPoolExecutor(max_workers=threads) if threads and threads > 1 else None
    try:
        split = _mirror_strip(effective, fn, total) if conjugate_symmetric and effective.is_symmetric() \
            and total > 0 else None
        if split:
            strip, n_strip, upper, n_upper = split
            strip_roots, unresolved = _locate(fn, strip, n_strip, tol, min_cell, executor)
            upper_roots, upper_unresolved = _locate(fn, upper, n_upper, tol, min_cell, executor)
            roots = _symmetrize_strip(strip_roots, n_strip) + upper_roots + [_conjugate(r) for r in upper_roots]
            unresolved += upper_unresolved
            unresolved += [UnresolvedCell((c.rect[0], c.rect[1], -c.rect[3], -c.rect[2]), c.count)
                           for c in upper_unresolved]
        else:
            roots, unresolved = _locate(fn, effective.rect, total, tol, min_cell, executor)
    finally:
        if executor:
            executor.shutdown()
    found = sum(root.multiplicity for root in roots) + sum(cell.count for cell in unresolved)
    if found != total:
        raise RootFindingError(f'Located {found} zeros but the window boundary winds {total} times')
    outside = [root.s for root in roots if not effective.contains(root.s)]
    if outside:
        log.warning(f'{len(outside)} roots on the edge of {effective}: {outside[:3]}')
    return Spectrum(roots, window, total, effective, unresolved, source)


def spectral_abscissa(fn: Residual, window: SearchWindow, **kwargs) -> Tuple[float, Optional[complex]]:
    """Window-limited estimate of the spectral abscissa: max Re over the zeros in window, -inf if there are none."""
    return find_roots(fn, window, **kwargs).abscissa()


def durand_kerner(coeffs: Sequence[complex], tol: float = 1e-14, max_iter: int = 2000) -> np.ndarray:
    """All roots of the polynomial coeffs (highest degree first) by simultaneous Weierstrass iteration."""
    coeffs = np.trim_zeros(np.asarray(coeffs, dtype=complex), 'f')
    degree = len(coeffs) - 1
    if degree < 1:
        return np.zeros(0, dtype=complex)
    monic = coeffs / coeffs[0]
    radius = 1.0 + np.max(np.abs(monic[1:]))
    z = 0.5 * radius * np.exp(1j * (2 * np.pi * np.arange(degree) / degree + 0.4))
    for _ in range(max_iter):
        differences = z[:, None] - z[None, :]
        np.fill_diagonal(differences, 1.0)
        correction = np.polyval(monic, z) / np.prod(differences, axis=1)
        z = z - correction
        if np.max(np.abs(correction)) <= tol * max(1.0, np.max(np.abs(z))):
            break
    else:
        log.warning(f'Durand-Kerner did not converge for degree {degree}')
    return z


def polish_polynomial_roots(coeffs: np.ndarray, roots: np.ndarray, n_steps: int = 3) -> np.ndarray:
    derivative = np.polyder(coeffs)
    roots = np.array(roots, dtype=complex)
    for _ in range(n_steps):
        slope = np.polyval(derivative, roots)
        ok = slope != 0
        roots[ok] = roots[ok] - np.polyval(coeffs, roots[ok]) / slope[ok]
    return roots


def quasi_polynomial_oracle(coeffs: Sequence[float], unit: float, window: SearchWindow,
                            cross_check: bool = True) -> np.ndarray:
    """Zeros inside window of a residual that is a polynomial in q = exp(-s unit) (coeffs highest degree first):
    every root q != 0 gives the zeros s = -(ln q + 2 pi i m) / unit. Sorted by (Re, Im)."""
    coeffs = np.trim_zeros(np.asarray(coeffs, dtype=complex), 'f')
    if len(coeffs) < 2:
        return np.zeros(0, dtype=complex)
    q_roots = polish_polynomial_roots(coeffs, np.roots(coeffs))
    if cross_check:
        dk_roots = durand_kerner(coeffs)
        mismatch = max(np.min(np.abs(dk_roots - q)) for q in q_roots)
        if mismatch > 1e-8:
            log.warning(f'Companion and Durand-Kerner roots disagree by {mismatch:.3g}')
    zeros = []
    for q in q_roots:
        if abs(q) == 0:
            continue
        log_q = np.log(q)
        re = -log_q.real / unit
        if not window.re_min < re < window.re_max:
            continue
        # Im s = -(arg q + 2 pi m) / unit
        m_lo = int(math.ceil((-window.im_max * unit - log_q.imag) / (2 * math.pi)))
        m_hi = int(math.floor((-window.im_min * unit - log_q.imag) / (2 * math.pi)))
        for m in range(m_lo, m_hi + 1):
            s = complex(re, -(log_q.imag + 2 * math.pi * m) / unit)
            if window.contains(s):
                zeros.append(s)
    return np.array(sorted(zeros, key=lambda s: (s.real, s.imag)), dtype=complex)


@dataclass(frozen=True)
class FigurePreset:
    name: str
    window: SearchWindow
    variant: Variant
    series: Tuple[Dict[str, float], ...]
    caption: str = ''

    def char_functions(self, base: Optional[SystemParams] = None) -> List[CharFn]:
        """One CharFn per series; eta=0 series of viscous variants use the matching inviscid variant."""
        base = base or SystemParams()
        result = []
        for settings in self.series:
            params = base.replace(**settings)
            variant = self.variant
            if variant in (Variant.DEADBEAT_VISCOUS, Variant.DEADBEAT_VISCOUS_PERTURBED):
                params = params.replace(k1=0.0, k2=1.0)
            if variant.viscous and params.eta == 0:
                variant = INVISCID_COUNTERPART[variant]
            result.append(CharFn(variant, params))
        return result


INVISCID_COUNTERPART = {
    Variant.OPEN_VISCOUS: Variant.OPEN_INVISCID,
    Variant.DEADBEAT_VISCOUS: Variant.DYN_INVISCID,
    Variant.DEADBEAT_VISCOUS_PERTURBED: Variant.DEADBEAT_INVISCID_PERTURBED,
    Variant.DYN_VISCOUS: Variant.DYN_INVISCID_PERTURBED,
}


def _parse_series(text: str) -> Tuple[Dict[str, float], ...]:
    series = []
    for item in regex.split(r'\s*;\s*', text.strip()):
        settings = {}
        for assignment in regex.split(r'\s*,\s*', item):
            if assignment.strip():
                key, value = regex.split(r'\s*=\s*', assignment, maxsplit=1)
                settings[key.strip()] = float(value)
        series.append(settings)
    return tuple(series)


def load_figure_windows(filename: Optional[Union[str, Path]] = None) -> Dict[str, FigurePreset]:
    """Reads the named search windows and parameter series from data/figure-windows.tsv."""
    filename = Path(filename) if filename else data_dir / 'figure-windows.tsv'
    presets = {}
    with open(filename, 'r', encoding='utf-8') as f:
        line_number = 0
        for line in f:
            line_number += 1
            tsv_list = regex.split(r'\t', line.rstrip('\n'))
            if line_number == 1 or not line.strip() or line.startswith('#'):
                continue
            if len(tsv_list) < 7:
                log.warning(f'Skipping malformed line {line_number} in {filename}')
                continue
            name = tsv_list[0]
            window = SearchWindow(*(float(x) for x in tsv_list[1:5]))
            caption = tsv_list[7] if len(tsv_list) > 7 else ''
            presets[name] = FigurePreset(name, window, Variant.from_name(tsv_list[5]), _parse_series(tsv_list[6]),
                                         caption)
    return presets


def figure_window(name: str) -> SearchWindow:
    presets = load_figure_windows()
    if name not in presets:
        raise ValueError(f'Unknown figure {name!r} (choose from {", ".join(sorted(presets))})')
    return presets[name].window


def figure_preset(name: str) -> FigurePreset:
    presets = load_figure_windows()
    if name not in presets:
        raise ValueError(f'Unknown figure {name!r} (choose from {", ".join(sorted(presets))})')
    return presets[name]


def roots_in(values: Iterable[complex], window: SearchWindow) -> np.ndarray:
    return np.array([s for s in values if window.contains(s)], dtype=complex)
