#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Stability statements derived from windowed spectra: theorem checks, conjecture probes and (eta, eps) sweeps.
Every claim about a spectral abscissa is scoped to the search window recorded in its report.
Examples:
  from vdspec.vd_analysis import theorem1_check
  sweep = theorem1_check([0.02, 0.05, 0.1, 0.2], delta=0.1)
  sweep.write_csv('theorem1.csv')
"""
# -*- encoding: utf-8 -*-

import csv
from dataclasses import dataclass, field
import json
import logging as log
import math
from pathlib import Path
import time
from typing import List, Optional, Sequence, TextIO, Tuple, Union
import numpy as np
from tqdm.auto import tqdm
from vdspec.vd_charfun import CharFn, Variant, schur_poly_roots
from vdspec.vd_model import SystemParams
from vdspec.vd_roots import SearchWindow, abscissa_to_json, figure_window, find_roots

log.basicConfig(level=log.INFO)

LN2 = math.log(2.0)
DEFAULT_DELTA = 0.1
SMALL_ETA_LIMIT = 0.5
CHECK = 'CHECK'
PROBE = 'PROBE'


@dataclass
class StabilityReport:
    """Window-scoped finding about the spectral abscissa sigma_hat of one characteristic function.
    relation 'le': satisfied iff sigma_hat <= margin_target; 'gt': iff sigma_hat > margin_target;
    'band': iff lower_target <= sigma_hat <= margin_target."""
    variant: str
    params: SystemParams
    window: SearchWindow
    sigma_hat: float
    margin_target: float
    satisfied: bool
    roots_in_rhp: int
    kind: str = CHECK
    relation: str = 'le'
    lower_target: Optional[float] = None
    attained_at: Optional[complex] = None
    counted_total: int = 0
    error: Optional[str] = None
    notes: List[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {'variant': self.variant, 'params': self.params.to_dict(), 'window': self.window.to_dict(),
                **abscissa_to_json(self.sigma_hat),
                'attained_at': None if self.attained_at is None else [self.attained_at.real, self.attained_at.imag],
                'margin_target': self.margin_target, 'lower_target': self.lower_target, 'relation': self.relation,
                'satisfied': self.satisfied, 'roots_in_rhp': self.roots_in_rhp, 'counted_total': self.counted_total,
                'kind': self.kind, 'error': self.error, 'notes': self.notes}


def judge(sigma_hat: float, relation: str, target: float, lower: Optional[float] = None) -> bool:
    if relation == 'le':
        return sigma_hat <= target
    if relation == 'gt':
        return sigma_hat > target
    if relation == 'band':
        return lower <= sigma_hat <= target
    raise ValueError(f'Unknown relation {relation!r}')


def stability_report(fn: CharFn, window: SearchWindow, margin_target: float, relation: str = 'le',
                     lower_target: Optional[float] = None, kind: str = CHECK, threads: int = 1) -> StabilityReport:
    spectrum = find_roots(fn, window, threads=threads)
    sigma_hat, attained_at = spectrum.abscissa()
    roots_in_rhp = sum(root.multiplicity for root in spectrum.roots if root.s.real > 0)
    report = StabilityReport(fn.name, fn.params, window, sigma_hat, margin_target,
                             judge(sigma_hat, relation, margin_target, lower_target), roots_in_rhp, kind, relation,
                             lower_target, attained_at, spectrum.counted_total)
    if spectrum.unresolved:
        report.notes.append(f'{len(spectrum.unresolved)} unresolved cells bound sigma_hat from above')
    return report


def failed_report(fn_name: str, params: SystemParams, window: SearchWindow, margin_target: float, relation: str,
                  lower_target: Optional[float], kind: str, error: Exception) -> StabilityReport:
    return StabilityReport(fn_name, params, window, float('nan'), margin_target, False, 0, kind, relation,
                           lower_target, error=f'{type(error).__name__}: {error}')


@dataclass
class SweepResult:
    """One StabilityReport per grid point, in ascending grid order."""
    check: str
    axis: str
    grid: List[float]
    reports: List[StabilityReport]
    notes: List[str] = field(default_factory=list)

    @property
    def all_satisfied(self) -> bool:
        return all(report.satisfied for report in self.reports)

    @property
    def sigma_hats(self) -> np.ndarray:
        return np.array([report.sigma_hat for report in self.reports])

    def annotate_monotonicity(self) -> Optional[str]:
        """Note on how sigma_hat moves along the grid (failed and infinite points ignored)."""
        values = [(x, r.sigma_hat) for x, r in zip(self.grid, self.reports) if math.isfinite(r.sigma_hat)]
        if len(values) < 2:
            return None
        differences = np.diff([sigma for _, sigma in values])
        if np.all(differences > 0):
            note = f'sigma_hat increases with {self.axis}'
        elif np.all(differences < 0):
            note = f'sigma_hat decreases as {self.axis} increases'
        elif np.all(differences == 0):
            note = f'sigma_hat constant in {self.axis}'
        else:
            note = f'sigma_hat not monotone in {self.axis}'
        self.notes.append(note)
        return note

    def to_json(self) -> dict:
        return {'check': self.check, 'axis': self.axis, 'grid': self.grid, 'all_satisfied': self.all_satisfied,
                'notes': self.notes, 'reports': [report.to_json() for report in self.reports]}

    def write_json(self, out: Union[str, Path, TextIO]) -> None:
        if isinstance(out, (str, Path)):
            with open(out, 'w', encoding='utf-8') as f_out:
                self.write_json(f_out)
            return
        json.dump(self.to_json(), out, indent=2)
        out.write('\n')

    def write_csv(self, out: Union[str, Path, TextIO]) -> None:
        if isinstance(out, (str, Path)):
            with open(out, 'w', newline='', encoding='utf-8') as f_out:
                self.write_csv(f_out)
            return
        writer = csv.writer(out, lineterminator='\n')
        writer.writerow(['eta', 'eps', 'sigma_hat', 'margin', 'satisfied'])
        for report in self.reports:
            sigma = repr(report.sigma_hat) if math.isfinite(report.sigma_hat) else 'null'
            writer.writerow([repr(report.params.eta), repr(report.params.eps), sigma, repr(report.margin_target),
                             str(report.satisfied).lower()])


def _sorted_grid(values: Sequence[float], name: str, positive: bool = False) -> List[float]:
    grid = sorted(float(value) for value in values)
    if not grid:
        raise ValueError(f'Empty {name} grid')
    if positive and grid[0] <= 0:
        raise ValueError(f'All {name} values must be positive, not {grid[0]}')
    return grid


def _sweep(check: str, axis: str, grid: List[float], functions: List[CharFn], window: SearchWindow,
           margin_target: float, relation: str = 'le', lower_target: Optional[float] = None, kind: str = CHECK,
           threads: int = 1, progress_bar: bool = False) -> SweepResult:
    reports = []
    st = time.time()
    with tqdm(list(zip(grid, functions)), disable=not progress_bar, dynamic_ncols=True, desc=check) as point_bar:
        for value, fn in point_bar:
            try:
                report = stability_report(fn, window, margin_target, relation, lower_target, kind, threads)
            except (ArithmeticError, RuntimeError, ValueError) as error:
                log.error(f'{check}: {axis}={value:g} failed: {error}')
                report = failed_report(fn.name, fn.params, window, margin_target, relation, lower_target, kind, error)
            reports.append(report)
            if progress_bar:
                point_bar.set_postfix_str(f'{axis}={value:g} sigma={report.sigma_hat:.4g} '
                                          f'({time.time() - st:.1f}s)', refresh=False)
    return SweepResult(check, axis, grid, reports)


def theorem1_check(etas: Sequence[float], delta: float = DEFAULT_DELTA, window: Optional[SearchWindow] = None,
                   threads: int = 1, progress_bar: bool = False) -> SweepResult:
    """sigma_eta <= -ln(2) + delta for the viscous dead beat loop, per eta."""
    grid = _sorted_grid(etas, 'eta', positive=True)
    window = window or figure_window('fig3')
    functions = [CharFn(Variant.DEADBEAT_VISCOUS, SystemParams(eta=eta)) for eta in grid]
    sweep = _sweep('theorem1', 'eta', grid, functions, window, -LN2 + delta, threads=threads,
                   progress_bar=progress_bar)
    sweep.annotate_monotonicity()
    return sweep


def conjecture1_probe(etas: Sequence[float], delta: float = DEFAULT_DELTA, window: Optional[SearchWindow] = None,
                      upper_delta: Optional[float] = None, threads: int = 1,
                      progress_bar: bool = False) -> SweepResult:
    """Band membership -ln(2) - delta <= sigma_eta <= -ln(2) + upper_delta (upper_delta defaults to delta).
    A probe: a point outside the band is reported, never treated as a refuted claim."""
    if delta < 0 or (upper_delta is not None and upper_delta < 0):
        raise ValueError('Band half widths must be nonnegative')
    upper_delta = delta if upper_delta is None else upper_delta
    grid = _sorted_grid(etas, 'eta', positive=True)
    window = window or figure_window('fig3')
    functions = [CharFn(Variant.DEADBEAT_VISCOUS, SystemParams(eta=eta)) for eta in grid]
    sweep = _sweep('conjecture1', 'eta', grid, functions, window, -LN2 + upper_delta, 'band', -LN2 - delta, PROBE,
                   threads, progress_bar)
    for eta, report in zip(grid, sweep.reports):
        if eta > SMALL_ETA_LIMIT:
            report.notes.append(f'eta={eta:g} outside the small-viscosity regime; band membership not asserted')
        if math.isfinite(report.sigma_hat) and report.sigma_hat < -LN2 - delta:
            log.info(f'PROBE conjecture1: eta={eta:g} sigma_hat={report.sigma_hat:.6f} below lower edge '
                     f'{-LN2 - delta:.6f} in window {window}')
    sweep.annotate_monotonicity()
    return sweep


def theorem2_sweep(eta: float, eps_list: Sequence[float], delta: float = DEFAULT_DELTA,
                   window: Optional[SearchWindow] = None, threads: int = 1,
                   progress_bar: bool = False) -> SweepResult:
    """sigma_{eta,eps} <= -ln(2) + 2 delta over the eps grid; eta=0 uses the perturbed transport loop."""
    if eta < 0:
        raise ValueError(f'eta must be nonnegative, not {eta}')
    grid = _sorted_grid(eps_list, 'eps')
    window = window or figure_window('fig6')
    variant = Variant.DEADBEAT_VISCOUS_PERTURBED if eta > 0 else Variant.DEADBEAT_INVISCID_PERTURBED
    functions = [CharFn(variant, SystemParams(eta=eta, eps=eps)) for eps in grid]
    sweep = _sweep('theorem2', 'eps', grid, functions, window, -LN2 + 2 * delta, threads=threads,
                   progress_bar=progress_bar)
    if eta == 0:
        sweep.notes.append('eta=0: plant delay 1/(1+eps) against the nominal controller delay')
    sweep.annotate_monotonicity()
    return sweep


def conjecture3_probe(etas: Sequence[float], eps_bound: float, window: Optional[SearchWindow] = None,
                      threads: int = 1, progress_bar: bool = False) -> SweepResult:
    """sigma_eta > -eps_bound for the viscous line looped through a transport line."""
    if not eps_bound > 0:
        raise ValueError(f'eps_bound must be positive, not {eps_bound}')
    grid = _sorted_grid(etas, 'eta', positive=True)
    window = window or figure_window('fig7')
    functions = [CharFn(Variant.SIMPLER, SystemParams(eta=eta)) for eta in grid]
    sweep = _sweep('conjecture3', 'eta', grid, functions, window, -eps_bound, 'gt', kind=PROBE, threads=threads,
                   progress_bar=progress_bar)
    sweep.annotate_monotonicity()
    return sweep


def difference_recurrence_rate(k1: float, k2: float, tau: float = 1.0) -> float:
    """Exponential rate ln(max |w|)/tau of Y(t) + 2 k1 Y(t - tau) + (k2 - 1) Y(t - 2 tau) = 0; -inf for dead beat."""
    if tau <= 0:
        raise ValueError(f'tau must be positive, not {tau}')
    w1, w2, _stable = schur_poly_roots(k1, k2)
    radius = max(abs(w1), abs(w2))
    return math.log(radius) / tau if radius > 0 else float('-inf')


def prop_pole_lines(kp: float, velocity: float = 1.0) -> Tuple[float, float]:
    """Real parts velocity * ln(sqrt(1 + kp^2) +- |kp|) of the two vertical pole lines under U = -2 kp Y."""
    # ln(sqrt(1 + kp^2) + |kp|) = asinh(|kp|) and the two moduli multiply to 1
    line = velocity * math.asinh(abs(kp))
    return line, -line
