#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Time-domain finite-difference simulation of the closed loops, with a delay-line controller and
empirical decay-rate estimation for cross-checking spectral abscissas.
Examples:
  from vdspec.vd_model import SystemParams
  from vdspec.vd_sim import ClosedLoopConfig, Controller, System, estimate_decay_rate, run
  traj = run(ClosedLoopConfig(System.VISCOUS_PAIR, SystemParams(eta=0.1), Controller.DEADBEAT, n_cells=256))
  rate, r_squared = estimate_decay_rate(traj, t_skip=5.0)
"""
# -*- encoding: utf-8 -*-

import csv
from dataclasses import dataclass, field
from enum import Enum
import json
import logging as log
import math
from pathlib import Path
from typing import Callable, Dict, List, NamedTuple, Optional, Sequence, TextIO, Tuple, Union
import numpy as np
from scipy.integrate import trapezoid
from scipy.linalg import solve_banded
from scipy.signal import find_peaks
from tqdm.auto import tqdm
from vdspec.vd_model import SystemParams

log.basicConfig(level=log.INFO)

MIN_CELLS = 32
MAX_DIFFUSION_NUMBER = 10.0
CFL_TOLERANCE = 1e-12
GRID_SNAP = 1e-9  # delay positions within GRID_SNAP of a sample index read that sample exactly
MIN_ENVELOPE_POINTS = 4
SKIP_DELAYS = 5  # a decay fit needs more than t_skip + SKIP_DELAYS controller delays of data
DEFAULT_T_SKIP = 4.0
GAUSSIAN_CENTER = 0.5
GAUSSIAN_WIDTH = 0.05
RANDOM_MODES = 8


class SimulationError(RuntimeError):
    """Non-finite state; the trajectory up to the abort is attached."""
    def __init__(self, message: str, trajectory: Optional['Trajectory'] = None):
        super().__init__(message)
        self.trajectory = trajectory


class InsufficientDataError(ValueError):
    pass


class System(Enum):
    INVISCID_PAIR = 'inviscid-pair'
    VISCOUS_PAIR = 'viscous-pair'
    SIMPLER_PAIR = 'simpler-pair'


class Controller(Enum):
    NONE = 'none'
    PROPORTIONAL = 'proportional'
    DYNAMIC = 'dynamic'
    DEADBEAT = 'deadbeat'

    def gains(self, params: SystemParams) -> Tuple[float, float]:
        """(k1, k2) of U(t) = -2 k1 Y(t) - k2 Y(t - tau)."""
        if self is Controller.PROPORTIONAL:
            return params.kp, 0.0
        if self is Controller.DYNAMIC:
            return params.k1, params.k2
        if self is Controller.DEADBEAT:
            return 0.0, 1.0
        return 0.0, 0.0


def controller_output(k1: float, k2: float, y_now: float, y_delayed: float) -> float:
    return -2.0 * k1 * y_now - k2 * y_delayed


@dataclass(frozen=True)
class Grid1D:
    """Nodes x_j = j dx, j = 0..n_cells, on [0, 1]."""
    n_cells: int
    dx: float
    dt: float
    cfl: float
    diffusion_number: float = 0.0

    @classmethod
    def for_velocity(cls, n_cells: int, velocity: float, eta: float = 0.0, cfl: float = 1.0) -> 'Grid1D':
        if n_cells < MIN_CELLS:
            raise ValueError(f'Grid needs at least {MIN_CELLS} cells, not {n_cells}')
        if not 0 < cfl <= 1:
            raise ValueError(f'cfl must be in (0, 1], not {cfl}')
        dx = 1.0 / n_cells
        dt = cfl * dx / velocity
        if eta > 0:
            dt = min(dt, MAX_DIFFUSION_NUMBER * dx * dx / eta)
        return cls(n_cells, dx, dt, velocity * dt / dx, eta * dt / (dx * dx))

    @property
    def x(self) -> np.ndarray:
        return np.linspace(0.0, 1.0, self.n_cells + 1)

    def steps_for(self, t_end: float) -> int:
        return int(round(t_end / self.dt))

    def to_dict(self) -> dict:
        return {'n_cells': self.n_cells, 'dx': self.dx, 'dt': self.dt, 'cfl': self.cfl,
                'diffusion_number': self.diffusion_number}


class DelayLine:
    """Ring buffer of samples written once per time step; sample k belongs to time k dt.
    Samples before the first write read as 0."""

    def __init__(self, max_delay: int):
        if max_delay < 2:
            raise ValueError(f'Delay line capacity must be at least 2, not {max_delay}')
        self.buffer = np.zeros(max_delay, dtype=np.float64)
        self.length = max_delay
        self.write_idx = 0
        self.count = 0

    @classmethod
    def for_delay(cls, delay_steps: float) -> 'DelayLine':
        return cls(int(math.ceil(2 * delay_steps)) + 2)

    def write(self, sample: float):
        self.buffer[self.write_idx] = sample
        self.write_idx = (self.write_idx + 1) % self.length
        self.count += 1

    def read(self, delay: int) -> float:
        """Sample written `delay` writes ago (delay=0 is the most recent one)."""
        if delay < 0:
            raise ValueError(f'Cannot read {-delay} samples into the future')
        if delay >= self.length:
            raise ValueError(f'Delay {delay} exceeds delay line capacity {self.length}')
        if delay >= self.count:
            return 0.0
        return float(self.buffer[(self.write_idx - 1 - delay) % self.length])

    def read_linear(self, delay: float) -> float:
        """Linear interpolation between the two samples bracketing a fractional delay."""
        nearest = round(delay)
        if abs(delay - nearest) <= GRID_SNAP * max(1.0, abs(delay)):
            return self.read(int(nearest))
        int_delay = int(math.floor(delay))
        frac = delay - int_delay
        s0 = self.read(int_delay)
        s1 = self.read(int_delay + 1)
        return s0 + frac * (s1 - s0)

    def reset(self):
        self.buffer[:] = 0.0
        self.write_idx = 0
        self.count = 0


def step_transport(state: np.ndarray, dt: float, velocity: float, inflow: Optional[np.ndarray] = None) -> np.ndarray:
    """Upwind step of y_t + velocity y_x = 0 along the last axis; an exact shift when the cfl number is 1.
    The inflow node keeps its value unless `inflow` is given."""
    state = np.asarray(state, dtype=float)
    dx = 1.0 / (state.shape[-1] - 1)
    cfl = velocity * dt / dx
    if cfl > 1 + CFL_TOLERANCE:
        raise ValueError(f'Upwind transport step needs cfl <= 1, not {cfl}')
    new = state.copy()
    if abs(cfl - 1) <= CFL_TOLERANCE:
        new[..., 1:] = state[..., :-1]
    else:
        new[..., 1:] = state[..., 1:] - cfl * (state[..., 1:] - state[..., :-1])
    if inflow is not None:
        new[..., 0] = inflow
    return new


class ImplicitDiffusion:
    """Backward-time centered-space step of y_t = eta y_xx on nodes 1..n (node 0 Dirichlet, mirror ghost node
    past x=1 for the homogeneous Neumann condition), for a fixed diffusion number r = eta dt / dx^2."""

    def __init__(self, n_cells: int, diffusion_number: float):
        if not diffusion_number > 0:
            raise ValueError(f'Diffusion number must be positive, not {diffusion_number}')
        r = diffusion_number
        self.n_cells = n_cells
        self.diffusion_number = r
        ab = np.zeros((3, n_cells))
        ab[0, 1:] = -r
        ab[1, :] = 1 + 2 * r
        ab[2, :-1] = -r
        ab[2, n_cells - 2] = -2 * r
        self.ab = ab
        rhs = np.zeros(n_cells)
        rhs[0] = r
        self.inflow_response = self._solve(rhs)
        assert np.all(np.isfinite(self.inflow_response)), 'tridiagonal elimination broke down'

    def _solve(self, rhs: np.ndarray) -> np.ndarray:
        return solve_banded((1, 1), self.ab, rhs, check_finite=False)

    def split(self, state: np.ndarray) -> np.ndarray:
        """Interior solution for zero Dirichlet data; add inflow * inflow_response for inflow data."""
        state = np.asarray(state, dtype=float)
        return self._solve(state[..., 1:].T).T

    def step(self, state: np.ndarray, inflow: Union[float, np.ndarray] = 0.0) -> np.ndarray:
        interior = self.split(state)
        inflow = np.asarray(inflow, dtype=float)
        new = np.empty_like(np.asarray(state, dtype=float))
        new[..., 0] = inflow
        new[..., 1:] = interior + inflow[..., None] * self.inflow_response
        return new


class AdvDiffStepper:
    """Operator-split step: upwind advection, then implicit diffusion. Both are linear in the new inflow value g,
    so a step yields new = particular + g * response with a fixed response vector."""

    def __init__(self, grid: Grid1D, velocity: float, eta: float):
        self.grid = grid
        self.velocity = velocity
        self.eta = eta
        self.diffusion = ImplicitDiffusion(grid.n_cells, eta * grid.dt / (grid.dx * grid.dx))

    @property
    def outflow_response(self) -> float:
        return float(self.diffusion.inflow_response[-1])

    def particular(self, state: np.ndarray) -> np.ndarray:
        """New interior nodes 1..n for zero inflow."""
        return self.diffusion.split(step_transport(state, self.grid.dt, self.velocity))

    def assemble(self, particular: np.ndarray, inflow: Union[float, np.ndarray]) -> np.ndarray:
        inflow = np.asarray(inflow, dtype=float)
        new = np.empty(particular.shape[:-1] + (particular.shape[-1] + 1,))
        new[..., 0] = inflow
        new[..., 1:] = particular + inflow[..., None] * self.diffusion.inflow_response
        return new

    def step(self, state: np.ndarray, inflow: Union[float, np.ndarray]) -> np.ndarray:
        return self.assemble(self.particular(state), inflow)


def step_advdiff(state: np.ndarray, dt: float, params: SystemParams,
                 inflow: Optional[Union[float, np.ndarray]] = None) -> np.ndarray:
    """One split step of y_t + (1+eps) velocity y_x - eta y_xx = 0; the inflow node keeps its value unless given."""
    if not params.is_viscous:
        raise ValueError(f'Advection-diffusion step needs eta > 0, not {params.eta}')
    state = np.asarray(state, dtype=float)
    n_cells = state.shape[-1] - 1
    dx = 1.0 / n_cells
    grid = Grid1D(n_cells, dx, dt, params.plant_velocity * dt / dx, params.eta * dt / (dx * dx))
    if inflow is None:
        inflow = state[..., 0]
    return AdvDiffStepper(grid, params.plant_velocity, params.eta).step(state, inflow)


def gaussian_initial(x: np.ndarray, n_states: int, rng: np.random.Generator) -> np.ndarray:
    """Single bump in the first state, all others zero."""
    state = np.zeros((n_states, len(x)))
    state[0] = np.exp(-0.5 * ((x - GAUSSIAN_CENTER) / GAUSSIAN_WIDTH) ** 2)
    return state


def smooth_random_initial(x: np.ndarray, n_states: int, rng: np.random.Generator) -> np.ndarray:
    """Band-limited random fields: cosine series of RANDOM_MODES modes with 1/(1+k) amplitude decay."""
    k = np.arange(RANDOM_MODES)
    coefficients = rng.standard_normal((n_states, RANDOM_MODES)) / (1.0 + k)
    phases = rng.uniform(0.0, 2 * np.pi, (n_states, RANDOM_MODES))
    return np.einsum('sk,skx->sx', coefficients, np.cos(np.pi * k[None, :, None] * x + phases[..., None]))


def constant_initial(x: np.ndarray, n_states: int, rng: np.random.Generator) -> np.ndarray:
    return np.ones((n_states, len(x)))


INITIAL_CONDITIONS: Dict[str, Callable[[np.ndarray, int, np.random.Generator], np.ndarray]] = {
    'gaussian': gaussian_initial,
    'smooth-random': smooth_random_initial,
    'constant': constant_initial,
}


@dataclass(frozen=True)
class ClosedLoopConfig:
    """A simulated closed loop. The controller acts with the nominal delay tau = 1/velocity whatever eps is.
    The simpler pair has its boundary law built in and takes no controller."""
    system: System
    params: SystemParams = field(default_factory=SystemParams)
    controller: Controller = Controller.DEADBEAT
    initial_condition: str = 'gaussian'
    t_end: float = 20.0
    n_cells: int = 256
    cfl: float = 1.0
    snapshot_every: int = 0
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, 'system', System(self.system))
        object.__setattr__(self, 'controller', Controller(self.controller))
        if self.system is System.VISCOUS_PAIR and not self.params.is_viscous:
            raise ValueError(f'{self.system.value} needs eta > 0, not {self.params.eta}')
        if self.system is System.INVISCID_PAIR and self.params.is_viscous:
            raise ValueError(f'{self.system.value} needs eta = 0, not {self.params.eta} (use viscous-pair)')
        if self.system is System.SIMPLER_PAIR and self.controller is not Controller.NONE:
            raise ValueError(f'{self.system.value} has a fixed boundary law; controller must be none, '
                             f'not {self.controller.value}')
        if not self.params.is_viscous and self.cfl != 1:
            raise ValueError(f'Transport runs use cfl = 1 exactly, not {self.cfl}')
        if self.initial_condition not in INITIAL_CONDITIONS:
            raise ValueError(f'Unknown initial condition {self.initial_condition} '
                             f'(choose from {", ".join(INITIAL_CONDITIONS)})')
        if not self.t_end > 0:
            raise ValueError(f't_end must be positive, not {self.t_end}')
        if self.snapshot_every < 0:
            raise ValueError(f'snapshot_every must be nonnegative, not {self.snapshot_every}')
        if self.delay_steps < 1:
            raise ValueError(f'Controller delay {self.params.tau} is shorter than the time step {self.grid.dt}')

    @property
    def gains(self) -> Tuple[float, float]:
        return self.controller.gains(self.params)

    @property
    def grid(self) -> Grid1D:
        return Grid1D.for_velocity(self.n_cells, self.params.plant_velocity, self.params.eta, self.cfl)

    @property
    def delay_steps(self) -> float:
        return self.params.tau / self.grid.dt

    @property
    def state_names(self) -> Tuple[str, ...]:
        return ('y',) if self.system is System.SIMPLER_PAIR else ('y1', 'y2')

    def to_dict(self) -> dict:
        return {'system': self.system.value, 'params': self.params.to_dict(), 'controller': self.controller.value,
                'initial_condition': self.initial_condition, 't_end': self.t_end, 'n_cells': self.n_cells,
                'cfl': self.cfl, 'snapshot_every': self.snapshot_every, 'seed': self.seed}


@dataclass
class Snapshot:
    t: float
    states: Dict[str, np.ndarray]


@dataclass
class Trajectory:
    """Boundary output samples output[k] = Y(times[k]), with optional energy series and state snapshots."""
    times: np.ndarray
    output: np.ndarray
    delay: float = 1.0
    energy: Optional[np.ndarray] = None
    snapshots: List[Snapshot] = field(default_factory=list)
    config: Optional[ClosedLoopConfig] = None
    grid: Optional[Grid1D] = None

    def __post_init__(self):
        self.times = np.asarray(self.times, dtype=float)
        self.output = np.asarray(self.output, dtype=float)
        if self.times.shape != self.output.shape:
            raise ValueError(f'Trajectory has {len(self.times)} times but {len(self.output)} output samples')
        if self.energy is not None:
            self.energy = np.asarray(self.energy, dtype=float)
            if self.energy.shape != self.times.shape:
                raise ValueError(f'Trajectory has {len(self.times)} times but {len(self.energy)} energy samples')
            if np.any(self.energy < 0):
                raise ValueError('Energy samples must be nonnegative')

    def __len__(self):
        return len(self.times)

    @property
    def t_end(self) -> float:
        return float(self.times[-1]) if len(self.times) else 0.0

    def after(self, t: float) -> np.ndarray:
        return self.output[self.times >= t]

    def write_csv(self, out: Union[str, Path, TextIO]) -> None:
        if isinstance(out, (str, Path)):
            with open(out, 'w', newline='', encoding='utf-8') as f_out:
                self.write_csv(f_out)
            return
        writer = csv.writer(out, lineterminator='\n')
        writer.writerow(['t', 'Y', 'energy'])
        energy = self.energy if self.energy is not None else [None] * len(self.times)
        for t, y, e in zip(self.times, self.output, energy):
            writer.writerow([repr(float(t)), repr(float(y)), 'null' if e is None else repr(float(e))])

    def write_snapshots_csv(self, out: Union[str, Path, TextIO]) -> None:
        """Long format: one row per snapshot time, state and node."""
        if isinstance(out, (str, Path)):
            with open(out, 'w', newline='', encoding='utf-8') as f_out:
                self.write_snapshots_csv(f_out)
            return
        writer = csv.writer(out, lineterminator='\n')
        writer.writerow(['t', 'state', 'x', 'value'])
        for snapshot in self.snapshots:
            for name, values in snapshot.states.items():
                x = np.linspace(0.0, 1.0, len(values))
                for x_j, value in zip(x, values):
                    writer.writerow([repr(snapshot.t), name, repr(float(x_j)), repr(float(value))])

    def to_json(self) -> dict:
        return {'config': self.config.to_dict() if self.config else None,
                'grid': self.grid.to_dict() if self.grid else None,
                'delay': self.delay, 'n_samples': len(self), 't_end': self.t_end,
                'n_snapshots': len(self.snapshots)}


class DecayFit(NamedTuple):
    rate: float
    r_squared: float


def _energy(state: np.ndarray, dx: float) -> float:
    return float(trapezoid(np.sum(state * state, axis=0), dx=dx))


def _delayed_profile(line: DelayLine, delay_steps: float, n_cells: int) -> np.ndarray:
    """Transport-line profile yhat(t, x) = w(t - x tau) of the delayed signal w stored in the line."""
    return np.array([line.read_linear(x * delay_steps) for x in np.linspace(0.0, 1.0, n_cells + 1)])


def run(config: ClosedLoopConfig, progress_bar: bool = False) -> Trajectory:
    """Advance the closed loop from the initial condition to config.t_end.
    Pairs: y1(t,0) = y2(t,1) + U(t), y2(t,0) = y1(t,1), Y = y1(t,1), U(t) = -2 k1 Y(t) - k2 Y(t - tau).
    Simpler pair: y(t,0) = y(t,1) - yhat(t,1) with yhat(t,1) = y(t - tau, 0) (zero yhat at t=0), Y = y(t,1).
    Raises SimulationError with the partial trajectory when the state stops being finite."""
    grid = config.grid
    params = config.params
    k1, k2 = config.gains
    m = config.delay_steps
    simpler = config.system is System.SIMPLER_PAIR
    rng = np.random.default_rng(config.seed)
    state = INITIAL_CONDITIONS[config.initial_condition](grid.x, len(config.state_names), rng)
    stepper = AdvDiffStepper(grid, params.plant_velocity, params.eta) if params.is_viscous else None
    q = stepper.outflow_response if stepper else 0.0
    line = DelayLine.for_delay(m)
    n_steps = grid.steps_for(config.t_end)
    times = np.arange(n_steps + 1) * grid.dt
    output = np.zeros(n_steps + 1)
    energy = np.zeros(n_steps + 1)
    snapshots = []
    log.debug(f'{config.system.value}: {n_steps} steps, dt={grid.dt:.6g}, cfl={grid.cfl:.6g}, '
              f'diffusion number={grid.diffusion_number:.6g}, delay={m:.6g} steps')

    def take_snapshot(n: int):
        states = {name: state[i].copy() for i, name in enumerate(config.state_names)}
        states['yhat'] = _delayed_profile(line, m, grid.n_cells)
        snapshots.append(Snapshot(float(times[n]), states))

    def trajectory(n: int) -> Trajectory:
        return Trajectory(times[:n + 1], output[:n + 1], params.tau, energy[:n + 1], snapshots, config, grid)

    with np.errstate(over='ignore', invalid='ignore'), \
            tqdm(total=n_steps, disable=not progress_bar, dynamic_ncols=True, desc=config.system.value) as step_bar:
        for n in range(n_steps + 1):
            y_delayed = line.read_linear(m - 1)  # sample n - m; the line holds samples up to n - 1
            if n == 0:
                # boundary law imposed on the initial data
                y_now = state[0, -1]
                if simpler:
                    state[0, 0] = y_now - y_delayed
                else:
                    state[0, 0] = state[1, -1] + controller_output(k1, k2, y_now, y_delayed)
                    state[1, 0] = y_now
            elif stepper is None:
                state = step_transport(state, grid.dt, params.plant_velocity)
                y_now = state[0, -1]
                if simpler:
                    state[0, 0] = y_now - y_delayed
                else:
                    state[0, 0] = state[1, -1] + controller_output(k1, k2, y_now, y_delayed)
                    state[1, 0] = y_now
            else:
                p = stepper.particular(state)
                if simpler:
                    p_out = p[0, -1]
                    inflow = np.array([(p_out - y_delayed) / (1.0 - q)])
                else:
                    p1, p2 = p[0, -1], p[1, -1]
                    g1 = (p2 + q * p1 - 2.0 * k1 * p1 - k2 * y_delayed) / (1.0 - q * q + 2.0 * k1 * q)
                    inflow = np.array([g1, p1 + q * g1])
                state = stepper.assemble(p, inflow)
                y_now = state[0, -1]
            output[n] = y_now
            line.write(state[0, 0] if simpler else y_now)
            if not np.all(np.isfinite(state)):
                message = f'{config.system.value}: non-finite state at t={times[n]:.6g} (step {n})'
                log.warning(message)
                raise SimulationError(message, trajectory(n))
            energy[n] = _energy(state, grid.dx)
            if config.snapshot_every and n % config.snapshot_every == 0:
                take_snapshot(n)
            if n:
                step_bar.update()
                if progress_bar and n % 1000 == 0:
                    step_bar.set_postfix_str(f't={times[n]:.3f} |Y|={abs(y_now):.3g}', refresh=False)
    return trajectory(n_steps)


def estimate_decay_rate(traj: Trajectory, t_skip: float = DEFAULT_T_SKIP) -> DecayFit:
    """Least-squares slope of ln(local maxima of |Y|) against t over [t_skip, t_end], with its r^2."""
    if traj.t_end <= t_skip + SKIP_DELAYS * traj.delay:
        raise InsufficientDataError(f'Trajectory ends at t={traj.t_end:g}; a decay fit needs more than '
                                    f'{t_skip + SKIP_DELAYS * traj.delay:g}')
    selected = traj.times >= t_skip
    t = traj.times[selected]
    magnitude = np.abs(traj.output[selected])
    if not np.any(magnitude > 0):
        raise InsufficientDataError(f'Output vanishes identically after t={t_skip:g}')
    peaks, _ = find_peaks(magnitude)
    peaks = peaks[magnitude[peaks] > 0]
    if len(peaks) < MIN_ENVELOPE_POINTS:
        raise InsufficientDataError(f'Only {len(peaks)} envelope points after t={t_skip:g} '
                                    f'(need {MIN_ENVELOPE_POINTS})')
    t_peaks = t[peaks]
    log_envelope = np.log(magnitude[peaks])
    slope, intercept = np.polyfit(t_peaks, log_envelope, 1)
    residual = log_envelope - (slope * t_peaks + intercept)
    total = np.sum((log_envelope - log_envelope.mean()) ** 2)
    r_squared = 1.0 - np.sum(residual ** 2) / total if total > 0 else 1.0
    return DecayFit(float(slope), float(r_squared))


def run_difference_recurrence(k1: float, k2: float, tau: float, dt: float, y_history: Sequence[float],
                              t_end: Optional[float] = None) -> Trajectory:
    """Iterate Y_n = Y_{n-2m} + U_{n-m}, U_k = -2 k1 Y_k - k2 Y_{k-m}, m = tau/dt, after the given samples
    Y_0 .. Y_{h-1} (h >= 2m). t_end defaults to 10 tau."""
    if tau <= 0 or dt <= 0:
        raise ValueError(f'tau and dt must be positive, not tau={tau}, dt={dt}')
    m = int(round(tau / dt))
    if m < 1 or abs(tau / dt - m) > GRID_SNAP * m:
        raise ValueError(f'Time step {dt} does not divide the delay {tau}')
    history = np.asarray(y_history, dtype=float)
    if len(history) < 2 * m:
        raise ValueError(f'Recurrence needs {2 * m} history samples, not {len(history)}')
    n_end = int(round((10 * tau if t_end is None else t_end) / dt))
    output = np.zeros(max(n_end + 1, len(history)))
    output[:len(history)] = history
    for n in range(len(history), n_end + 1):
        output[n] = output[n - 2 * m] + controller_output(k1, k2, output[n - m], output[n - 2 * m])
    output = output[:n_end + 1]
    return Trajectory(np.arange(len(output)) * dt, output, tau)


def rate_report(traj: Trajectory, fit: Optional[DecayFit] = None, error: Optional[str] = None,
                sigma_hat: Optional[float] = None) -> dict:
    """JSON-ready summary of a run: configuration, grid, fitted rate and (optionally) a spectral comparison."""
    report = traj.to_json()
    report['rate'] = fit.rate if fit else None
    report['r_squared'] = fit.r_squared if fit else None
    report['error'] = error
    if sigma_hat is not None:
        report['sigma_hat'] = sigma_hat if math.isfinite(sigma_hat) else None
        if fit and math.isfinite(sigma_hat) and sigma_hat != 0:
            report['relative_difference'] = abs(fit.rate - sigma_hat) / abs(sigma_hat)
    return report


def write_json(report: dict, out: Union[str, Path, TextIO]) -> None:
    if isinstance(out, (str, Path)):
        with open(out, 'w', encoding='utf-8') as f_out:
            write_json(report, f_out)
        return
    json.dump(report, out, indent=2)
    out.write('\n')
