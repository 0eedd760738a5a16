#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Command-line front end: spectra, stability sweeps, robustness margins and closed-loop simulations,
each written as CSV/JSON data files together with a run manifest that can be replayed.
Examples:
  vdspec spectrum --variant deadbeat-viscous --eta 0.1 --window=-8,1,-60,60
  vdspec spectrum --figure fig6 -o out
  vdspec sweep --check theorem2 --eta 0.1 --eps=-0.05:0.05:0.01 --delta 0.1 --threads 4
  vdspec margin --k1 0 --k2 1
  vdspec simulate --system viscous-pair --eta 0.1 --controller deadbeat --n 512 --compare-spectrum
  vdspec replay out/spectrum-fig6.manifest.json
"""
# -*- encoding: utf-8 -*-

import argparse
from dataclasses import dataclass, field
import datetime
import json
import logging as log
import math
import os
from pathlib import Path
import sys
import tempfile
from typing import List, Optional, Sequence
import numpy as np
import regex
from vdspec import __version__, last_mod_date
from vdspec.vd_analysis import CHECK, DEFAULT_DELTA, conjecture1_probe, conjecture3_probe, theorem1_check, \
    theorem2_sweep
from vdspec.vd_charfun import CharFn, Variant, oracle_coefficients
from vdspec.vd_margin import BoundaryMatrix, margin_report
from vdspec.vd_model import SystemParams
from vdspec.vd_roots import BoundaryZeroError, RootFindingError, SearchWindow, Spectrum, abscissa_to_json, \
    figure_preset, figure_window, find_roots, quasi_polynomial_oracle
from vdspec.vd_sim import INITIAL_CONDITIONS, ClosedLoopConfig, Controller, InsufficientDataError, \
    SimulationError, System, estimate_decay_rate, rate_report, run, write_json

log.basicConfig(level=log.INFO)

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2
OUTPUT_DIR_ENV = 'VDSPEC_OUTPUT_DIR'
FALLBACK_WINDOW = '-2,2,-50,50'
ORACLE_AGREEMENT = 1e-6
DEFAULT_RATE_TOLERANCE = 0.15

DEFAULT_FIGURE = {
    Variant.OPEN_VISCOUS: 'fig2',
    Variant.DEADBEAT_VISCOUS: 'fig3',
    Variant.DYN_VISCOUS: 'fig3',
    Variant.DEADBEAT_VISCOUS_PERTURBED: 'fig6',
    Variant.DEADBEAT_INVISCID_PERTURBED: 'fig6',
    Variant.DYN_INVISCID_PERTURBED: 'fig6',
    Variant.SIMPLER: 'fig7',
}

NUMBER = r'[-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?'
RANGE_RE = regex.compile(rf'\s*(?P<start>{NUMBER})\s*:\s*(?P<stop>{NUMBER})\s*:\s*(?P<step>{NUMBER})\s*')


class UsageError(ValueError):
    pass


def parse_values(spec: str) -> List[float]:
    """'0.02,0.05,0.1' or 'start:stop:step' (stop included when it lies on the grid)."""
    values = []
    for item in regex.split(r'\s*,\s*', spec.strip()):
        if not item:
            continue
        if m := RANGE_RE.fullmatch(item):
            start, stop, step = (float(m.group(name)) for name in ('start', 'stop', 'step'))
            if step == 0 or (stop - start) * step < 0:
                raise UsageError(f'Range {item!r} has no values')
            n = int(math.floor((stop - start) / step + 1e-9))
            values.extend(round(start + k * step, 12) for k in range(n + 1))
        elif regex.fullmatch(NUMBER, item):
            values.append(float(item))
        else:
            raise UsageError(f'Cannot parse {item!r} as a number or start:stop:step range')
    if not values:
        raise UsageError(f'No values in {spec!r}')
    return values


def default_output_dir() -> Path:
    return Path(os.environ.get(OUTPUT_DIR_ENV, '.'))


@dataclass
class RunManifest:
    """Everything needed to re-run a command; outputs are file names relative to the manifest's directory."""
    command: str
    argv: List[str]
    parameters: dict
    tolerances: dict = field(default_factory=dict)
    windows: List[dict] = field(default_factory=list)
    outputs: List[str] = field(default_factory=list)
    threads: int = 1
    version: str = __version__
    exit_code: int = EXIT_OK

    def to_json(self) -> dict:
        return {'command': self.command, 'argv': self.argv, 'parameters': self.parameters,
                'tolerances': self.tolerances, 'windows': self.windows, 'outputs': self.outputs,
                'threads': self.threads, 'version': self.version, 'exit_code': self.exit_code,
                'created': datetime.datetime.now().isoformat(timespec='seconds')}

    def write(self, filename: Path) -> None:
        with open(filename, 'w', encoding='utf-8') as f_out:
            json.dump(self.to_json(), f_out, indent=2)
            f_out.write('\n')

    @classmethod
    def load(cls, filename: Path) -> 'RunManifest':
        with open(filename, 'r', encoding='utf-8') as f_in:
            data = json.load(f_in)
        data.pop('created', None)
        return cls(**data)


def _jsonable(value):
    if isinstance(value, Path):
        return str(value)
    if isinstance(value, (list, tuple)):
        return [_jsonable(x) for x in value]
    return value


def _start_manifest(args: argparse.Namespace) -> RunManifest:
    skip = {'func', 'output_dir', 'verbose', 'progress_bar', 'argv', 'threads'}
    parameters = {key: _jsonable(value) for key, value in sorted(vars(args).items()) if key not in skip}
    return RunManifest(args.command, list(getattr(args, 'argv', None) or []), parameters,
                       threads=getattr(args, 'threads', 1))


def _finish(args: argparse.Namespace, manifest: RunManifest, stem: str, exit_code: int) -> int:
    manifest.exit_code = exit_code
    manifest.write(Path(args.output_dir) / f'{stem}.manifest.json')
    if args.verbose:
        log.info(f'Outputs: {", ".join(manifest.outputs)} (exit code {exit_code})')
    return exit_code


def _output_dir(args: argparse.Namespace) -> Path:
    output_dir = Path(args.output_dir)
    output_dir.mkdir(parents=True, exist_ok=True)
    return output_dir


def _params_from_args(args: argparse.Namespace) -> SystemParams:
    return SystemParams.from_delay(args.tau, eta=args.eta, eps=args.eps, k1=args.k1, k2=args.k2, kp=args.kp)


def _window_from_args(args: argparse.Namespace, variant: Optional[Variant] = None) -> SearchWindow:
    if args.window:
        return SearchWindow.from_string(args.window)
    if variant in DEFAULT_FIGURE:
        return figure_window(DEFAULT_FIGURE[variant])
    return SearchWindow.from_string(FALLBACK_WINDOW)


def _oracle_section(fn: CharFn, spectrum: Spectrum) -> Optional[dict]:
    """Zeros of the polynomial-in-exp(-s u) form of fn, compared with the located spectrum."""
    coefficients = oracle_coefficients(fn)
    if coefficients is None:
        return None
    coeffs, unit = coefficients
    zeros = quasi_polynomial_oracle(coeffs, unit, spectrum.window)
    sigma = float(np.max(zeros.real)) if len(zeros) else float('-inf')
    sigma_found, _ = spectrum.abscissa()
    if math.isfinite(sigma) and math.isfinite(sigma_found):
        difference = abs(sigma - sigma_found)
    else:
        difference = 0.0 if sigma == sigma_found else float('inf')
    return {'degree': len(coeffs) - 1, 'unit': unit, 'n_zeros': len(zeros),
            'spectral_abscissa': abscissa_to_json(sigma),
            'abscissa_difference': difference if math.isfinite(difference) else None,
            'agrees': bool(difference <= ORACLE_AGREEMENT)}


def process_spectrum_args(args: argparse.Namespace) -> int:
    manifest = _start_manifest(args)
    manifest.tolerances = {'newton_tol': args.tol, 'oracle_agreement': ORACLE_AGREEMENT}
    output_dir = _output_dir(args)
    if args.figure:
        preset = figure_preset(args.figure)
        window = SearchWindow.from_string(args.window) if args.window else preset.window
        functions = preset.char_functions(SystemParams.from_delay(args.tau))
        stem = f'spectrum-{preset.name}'
    else:
        variant = Variant.from_name(args.variant)
        functions = [CharFn(variant, _params_from_args(args))]
        window = _window_from_args(args, variant)
        stem = f'spectrum-{variant.value}'
    manifest.windows = [window.to_dict()]
    exit_code = EXIT_OK
    results = []
    for index, fn in enumerate(functions):
        name = stem if len(functions) == 1 else f'{stem}-{index + 1}'
        try:
            spectrum = find_roots(fn, window, tol=args.tol, threads=args.threads)
        except (BoundaryZeroError, RootFindingError) as error:
            log.error(f'{fn.name} {fn.params}: {error}')
            results.append({'source': fn.describe(), 'error': str(error)})
            exit_code = EXIT_CHECK_FAILED
            continue
        spectrum.write_csv(output_dir / f'{name}.csv')
        manifest.outputs.append(f'{name}.csv')
        result = spectrum.to_json()
        if args.oracle:
            oracle = _oracle_section(fn, spectrum)
            result['oracle'] = oracle
            if oracle is None:
                log.info(f'No polynomial oracle for {fn.name} with {fn.params}')
            elif not oracle['agrees']:
                log.error(f'{fn.name}: oracle abscissa differs from the located spectrum')
                exit_code = EXIT_CHECK_FAILED
        sigma, _ = spectrum.abscissa()
        if args.verbose:
            log.info(f'{name}: {len(spectrum)} zeros, sigma_hat={sigma:.10g}')
        results.append(result)
    with open(output_dir / f'{stem}.json', 'w', encoding='utf-8') as f_out:
        json.dump({'figure': args.figure, 'spectra': results}, f_out, indent=2)
        f_out.write('\n')
    manifest.outputs.append(f'{stem}.json')
    return _finish(args, manifest, stem, exit_code)


def process_sweep_args(args: argparse.Namespace) -> int:
    manifest = _start_manifest(args)
    window = SearchWindow.from_string(args.window) if args.window else \
        figure_window(args.figure) if args.figure else None
    common = {'window': window, 'threads': args.threads, 'progress_bar': args.progress_bar}
    if args.check == 'theorem2':
        if args.eta is None or args.eps is None:
            raise UsageError('sweep --check theorem2 needs --eta and --eps')
        sweep = theorem2_sweep(args.eta, parse_values(args.eps), args.delta, **common)
    else:
        if args.etas is None:
            raise UsageError(f'sweep --check {args.check} needs --etas')
        etas = parse_values(args.etas)
        if args.check == 'theorem1':
            sweep = theorem1_check(etas, args.delta, **common)
        elif args.check == 'conjecture1':
            sweep = conjecture1_probe(etas, args.delta, upper_delta=args.upper_delta, **common)
        else:
            if args.eps_bound is None:
                raise UsageError('sweep --check conjecture3 needs --eps-bound')
            sweep = conjecture3_probe(etas, args.eps_bound, **common)
    manifest.windows = [sweep.reports[0].window.to_dict()] if sweep.reports else []
    manifest.tolerances = {'delta': args.delta, 'upper_delta': args.upper_delta, 'eps_bound': args.eps_bound}
    output_dir = _output_dir(args)
    stem = f'sweep-{args.check}'
    sweep.write_csv(output_dir / f'{stem}.csv')
    sweep.write_json(output_dir / f'{stem}.json')
    manifest.outputs += [f'{stem}.csv', f'{stem}.json']
    failed_points = [r for r in sweep.reports if r.error is not None]
    checks_failed = any(r.kind == CHECK and not r.satisfied for r in sweep.reports)
    if args.verbose:
        for value, report in zip(sweep.grid, sweep.reports):
            log.info(f'{args.check} {sweep.axis}={value:g}: sigma_hat={report.sigma_hat:.10g} '
                     f'satisfied={report.satisfied}')
    exit_code = EXIT_CHECK_FAILED if failed_points or checks_failed else EXIT_OK
    return _finish(args, manifest, stem, exit_code)


def process_margin_args(args: argparse.Namespace) -> int:
    manifest = _start_manifest(args)
    manifest.tolerances = {'tolerance': args.tolerance}
    matrix = BoundaryMatrix.from_string(args.matrix) if args.matrix else BoundaryMatrix.controller_matrix(args.k1, args.k2)
    result = margin_report(matrix, args.tolerance)
    output_dir = _output_dir(args)
    stem = 'margin'
    with open(output_dir / f'{stem}.json', 'w', encoding='utf-8') as f_out:
        json.dump(result.to_json(), f_out, indent=2)
        f_out.write('\n')
    manifest.outputs.append(f'{stem}.json')
    if args.verbose:
        log.info(f'{matrix.name}: rho2={result.rho2:.10g} rho_bar={result.rho_bar:.10g}')
    return _finish(args, manifest, stem, EXIT_OK if result.consistent else EXIT_CHECK_FAILED)


def spectral_counterpart(config: ClosedLoopConfig) -> Optional[CharFn]:
    """Characteristic function whose zeros are the closed-loop poles of a simulated configuration."""
    params = config.params
    if config.system is System.SIMPLER_PAIR:
        return CharFn(Variant.SIMPLER, params) if params.is_viscous and params.eps == 0 else None
    k1, k2 = config.gains
    params = params.replace(k1=k1, k2=k2)
    if config.system is System.INVISCID_PAIR:
        return CharFn(Variant.DYN_INVISCID_PERTURBED, params)
    if params.eps == 0 and (k1, k2) == (0.0, 1.0):
        return CharFn(Variant.DEADBEAT_VISCOUS, params)
    return CharFn(Variant.DYN_VISCOUS, params)


def process_simulate_args(args: argparse.Namespace) -> int:
    manifest = _start_manifest(args)
    system = System(args.system)
    controller = args.controller or (Controller.NONE.value if system is System.SIMPLER_PAIR
                                     else Controller.DEADBEAT.value)
    config = ClosedLoopConfig(system, _params_from_args(args), Controller(controller), args.ic, args.t_end, args.n,
                              args.cfl, args.snapshot_every, args.seed)
    manifest.tolerances = {'t_skip': args.t_skip, 'rate_tolerance': args.rate_tolerance}
    output_dir = _output_dir(args)
    stem = f'simulate-{system.value}'
    exit_code = EXIT_OK
    error = None
    try:
        traj = run(config, progress_bar=args.progress_bar)
    except SimulationError as abort:
        traj = abort.trajectory
        error = str(abort)
        exit_code = EXIT_CHECK_FAILED
    fit = None
    if error is None:
        try:
            fit = estimate_decay_rate(traj, args.t_skip)
        except InsufficientDataError as no_fit:
            error = str(no_fit)
            log.info(f'No decay rate: {no_fit}')
    sigma_hat = None
    spectrum_error = None
    if args.compare_spectrum:
        fn = spectral_counterpart(config)
        if fn is None:
            log.warning(f'No characteristic function for {system.value} with {config.params}')
        else:
            window = _window_from_args(args, fn.variant)
            manifest.windows = [window.to_dict()]
            try:
                sigma_hat, _ = find_roots(fn, window, threads=args.threads).abscissa()
            except (BoundaryZeroError, RootFindingError) as root_error:
                log.error(f'{fn.name} {fn.params}: {root_error}')
                spectrum_error = str(root_error)
                exit_code = EXIT_CHECK_FAILED
    report = rate_report(traj, fit, error, sigma_hat)
    if spectrum_error is not None:
        report['spectrum_error'] = spectrum_error
    if report.get('relative_difference') is not None and report['relative_difference'] > args.rate_tolerance:
        log.error(f'Decay rate {fit.rate:.6g} differs from sigma_hat {sigma_hat:.6g} by more than '
                  f'{args.rate_tolerance:.0%}')
        exit_code = EXIT_CHECK_FAILED
    traj.write_csv(output_dir / f'{stem}.csv')
    write_json(report, output_dir / f'{stem}.json')
    manifest.outputs += [f'{stem}.csv', f'{stem}.json']
    if traj.snapshots:
        traj.write_snapshots_csv(output_dir / f'{stem}-snapshots.csv')
        manifest.outputs.append(f'{stem}-snapshots.csv')
    if args.verbose and fit:
        log.info(f'{stem}: rate={fit.rate:.6g} r2={fit.r_squared:.6g}')
    return _finish(args, manifest, stem, exit_code)


def process_replay_args(args: argparse.Namespace) -> int:
    """Re-runs a manifest's argv into a scratch directory and compares every recorded output byte for byte."""
    manifest_path = Path(args.manifest)
    if not manifest_path.is_file():
        raise UsageError(f'{manifest_path} does not exist.')
    manifest = RunManifest.load(manifest_path)
    with tempfile.TemporaryDirectory() as scratch:
        main(manifest.argv + ['-o', scratch])
        differing = []
        for name in manifest.outputs:
            original, replayed = manifest_path.parent / name, Path(scratch) / name
            if not (original.is_file() and replayed.is_file()
                    and original.read_bytes() == replayed.read_bytes()):
                differing.append(name)
    if differing:
        log.error(f'Replay of {manifest_path} differs in {", ".join(differing)}')
        return EXIT_CHECK_FAILED
    if args.verbose:
        log.info(f'Replay of {manifest_path}: {len(manifest.outputs)} outputs identical')
    return EXIT_OK


def _add_common_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument('-o', '--output-dir', type=Path, default=default_output_dir(), metavar='OUTPUT-DIR',
                        help=f'(default: ${OUTPUT_DIR_ENV} or current directory)')
    parser.add_argument('--threads', type=int, default=1, help='worker threads for root location (default: 1)')
    parser.add_argument('-v', '--verbose', action='count', default=0, help='write start/end/time and results to STDERR')
    parser.add_argument('-pb', '--progress_bar', action='store_true', default=False, help='Show progress bar')


def _add_system_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument('--eta', type=float, default=0.0, help='viscosity (default: 0)')
    parser.add_argument('--eps', type=float, default=0.0, help='relative velocity perturbation (default: 0)')
    parser.add_argument('--tau', type=float, default=1.0, help='nominal delay 1/velocity (default: 1)')
    parser.add_argument('--k1', type=float, default=0.0, help='gain on Y(t) (default: 0)')
    parser.add_argument('--k2', type=float, default=1.0, help='gain on Y(t - tau) (default: 1)')
    parser.add_argument('--kp', type=float, default=0.0, help='proportional gain (default: 0)')
    parser.add_argument('--window', type=str, default=None, metavar='RE_MIN,RE_MAX,IM_MIN,IM_MAX',
                        help='search window (use --window=-8,1,-60,60 for negative first values)')


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description='Spectra, stability margins and simulations of transport / '
                                                 'advection-diffusion loops with delayed boundary feedback',
                                     prog='vdspec')
    parser.add_argument('--version', action='version',
                        version=f'%(prog)s {__version__} last modified: {last_mod_date}')
    subparsers = parser.add_subparsers(dest='command', metavar='COMMAND')
    subparsers.required = True

    spectrum = subparsers.add_parser('spectrum', help='zeros of a characteristic function in a window')
    spectrum.add_argument('--variant', type=str, default=Variant.DEADBEAT_VISCOUS.value,
                          help=f'one of {", ".join(v.value for v in Variant)}')
    spectrum.add_argument('--figure', type=str, default=None, help='figure preset (fig2, fig3, fig5, fig6, fig7)')
    spectrum.add_argument('--tol', type=float, default=1e-12, help='Newton step tolerance (default: 1e-12)')
    spectrum.add_argument('--oracle', action='store_true', default=False,
                          help='cross-check with the polynomial oracle where one exists')
    _add_system_options(spectrum)
    _add_common_options(spectrum)
    spectrum.set_defaults(func=process_spectrum_args)

    sweep = subparsers.add_parser('sweep', help='theorem checks and conjecture probes over parameter grids')
    sweep.add_argument('--check', required=True, choices=['theorem1', 'conjecture1', 'theorem2', 'conjecture3'])
    sweep.add_argument('--etas', type=str, default=None, help="viscosities, e.g. '0.02,0.05' or '0.02:0.2:0.02'")
    sweep.add_argument('--eta', type=float, default=None, help='viscosity of a theorem2 sweep')
    sweep.add_argument('--eps', type=str, default=None, help="perturbations of a theorem2 sweep, e.g. '-0.05:0.05:0.01'")
    sweep.add_argument('--delta', type=float, default=DEFAULT_DELTA, help=f'(default: {DEFAULT_DELTA})')
    sweep.add_argument('--upper-delta', type=float, default=None, help='conjecture1 upper band half width')
    sweep.add_argument('--eps-bound', type=float, default=None, help='conjecture3 bound')
    sweep.add_argument('--window', type=str, default=None, metavar='RE_MIN,RE_MAX,IM_MIN,IM_MAX')
    sweep.add_argument('--figure', type=str, default=None, help='use the window of a figure preset')
    _add_common_options(sweep)
    sweep.set_defaults(func=process_sweep_args)

    margin = subparsers.add_parser('margin', help='delay-robustness margin of a boundary matrix')
    margin.add_argument('--k1', type=float, default=0.0)
    margin.add_argument('--k2', type=float, default=1.0)
    margin.add_argument('--matrix', type=str, default=None,
                        help="'identity3', 'zero2', 'simpler', 'controller:k1,k2' or rows such as '1,-1;1,-1'")
    margin.add_argument('--tolerance', type=float, default=1e-4, help='rho2/rho_bar agreement (default: 1e-4)')
    _add_common_options(margin)
    margin.set_defaults(func=process_margin_args)

    simulate = subparsers.add_parser('simulate', help='finite-difference simulation of a closed loop')
    simulate.add_argument('--system', required=True, choices=[s.value for s in System])
    simulate.add_argument('--controller', default=None, choices=[c.value for c in Controller],
                          help='(default: deadbeat; none for simpler-pair)')
    simulate.add_argument('--n', type=int, default=256, help='grid cells (default: 256)')
    simulate.add_argument('--cfl', type=float, default=1.0, help='(default: 1)')
    simulate.add_argument('--t-end', type=float, default=20.0, help='(default: 20)')
    simulate.add_argument('--ic', default='gaussian', choices=list(INITIAL_CONDITIONS), help='initial condition')
    simulate.add_argument('--seed', type=int, default=0, help='seed of the smooth-random initial condition')
    simulate.add_argument('--snapshot-every', type=int, default=0, help='state snapshot interval in steps (0: none)')
    simulate.add_argument('--t-skip', type=float, default=4.0, help='start of the decay fit (default: 4)')
    simulate.add_argument('--compare-spectrum', action='store_true', default=False,
                          help='compare the fitted rate with the spectral abscissa')
    simulate.add_argument('--rate-tolerance', type=float, default=DEFAULT_RATE_TOLERANCE,
                          help=f'relative rate/abscissa tolerance (default: {DEFAULT_RATE_TOLERANCE})')
    _add_system_options(simulate)
    _add_common_options(simulate)
    simulate.set_defaults(func=process_simulate_args)

    replay = subparsers.add_parser('replay', help='re-run a manifest and compare outputs byte for byte')
    replay.add_argument('manifest', type=Path, metavar='MANIFEST.json')
    replay.add_argument('-v', '--verbose', action='count', default=0)
    replay.set_defaults(func=process_replay_args, output_dir=None, progress_bar=False, threads=1)
    return parser


def _process(argv: List[str]) -> int:
    """Parses argv and runs the command; usage errors exit with code 2."""
    parser = build_parser()
    args = parser.parse_args(argv)
    args.argv = list(argv)
    if getattr(args, 'threads', 1) < 1:
        parser.error(f'--threads must be positive, not {args.threads}')
    try:
        return args.func(args)
    except UsageError as error:
        parser.error(str(error))
    except ValueError as error:
        # invalid parameter combinations, e.g. a viscous variant with eta = 0
        parser.error(str(error))


def _keyword_argv(command: str, kwargs: dict) -> List[str]:
    argv = [command]
    for key, value in kwargs.items():
        flag = '--' + key.replace('_', '-') if key != 'progress_bar' else '--progress_bar'
        if key == 'manifest':
            argv.append(str(value))
        elif key == 'verbose':
            argv += ['-v'] * int(value or 0)
        elif value is True:
            argv.append(flag)
        elif value is False or value is None:
            continue
        elif isinstance(value, (list, tuple)):
            argv.append(f'{flag}={",".join(str(x) for x in value)}')
        else:
            argv.append(f'{flag}={value}')
    return argv


def process_spectrum(**kwargs) -> int:
    """Entry point for non-CLI use; keyword names are the long flag names, e.g. variant='simpler', eta=0.1."""
    return _process(_keyword_argv('spectrum', kwargs))


def process_sweep(**kwargs) -> int:
    return _process(_keyword_argv('sweep', kwargs))


def process_margin(**kwargs) -> int:
    return _process(_keyword_argv('margin', kwargs))


def process_simulate(**kwargs) -> int:
    return _process(_keyword_argv('simulate', kwargs))


def process_replay(manifest: str, **kwargs) -> int:
    return _process(_keyword_argv('replay', dict(manifest=manifest, **kwargs)))


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    start_time = datetime.datetime.now()
    verbose = any(regex.fullmatch(r'-v+|--verbose', arg) for arg in argv)
    if verbose:
        log.info('Script: vdspec')
        log.info(f'Start: {start_time}')
    exit_code = _process(argv)
    if verbose:
        end_time = datetime.datetime.now()
        log.info(f'End: {end_time}')
        log.info(f'Time: {end_time - start_time}')
    return exit_code


if __name__ == "__main__":
    sys.exit(main())
