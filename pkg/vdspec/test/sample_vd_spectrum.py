#!/usr/bin/env python3
# -*- encoding: utf-8 -*-
"""
Sample calls of vdspec from Python: spectra, a sweep, the robustness margin and a simulation.
Usage: python sample_vd_spectrum.py [1-5]
"""

import os
import sys
from vdspec.vd_analysis import theorem1_check
from vdspec.vd_charfun import CharFn, Variant
from vdspec.vd_margin import BoundaryMatrix, margin_report
from vdspec.vd_model import SystemParams
from vdspec.vd_roots import SearchWindow, find_roots
from vdspec.vd_sim import ClosedLoopConfig, System, estimate_decay_rate, run

example = int(sys.argv[1]) if len(sys.argv) > 1 else 1
out_dir = os.path.join(os.path.dirname(sys.argv[0]) or '.', 'data')

if example == 2:
    sweep = theorem1_check([0.02, 0.05, 0.1], window=SearchWindow(-3, 1, -20, 20))
    sweep.write_csv(sys.stdout)  # eta, eps, sigma_hat, margin, satisfied
elif example == 3:
    print(margin_report(BoundaryMatrix.controller_matrix(0, 1)).to_json())  # rho2 = rho_bar = sqrt(2)
elif example == 4:
    traj = run(ClosedLoopConfig(System.VISCOUS_PAIR, SystemParams(eta=0.1), n_cells=256, t_end=20))
    print(estimate_decay_rate(traj))
elif example == 5:
    os.makedirs(out_dir, exist_ok=True)
    spectrum = find_roots(CharFn(Variant.SIMPLER, SystemParams(eta=0.1)), SearchWindow(-1.5, 0.5, -40, 40))
    spectrum.write_csv(f'{out_dir}/simpler.csv')
    spectrum.write_json(f'{out_dir}/simpler.json')
else:
    spectrum = find_roots(CharFn(Variant.DEADBEAT_VISCOUS, SystemParams(eta=0.1)), SearchWindow(-8, 1, -60, 60),
                          threads=4)
    spectrum.write_csv(sys.stdout)
    print(spectrum.abscissa())
