r"""The vdspec package computes closed-loop spectra, stability margins and delay-robustness margins of
one-dimensional transport / advection-diffusion loops with anti-located boundary sensing and delayed output
feedback, and cross-checks spectral predictions with a finite-difference simulator.

Main modules: vdspec.vd_model, vdspec.vd_charfun, vdspec.vd_roots, vdspec.vd_analysis, vdspec.vd_margin,
vdspec.vd_sim, vdspec.vd_cli
Argument help: vdspec -h, vdspec spectrum -h; or, alternatively: python -m vdspec -h"""
__version__ = '0.1.0'
__description__ = '''Closed-loop spectra, stability margins and delay-robustness margins of transport and advection-diffusion loops with delayed boundary output feedback, cross-validated by time-domain simulation.'''
last_mod_date = 'October 18, 2026'
from . import vd_model, vd_charfun, vd_roots, vd_analysis, vd_margin, vd_sim, vd_cli
__all__ = [vd_model, vd_charfun, vd_roots, vd_analysis, vd_margin, vd_sim, vd_cli]
