"""Simulator for a frequency-tunable, coherently dressed single-photon source.

The package models a four-level ladder system (ground, two orthogonally
polarized excitons, biexciton) whose upper transition is dressed by a cw
laser.  Depending on the laser detuning the source operates in the
Autler-Townes regime (resonant dressing, two sidepeaks split by the Rabi
energy) or the ac Stark regime (far-detuned dressing, a single shifted
peak).  The library computes the single-photon figures-of-merit of the
shifted emission -- brightness, indistinguishability, sidepeak-resolved
quantities, pulsed-excitation purity g2[0], and the cw-background error
rate -- including acoustic-phonon decoherence treated with a polaron
master equation.

Layout
------
- ``core``      : 4x4 operator algebra, Lindblad generators, propagation,
                  two-time correlations via the quantum regression theorem.
- ``system``    : system parameters, rotating-frame Hamiltonians, dressed
                  basis, ac Stark shift algebra, Purcell rescaling, pulses.
- ``phonons``   : super-Ohmic bath, polaron correlation functions, full and
                  dressed-frame (secular) phonon dissipators, sideband
                  efficiency factors.
- ``fom``       : figures-of-merit evaluated from the dynamics.
- ``analytics`` : closed-form benchmarks and interferometer (MZ / HOM)
                  visibility algebra.
- ``sweep``     : parameter sweeps with deterministic CSV output.
- ``plots``     : figure rendering from sweep CSV files.
- ``cli``       : the ``sps`` command line front end.

Unit conventions: energies, rates and detunings are given in ueV and
converted to angular frequencies in 1/ps via hbar = 658.2119 ueV ps;
times are in ps unless noted (repetition periods in ns).
"""

from .constants import HBAR_UEV_PS, KB_UEV_PER_K
from .system import SystemParams, DressedBasis, PulseParams, dressed_states, stark_shift, drive_for_shift
from .phonons import PhononParams, PhononRates, b_factor, sideband_efficiency
from .fom import FiguresOfMerit, compute_foms
from .analytics import InterferometerParams, analytic_at, adiabatic_fom

__version__ = "0.1.0"

__all__ = [
    "HBAR_UEV_PS",
    "KB_UEV_PER_K",
    "SystemParams",
    "DressedBasis",
    "PulseParams",
    "PhononParams",
    "PhononRates",
    "FiguresOfMerit",
    "InterferometerParams",
    "dressed_states",
    "stark_shift",
    "drive_for_shift",
    "b_factor",
    "sideband_efficiency",
    "compute_foms",
    "analytic_at",
    "adiabatic_fom",
    "__version__",
]
