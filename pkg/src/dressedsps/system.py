"""System parameters, rotating-frame Hamiltonians and the dressed basis.

The cascade is driven on the biexciton--X-exciton transition by a cw laser
of (renormalized) Rabi amplitude omega_cw detuned by delta from that
transition.  Two rotating frames are used: the "full" frame keeps the
far-detuned coupling of the drive to the X--G transition (needed for the
cw background error rate), the "reduced" frame drops it and leaves a pure
two-level drive block on {X, B}.  All Hamiltonian constructors return 4x4
arrays in ueV; conversion to 1/ps happens when generators are assembled.

Drive amplitudes are the values after phonon renormalization, i.e. the
bare laser amplitude times the coherent attenuation factor <B>; the bare
amplitude is omega_cw / <B>.
"""

from dataclasses import dataclass, replace
import warnings

import numpy as np

from . import core
from .constants import uev_to_ps
from .exceptions import (DegenerateDressingError, InfeasibleShiftError,
                         ParameterError, UndefinedStarkShiftError, ValidityWarning)

DEFAULT_GAMMA_X_UEV = 1.32
DEFAULT_E_B_UEV = 3240.0
DEFAULT_T_REP_NS = 12.5  # 80 MHz repetition, configurable


@dataclass(frozen=True)
class SystemParams:
    """Rates, detunings and energies of the four-level cascade, in ueV.

    Attributes:
        gamma_X: radiative rate of each exciton (> 0).
        gamma_B: total radiative rate of the biexciton (>= 0), split
            equally between the two polarization channels.
        omega_cw: cw Rabi amplitude after <B> renormalization (>= 0).
        delta: laser detuning from the B-X transition.
        E_B: biexciton binding energy (> 0).
        T_rep: laser repetition period in ns.
    """

    gamma_X: float = DEFAULT_GAMMA_X_UEV
    gamma_B: float = 2 * DEFAULT_GAMMA_X_UEV
    omega_cw: float = 0.0
    delta: float = 0.0
    E_B: float = DEFAULT_E_B_UEV
    T_rep: float = DEFAULT_T_REP_NS

    def __post_init__(self):
        if self.gamma_X <= 0:
            raise ParameterError("gamma_X must be > 0")
        if self.gamma_B < 0:
            raise ParameterError("gamma_B must be >= 0")
        if self.omega_cw < 0:
            raise ParameterError("omega_cw must be >= 0")
        if self.E_B <= 0:
            raise ParameterError("E_B must be > 0")
        if self.T_rep <= 0:
            raise ParameterError("T_rep must be > 0")
        scale = max(abs(self.delta), self.omega_cw)
        if scale > 0 and self.E_B < 5 * scale:
            warnings.warn(
                f"E_B = {self.E_B:g} ueV is not >> max(|delta|, omega_cw) = "
                f"{scale:g} ueV; the weak ground-state drive is no longer "
                "negligible", ValidityWarning, stacklevel=3)

    @property
    def eta(self) -> float:
        """Generalized Rabi splitting sqrt(omega_cw^2 + delta^2), ueV."""
        return float(np.hypot(self.omega_cw, self.delta))

    @property
    def t_rep_ps(self) -> float:
        return self.T_rep * 1e3

    def radiative_collapse_ps(self):
        """(rate, operator) pairs of the radiative dissipator, rates in 1/ps.

        Rates are paired so that each channel enters the generator as
        (rate/2) D[A]: exciton decay at gamma_X through X and Y, biexciton
        decay at gamma_B/2 per polarization channel.
        """
        gx = uev_to_ps(self.gamma_X)
        gb = uev_to_ps(self.gamma_B)
        return [
            (gx, core.SIGMA_M_X),
            (gx, core.COLLAPSE_GY),
            (gb / 2.0, core.SIGMA_M_B),
            (gb / 2.0, core.COLLAPSE_YB),
        ]


@dataclass(frozen=True)
class DressedBasis:
    """Eigenbasis of the driven {X, B} block.

    |+-> = c_B |B> + c_X |X> with energies +- eta/2.  Coefficient sign
    convention: c_B^+- = sqrt((1 +- delta/eta)/2),
    c_X^+- = +- sqrt((1 -+ delta/eta)/2).
    """

    eta: float
    energy_plus: float
    energy_minus: float
    c_B_plus: float
    c_X_plus: float
    c_B_minus: float
    c_X_minus: float

    def ket(self, branch: str) -> np.ndarray:
        v = np.zeros(core.DIM, dtype=complex)
        if branch == "+":
            v[core.B], v[core.X] = self.c_B_plus, self.c_X_plus
        elif branch == "-":
            v[core.B], v[core.X] = self.c_B_minus, self.c_X_minus
        else:
            raise ParameterError("branch must be '+' or '-'")
        return v

    def projector(self, branch: str) -> np.ndarray:
        k = self.ket(branch)
        return np.outer(k, k.conj())

    def lower(self, branch: str) -> np.ndarray:
        """|G><+-|, the sidepeak lowering operator."""
        return np.outer(core.ket(core.G), self.ket(branch).conj())

    def sigma_pm(self) -> np.ndarray:
        """|+><-|."""
        return np.outer(self.ket("+"), self.ket("-").conj())

    def c_X(self, branch: str) -> float:
        return self.c_X_plus if branch == "+" else self.c_X_minus

    def c_B(self, branch: str) -> float:
        return self.c_B_plus if branch == "+" else self.c_B_minus


def dressed_states(omega_cw: float, delta: float) -> DressedBasis:
    """Dressed eigenstates and energies of the driven B-X block.

    Raises:
        DegenerateDressingError: both omega_cw and delta vanish.
    """
    eta = float(np.hypot(omega_cw, delta))
    if eta == 0.0:
        raise DegenerateDressingError("omega_cw = delta = 0 leaves the dressed basis undefined")
    s = delta / eta
    return DressedBasis(
        eta=eta,
        energy_plus=eta / 2.0,
        energy_minus=-eta / 2.0,
        c_B_plus=np.sqrt((1 + s) / 2.0),
        c_X_plus=np.sqrt((1 - s) / 2.0),
        c_B_minus=np.sqrt((1 - s) / 2.0),
        c_X_minus=-np.sqrt((1 + s) / 2.0),
    )


def hamiltonian_full(params: SystemParams) -> np.ndarray:
    """Rotating-frame Hamiltonian keeping the far-detuned X-G drive, ueV.

    Diagonal (G, X, Y, B) = (-E_B, delta, 0, 2 delta); off-diagonal drive
    omega_cw/2 on both the B-X and X-G transitions.
    """
    h = (2.0 * params.delta * core.PROJ[core.B]
         + params.delta * core.PROJ[core.X]
         - params.E_B * core.PROJ[core.G]
         + 0.5 * params.omega_cw * (core.SIGMA_X_B + core.SIGMA_X_X))
    return h


def hamiltonian_reduced(params: SystemParams) -> np.ndarray:
    """Two-level drive block (delta/2) sigma_z + (omega_cw/2) sigma_x, ueV.

    The G and Y rows/columns are identically zero in this frame.
    """
    return 0.5 * params.delta * core.SIGMA_Z_B + 0.5 * params.omega_cw * core.SIGMA_X_B


def stark_shift(omega_cw: float, delta: float) -> float:
    """Frequency shift of the dominant emission peak, ueV.

    Delta_ac = (delta/2) (eta/|delta| - 1): positive (red shift) for
    positive detuning, negative (blue) for negative detuning.

    Raises:
        UndefinedStarkShiftError: delta = 0, where both sidepeaks at
            +- omega_cw/2 are equally prominent.
    """
    if delta == 0.0:
        raise UndefinedStarkShiftError(
            "the dominant-peak shift is undefined at delta = 0; "
            "use the sidepeak shifts +- omega_cw/2")
    eta = np.hypot(omega_cw, delta)
    return float(0.5 * delta * (eta / abs(delta) - 1.0))


def drive_for_shift(delta_ac: float, delta: float) -> float:
    """Drive strength producing a target shift at a given detuning, ueV.

    omega_cw = 2 sqrt(Delta_ac^2 + Delta_ac delta); round-trips with
    :func:`stark_shift` to machine precision.

    Raises:
        InfeasibleShiftError: the radicand is negative (shift and detuning
            of incompatible signs/magnitudes).
    """
    radicand = delta_ac * delta_ac + delta_ac * delta
    if radicand < 0:
        raise InfeasibleShiftError(
            f"no real drive gives shift {delta_ac:g} ueV at detuning {delta:g} ueV")
    return float(2.0 * np.sqrt(radicand))


def purcell_factor(g: float, kappa: float, gamma_0: float) -> float:
    """Weak-coupling Purcell factor 4 g^2 / (kappa gamma_0)."""
    if kappa <= 0:
        raise ParameterError("kappa must be > 0")
    if gamma_0 <= 0:
        raise ParameterError("gamma_0 must be > 0")
    return 4.0 * g * g / (kappa * gamma_0)


def purcell_scaled(params: SystemParams, g: float, kappa: float,
                   gamma_0: float) -> SystemParams:
    """Replace gamma_X by the cavity-enhanced (1 + F_P) gamma_0.

    Only the X decay rate changes; the biexciton rate is untouched.  A
    warning is emitted outside the weak-coupling regime g/kappa <= 0.1.
    """
    fp = purcell_factor(g, kappa, gamma_0)
    if g / kappa > 0.1:
        warnings.warn(
            f"g/kappa = {g / kappa:.3g} exceeds 0.1; the bad-cavity "
            "adiabatic elimination behind the Purcell scaling is marginal",
            ValidityWarning, stacklevel=2)
    return replace(params, gamma_X=(1.0 + fp) * gamma_0)


@dataclass(frozen=True)
class PulseParams:
    """Gaussian excitation pulse resonant with the X-G transition.

    Attributes:
        tau_p: full width at half maximum of the pulse *intensity*, ps.
        area: integral of the (renormalized) amplitude over time, radians.
        center_time: pulse center in ps; None places it at 5 tau_p.
    """

    tau_p: float
    area: float = np.pi
    center_time: float | None = None

    def __post_init__(self):
        if self.tau_p <= 0:
            raise ParameterError("tau_p must be > 0")

    @property
    def sigma(self) -> float:
        """Standard deviation of the amplitude envelope, ps.

        The intensity FWHM tau_p maps to sigma = tau_p / (2 sqrt(ln 2)); the
        amplitude FWHM is then sqrt(2) tau_p.
        """
        return self.tau_p / (2.0 * np.sqrt(np.log(2.0)))

    @property
    def t_center(self) -> float:
        return 5.0 * self.tau_p if self.center_time is None else self.center_time

    @property
    def peak_amplitude_ps(self) -> float:
        """Peak Rabi amplitude in 1/ps fixed by the pulse area."""
        return self.area / (self.sigma * np.sqrt(2.0 * np.pi))

    def amplitude_ps(self, t) -> np.ndarray:
        """Pulse Rabi amplitude in 1/ps at time t (ps)."""
        x = (np.asarray(t, dtype=float) - self.t_center) / self.sigma
        return self.peak_amplitude_ps * np.exp(-0.5 * x * x)


def hamiltonian_pulsed(params: SystemParams, pulse: PulseParams, t: float) -> np.ndarray:
    """Pulse-frame Hamiltonian delta|B><B| + (Omega_p(t)/2) sigma_x^X
    + (omega_cw/2) sigma_x^B, in ueV.

    This frame shifts the reduced-frame {X, B} block by delta/2, so far
    from the pulse it equals :func:`hamiltonian_reduced` plus that frame
    shift.
    """
    from .constants import ps_to_uev

    omega_p_uev = ps_to_uev(pulse.amplitude_ps(t))
    return (params.delta * core.PROJ[core.B]
            + 0.5 * omega_p_uev * core.SIGMA_X_X
            + 0.5 * params.omega_cw * core.SIGMA_X_B)
