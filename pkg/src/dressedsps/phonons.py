"""Acoustic-phonon bath: spectral function, polaron correlation functions,
full and dressed-frame (secular) phonon dissipators.

The bath is super-Ohmic, J(w) = alpha w^3 exp(-w^2 / 2 w_b^2), coupled to
the exciton and biexciton states.  In the polaron frame the drive picks up
a coherent attenuation factor <B> = exp(-phi(0)/2) and the residual
system-bath coupling is governed by the correlation functions

    G_x(tau) = cosh(phi(tau)) - 1,      G_y(tau) = sinh(phi(tau)),

with phi(tau) the standard phonon propagator integral.  Drive amplitudes
throughout the package are the renormalized ones (bare amplitude times
<B>), and the phonon dissipators are weighted by (omega_cw/2)^2 in terms
of that renormalized amplitude, which keeps the full dissipator and the
dressed-frame scattering rates mutually consistent.

Half-Fourier transforms of G_m are taken on a cached tau grid (the
correlation functions decay within tens of ps) and interpolated where the
pulsed solver needs them at many frequencies.
"""

from dataclasses import dataclass
from functools import lru_cache
import warnings

import numpy as np
from scipy.integrate import quad
from scipy.interpolate import CubicSpline

from . import core
from .constants import HBAR_UEV_PS, ps_to_uev, thermal_energy_uev, uev_to_ps
from .exceptions import ParameterError, QuadratureError
from .system import DressedBasis

# Pinned presets (coupling ps^2, cutoff meV), all at 4 K.
PRESETS = {
    "I": (0.04, 0.9),
    "II": (0.006, 5.5),
    "III": (0.025, 2.5),
}

PRESET_TEMPERATURE_K = 4.0

# Fraction of |G_m(0+)| below which the cached correlation tail must fall.
TABLE_TAIL_FLOOR = 1e-13


@dataclass(frozen=True)
class PhononParams:
    """Super-Ohmic bath parameters.

    Attributes:
        alpha: coupling constant, ps^2 (>= 0).
        omega_b: cutoff frequency, meV (> 0).
        temperature: bath temperature, K (>= 0).
        preset: provenance tag ("I", "II", "III" or "custom").
    """

    alpha: float
    omega_b: float
    temperature: float = PRESET_TEMPERATURE_K
    preset: str = "custom"

    def __post_init__(self):
        if self.alpha < 0:
            raise ParameterError("alpha must be >= 0")
        if self.omega_b <= 0:
            raise ParameterError("omega_b must be > 0")
        if self.temperature < 0:
            raise ParameterError("temperature must be >= 0")

    @classmethod
    def from_preset(cls, name: str, temperature: float = PRESET_TEMPERATURE_K) -> "PhononParams":
        key = _normalize_preset(name)
        alpha, omega_b = PRESETS[key]
        return cls(alpha=alpha, omega_b=omega_b, temperature=temperature, preset=key)

    @property
    def omega_b_ps(self) -> float:
        """Cutoff as an angular frequency in 1/ps."""
        return self.omega_b * 1e3 / HBAR_UEV_PS

    @property
    def kt_ps(self) -> float:
        """k_B T as an angular frequency in 1/ps."""
        return uev_to_ps(thermal_energy_uev(self.temperature))


def _normalize_preset(name: str) -> str:
    token = str(name).strip()
    aliases = {
        "1": "I", "2": "II", "3": "III",
        "phonon-set-1": "I", "phonon-set-2": "II", "phonon-set-3": "III",
        "i": "I", "ii": "II", "iii": "III",
    }
    key = aliases.get(token.lower(), token.upper() if token.upper() in PRESETS else token)
    if key not in PRESETS:
        raise ParameterError(f"unknown phonon preset {name!r}; expected I, II, III")
    return key


def parse_phonons(token: str, temperature: float = PRESET_TEMPERATURE_K):
    """Map a config token to a bath, with 'none' meaning no phonon coupling."""
    if token is None or str(token).strip().lower() in {"none", "off", ""}:
        return None
    return PhononParams.from_preset(token, temperature=temperature)


def spectral_function(omega_uev: float, bath: PhononParams) -> float:
    """Super-Ohmic spectral function J(w) in 1/ps for w given in ueV."""
    w = uev_to_ps(np.asarray(omega_uev, dtype=float))
    if np.any(w < 0):
        raise ParameterError("omega must be >= 0")
    wb = bath.omega_b_ps
    return bath.alpha * w ** 3 * np.exp(-(w * w) / (2.0 * wb * wb))


def _phi_kernels(bath: PhononParams):
    """Real/imag omega-kernels of phi; the coth singularity is removed
    analytically (J/w^2 coth -> 2 alpha k_B T as w -> 0)."""
    wb = bath.omega_b_ps
    kt = bath.kt_ps

    def re_kernel(w):
        w = np.asarray(w, dtype=float)
        cut = np.exp(-(w * w) / (2.0 * wb * wb))
        if kt == 0.0:
            return bath.alpha * w * cut
        small = w < 1e-12
        x = np.where(small, 1.0, w)
        vals = bath.alpha * x / np.tanh(x / (2.0 * kt)) * cut
        return np.where(small, 2.0 * bath.alpha * kt, vals)

    def im_kernel(w):
        w = np.asarray(w, dtype=float)
        return bath.alpha * w * np.exp(-(w * w) / (2.0 * wb * wb))

    return re_kernel, im_kernel


def phi(tau: float, bath: PhononParams, rtol: float = 1e-9) -> complex:
    """Polaron propagator phi(tau) by adaptive quadrature over (0, 10 w_b].

    Raises:
        QuadratureError: the quadrature error estimate exceeds the target.
    """
    if tau < 0:
        raise ParameterError("tau must be >= 0")
    re_kernel, im_kernel = _phi_kernels(bath)
    wmax = 10.0 * bath.omega_b_ps
    scale = max(abs(bath.alpha) * bath.omega_b_ps ** 2, 1e-300)
    if tau == 0.0:
        re, re_err = quad(re_kernel, 0.0, wmax, epsrel=rtol, epsabs=rtol * scale, limit=400)
        im, im_err = 0.0, 0.0
    else:
        re, re_err = quad(re_kernel, 0.0, wmax, weight="cos", wvar=tau,
                          epsrel=rtol, epsabs=rtol * scale, limit=400)
        im, im_err = quad(im_kernel, 0.0, wmax, weight="sin", wvar=tau,
                          epsrel=rtol, epsabs=rtol * scale, limit=400)
        im = -im
    worst = max(re_err, im_err)
    if worst > 10 * rtol * max(scale, abs(re), abs(im)):
        raise QuadratureError(
            f"phi(tau={tau:g}) quadrature reached only {worst:.2e}",
            achieved=worst)
    return complex(re, im)


def b_factor(bath: PhononParams) -> float:
    """Coherent attenuation factor <B> = exp(-phi(0)/2)."""
    if bath.alpha == 0.0:
        return 1.0
    return float(np.exp(-phi(0.0, bath).real / 2.0))


def b_factor_series(bath: PhononParams) -> float:
    """Low-temperature closed form for <B>^2, truncated at fourth order.

    <B>^2 = exp[-alpha w_b^2 (1 + T~^2/3 - T~^4/15)] with
    T~ = pi k_B T / w_b; accurate to ~1% for cutoffs above ~1.5 meV at 4 K.
    """
    wb = bath.omega_b_ps
    t_tilde = np.pi * bath.kt_ps / wb
    return float(np.exp(-bath.alpha * wb * wb * (1.0 + t_tilde ** 2 / 3.0 - t_tilde ** 4 / 15.0)))


class PhononTable:
    """Cached tau-grid evaluation of phi, G_x, G_y and their half-Fourier
    transforms for one bath.

    The tau horizon is extended until both correlation functions fall below
    ``TABLE_TAIL_FLOOR`` of their tau -> 0+ values, so downstream transforms
    are effectively untruncated.
    """

    N_TAU = 4001

    def __init__(self, bath: PhononParams):
        self.bath = bath
        self.b = b_factor(bath)
        if bath.alpha == 0.0:
            self.tau = np.linspace(0.0, 1.0, 5)
            self.phi = np.zeros(5, dtype=complex)
            self.g_x = np.zeros(5, dtype=complex)
            self.g_y = np.zeros(5, dtype=complex)
            self._weights = core.simpson_weights(self.tau)
            self.converged = True
            self._splines = {}
            return
        tau_max = 10.0 * max(1.0 / bath.omega_b_ps,
                             1.0 / (2.0 * np.pi * bath.kt_ps) if bath.kt_ps > 0 else 0.0,
                             0.5)
        for _ in range(8):
            self._build(tau_max)
            if self.converged:
                break
            tau_max *= 1.7
        self._splines = {}

    def _build(self, tau_max: float):
        re_kernel, im_kernel = _phi_kernels(self.bath)
        wmax = 10.0 * self.bath.omega_b_ps
        cycles = wmax * tau_max / (2.0 * np.pi)
        n_w = int(max(4097, 16 * cycles + 1))
        if n_w % 2 == 0:
            n_w += 1
        w = np.linspace(0.0, wmax, n_w)
        ww = core.simpson_weights(w)
        kr = re_kernel(w) * ww
        ki = im_kernel(w) * ww
        self.tau = np.linspace(0.0, tau_max, self.N_TAU)
        phi_vals = np.empty(self.N_TAU, dtype=complex)
        chunk = 256
        for lo in range(0, self.N_TAU, chunk):
            hi = min(lo + chunk, self.N_TAU)
            arg = np.outer(w, self.tau[lo:hi])
            phi_vals[lo:hi] = kr @ np.cos(arg) - 1j * (ki @ np.sin(arg))
        self.phi = phi_vals
        self.g_x = np.cosh(phi_vals) - 1.0
        self.g_y = np.sinh(phi_vals)
        self._weights = core.simpson_weights(self.tau)
        ref = max(abs(self.g_x[0]), abs(self.g_y[0]))
        edge = max(abs(self.g_x[-1]), abs(self.g_y[-1]))
        self.converged = edge <= TABLE_TAIL_FLOOR * ref

    def require_converged(self):
        if not self.converged:
            raise QuadratureError(
                "phonon correlation functions did not decay below the "
                f"tail floor by tau = {self.tau[-1]:g} ps",
                diagnostic=self.tau[-1])

    def half_fourier(self, which: str, omegas) -> np.ndarray:
        """int_0^inf G_m(tau) exp(-i w tau) dtau for w in 1/ps (array ok)."""
        g = self.g_x if which == "x" else self.g_y
        omegas = np.atleast_1d(np.asarray(omegas, dtype=float))
        out = np.empty(len(omegas), dtype=complex)
        gw = g * self._weights
        chunk = 64
        for lo in range(0, len(omegas), chunk):
            hi = min(lo + chunk, len(omegas))
            out[lo:hi] = np.exp(-1j * np.outer(omegas[lo:hi], self.tau)) @ gw
        return out

    def ghat_spline(self, which: str, omega_max: float) -> CubicSpline:
        """Cubic-spline interpolant of the half-Fourier transform on
        [-omega_max, omega_max], cached per channel and range."""
        key = (which, float(np.ceil(omega_max)))
        if key not in self._splines:
            wmax = key[1]
            grid = np.linspace(-wmax, wmax, 2001)
            self._splines[key] = CubicSpline(grid, self.half_fourier(which, grid))
        return self._splines[key]


@lru_cache(maxsize=16)
def phonon_table(bath: PhononParams) -> PhononTable:
    return PhononTable(bath)


@dataclass(frozen=True)
class PhononRates:
    """Complex dressed-frame phonon scattering rates, in ueV.

    ``gamma_plus_*`` drives |+> -> |->; ``gamma_minus_*`` the reverse.
    Real parts are scattering rates (>= 0 up to a 1e-10 numerical floor),
    imaginary parts shift the dressed energies.
    """

    gamma0_x: complex
    gamma_plus_x: complex
    gamma_minus_x: complex
    gamma_plus_y: complex
    gamma_minus_y: complex

    def __post_init__(self):
        floor = -1e-10 * max(1.0, self.scale)
        for name in ("gamma0_x", "gamma_plus_x", "gamma_minus_x",
                     "gamma_plus_y", "gamma_minus_y"):
            if getattr(self, name).real < floor:
                raise ParameterError(f"{name} has negative real part beyond the numerical floor")

    @property
    def scale(self) -> float:
        return max(abs(self.gamma0_x), abs(self.gamma_plus_x), abs(self.gamma_minus_x),
                   abs(self.gamma_plus_y), abs(self.gamma_minus_y))

    @classmethod
    def zero(cls) -> "PhononRates":
        return cls(0j, 0j, 0j, 0j, 0j)


def secular_rates(omega_cw: float, delta: float, bath: PhononParams) -> PhononRates:
    """Dressed-frame phonon scattering rates, in ueV.

    Half-Fourier integrals of the correlation functions at the dressed
    splitting eta:

        Gamma0_x    = (w^4 / 2 eta^2)        int G_x
        Gamma+-_x   = (w^2 d^2 / 2 eta^2)    int G_x exp(+- i eta tau)
        Gamma+-_y   = (w^2 / 2)              int G_y exp(+- i eta tau)

    with w = omega_cw and d = delta (renormalized drive convention).
    """
    eta_uev = float(np.hypot(omega_cw, delta))
    if eta_uev <= 0:
        raise ParameterError("secular rates require eta > 0")
    table = phonon_table(bath)
    if bath.alpha == 0.0:
        return PhononRates.zero()
    table.require_converged()
    om = uev_to_ps(omega_cw)
    de = uev_to_ps(delta)
    eta = uev_to_ps(eta_uev)
    # exp(+i eta tau) inside the integral means evaluating at -eta here
    gx0, gxm, gxp = table.half_fourier("x", [0.0, -eta, +eta])
    gym, gyp = table.half_fourier("y", [-eta, +eta])
    to_uev = HBAR_UEV_PS
    return PhononRates(
        gamma0_x=complex(om ** 4 / (2.0 * eta ** 2) * gx0 * to_uev),
        gamma_plus_x=complex(om ** 2 * de ** 2 / (2.0 * eta ** 2) * gxm * to_uev),
        gamma_minus_x=complex(om ** 2 * de ** 2 / (2.0 * eta ** 2) * gxp * to_uev),
        gamma_plus_y=complex(om ** 2 / 2.0 * gym * to_uev),
        gamma_minus_y=complex(om ** 2 / 2.0 * gyp * to_uev),
    )


def weak_coupling_rate(omega_cw: float, delta: float, bath: PhononParams):
    """Leading-order phonon rate and thermal occupation at the splitting.

    Returns (Gamma'_0, n_ph) with Gamma'_0 = (pi/2) (omega_cw/eta)^2 J(eta)
    in ueV and n_ph = 1/(exp(eta/kT) - 1).  The downward (+ -> -) rate is
    Gamma'_0 (n_ph + 1), the upward rate Gamma'_0 n_ph.
    """
    eta_uev = float(np.hypot(omega_cw, delta))
    if eta_uev <= 0:
        raise ParameterError("weak-coupling rate requires eta > 0")
    j_eta = spectral_function(eta_uev, bath)
    rate_uev = 0.5 * np.pi * (omega_cw / eta_uev) ** 2 * ps_to_uev(j_eta)
    kt = thermal_energy_uev(bath.temperature)
    if kt == 0.0:
        n_ph = 0.0
    else:
        n_ph = 1.0 / np.expm1(eta_uev / kt)
    return float(rate_uev), float(n_ph)


def pme_increment(hamiltonian_uev: np.ndarray, amp_B_uev: float,
                  amp_X_uev: float, bath: PhononParams) -> np.ndarray:
    """Polaron dissipator increment for a frozen system Hamiltonian.

    Builds sum_m [K_m rho, X_m] + h.c. with X_m carrying amplitude amp/2
    on the B-X (and optionally X-G) transition for m in {x, y}, and
    K_m = int_0^inf G_m(tau) X_m(-tau) dtau evaluated by exact matrix
    exponentiation of the Hamiltonian (via its eigenbasis).

    Args:
        hamiltonian_uev: 4x4 Hermitian system Hamiltonian, ueV.
        amp_B_uev: renormalized drive amplitude on B-X, ueV.
        amp_X_uev: amplitude on X-G (0 to omit the channel), ueV.
        bath: phonon parameters.

    Returns:
        16x16 generator increment in 1/ps.
    """
    if bath is None or bath.alpha == 0.0:
        return np.zeros((16, 16), dtype=complex)
    table = phonon_table(bath)
    table.require_converged()
    h_ps = uev_to_ps(np.asarray(hamiltonian_uev, dtype=complex))
    evals, vmat = np.linalg.eigh(h_ps)
    wjk = evals[:, None] - evals[None, :]
    amp_b = uev_to_ps(amp_B_uev)
    amp_x = uev_to_ps(amp_X_uev)
    ops = {
        "x": 0.5 * amp_b * core.SIGMA_X_B + 0.5 * amp_x * core.SIGMA_X_X,
        "y": 0.5 * amp_b * core.SIGMA_Y_B + 0.5 * amp_x * core.SIGMA_Y_X,
    }
    out = np.zeros((16, 16), dtype=complex)
    for which, x_op in ops.items():
        ghat = table.half_fourier(which, wjk.ravel()).reshape(4, 4)
        k_op = vmat @ ((vmat.conj().T @ x_op @ vmat) * ghat) @ vmat.conj().T
        out += _commutator_pair(k_op, x_op)
    return out


def _pme_increment_splined(h_ps: np.ndarray, amp_b_ps: float, amp_x_ps: float,
                           table: PhononTable, omega_max: float) -> np.ndarray:
    """Spline-backed variant of :func:`pme_increment` for time-dependent
    Hamiltonians (inputs already in 1/ps)."""
    evals, vmat = np.linalg.eigh(h_ps)
    wjk = (evals[:, None] - evals[None, :]).ravel()
    ops = {
        "x": 0.5 * amp_b_ps * core.SIGMA_X_B + 0.5 * amp_x_ps * core.SIGMA_X_X,
        "y": 0.5 * amp_b_ps * core.SIGMA_Y_B + 0.5 * amp_x_ps * core.SIGMA_Y_X,
    }
    out = np.zeros((16, 16), dtype=complex)
    for which, x_op in ops.items():
        ghat = table.ghat_spline(which, omega_max)(wjk).reshape(4, 4)
        k_op = vmat @ ((vmat.conj().T @ x_op @ vmat) * ghat) @ vmat.conj().T
        out += _commutator_pair(k_op, x_op)
    return out


def _commutator_pair(k_op: np.ndarray, x_op: np.ndarray) -> np.ndarray:
    """Superoperator of [K rho, X] + [X rho, K]^dagger-completion:
    K rho X - X K rho + X rho K^H - rho K^H X."""
    kh = k_op.conj().T
    return (core.sandwich(k_op, x_op) - core.left_mul(x_op @ k_op)
            + core.sandwich(x_op, kh) - core.right_mul(kh @ x_op))


def pme_dissipator(hamiltonian_uev: np.ndarray, omega_cw: float,
                   bath: PhononParams, include_X_drive: bool = False) -> np.ndarray:
    """Full polaron dissipator for a time-independent Hamiltonian, 1/ps.

    ``include_X_drive`` keeps the phonon channel on the X-G transition,
    needed when the weak cw excitation of the ground state is modelled.
    """
    amp_x = omega_cw if include_X_drive else 0.0
    return pme_increment(hamiltonian_uev, omega_cw, amp_x, bath)


def secular_generator(rates: PhononRates, basis: DressedBasis,
                      gamma_X: float, gamma_B: float) -> core.Liouvillian:
    """Dressed-frame generator: radiative channels with dressed weights,
    phonon scattering/dephasing, and the Hermitian phonon shift.

    All inputs in ueV; the returned generator is in 1/ps and propagates the
    interaction-frame density matrix (no coherent drive term remains).
    """
    gx = uev_to_ps(gamma_X)
    gb = uev_to_ps(gamma_B)
    s = basis.c_B_plus ** 2 - basis.c_X_plus ** 2  # delta / eta
    om_over_eta = 2.0 * basis.c_B_plus * basis.c_X_plus
    sig_pm = basis.sigma_pm()
    sig_z = basis.projector("+") - basis.projector("-")
    ket_g = core.ket(core.G)
    ket_y = core.ket(core.Y)
    collapse = [
        (gx, basis.c_X("+") * np.outer(ket_g, basis.ket("+").conj())),
        (gx, basis.c_X("-") * np.outer(ket_g, basis.ket("-").conj())),
        (gx, core.COLLAPSE_GY),
        (gb / 2.0, basis.c_B("+") * np.outer(ket_y, basis.ket("+").conj())),
        (gb / 2.0, basis.c_B("-") * np.outer(ket_y, basis.ket("-").conj())),
        (gb / 2.0, 0.5 * (1.0 - s) * sig_pm),
        (gb / 2.0, 0.5 * (1.0 + s) * sig_pm.conj().T),
        (gb / 2.0, 0.5 * om_over_eta * sig_z),
    ]
    g0 = uev_to_ps(rates.gamma0_x)
    gp = uev_to_ps(rates.gamma_plus_x + rates.gamma_plus_y)
    gm = uev_to_ps(rates.gamma_minus_x + rates.gamma_minus_y)
    collapse += [
        (max(g0.real, 0.0), sig_z),
        (max(gp.real, 0.0), sig_pm.conj().T),
        (max(gm.real, 0.0), sig_pm),
    ]
    h_shift = (0.5 * g0.imag * (core.PROJ[core.X] + core.PROJ[core.B])
               + 0.5 * gp.imag * basis.projector("+")
               + 0.5 * gm.imag * basis.projector("-"))
    return core.assemble_lindblad(h_shift, collapse)


def sideband_efficiency(b: float, purcell: float | None = None):
    """Fraction of emission surviving phonon-sideband removal.

    eta_eff = b^2 for post-emission spectral filtering; with a cavity of
    Purcell factor F_P collecting the zero-phonon line,
    eta_eff_cav = b^2 F_P / (1 + b^2 F_P).

    Returns:
        (eta_eff, eta_eff_cav); the latter is None without a Purcell factor.
    """
    if not 0.0 < b <= 1.0:
        raise ParameterError("b must lie in (0, 1]")
    eta_eff = b * b
    if purcell is None:
        return eta_eff, None
    return eta_eff, eta_eff * purcell / (1.0 + eta_eff * purcell)
