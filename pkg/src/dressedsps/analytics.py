"""Closed-form benchmarks and two-photon-interference visibility algebra.

Three groups live here:

1. The exact solution of the resonantly dressed cascade (zero detuning,
   biexciton decaying twice as fast as the exciton, no phonons), used as
   an independent oracle for the numerical engines.  In the well-dressed
   limit it gives N = 1/2, I = 11/21 for the total spectrum and
   N+- = 1/4, I+- = 2/3 per sidepeak.

2. Adiabatic elimination of the biexciton for far-detuned driving, which
   maps the dressed source onto a two-level emitter with extra pure
   dephasing and yields the ceiling I ~ delta / (delta + Delta_ac).

3. The peak-area and visibility algebra for two-photon-interference
   measurements, both for the single-source unbalanced Mach-Zehnder setup
   and for the two-source Hong-Ou-Mandel setup.  The two normalizations
   differ: with distinguishable single photons the MZ visibility drops to
   zero while the ideal HOM visibility drops to 1/2.
"""

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional
import warnings

import numpy as np
from scipy.integrate import quad
from scipy.special import erf

from .constants import uev_to_ps
from .exceptions import ParameterError, ValidityWarning


# ---------------------------------------------------------------------------
# exact resonantly dressed solution


@dataclass(frozen=True)
class AnalyticATState:
    """Closed-form state functions of the resonantly dressed cascade.

    Valid for zero detuning, gamma_B = 2 gamma_X and no phonon coupling,
    starting from |X> at t = 0.  Dressed populations are exactly
    rho_+ = rho_- = exp(-gamma_X t) / 2.  Frequencies are in 1/ps, times
    in ps.
    """

    omega: float          # drive amplitude, 1/ps
    gamma: float          # exciton decay rate, 1/ps
    w0: float
    omega_tilde: complex      # sqrt(omega^2 - gamma^2/4)
    omega_tilde_prime: complex  # sqrt(omega^2 - gamma^2/16)
    n: float
    i: float
    i_pm: Optional[float]

    def a_pm(self, t, sign):
        pref = (self.omega ** 2 / 2.0) / (self.omega ** 2 + self.gamma ** 2 / 2.0)
        coef = 1.0 - sign * 1j * 3.0 * self.gamma / (4.0 * self.omega_tilde_prime)
        return pref * coef * np.exp((-0.75 * self.gamma + sign * 1j * self.omega_tilde_prime)
                                    * np.asarray(t, dtype=complex))

    def rho_x(self, t):
        return 0.5 * np.exp(-self.gamma * np.asarray(t, dtype=complex)) * (
            self.w0 + self.a_pm(t, +1) + self.a_pm(t, -1))

    def rho_bx(self, t):
        g, om = self.gamma, self.omega
        drift = om ** 2 * g / (om ** 2 + g ** 2 / 2.0)
        return (1j * np.exp(-g * np.asarray(t, dtype=complex)) / (2.0 * om)) * (
            (g / 4.0 + 1j * self.omega_tilde_prime) * self.a_pm(t, +1)
            + (g / 4.0 - 1j * self.omega_tilde_prime) * self.a_pm(t, -1)
            - drift)

    def rho_b(self, t):
        return np.exp(-self.gamma * np.asarray(t, dtype=complex)) - self.rho_x(t)

    def c_pm(self, t, sign):
        cos_phi = self.omega_tilde / self.omega
        tan_phi = (self.gamma / (2.0 * self.omega)) / cos_phi
        return 0.5 * (self.rho_x(t) * (1.0 - sign * 1j * tan_phi)
                      - sign * self.rho_bx(t) / cos_phi)

    def tau_integrated_coherence(self, t):
        """T(t): the tau integral of |g1(t, tau)|^2, exact."""
        g = self.gamma
        ot = self.omega_tilde
        cp, cm = self.c_pm(t, +1), self.c_pm(t, -1)
        d_diag_p = 1.5 * g - 0.5j * (ot - np.conj(ot))
        d_diag_m = 1.5 * g + 0.5j * (ot - np.conj(ot))
        d_cross_p = 1.5 * g - 0.5j * (ot + np.conj(ot))
        d_cross_m = 1.5 * g + 0.5j * (ot + np.conj(ot))
        val = (np.abs(cp) ** 2 / d_diag_p + np.abs(cm) ** 2 / d_diag_m
               + cp * np.conj(cm) / d_cross_p + cm * np.conj(cp) / d_cross_m)
        return val.real

    def g1(self, t, tau):
        """First-order coherence <s+(t) s(t+tau)> / gamma_X."""
        tau = np.asarray(tau, dtype=complex)
        return np.exp(-0.75 * self.gamma * tau) * (
            self.c_pm(t, +1) * np.exp(0.5j * self.omega_tilde * tau)
            + self.c_pm(t, -1) * np.exp(-0.5j * self.omega_tilde * tau))

    def f0(self, t):
        return (self.rho_x(t) - self.rho_bx(t)) / np.sqrt(2.0)

    def d_pm(self, t, sign):
        g, om, ot = self.gamma, self.omega, self.omega_tilde
        f0 = self.f0(t)
        return (-1j * f0 / (2.0 * om)
                + sign * 0.5j * (np.exp(-g * np.asarray(t, dtype=complex)) / (np.sqrt(2.0) * ot)
                                 - (f0 / ot) * (1.0 - 1j * g / (2.0 * om))))

    def sidepeak_kernel(self, t):
        """S(t): the tau-integrated sidepeak coherence kernel."""
        g, om, ot = self.gamma, self.omega, self.omega_tilde
        dp, dm = self.d_pm(t, +1), self.d_pm(t, -1)
        lead = (2.0 * om / (3.0 * g)) * (np.abs(dp) ** 2 * (om - ot)
                                         + np.abs(dm) ** 2 * (om + ot))
        cross = dp * np.conj(dm) * (g / 2.0 - 1j * ot) / (3.0 * g - 2j * ot)
        return (lead + g * (cross + np.conj(cross))).real

    def g1_sidepeak(self, t, tau):
        g, om, ot = self.gamma, self.omega, self.omega_tilde
        tau = np.asarray(tau, dtype=complex)
        return (np.exp(-0.75 * g * tau) / np.sqrt(2.0)) * (
            self.d_pm(t, +1) * np.exp(0.5j * ot * tau) * (1j * (om - ot) + g / 2.0)
            + self.d_pm(t, -1) * np.exp(-0.5j * ot * tau) * (1j * (om + ot) + g / 2.0))


def analytic_at(omega_cw: float, gamma_X: float, rtol: float = 1e-8,
                require_sidepeaks: bool = False) -> AnalyticATState:
    """Exact figures-of-merit of the resonantly dressed cascade.

    Args:
        omega_cw: drive amplitude, ueV.
        gamma_X: exciton decay rate, ueV (the biexciton decays at twice
            this rate).
        rtol: relative tolerance of the time quadratures.
        require_sidepeaks: raise instead of returning i_pm = None when the
            dressing does not exceed the damping (omega_cw <= gamma_X / 2),
            where the sidepeak quantities are undefined.

    Returns:
        AnalyticATState with n, i and (when defined) i_pm filled in.
    """
    if omega_cw <= 0 or gamma_X <= 0:
        raise ParameterError("omega_cw and gamma_X must be > 0")
    om = uev_to_ps(omega_cw)
    g = uev_to_ps(gamma_X)
    w0 = (om ** 2 + g ** 2) / (om ** 2 + g ** 2 / 2.0)
    n_val = w0 / 2.0 + (5.0 * g ** 2 * om ** 2 / 4.0) / (
        (om ** 2 + g ** 2 / 2.0) * (om ** 2 + 3.0 * g ** 2))
    omega_tilde = np.sqrt(complex(om ** 2 - g ** 2 / 4.0))
    omega_tilde_prime = np.sqrt(complex(om ** 2 - g ** 2 / 16.0))
    state = AnalyticATState(om, g, w0, omega_tilde, omega_tilde_prime,
                            n=n_val, i=np.nan, i_pm=None)
    horizon = 60.0 / g
    period = 2.0 * np.pi / max(abs(omega_tilde_prime.real), g)
    i_int = _segmented_quad(state.tau_integrated_coherence, horizon, period, rtol)
    i_val = 2.0 * g ** 2 * i_int / n_val ** 2
    sidepeaks_defined = omega_tilde.imag == 0.0 and omega_tilde.real > 0.0
    if not sidepeaks_defined and require_sidepeaks:
        raise ParameterError(
            "sidepeak quantities undefined for omega_cw <= gamma_X / 2 "
            "(dressing must exceed the damping)")
    i_pm_val = None
    if sidepeaks_defined:
        s_int = _segmented_quad(state.sidepeak_kernel, horizon, period, rtol)
        i_pm_val = 8.0 * g ** 2 * s_int
    return AnalyticATState(om, g, w0, omega_tilde, omega_tilde_prime,
                           n=n_val, i=i_val, i_pm=i_pm_val)


def _segmented_quad(func, horizon: float, period: float, rtol: float) -> float:
    """Adaptive quadrature in segments of ~40 oscillation periods, so the
    subdivision limit is never exhausted by a long oscillatory tail."""
    seg = min(horizon, 40.0 * period)
    edges = np.arange(0.0, horizon + seg, seg)
    edges[-1] = horizon
    total = 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        val, _ = quad(func, lo, hi, epsrel=rtol, epsabs=1e-15, limit=400)
        total += val
    return total


# ---------------------------------------------------------------------------
# adiabatic elimination (far-detuned driving)


def adiabatic_fom(omega_cw: float, delta: float, gamma_X: float, gamma_B: float):
    """Far-detuned approximation after eliminating the biexciton.

    The drive admixture A = omega_cw / (2 delta) turns biexciton decay
    into pure dephasing of the emitter with rate gamma_eff = A^2 gamma_B/2,
    giving I = 1 / (1 + (gamma_B / 2 gamma_X) A^2) and N ~ I to the same
    order.

    Returns:
        (i_approx, n_approx, gamma_eff_dephasing_uev)

    Raises:
        ParameterError: delta = 0.
    """
    if delta == 0.0:
        raise ParameterError("adiabatic elimination requires delta != 0")
    if abs(delta) < 5.0 * omega_cw:
        warnings.warn(
            f"|delta| = {abs(delta):g} ueV is not >> omega_cw = {omega_cw:g} "
            "ueV; the adiabatic elimination is marginal", ValidityWarning,
            stacklevel=2)
    admix = omega_cw / (2.0 * delta)
    i_approx = 1.0 / (1.0 + (gamma_B / (2.0 * gamma_X)) * admix ** 2)
    gamma_eff = admix ** 2 * gamma_B / 2.0
    return i_approx, i_approx, gamma_eff


# ---------------------------------------------------------------------------
# pulsed-excitation purity approximation


@lru_cache(maxsize=1)
def gaussian_pulse_factor() -> float:
    """Shape factor eta_G = (2 ln 2)^(-1/2) int_0^inf cos^2(pi erf(x)/2) dx."""
    val, _ = quad(lambda x: np.cos(0.5 * np.pi * erf(x)) ** 2, 0.0, 8.0,
                  epsrel=1e-10, limit=200)
    return float(val / np.sqrt(2.0 * np.log(2.0)))


def g2_pulse_approx(tau_p: float, gamma_X: float, n: float) -> float:
    """Short-pulse re-excitation estimate g2[0] ~ eta_G gamma_X tau_p / N.

    Valid when both the dressed Rabi period and the radiative lifetime are
    long compared to the pulse width.
    """
    if tau_p < 0:
        raise ParameterError("tau_p must be >= 0")
    if n <= 0:
        raise ParameterError("n must be > 0")
    return gaussian_pulse_factor() * uev_to_ps(gamma_X) * tau_p / n


# ---------------------------------------------------------------------------
# interferometer algebra


@dataclass(frozen=True)
class InterferometerParams:
    """Unbalanced interferometer description.

    Attributes:
        R: beam-splitter intensity reflectance.
        T: intensity transmittance (must satisfy R + T = 1).
        epsilon: fringe-contrast defect in [0, 1); interference terms are
            weighted by (1 - epsilon)^2.
        T_0: arm delay, ns.
        T_rep: laser repetition period, ns.
    """

    R: float = 0.5
    T: float = 0.5
    epsilon: float = 0.0
    T_0: float = 2.0
    T_rep: float = 12.5

    def __post_init__(self):
        if not 0.0 <= self.R <= 1.0 or not 0.0 <= self.T <= 1.0:
            raise ParameterError("R and T must lie in [0, 1]")
        if abs(self.R + self.T - 1.0) > 1e-12:
            raise ParameterError("R + T must equal 1 (lossless beam splitters)")
        if not 0.0 <= self.epsilon < 1.0:
            raise ParameterError("epsilon must lie in [0, 1)")

    @property
    def chi_cor(self) -> float:
        """Imperfection correction (R^2 + T^2) / (2 R T (1 - epsilon)^2)."""
        if self.R == 0.0 or self.T == 0.0:
            raise ParameterError("chi_cor is singular for R or T equal to 0")
        return (self.R ** 2 + self.T ** 2) / (2.0 * self.R * self.T
                                              * (1.0 - self.epsilon) ** 2)

    def check_timescales(self, gamma_X: float):
        """Warn when the arm delay or repetition period crowd the lifetime."""
        lifetime_ns = 1e-3 / uev_to_ps(gamma_X)
        if self.T_0 < 10.0 * lifetime_ns:
            warnings.warn("arm delay T_0 is not >> the emitter lifetime",
                          ValidityWarning, stacklevel=2)
        if self.T_rep - 3.0 * self.T_0 < 10.0 * lifetime_ns:
            warnings.warn("T_rep - 3 T_0 is not >> the emitter lifetime",
                          ValidityWarning, stacklevel=2)


def mz_peak_areas(n: float, indist: float, g2_0: float,
                  ifo: InterferometerParams):
    """Coincidence-histogram peak areas (per pulse cycle) for the MZ setup.

    Returns:
        (a0, a_pm): the zero-delay peak and each neighbouring peak,
        normalized to the collected-cycle count.
    """
    rt = ifo.R * ifo.T
    sym = 0.5 * (ifo.R ** 2 + ifo.T ** 2)
    a0 = rt * n ** 2 * (sym * (1.0 + 2.0 * g2_0)
                        - rt * (1.0 - ifo.epsilon) ** 2 * indist)
    a_pm = rt * n ** 2 * sym * (1.0 + g2_0)
    return a0, a_pm


def visibility_raw_mz(indist: float, g2_0: float, ifo: InterferometerParams) -> float:
    """Raw MZ visibility (I/chi_cor - g2) / (1 + g2)."""
    return (indist / ifo.chi_cor - g2_0) / (1.0 + g2_0)


def visibility_corrected(v_raw: float, g2_0: float, ifo: InterferometerParams):
    """Setup-corrected visibility and the extracted indistinguishability.

    Uses the exact inversion (not its small-g2 expansion):
    I = chi_cor [(1 + g2) V_raw + g2] and V = (I - g2) / (1 + g2).
    """
    indist = ifo.chi_cor * ((1.0 + g2_0) * v_raw + g2_0)
    v = (indist - g2_0) / (1.0 + g2_0)
    return v, indist


def visibility_hom(indist: float, g2_0: float, ifo: InterferometerParams):
    """Two-source HOM visibility and peak areas (per N^2 N_0).

    V = 2 R T [1 + I (1-eps)^2 - g2]; for an ideal setup this gives 1 for
    perfectly indistinguishable photons and 1/2 for distinguishable ones.

    Returns:
        (v_raw_hom, a0_hom, a_pm_hom) with areas normalized by N^2 N_0.
    """
    mark = (1.0 - ifo.epsilon) ** 2 * indist - g2_0
    a0 = ifo.R ** 2 + ifo.T ** 2 - 2.0 * ifo.R * ifo.T * mark
    a_pm = 1.0
    v = 2.0 * ifo.R * ifo.T * (1.0 + mark)
    return v, a0, a_pm
