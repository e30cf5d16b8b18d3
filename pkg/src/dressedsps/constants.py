"""Physical constants and unit conversions.

Internal convention: energies in ueV, times in ps.  Angular frequencies in
1/ps follow from w = E / hbar with hbar expressed in ueV ps, so that e.g.
a 1.32 ueV decay rate corresponds to 0.002006 1/ps.
"""

HBAR_UEV_PS = 658.2119
"""hbar in ueV ps."""

KB_UEV_PER_K = 86.17333262
"""Boltzmann constant in ueV per kelvin."""


def uev_to_ps(energy_uev):
    """Convert an energy/rate in ueV to an angular frequency in 1/ps."""
    return energy_uev / HBAR_UEV_PS


def ps_to_uev(omega_ps):
    """Convert an angular frequency in 1/ps back to ueV."""
    return omega_ps * HBAR_UEV_PS


def thermal_energy_uev(temperature_k):
    """k_B T in ueV."""
    return KB_UEV_PER_K * temperature_k
