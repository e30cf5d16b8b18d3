"""Hamiltonians, dressed basis and drive/shift algebra."""

import numpy as np
import pytest

from dressedsps import core, system
from dressedsps.exceptions import (DegenerateDressingError, InfeasibleShiftError,
                                   ParameterError, UndefinedStarkShiftError,
                                   ValidityWarning)
from dressedsps.system import (PulseParams, SystemParams, dressed_states,
                               drive_for_shift, hamiltonian_full,
                               hamiltonian_pulsed, hamiltonian_reduced,
                               purcell_scaled, stark_shift)

G = 1.32


def test_params_validation():
    with pytest.raises(ParameterError):
        SystemParams(gamma_X=0.0)
    with pytest.raises(ParameterError):
        SystemParams(omega_cw=-1.0)
    with pytest.raises(ParameterError):
        SystemParams(E_B=-1.0)
    with pytest.warns(ValidityWarning):
        SystemParams(omega_cw=1000.0, E_B=3240.0)


def test_full_hamiltonian_diagonal_limit():
    p = SystemParams(omega_cw=0.0, delta=0.0)
    h = hamiltonian_full(p)
    np.testing.assert_allclose(np.diag(h), [-p.E_B, 0.0, 0.0, 0.0], atol=1e-14)
    assert np.max(np.abs(h - np.diag(np.diag(h)))) == 0.0


def test_full_hamiltonian_matrix_elements():
    p = SystemParams(omega_cw=7.0, delta=3.0)
    h = hamiltonian_full(p)
    # drive couples both rungs with omega_cw / 2
    assert h[core.B, core.X] == pytest.approx(3.5)
    assert h[core.X, core.G] == pytest.approx(3.5)
    assert h[core.X, core.X] == pytest.approx(3.0)
    assert h[core.B, core.B] == pytest.approx(6.0)
    assert np.max(np.abs(h - h.conj().T)) < 1e-12


def test_reduced_hamiltonian_eigenvalues():
    p = SystemParams(omega_cw=5.0, delta=0.0)
    vals = np.linalg.eigvalsh(hamiltonian_reduced(p))
    np.testing.assert_allclose(sorted(vals)[0], -2.5, atol=1e-12)
    np.testing.assert_allclose(sorted(vals)[-1], 2.5, atol=1e-12)
    p = SystemParams(omega_cw=0.0, delta=7.0)
    vals = np.linalg.eigvalsh(hamiltonian_reduced(p))
    np.testing.assert_allclose(sorted(np.abs(vals))[-1], 3.5, atol=1e-12)
    # 3-4-5 triangle
    p = SystemParams(omega_cw=3.0, delta=4.0)
    assert p.eta == pytest.approx(5.0, abs=1e-12)


def test_reduced_hamiltonian_zero_rows():
    p = SystemParams(omega_cw=5.0, delta=2.0)
    h = hamiltonian_reduced(p)
    assert np.all(h[core.G, :] == 0) and np.all(h[:, core.G] == 0)
    assert np.all(h[core.Y, :] == 0) and np.all(h[:, core.Y] == 0)


def test_dressed_states_resonant():
    basis = dressed_states(5.0, 0.0)
    # symmetric / antisymmetric superpositions of |B> and |X>
    np.testing.assert_allclose(basis.ket("+")[[core.B, core.X]],
                               [1 / np.sqrt(2)] * 2, atol=1e-12)
    np.testing.assert_allclose(basis.ket("-")[[core.B, core.X]],
                               [1 / np.sqrt(2), -1 / np.sqrt(2)], atol=1e-12)


def test_dressed_states_far_detuned_limit():
    basis = dressed_states(1e-6, 10.0)
    assert abs(basis.c_B_plus - 1.0) < 1e-12
    assert abs(basis.c_X_minus + 1.0) < 1e-12


def test_dressed_states_345():
    basis = dressed_states(3.0, 4.0)
    assert basis.eta == pytest.approx(5.0)
    assert basis.c_B_plus == pytest.approx(np.sqrt(0.9), abs=1e-12)
    assert basis.c_X_plus == pytest.approx(np.sqrt(0.1), abs=1e-12)


def test_dressed_states_completeness(rng):
    for _ in range(25):
        om, de = rng.uniform(0.1, 50.0), rng.uniform(-50.0, 50.0)
        basis = dressed_states(om, de)
        for br in ("+", "-"):
            assert abs(np.linalg.norm(basis.ket(br)) - 1.0) < 1e-12
        assert abs(np.vdot(basis.ket("+"), basis.ket("-"))) < 1e-12
        both = basis.projector("+") + basis.projector("-")
        np.testing.assert_allclose(both, core.PROJ[core.X] + core.PROJ[core.B],
                                   atol=1e-12)
        assert basis.c_B_plus ** 2 + basis.c_X_plus ** 2 == pytest.approx(1.0, abs=1e-12)


def test_dressed_states_match_reduced_hamiltonian(rng):
    for _ in range(10):
        om, de = rng.uniform(0.5, 30.0), rng.uniform(-30.0, 30.0)
        p = SystemParams(omega_cw=om, delta=de)
        basis = dressed_states(om, de)
        h = hamiltonian_reduced(p)
        for br, energy in (("+", basis.energy_plus), ("-", basis.energy_minus)):
            k = basis.ket(br)
            np.testing.assert_allclose(h @ k, energy * k, atol=1e-12)


def test_dressed_states_degenerate():
    with pytest.raises(DegenerateDressingError):
        dressed_states(0.0, 0.0)


def test_stark_shift_values():
    assert stark_shift(0.0, 5.0) == 0.0
    # omega = delta: shift = (delta/2)(sqrt 2 - 1)
    assert stark_shift(4.0, 4.0) == pytest.approx(2.0 * (np.sqrt(2) - 1), abs=1e-12)
    # far-detuned limit omega^2 / (4 delta)
    assert stark_shift(1.0, 1000.0) == pytest.approx(1.0 / 4000.0, rel=1e-5)
    with pytest.raises(UndefinedStarkShiftError):
        stark_shift(5.0, 0.0)


def test_stark_shift_sign_follows_detuning(rng):
    for _ in range(20):
        om = rng.uniform(0.1, 20.0)
        de = rng.uniform(0.1, 50.0) * rng.choice([-1.0, 1.0])
        assert np.sign(stark_shift(om, de)) == np.sign(de)


def test_drive_for_shift():
    assert drive_for_shift(0.0, 10.0) == 0.0
    # deep ac Stark limit: omega ~ 2 sqrt(shift * delta)
    assert drive_for_shift(0.5, 500.0) == pytest.approx(2 * np.sqrt(0.5 * 500.5), abs=1e-12)
    assert drive_for_shift(0.5, 500.0) == pytest.approx(2 * np.sqrt(0.5 * 500.0), rel=1e-3)
    with pytest.raises(InfeasibleShiftError):
        drive_for_shift(-5.0, 100.0)


def test_shift_drive_roundtrip():
    delta = 100.0 * G
    target = 5.0 * G
    om = drive_for_shift(target, delta)
    assert abs(stark_shift(om, delta) - target) / target < 1e-12
    # negative branch
    target = -5.0 * G
    om = drive_for_shift(target, -delta)
    assert abs(stark_shift(om, -delta) - target) / abs(target) < 1e-12


def test_purcell_scaling():
    p = SystemParams()
    assert purcell_scaled(p, 0.0, 300.0, G).gamma_X == pytest.approx(G)
    # F_P = 10 at kappa = 300 ueV needs g = sqrt(F_P kappa gamma_0 / 4),
    # which sits just above the g/kappa = 0.1 soft limit
    g_coupling = np.sqrt(10 * 300.0 * G / 4.0)
    assert g_coupling == pytest.approx(31.46, abs=0.01)
    with pytest.warns(ValidityWarning):
        scaled = purcell_scaled(p, g_coupling, 300.0, G)
    assert scaled.gamma_X == pytest.approx(11 * G, rel=1e-12)
    assert scaled.gamma_B == p.gamma_B
    with pytest.raises(ParameterError):
        purcell_scaled(p, 10.0, 0.0, G)
    with pytest.warns(ValidityWarning):
        purcell_scaled(p, 40.0, 300.0, G)


def test_pulse_area_and_widths():
    pulse = PulseParams(tau_p=2.0)
    t = np.linspace(-40.0, 60.0, 20001)
    area = np.trapezoid(pulse.amplitude_ps(t), t)
    assert abs(area - np.pi) < 1e-8
    # amplitude FWHM / intensity FWHM = sqrt(2) for a Gaussian
    amp_fwhm = 2.0 * pulse.sigma * np.sqrt(2 * np.log(2))
    assert amp_fwhm / pulse.tau_p == pytest.approx(np.sqrt(2.0), abs=1e-12)


def test_pulsed_hamiltonian_far_from_pulse():
    p = SystemParams(omega_cw=10.0, delta=3.0)
    pulse = PulseParams(tau_p=2.0, center_time=10.0)
    h = hamiltonian_pulsed(p, pulse, t=500.0)
    # equals the reduced Hamiltonian plus a delta/2 shift of the {X, B} block
    frame_shift = 0.5 * p.delta * (core.PROJ[core.X] + core.PROJ[core.B])
    np.testing.assert_allclose(h, hamiltonian_reduced(p) + frame_shift, atol=1e-12)
