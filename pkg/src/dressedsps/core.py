"""Operator algebra, Lindblad generators, propagation and two-time correlations.

Everything lives in the fixed four-state basis (|G>, |X>, |Y>, |B>) =
(ground, X exciton, Y exciton, biexciton), indices 0..3.  Density matrices
are 4x4 complex arrays; generators act on their column-major vectorization
as 16x16 matrices in 1/ps.  Hamiltonians handed to :func:`assemble_lindblad`
must already be expressed in angular-frequency units (1/ps); collapse rates
likewise.

Two-time correlations use the quantum regression theorem: the correlation
surface G(t, tau) = Tr[L exp(L_gen tau)(R rho(t))] is a bilinear form
y(tau)^H u(t) between one adjoint propagation of the left operator and the
trajectory, so a dense surface costs two ODE solves plus a matrix product.
Weighted double integrals of |G|^2 reduce further to a 16x16 quadratic
form, which is what the figure-of-merit layer uses.
"""

from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence
import warnings

import numpy as np
from scipy.integrate import solve_ivp

from .exceptions import HermiticityError, ParameterError, StiffnessError, TruncationWarning

G, X, Y, B = 0, 1, 2, 3
DIM = 4
BASIS_LABELS = ("G", "X", "Y", "B")

HERMITICITY_TOL = 1e-12


def ket(i: int) -> np.ndarray:
    v = np.zeros(DIM, dtype=complex)
    v[i] = 1.0
    return v


def transition(i: int, j: int) -> np.ndarray:
    """Operator |i><j| in the fixed basis."""
    m = np.zeros((DIM, DIM), dtype=complex)
    m[i, j] = 1.0
    return m


# Fixed ladder operators of the cascade.
SIGMA_M_X = transition(G, X)   # |G><X|
SIGMA_P_X = transition(X, G)
SIGMA_M_B = transition(X, B)   # |X><B|
SIGMA_P_B = transition(B, X)
COLLAPSE_GY = transition(G, Y)  # |G><Y|
COLLAPSE_YB = transition(Y, B)  # |Y><B|
SIGMA_X_B = SIGMA_P_B + SIGMA_M_B
SIGMA_Y_B = 1j * (SIGMA_M_B - SIGMA_P_B)
SIGMA_X_X = SIGMA_P_X + SIGMA_M_X
SIGMA_Y_X = 1j * (SIGMA_M_X - SIGMA_P_X)
SIGMA_Z_B = SIGMA_P_B @ SIGMA_M_B - SIGMA_P_X @ SIGMA_M_X
PROJ = tuple(transition(i, i) for i in range(DIM))


def vec(rho: np.ndarray) -> np.ndarray:
    """Column-major vectorization of a 4x4 matrix."""
    return np.asarray(rho, dtype=complex).reshape(-1, order="F")


def unvec(v: np.ndarray) -> np.ndarray:
    return np.asarray(v, dtype=complex).reshape(DIM, DIM, order="F")


def left_mul(a: np.ndarray) -> np.ndarray:
    """Superoperator for rho -> a rho on vectorized matrices."""
    return np.kron(np.eye(DIM), a)


def right_mul(b: np.ndarray) -> np.ndarray:
    """Superoperator for rho -> rho b on vectorized matrices."""
    return np.kron(np.asarray(b).T, np.eye(DIM))


def sandwich(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Superoperator for rho -> a rho b."""
    return np.kron(np.asarray(b).T, a)


def is_hermitian(m: np.ndarray, tol: float = HERMITICITY_TOL) -> bool:
    return bool(np.max(np.abs(m - m.conj().T)) <= tol)


@dataclass
class Liouvillian:
    """Generator acting on vectorized 4x4 density matrices, in 1/ps.

    ``matrix`` is the constant part.  For pulsed problems ``time_part``
    maps an absolute time in ps to an additional 16x16 generator, so the
    full generator at time t is ``matrix + time_part(t)``.
    """

    matrix: np.ndarray
    time_part: Optional[Callable[[float], np.ndarray]] = None

    @property
    def time_dependent(self) -> bool:
        return self.time_part is not None

    def at(self, t: float) -> np.ndarray:
        if self.time_part is None:
            return self.matrix
        return self.matrix + self.time_part(t)

    def __call__(self, rho: np.ndarray, t: float = 0.0) -> np.ndarray:
        return unvec(self.at(t) @ vec(rho))

    def adjoint_matrix(self) -> np.ndarray:
        if self.time_dependent:
            raise ParameterError("adjoint propagation requires a time-independent generator")
        return self.matrix.conj().T


@dataclass
class Trajectory:
    """Times (ps, strictly increasing) and the matching density matrices."""

    times: np.ndarray
    states: np.ndarray  # shape (n, 4, 4)

    def __post_init__(self):
        self.times = np.asarray(self.times, dtype=float)
        self.states = np.asarray(self.states, dtype=complex)
        if self.states.shape != (len(self.times), DIM, DIM):
            raise ParameterError("state count must equal time count")
        if len(self.times) > 1 and np.any(np.diff(self.times) <= 0):
            raise ParameterError("times must be strictly increasing")

    def expectation(self, op: np.ndarray) -> np.ndarray:
        """Tr[op rho(t)] on the grid."""
        return np.einsum("ij,tji->t", np.asarray(op, dtype=complex), self.states)

    def populations(self) -> np.ndarray:
        return np.real(np.einsum("tii->ti", self.states))

    @property
    def vectors(self) -> np.ndarray:
        """States as a 16 x n array of column-major vectorizations."""
        return np.moveaxis(self.states, 0, -1).reshape(DIM * DIM, len(self.times), order="F")


def dissipator_matrix(op: np.ndarray) -> np.ndarray:
    """Superoperator of 2 A rho A+ - A+A rho - rho A+A."""
    a = np.asarray(op, dtype=complex)
    ada = a.conj().T @ a
    return 2.0 * sandwich(a, a.conj().T) - left_mul(ada) - right_mul(ada)


def assemble_lindblad(hamiltonian: np.ndarray,
                      collapse_terms: Sequence[tuple] = (),
                      hermiticity_tol: float = HERMITICITY_TOL) -> Liouvillian:
    """Build -i[H, .] + sum_k (rate_k / 2) D[A_k] as a 16x16 generator.

    Args:
        hamiltonian: Hermitian 4x4 matrix in 1/ps.
        collapse_terms: iterable of ``(rate, operator)`` with rate >= 0 in
            1/ps; the operator itself may carry dimensionless weights.
        hermiticity_tol: entrywise tolerance for the Hermiticity check.

    Raises:
        ParameterError: a collapse rate is negative.
        HermiticityError: the Hamiltonian fails the Hermiticity check.
    """
    h = np.asarray(hamiltonian, dtype=complex)
    if h.shape != (DIM, DIM):
        raise ParameterError(f"hamiltonian must be {DIM}x{DIM}")
    if not is_hermitian(h, hermiticity_tol):
        raise HermiticityError("hamiltonian is not Hermitian within tolerance")
    L = -1j * (left_mul(h) - right_mul(h))
    for rate, op in collapse_terms:
        if rate < 0:
            raise ParameterError(f"collapse rate must be >= 0, got {rate}")
        L = L + (rate / 2.0) * dissipator_matrix(op)
    return Liouvillian(L)


def _solve_linear(matrix: np.ndarray, y0: np.ndarray, t_eval: np.ndarray,
                  rtol: float, atol: float, method: str) -> np.ndarray:
    """Adaptive propagation of dy/dt = matrix @ y sampled on t_eval."""
    if len(t_eval) == 1:
        return y0[:, None].copy()
    sol = solve_ivp(lambda _t, yv: matrix @ yv, (t_eval[0], t_eval[-1]), y0,
                    t_eval=t_eval, rtol=rtol, atol=atol, method=method)
    if not sol.success:
        t_reached = sol.t[-1] if len(sol.t) else t_eval[0]
        raise StiffnessError(
            f"integration stalled at t = {t_reached:.6g} ps: {sol.message}",
            t_reached=t_reached)
    return sol.y


def propagate(generator: Liouvillian, initial: np.ndarray, grid: np.ndarray,
              rtol: float = 1e-8, atol: float = 1e-10,
              method: str = "DOP853") -> Trajectory:
    """Propagate a density matrix on a time grid.

    Adaptive embedded Runge-Kutta (DOP853 by default, "RK45" also accepted)
    with dense output sampled on ``grid``.  Grids must start at t = 0.  For
    a time-dependent generator a fixed-step RK4 sweep over the grid is used
    instead; callers are responsible for supplying a grid that resolves the
    time dependence.

    Raises:
        StiffnessError: step size underflow, reporting the time reached.
    """
    grid = np.asarray(grid, dtype=float)
    if grid[0] != 0.0:
        raise ParameterError("time grid must start at t = 0")
    rho0 = np.asarray(initial, dtype=complex)
    if generator.time_dependent:
        states = _fixed_step_states(generator, vec(rho0), grid)
        return Trajectory(grid, states)
    if not np.all(np.isfinite(generator.matrix)):
        raise ParameterError("generator contains non-finite entries")
    ys = _solve_linear(generator.matrix, vec(rho0), grid, rtol, atol, method)
    states = np.array([unvec(ys[:, k]) for k in range(ys.shape[1])])
    return Trajectory(grid, states)


def _fixed_step_states(generator: Liouvillian, y0: np.ndarray,
                       grid: np.ndarray, substeps: int = 4) -> np.ndarray:
    """Classical RK4 over each grid interval with ``substeps`` sub-intervals."""
    out = np.empty((len(grid), DIM, DIM), dtype=complex)
    y = y0.copy()
    out[0] = unvec(y)
    for k in range(len(grid) - 1):
        t0, t1 = grid[k], grid[k + 1]
        h = (t1 - t0) / substeps
        for s in range(substeps):
            ts = t0 + s * h
            y = _rk4_step(generator, y, ts, h)
        out[k + 1] = unvec(y)
    return out


def _rk4_step(generator: Liouvillian, y: np.ndarray, t: float, h: float) -> np.ndarray:
    k1 = generator.at(t) @ y
    Lm = generator.at(t + h / 2)
    k2 = Lm @ (y + h / 2 * k1)
    k3 = Lm @ (y + h / 2 * k2)
    k4 = generator.at(t + h) @ (y + h * k3)
    return y + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)


def adjoint_propagate(generator: Liouvillian, left_op: np.ndarray,
                      tau_grid: np.ndarray, rtol: float = 1e-8,
                      atol: float = 1e-10, method: str = "DOP853") -> np.ndarray:
    """Propagate y(tau) = exp(L_adj tau) vec(left_op^H) on the tau grid.

    The columns satisfy Tr[left_op exp(L tau)(M)] = y(tau)^H vec(M) for any
    matrix M, which is the regression-theorem readout used below.
    """
    y0 = vec(np.asarray(left_op, dtype=complex).conj().T)
    return _solve_linear(generator.adjoint_matrix(), y0,
                         np.asarray(tau_grid, dtype=float), rtol, atol, method)


def two_time_correlation(generator: Liouvillian, initial: np.ndarray,
                         left_op: np.ndarray, right_op: np.ndarray,
                         t_grid: np.ndarray, tau_grid: np.ndarray,
                         rtol: float = 1e-8, atol: float = 1e-10,
                         trajectory: Optional[Trajectory] = None) -> np.ndarray:
    """Correlation surface G(t, tau) = Tr[left exp(L tau)(right rho(t))].

    At tau = 0 this reduces to the single-time expectation
    Tr[left right rho(t)].  For a time-dependent generator the tau
    evolution follows absolute time t + tau, and each t column is
    propagated separately.

    Returns:
        Complex array of shape (len(t_grid), len(tau_grid)).
    """
    t_grid = np.asarray(t_grid, dtype=float)
    tau_grid = np.asarray(tau_grid, dtype=float)
    if trajectory is None:
        trajectory = propagate(generator, initial, t_grid, rtol=rtol, atol=atol)
    right = np.asarray(right_op, dtype=complex)
    u = left_mul(right) @ trajectory.vectors  # vec(right rho(t)) columns
    if not generator.time_dependent:
        ys = adjoint_propagate(generator, left_op, tau_grid, rtol=rtol, atol=atol)
        return (ys.conj().T @ u).T  # (n_t, n_tau)
    left_vec = vec(np.asarray(left_op, dtype=complex).conj().T).conj()
    surf = np.empty((len(t_grid), len(tau_grid)), dtype=complex)
    for i, t0 in enumerate(t_grid):
        shifted = Liouvillian(generator.matrix,
                              time_part=(lambda tau, _t0=t0: generator.time_part(_t0 + tau)))
        cols = _fixed_step_states(shifted, u[:, i], tau_grid)
        surf[i] = np.array([left_vec @ vec(cols[k]) for k in range(len(tau_grid))])
    return surf


def simpson_weights(x: np.ndarray) -> np.ndarray:
    """Composite Simpson weights on a uniform grid.

    An even number of intervals is required for pure Simpson; for an odd
    count the final interval is handled by the trapezoidal rule.
    """
    x = np.asarray(x, dtype=float)
    n = len(x)
    if n < 2:
        return np.zeros(n)
    h = x[1] - x[0]
    w = np.zeros(n)
    m = n if n % 2 == 1 else n - 1
    if m >= 3:
        w[0] += 1.0
        w[1:m - 1:2] += 4.0
        w[2:m - 1:2] += 2.0
        w[m - 1] += 1.0
        w *= h / 3.0
    if n % 2 == 0:
        w[-2] += h / 2.0
        w[-1] += h / 2.0
    return w


def double_time_integral(surface: np.ndarray, t_grid: np.ndarray,
                         tau_grid: np.ndarray, weight: str = "none",
                         tail_floor: float = 1e-10) -> float:
    """2-D composite quadrature of a correlation surface.

    Args:
        surface: G(t, tau) with t on the first axis.
        weight: "none" integrates G itself (real part); "squared-modulus"
            integrates |G|^2.
        tail_floor: fraction of the surface peak below which the integrand
            at the grid edge must have fallen; otherwise a
            :class:`TruncationWarning` with the edge magnitude is emitted.

    Returns:
        The quadrature value (float).
    """
    surface = np.asarray(surface)
    if weight == "squared-modulus":
        integrand = surface.real ** 2 + surface.imag ** 2
    elif weight == "none":
        integrand = surface.real
    else:
        raise ParameterError(f"unknown weight {weight!r}")
    if not np.all(np.isfinite(integrand)):
        raise ParameterError("surface contains non-finite values")
    peak = np.max(np.abs(integrand)) if integrand.size else 0.0
    if peak > 0:
        edge = max(np.max(np.abs(integrand[-1, :])), np.max(np.abs(integrand[:, -1])))
        if edge > tail_floor * peak:
            warnings.warn(
                f"integrand at grid edge is {edge:.3e} "
                f"({edge / peak:.2e} of peak, floor {tail_floor:.1e}); "
                "extend the grids",
                TruncationWarning, stacklevel=2)
    wt = simpson_weights(np.asarray(t_grid, dtype=float))
    wtau = simpson_weights(np.asarray(tau_grid, dtype=float))
    return float(wt @ integrand @ wtau)


def check_cptp(traj: Trajectory, trace_tol: float = 1e-8,
               herm_tol: float = 1e-10, pos_tol: float = -1e-8) -> dict:
    """Trace / Hermiticity / positivity diagnostics along a trajectory.

    Returns a dict with the worst deviations; raises nothing so tests can
    assert on the numbers directly.
    """
    traces = np.einsum("tii->t", traj.states)
    trace_dev = float(np.max(np.abs(traces - traces[0])))
    herm_dev = float(np.max(np.abs(traj.states - traj.states.conj().transpose(0, 2, 1))))
    eigs = np.linalg.eigvalsh(0.5 * (traj.states + traj.states.conj().transpose(0, 2, 1)))
    min_eig = float(np.min(eigs))
    return {
        "trace_deviation": trace_dev,
        "hermiticity_deviation": herm_dev,
        "min_eigenvalue": min_eig,
        "trace_ok": trace_dev < trace_tol,
        "hermitian_ok": herm_dev < herm_tol,
        "positive_ok": min_eig > pos_tol,
    }
