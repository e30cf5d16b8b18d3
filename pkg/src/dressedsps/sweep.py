"""Parameter sweeps with deterministic CSV output.

A sweep is described by a flat key = value config (or the equivalent CLI
flags); each mode fixes the meaning of the swept variable:

====================  =====================================================
mode                  swept variable
====================  =====================================================
at-drive              omega_cw / gamma_X at zero detuning
stark-detuning        delta / |Delta_ac| (signed) at fixed |Delta_ac|
stark-fixed-delta     omega_cw / delta at fixed detuning
purcell               gamma_X / gamma_0 at fixed drive and detuning (ueV)
pulse-g2              pulse intensity FWHM tau_p in ps
cw-error              delta / |Delta_ac| if delta_ac is set, otherwise
                      omega_cw / gamma_X at zero detuning
phonon-table          no sweep; emits the bath summary table
====================  =====================================================

CSV layout: '#'-prefixed metadata lines recording every default the run
consumed, a header row with the result fields, then one row per sweep
point with 9-significant-digit values and '\n' line endings.  Missing
quantities are emitted as empty fields, never as zeros.  Re-running an
identical spec reproduces the file byte for byte.

The raw/corrected visibility columns are evaluated from the computed
indistinguishability at the model's formal g2 = 0 (the cw model has no
multiphoton channel); the g2_0 column itself stays empty unless the sweep
actually simulates the pulsed purity.
"""

from dataclasses import dataclass, field, fields as dc_fields
from multiprocessing import Pool
from pathlib import Path
from typing import Optional

import numpy as np

from . import __version__
from .analytics import InterferometerParams, visibility_corrected, visibility_raw_mz
from .exceptions import ConfigError, ParameterError
from .fom import SolverOptions, compute_foms, cw_error_rate, _pulsed_dynamics
from .phonons import PhononParams, b_factor, parse_phonons, sideband_efficiency
from .system import (DEFAULT_GAMMA_X_UEV, PulseParams, SystemParams,
                     drive_for_shift, stark_shift)

MODES = ("at-drive", "stark-detuning", "stark-fixed-delta", "purcell",
         "pulse-g2", "cw-error", "phonon-table")

RESULT_FIELDS = ("swept_value", "N", "N_plus", "N_minus", "I", "I_plus",
                 "I_minus", "g2_0", "E_cw", "V_raw", "V", "Delta_ac", "eta",
                 "Omega_cw")

TABLE_FIELDS = ("preset", "alpha_ps2", "omega_b_mev", "temperature_K",
                "B", "eta_eff_pct", "eta_eff_cav_pct")

TABLE_PURCELL = 10.0


@dataclass
class SweepSpec:
    """Resolved sweep description; all energies in ueV, times in ps/ns."""

    mode: str
    start: float = 1.0
    stop: float = 10.0
    points: int = 2
    scale: str = "linear"
    engine: str = "secular"
    gamma_X: float = DEFAULT_GAMMA_X_UEV
    gamma_B: Optional[float] = None          # default: 2 gamma_X
    omega_cw: Optional[float] = None
    delta: Optional[float] = None
    delta_ac: Optional[float] = None
    E_B: float = 3240.0
    T_rep: float = 12.5
    phonons: Optional[PhononParams] = None
    tau_p: float = 2.0
    pulse_area: float = np.pi
    R: float = 0.5
    epsilon: float = 0.0
    T_0: float = 2.0
    rtol: float = 1e-8
    atol: float = 1e-10
    tail_floor: float = 1e-10
    jobs: int = 1
    out: str = "sweep.csv"

    def __post_init__(self):
        if self.mode not in MODES:
            raise ConfigError(f"unknown mode {self.mode!r}; expected one of {MODES}")
        if self.mode != "phonon-table":
            if self.points < 2:
                raise ConfigError("points must be >= 2")
            if self.scale not in ("linear", "log"):
                raise ConfigError("scale must be 'linear' or 'log'")
            if self.scale == "log" and (self.start <= 0 or self.stop <= 0):
                raise ConfigError("log scale requires positive start/stop")
        if self.gamma_B is None:
            self.gamma_B = 2.0 * self.gamma_X
        if self.mode == "stark-detuning" and self.delta_ac is None:
            raise ConfigError("stark-detuning requires delta_ac")
        if self.mode == "stark-fixed-delta" and self.delta is None:
            raise ConfigError("stark-fixed-delta requires delta")
        if self.mode == "purcell" and self.omega_cw is None:
            raise ConfigError("purcell requires omega_cw (ueV)")

    def grid(self) -> np.ndarray:
        if self.scale == "log":
            return np.geomspace(self.start, self.stop, self.points)
        return np.linspace(self.start, self.stop, self.points)

    def solver_options(self) -> SolverOptions:
        return SolverOptions(rtol=self.rtol, atol=self.atol, tail_floor=self.tail_floor)

    def interferometer(self) -> InterferometerParams:
        return InterferometerParams(R=self.R, T=1.0 - self.R, epsilon=self.epsilon,
                                    T_0=self.T_0, T_rep=self.T_rep)


# ---------------------------------------------------------------------------
# config parsing

_FLOAT_KEYS = {"start", "stop", "gamma_X", "gamma_B", "omega_cw", "delta",
               "delta_ac", "E_B", "T_rep", "tau_p", "pulse_area", "R",
               "epsilon", "T_0", "rtol", "atol", "tail_floor", "temperature"}
_INT_KEYS = {"points", "jobs"}
_STR_KEYS = {"mode", "scale", "engine", "phonons", "out"}


def parse_config(path) -> dict:
    """Read a flat ``key = value`` file; '#' starts a comment."""
    values = {}
    text = Path(path).read_text(encoding="utf-8")
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if key in _FLOAT_KEYS:
            try:
                values[key] = float(value)
            except ValueError:
                raise ConfigError(f"{path}:{lineno}: field {key!r} needs a number") from None
        elif key in _INT_KEYS:
            try:
                values[key] = int(value)
            except ValueError:
                raise ConfigError(f"{path}:{lineno}: field {key!r} needs an integer") from None
        elif key in _STR_KEYS:
            values[key] = value
        else:
            raise ConfigError(f"{path}:{lineno}: unknown field {key!r}")
    return values


def build_spec(values: dict, overrides: Optional[dict] = None) -> SweepSpec:
    merged = dict(values)
    for key, val in (overrides or {}).items():
        if val is not None:
            merged[key] = val
    if "mode" not in merged:
        raise ConfigError("config must set a mode")
    temperature = merged.pop("temperature", 4.0)
    bath = merged.pop("phonons", None)
    if isinstance(bath, str):
        bath = parse_phonons(bath, temperature=temperature)
    known = {f.name for f in dc_fields(SweepSpec)}
    unknown = set(merged) - known
    if unknown:
        raise ConfigError(f"unknown fields: {sorted(unknown)}")
    return SweepSpec(phonons=bath, **merged)


# ---------------------------------------------------------------------------
# point evaluation


def _point_params(spec: SweepSpec, x: float) -> SystemParams:
    g = spec.gamma_X
    common = dict(gamma_X=g, gamma_B=spec.gamma_B, E_B=spec.E_B, T_rep=spec.T_rep)
    if spec.mode == "at-drive":
        return SystemParams(omega_cw=x * g, delta=0.0, **common)
    if spec.mode in ("stark-detuning", "cw-error") and spec.delta_ac is not None:
        if x == 0.0:
            raise ParameterError("delta/Delta_ac = 0 is not a valid sweep point")
        mag = abs(spec.delta_ac)
        delta = x * mag
        target = np.sign(x) * mag
        return SystemParams(omega_cw=drive_for_shift(target, delta), delta=delta, **common)
    if spec.mode == "cw-error":
        return SystemParams(omega_cw=x * g, delta=0.0, **common)
    if spec.mode == "stark-fixed-delta":
        return SystemParams(omega_cw=x * spec.delta, delta=spec.delta, **common)
    if spec.mode == "purcell":
        scaled = dict(common)
        scaled["gamma_X"] = x * g
        return SystemParams(omega_cw=spec.omega_cw, delta=spec.delta or 0.0, **scaled)
    if spec.mode == "pulse-g2":
        return SystemParams(omega_cw=spec.omega_cw or 20.0 * g,
                            delta=spec.delta or 0.0, **common)
    raise ConfigError(f"mode {spec.mode!r} has no point parameters")


def evaluate_point(spec: SweepSpec, x: float) -> dict:
    """One sweep point -> dict of RESULT_FIELDS values (None = empty)."""
    params = _point_params(spec, x)
    opts = spec.solver_options()
    row = {name: None for name in RESULT_FIELDS}
    row["swept_value"] = x
    row["Omega_cw"] = params.omega_cw
    row["eta"] = params.eta
    if params.delta != 0.0:
        row["Delta_ac"] = stark_shift(params.omega_cw, params.delta)
    if spec.mode == "pulse-g2":
        pulse = PulseParams(tau_p=x, area=spec.pulse_area)
        g2, n_val = _pulsed_dynamics(params, pulse, spec.phonons, opts)
        row["g2_0"] = g2
        row["N"] = n_val
        return row
    if spec.mode == "cw-error":
        row["E_cw"] = cw_error_rate(params, spec.phonons, opts)
        return row
    result = compute_foms(params, spec.phonons, engine=spec.engine, options=opts)
    row["N"], row["N_plus"], row["N_minus"] = result.n, result.n_plus, result.n_minus
    row["I"], row["I_plus"], row["I_minus"] = result.i, result.i_plus, result.i_minus
    ifo = spec.interferometer()
    v_raw = visibility_raw_mz(result.i, 0.0, ifo)
    row["V_raw"] = v_raw
    row["V"] = visibility_corrected(v_raw, 0.0, ifo)[0]
    return row


def _worker(args):
    spec, x = args
    try:
        return evaluate_point(spec, x), None
    except Exception as exc:  # per-point failures recorded, sweep continues
        return None, f"x = {x:.9g}: {type(exc).__name__}: {exc}"


# ---------------------------------------------------------------------------
# CSV output


def _fmt(value) -> str:
    if value is None:
        return ""
    return f"{value:.9g}"


def _metadata_lines(spec: SweepSpec) -> list:
    bath = spec.phonons
    pairs = [
        ("generator", f"dressedsps {__version__}"),
        ("mode", spec.mode),
        ("engine", spec.engine),
        ("start", _fmt(spec.start)),
        ("stop", _fmt(spec.stop)),
        ("points", str(spec.points)),
        ("scale", spec.scale),
        ("gamma_X_ueV", _fmt(spec.gamma_X)),
        ("gamma_B_ueV", _fmt(spec.gamma_B)),
        ("omega_cw_ueV", _fmt(spec.omega_cw)),
        ("delta_ueV", _fmt(spec.delta)),
        ("delta_ac_ueV", _fmt(spec.delta_ac)),
        ("E_B_ueV", _fmt(spec.E_B)),
        ("T_rep_ns", _fmt(spec.T_rep)),
        ("phonons", "none" if bath is None else bath.preset),
        ("alpha_ps2", "" if bath is None else _fmt(bath.alpha)),
        ("omega_b_meV", "" if bath is None else _fmt(bath.omega_b)),
        ("temperature_K", "" if bath is None else _fmt(bath.temperature)),
        ("tau_p_ps", _fmt(spec.tau_p)),
        ("pulse_area_rad", _fmt(spec.pulse_area)),
        ("R", _fmt(spec.R)),
        ("T", _fmt(1.0 - spec.R)),
        ("epsilon", _fmt(spec.epsilon)),
        ("T_0_ns", _fmt(spec.T_0)),
        ("rtol", _fmt(spec.rtol)),
        ("atol", _fmt(spec.atol)),
        ("tail_floor", _fmt(spec.tail_floor)),
        ("jobs", str(spec.jobs)),
        ("v_columns_assume_g2", "0 (cw model has no multiphoton channel)"),
    ]
    return [f"# {key} = {val}" for key, val in pairs]


@dataclass
class SweepResult:
    path: Path
    rows: list
    failures: list = field(default_factory=list)

    @property
    def exit_code(self) -> int:
        if not self.failures:
            return 0
        return 2 if not self.rows else 3


def run_sweep(spec: SweepSpec, out=None, jobs: Optional[int] = None) -> SweepResult:
    """Run all sweep points and write the CSV; failed points are recorded
    and the sweep continues."""
    out_path = Path(out if out is not None else spec.out)
    if spec.mode == "phonon-table":
        rows = phonon_table_rows()
        _write_table(out_path, rows)
        return SweepResult(out_path, rows)
    xs = spec.grid()
    n_jobs = jobs if jobs is not None else spec.jobs
    n_jobs = max(1, min(n_jobs, len(xs)))
    tasks = [(spec, float(x)) for x in xs]
    if n_jobs > 1:
        with Pool(processes=n_jobs) as pool:
            outcomes = pool.map(_worker, tasks)
    else:
        outcomes = [_worker(t) for t in tasks]
    rows = [row for row, _err in outcomes if row is not None]
    failures = [err for _row, err in outcomes if err is not None]
    lines = _metadata_lines(spec)
    lines.append(",".join(RESULT_FIELDS))
    for row, _err in outcomes:
        if row is not None:
            lines.append(",".join(_fmt(row[name]) for name in RESULT_FIELDS))
    out_path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return SweepResult(out_path, rows, failures)


def phonon_table_rows() -> list:
    """The three pinned bath presets with <B> and sideband efficiencies."""
    rows = []
    for name in ("I", "II", "III"):
        bath = PhononParams.from_preset(name)
        b = b_factor(bath)
        eta_eff, eta_cav = sideband_efficiency(b, purcell=TABLE_PURCELL)
        rows.append({
            "preset": name,
            "alpha_ps2": bath.alpha,
            "omega_b_mev": bath.omega_b,
            "temperature_K": bath.temperature,
            "B": b,
            "eta_eff_pct": 100.0 * eta_eff,
            "eta_eff_cav_pct": 100.0 * eta_cav,
        })
    return rows


def _write_table(out_path: Path, rows: list):
    lines = [f"# generator = dressedsps {__version__}",
             f"# purcell_factor = {_fmt(TABLE_PURCELL)}",
             ",".join(TABLE_FIELDS)]
    for row in rows:
        lines.append(",".join(
            row[name] if isinstance(row[name], str) else _fmt(row[name])
            for name in TABLE_FIELDS))
    out_path.write_text("\n".join(lines) + "\n", encoding="utf-8")


# ---------------------------------------------------------------------------
# optimal-detuning search


@dataclass(frozen=True)
class OptimumResult:
    delta_opt: float        # ueV
    i_max: float
    interior: bool          # False: maximum sits on a search boundary
    ratio_opt: float        # delta_opt / |Delta_ac|


def _dominant_sidepeak_i(delta_ac: float, ratio: float, bath, gamma_X: float,
                         gamma_B: Optional[float], engine: str,
                         options: SolverOptions) -> float:
    delta = ratio * abs(delta_ac)
    params = SystemParams(gamma_X=gamma_X,
                          gamma_B=gamma_B if gamma_B is not None else 2 * gamma_X,
                          omega_cw=drive_for_shift(np.sign(ratio) * abs(delta_ac), delta),
                          delta=delta)
    result = compute_foms(params, bath, engine=engine, options=options)
    return result.i_minus if ratio > 0 else result.i_plus


def find_optimal_detuning(delta_ac: float, bath: Optional[PhononParams],
                          gamma_X: float = DEFAULT_GAMMA_X_UEV,
                          gamma_B: Optional[float] = None,
                          lo: float = 2.0, hi: float = 60.0,
                          coarse_points: int = 13, rel_tol: float = 1e-3,
                          engine: str = "secular",
                          options: Optional[SolverOptions] = None) -> OptimumResult:
    """Locate the detuning maximizing the dominant-sidepeak
    indistinguishability at fixed shift magnitude.

    A coarse log-spaced scan of delta / |Delta_ac| over [lo, hi] brackets
    the maximum, refined by golden-section search.  Without phonons the
    indistinguishability grows monotonically with detuning, so the result
    carries ``interior = False`` and sits at the upper boundary.
    """
    if lo <= 0 or hi <= lo:
        raise ParameterError("need 0 < lo < hi")
    opts = options or SolverOptions()

    def objective(ratio: float) -> float:
        return _dominant_sidepeak_i(delta_ac, ratio, bath, gamma_X, gamma_B,
                                    engine, opts)

    ratios = np.geomspace(lo, hi, coarse_points)
    values = np.array([objective(r) for r in ratios])
    k = int(np.argmax(values))
    if k in (0, len(ratios) - 1):
        return OptimumResult(delta_opt=ratios[k] * abs(delta_ac), i_max=float(values[k]),
                             interior=False, ratio_opt=float(ratios[k]))
    a, b = ratios[k - 1], ratios[k + 1]
    inv_phi = (np.sqrt(5.0) - 1.0) / 2.0
    c = b - inv_phi * (b - a)
    d = a + inv_phi * (b - a)
    fc, fd = objective(c), objective(d)
    while (b - a) > rel_tol * abs(ratios[k]):
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - inv_phi * (b - a)
            fc = objective(c)
        else:
            a, c, fc = c, d, fd
            d = a + inv_phi * (b - a)
            fd = objective(d)
    ratio_best = 0.5 * (a + b)
    i_best = objective(ratio_best)
    if i_best < max(values[0], values[-1]):
        # golden refinement may not beat a boundary in pathological cases
        k = int(np.argmax([values[0], values[-1]]))
        edge = ratios[0] if k == 0 else ratios[-1]
        return OptimumResult(delta_opt=edge * abs(delta_ac),
                             i_max=float(max(values[0], values[-1])),
                             interior=False, ratio_opt=float(edge))
    return OptimumResult(delta_opt=ratio_best * abs(delta_ac), i_max=float(i_best),
                         interior=True, ratio_opt=float(ratio_best))
