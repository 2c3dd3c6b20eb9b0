"""Config-driven scenario runner: series computation, figure presets, sweeps.

A scenario is described by a JSON-compatible dict (bath family + temperature,
drives, initial composite state, optional second state for distance runs, a
uniform time grid, and the list of requested output series).  ``run_scenario``
produces a RunReport holding the sampled series, Markovianity verdicts for the
composite and reduced levels, and annotations (non-linear-map notes, singular
rate samples, renormalization warnings).

Reports serialize to CSV (first column time, '#' comment header, 17
significant digits, NA for singular samples, '\\n' endings — byte-identical
across runs of the same config) or JSON.

Two models are supported:

* ``dephasing`` — the exact diagonal-coupling solution (default);
* ``sx_lindblad`` — the transverse-coupling weak-limit cascade at T=0
  (constant drives with eps1 = eps2 > J > 0 required).
"""

import json
import math
import warnings
from dataclasses import dataclass

import numpy as np

from .casestudy import CaseStudyParams, build_generator, integrate
from .drive import DriveProfile, PiecewiseConstant
from .dynamics import (ReducedParameters, composite_trajectory,
                       effective_rates_trajectory, is_product_or_uncoupled,
                       reduced_trajectory)
from .errors import ConfigError
from .markov import (MarkovVerdict, blp_witness, reduced_trace_distance,
                     rhp_witness, trace_distance)
from .spectral import (DEFAULT_QUADRATURE, Discrete, Lorentzian, Ohmic,
                       PowerLaw, QuadratureConfig, exponent_trajectory,
                       rate_trajectory, shift_trajectory)
from .states import bell_vector, density_from_vector, partial_trace_aux_traj, product_vector

_SERIES_DEPHASING = ("gamma", "Gamma", "shift", "gamma_tilde", "j_tilde",
                     "gamma_aux", "composite", "reduced",
                     "d_composite", "d_reduced", "blp", "rhp")
_SERIES_LINDBLAD = ("composite", "reduced", "d_composite", "d_reduced", "blp")
_PAIR_NEEDED = frozenset({"d_composite", "d_reduced", "blp"})

_NONLINEAR_NOTE = ("reduced map non-linear (entangled initial state with "
                   "nonzero TSS-TSS coupling); CPTP not guaranteed")


# ---------------------------------------------------------------------------
# config parsing

def _fail(fieldpath, msg):
    raise ConfigError(f"config field '{fieldpath}': {msg}")


def _as_float(x, fieldpath):
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        _fail(fieldpath, f"expected a number, got {x!r}")
    return float(x)


def _amplitude(x, fieldpath):
    """An amplitude is a real number or an [re, im] pair."""
    if isinstance(x, (int, float)) and not isinstance(x, bool):
        return complex(x)
    if isinstance(x, (list, tuple)) and len(x) == 2:
        return complex(_as_float(x[0], fieldpath), _as_float(x[1], fieldpath))
    _fail(fieldpath, f"expected number or [re, im] pair, got {x!r}")


def _amp_echo(z):
    return [z.real, z.imag]


def _parse_spectral(spec, fieldpath="spectral"):
    if not isinstance(spec, dict):
        _fail(fieldpath, "expected an object with a 'family' key")
    fam = spec.get("family")
    known = {"ohmic", "power_law", "lorentzian", "discrete"}
    if fam not in known:
        _fail(f"{fieldpath}.family", f"expected one of {sorted(known)}, got {fam!r}")
    allowed = {
        "ohmic": {"family", "eta", "omega_c"},
        "power_law": {"family", "eta", "s", "omega_c"},
        "lorentzian": {"family", "eta", "peak", "width"},
        "discrete": {"family", "weights", "frequencies"},
    }[fam]
    extra = set(spec) - allowed
    if extra:
        _fail(fieldpath, f"unknown keys for family {fam!r}: {sorted(extra)}")
    try:
        if fam == "ohmic":
            sd = Ohmic(eta=_as_float(spec.get("eta", 0.0), f"{fieldpath}.eta"),
                       omega_c=_as_float(spec.get("omega_c", 1.0), f"{fieldpath}.omega_c"))
        elif fam == "power_law":
            sd = PowerLaw(eta=_as_float(spec.get("eta", 0.0), f"{fieldpath}.eta"),
                          s=_as_float(spec.get("s", 0.0), f"{fieldpath}.s"),
                          omega_c=_as_float(spec.get("omega_c", 1.0), f"{fieldpath}.omega_c"))
        elif fam == "lorentzian":
            sd = Lorentzian(eta=_as_float(spec.get("eta", 0.0), f"{fieldpath}.eta"),
                            peak=_as_float(spec.get("peak", 0.0), f"{fieldpath}.peak"),
                            width=_as_float(spec.get("width", 0.0), f"{fieldpath}.width"))
        else:
            sd = Discrete(weights=tuple(spec.get("weights", ())),
                          frequencies=tuple(spec.get("frequencies", ())))
    except ConfigError as exc:
        _fail(fieldpath, str(exc))
    return sd


def _spectral_echo(sd):
    if isinstance(sd, Ohmic):
        return {"family": "ohmic", "eta": sd.eta, "omega_c": sd.omega_c}
    if isinstance(sd, PowerLaw):
        return {"family": "power_law", "eta": sd.eta, "s": sd.s, "omega_c": sd.omega_c}
    if isinstance(sd, Lorentzian):
        return {"family": "lorentzian", "eta": sd.eta, "peak": sd.peak, "width": sd.width}
    return {"family": "discrete", "weights": list(sd.weights),
            "frequencies": list(sd.frequencies)}


def _parse_drive_term(x, fieldpath):
    if isinstance(x, dict):
        bp = x.get("breakpoints")
        vals = x.get("values")
        if not isinstance(bp, (list, tuple)) or not isinstance(vals, (list, tuple)):
            _fail(fieldpath, "piecewise drive needs 'breakpoints' and 'values' lists")
        try:
            return PiecewiseConstant(tuple(bp), tuple(vals))
        except ConfigError as exc:
            _fail(fieldpath, str(exc))
    return PiecewiseConstant.constant(_as_float(x, fieldpath))


def _drive_term_echo(pc):
    if len(pc.values) == 1:
        return pc.values[0]
    return {"breakpoints": list(pc.breakpoints), "values": list(pc.values)}


def _parse_state(spec, fieldpath):
    """Parse a composite-state spec into a validated 4x4 density matrix."""
    if not isinstance(spec, dict):
        _fail(fieldpath, "expected an object with a 'kind' key")
    kind = spec.get("kind")
    if kind == "product":
        for key in ("qubit", "aux"):
            if not (isinstance(spec.get(key), (list, tuple)) and len(spec[key]) == 2):
                _fail(f"{fieldpath}.{key}", "expected two amplitudes")
        q = [_amplitude(a, f"{fieldpath}.qubit[{i}]") for i, a in enumerate(spec["qubit"])]
        x = [_amplitude(a, f"{fieldpath}.aux[{i}]") for i, a in enumerate(spec["aux"])]
        try:
            vec = product_vector(q, x)
        except ConfigError as exc:
            _fail(fieldpath, str(exc))
        echo = {"kind": "product", "qubit": [_amp_echo(a) for a in q],
                "aux": [_amp_echo(a) for a in x]}
        return density_from_vector(vec), echo
    if kind == "bell":
        try:
            vec = bell_vector(spec.get("name"))
        except ConfigError as exc:
            _fail(f"{fieldpath}.name", str(exc))
        return density_from_vector(vec), {"kind": "bell", "name": spec["name"]}
    if kind == "matrix":
        m = spec.get("matrix")
        if not (isinstance(m, (list, tuple)) and len(m) == 4
                and all(isinstance(r, (list, tuple)) and len(r) == 4 for r in m)):
            _fail(f"{fieldpath}.matrix", "expected a 4x4 nested list")
        rho = np.array([[_amplitude(m[i][j], f"{fieldpath}.matrix[{i}][{j}]")
                         for j in range(4)] for i in range(4)])
        tr = np.trace(rho).real
        if abs(tr - 1.0) > 1e-6:
            _fail(f"{fieldpath}.matrix", f"trace is {tr!r}, expected 1")
        if abs(tr - 1.0) > 1e-9:
            warnings.warn(f"{fieldpath}.matrix renormalized (trace deviation {abs(tr - 1.0):.2e})")
            rho = rho / tr
        if np.max(np.abs(rho - rho.conj().T)) > 1e-12:
            _fail(f"{fieldpath}.matrix", "not Hermitian")
        if np.linalg.eigvalsh(rho).min() < -1e-10:
            _fail(f"{fieldpath}.matrix", "not positive semidefinite")
        echo = {"kind": "matrix",
                "matrix": [[_amp_echo(complex(rho[i, j])) for j in range(4)] for i in range(4)]}
        return rho, echo
    _fail(f"{fieldpath}.kind", f"expected 'product', 'bell' or 'matrix', got {kind!r}")


@dataclass(frozen=True)
class ScenarioConfig:
    model: str
    sd: object
    temperature: float
    drive: DriveProfile
    rho0: np.ndarray
    rho0_pair: object            # ndarray or None
    times: np.ndarray
    outputs: tuple
    quadrature: QuadratureConfig
    dt: object                   # float or None (sx_lindblad integrator step)
    echo: dict
    parse_notes: tuple

    @classmethod
    def from_dict(cls, d):
        if not isinstance(d, dict):
            raise ConfigError("config must be an object")
        known = {"model", "spectral", "temperature", "drive", "initial_state",
                 "pair", "grid", "outputs", "quadrature", "dt"}
        extra = set(d) - known
        if extra:
            raise ConfigError(f"unknown config fields: {sorted(extra)}")

        model = d.get("model", "dephasing")
        if model not in ("dephasing", "sx_lindblad"):
            _fail("model", f"expected 'dephasing' or 'sx_lindblad', got {model!r}")

        sd = _parse_spectral(d.get("spectral"))
        temperature = _as_float(d.get("temperature", 0.0), "temperature")
        if temperature < 0:
            _fail("temperature", "must be >= 0")

        drv = d.get("drive", {})
        if not isinstance(drv, dict):
            _fail("drive", "expected an object with eps1/eps2/j")
        bad = set(drv) - {"eps1", "eps2", "j"}
        if bad:
            _fail("drive", f"unknown drive terms: {sorted(bad)}")
        drive = DriveProfile(
            eps1=_parse_drive_term(drv.get("eps1", 0.0), "drive.eps1"),
            eps2=_parse_drive_term(drv.get("eps2", 0.0), "drive.eps2"),
            j=_parse_drive_term(drv.get("j", 0.0), "drive.j"),
        )

        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            if "initial_state" not in d:
                _fail("initial_state", "required")
            rho0, state_echo = _parse_state(d["initial_state"], "initial_state")
            pair_echo = None
            rho0_pair = None
            if d.get("pair") is not None:
                rho0_pair, pair_echo = _parse_state(d["pair"], "pair")
        parse_notes = tuple(str(w.message) for w in caught)

        grid = d.get("grid")
        if not isinstance(grid, dict):
            _fail("grid", "expected an object with t_end and n_points")
        t_end = _as_float(grid.get("t_end", 0.0), "grid.t_end")
        if t_end <= 0:
            _fail("grid.t_end", "must be > 0")
        n_points = grid.get("n_points")
        if not isinstance(n_points, int) or isinstance(n_points, bool) or n_points < 2:
            _fail("grid.n_points", "must be an integer >= 2")
        times = np.linspace(0.0, t_end, n_points)

        outputs = d.get("outputs")
        if not isinstance(outputs, (list, tuple)) or not outputs:
            _fail("outputs", "must be a non-empty list of series names")
        vocab = _SERIES_DEPHASING if model == "dephasing" else _SERIES_LINDBLAD
        for name in outputs:
            if name not in vocab:
                _fail("outputs", f"unknown series {name!r} for model {model!r}; "
                                 f"expected one of {list(vocab)}")
        if _PAIR_NEEDED.intersection(outputs) and rho0_pair is None:
            _fail("pair", f"required by outputs {sorted(_PAIR_NEEDED.intersection(outputs))}")

        qd = d.get("quadrature")
        if qd is None:
            quadrature = DEFAULT_QUADRATURE
        else:
            if not isinstance(qd, dict) or set(qd) - {"rel_tol", "abs_tol", "omega_max_factor"}:
                _fail("quadrature", "expected rel_tol/abs_tol/omega_max_factor")
            try:
                quadrature = QuadratureConfig(
                    rel_tol=_as_float(qd.get("rel_tol", 1e-8), "quadrature.rel_tol"),
                    abs_tol=_as_float(qd.get("abs_tol", 1e-12), "quadrature.abs_tol"),
                    omega_max_factor=_as_float(qd.get("omega_max_factor", 40.0),
                                               "quadrature.omega_max_factor"))
            except ConfigError as exc:
                _fail("quadrature", str(exc))

        dt = d.get("dt")
        if dt is not None:
            dt = _as_float(dt, "dt")
            if dt <= 0:
                _fail("dt", "must be > 0")
            if model != "sx_lindblad":
                _fail("dt", "only meaningful for the sx_lindblad model")

        if model == "sx_lindblad":
            if isinstance(sd, Discrete):
                _fail("spectral", "sx_lindblad model needs a continuous spectral density")
            if temperature != 0.0:
                _fail("temperature", "sx_lindblad model is defined at temperature 0")
            for term, name in ((drive.eps1, "eps1"), (drive.eps2, "eps2"), (drive.j, "j")):
                if not term.is_constant:
                    _fail(f"drive.{name}", "sx_lindblad model needs constant drives")
            if drive.eps1.values[0] != drive.eps2.values[0]:
                _fail("drive", "sx_lindblad model requires eps1 == eps2")
            # eps > J > 0 is enforced by CaseStudyParams at run time

        echo = {
            "model": model,
            "spectral": _spectral_echo(sd),
            "temperature": temperature,
            "drive": {"eps1": _drive_term_echo(drive.eps1),
                      "eps2": _drive_term_echo(drive.eps2),
                      "j": _drive_term_echo(drive.j)},
            "initial_state": state_echo,
            "pair": pair_echo,
            "grid": {"t_end": t_end, "n_points": n_points},
            "outputs": list(outputs),
            "quadrature": {"rel_tol": quadrature.rel_tol,
                           "abs_tol": quadrature.abs_tol,
                           "omega_max_factor": quadrature.omega_max_factor},
        }
        if dt is not None:
            echo["dt"] = dt

        return cls(model=model, sd=sd, temperature=temperature, drive=drive,
                   rho0=rho0, rho0_pair=rho0_pair, times=times,
                   outputs=tuple(outputs), quadrature=quadrature, dt=dt,
                   echo=echo, parse_notes=parse_notes)

    def to_dict(self):
        return json.loads(json.dumps(self.echo))


# ---------------------------------------------------------------------------
# report

def _fmt(x):
    x = float(x)
    if not math.isfinite(x):
        return "NA"
    return format(x, ".17g")


def _fmt_flag(x):
    if x is None:
        return "NA"
    return "true" if x else "false"


def _verdict_comment(level, v):
    parts = [f"rhp_min_rate={_fmt(v.rhp_min_rate) if v.rhp_min_rate is not None else 'NA'}",
             f"rhp_indivisible={_fmt_flag(v.rhp_indivisible)}",
             f"blp_measure={_fmt(v.blp_measure) if v.blp_measure is not None else 'NA'}",
             f"blp_backflow={_fmt_flag(v.blp_backflow)}"]
    return f"# verdict {level}: " + " ".join(parts)


def _verdict_dict(v):
    def num(x):
        if x is None or not math.isfinite(x):
            return None
        return float(x)
    return {"rhp_min_rate": num(v.rhp_min_rate), "rhp_indivisible": v.rhp_indivisible,
            "blp_measure": num(v.blp_measure), "blp_backflow": v.blp_backflow,
            "annotation": v.annotation}


@dataclass(frozen=True)
class RunReport:
    """Computed series plus verdicts for one scenario (or a preset bundle)."""
    config: dict
    times: np.ndarray
    columns: tuple               # ((name, float ndarray), ...)
    verdicts: dict               # level name -> MarkovVerdict
    annotations: tuple

    def to_csv(self):
        lines = ["# scenario output",
                 "# units: time [1/omega_c]; rates and frequencies [omega_c]; "
                 "distances and matrix elements dimensionless",
                 "# config: " + json.dumps(self.config, sort_keys=True,
                                           separators=(",", ":"))]
        for level in self.verdicts:
            lines.append(_verdict_comment(level, self.verdicts[level]))
        for note in self.annotations:
            lines.append(f"# annotation: {note}")
        lines.append(",".join(["time"] + [name for name, _ in self.columns]))
        cols = [np.asarray(self.times, dtype=float)]
        cols += [np.asarray(vals, dtype=float) for _, vals in self.columns]
        for k in range(self.times.size):
            lines.append(",".join(_fmt(c[k]) for c in cols))
        return "\n".join(lines) + "\n"

    def to_json(self):
        series = {"time": [float(t) for t in self.times]}
        for name, vals in self.columns:
            series[name] = [None if not math.isfinite(float(v)) else float(v)
                            for v in vals]
        doc = {
            "config": self.config,
            "series": series,
            "verdicts": {lvl: _verdict_dict(v) for lvl, v in self.verdicts.items()},
            "annotations": list(self.annotations),
        }
        return json.dumps(doc, sort_keys=True, indent=1) + "\n"


# ---------------------------------------------------------------------------
# scenario execution

def _composite_columns(states, prefix="comp"):
    cols = []
    for i in range(4):
        cols.append((f"{prefix}_{i}{i}", states[:, i, i].real))
    for i in range(4):
        for j in range(i + 1, 4):
            cols.append((f"{prefix}_{i}{j}_re", states[:, i, j].real))
            cols.append((f"{prefix}_{i}{j}_im", states[:, i, j].imag))
    return cols


def _reduced_columns(red, prefix="red"):
    return [(f"{prefix}_00", red[:, 0, 0].real),
            (f"{prefix}_11", red[:, 1, 1].real),
            (f"{prefix}_01_re", red[:, 0, 1].real),
            (f"{prefix}_01_im", red[:, 0, 1].imag)]


def _reduced_states(alpha, coh, n):
    out = np.empty((n, 2, 2), dtype=complex)
    out[:, 0, 0] = alpha
    out[:, 1, 1] = 1.0 - alpha
    out[:, 0, 1] = coh
    out[:, 1, 0] = np.conj(coh)
    return out


def _run_dephasing(cfg):
    times = cfg.times
    n = times.size
    annotations = list(cfg.parse_notes)
    if not is_product_or_uncoupled(cfg.rho0, cfg.drive) or (
            cfg.rho0_pair is not None
            and not is_product_or_uncoupled(cfg.rho0_pair, cfg.drive)):
        annotations.append(_NONLINEAR_NOTE)

    need_rate = any(o in cfg.outputs for o in ("gamma", "gamma_tilde", "rhp"))
    need_exp = any(o in cfg.outputs for o in
                   ("Gamma", "composite", "reduced", "d_composite", "d_reduced", "blp"))
    need_eff = any(o in cfg.outputs for o in
                   ("gamma_tilde", "j_tilde", "gamma_aux", "rhp"))

    gamma_arr = (rate_trajectory(cfg.sd, cfg.temperature, times, cfg.quadrature)
                 if need_rate else np.zeros(n))
    exp_arr = (exponent_trajectory(cfg.sd, cfg.temperature, times, cfg.quadrature)
               if need_exp else None)
    eff = (effective_rates_trajectory(cfg.rho0, cfg.drive, times, gamma_arr)
           if need_eff else None)

    d_comp = d_red = None
    if cfg.rho0_pair is not None and ("blp" in cfg.outputs
                                      or "d_composite" in cfg.outputs
                                      or "d_reduced" in cfg.outputs):
        comp_a = composite_trajectory(cfg.rho0, cfg.drive, times, exp_arr)
        comp_b = composite_trajectory(cfg.rho0_pair, cfg.drive, times, exp_arr)
        d_comp = trace_distance(comp_a, comp_b)
        d_red = reduced_trace_distance(
            ReducedParameters.from_composite(cfg.rho0),
            ReducedParameters.from_composite(cfg.rho0_pair),
            cfg.drive.phase_j(times), exp_arr)

    columns = []
    for name in cfg.outputs:
        if name == "gamma":
            columns.append(("gamma", gamma_arr))
        elif name == "Gamma":
            columns.append(("Gamma", exp_arr))
        elif name == "shift":
            columns.append(("shift", shift_trajectory(cfg.sd, times, cfg.quadrature)))
        elif name in ("gamma_tilde", "j_tilde", "gamma_aux"):
            vals = eff[name]
            bad = int(np.count_nonzero(~np.isfinite(vals)))
            if bad:
                annotations.append(f"{name}: {bad} of {n} samples singular "
                                   f"(coherence factor below 1e-12), written as NA")
            columns.append((name, vals))
        elif name == "composite":
            columns.extend(_composite_columns(
                composite_trajectory(cfg.rho0, cfg.drive, times, exp_arr)))
        elif name == "reduced":
            alpha, coh = reduced_trajectory(cfg.rho0, cfg.drive, times, exp_arr)
            columns.extend(_reduced_columns(_reduced_states(alpha, coh, n)))
        elif name == "d_composite":
            columns.append(("d_composite", d_comp))
        elif name == "d_reduced":
            columns.append(("d_reduced", d_red))
        # "blp"/"rhp" contribute verdicts, not columns

    comp_kwargs = {}
    red_kwargs = {}
    if "rhp" in cfg.outputs:
        mn, flag = rhp_witness(gamma_arr)
        comp_kwargs.update(rhp_min_rate=mn, rhp_indivisible=flag)
        mn_r, flag_r = rhp_witness(eff["gamma_tilde"], finite=eff["finite"])
        red_kwargs.update(rhp_min_rate=mn_r, rhp_indivisible=flag_r)
    if "blp" in cfg.outputs:
        m_c, f_c = blp_witness(times, d_comp)
        comp_kwargs.update(blp_measure=m_c, blp_backflow=f_c)
        m_r, f_r = blp_witness(times, d_red)
        red_kwargs.update(blp_measure=m_r, blp_backflow=f_r)

    verdicts = {}
    if comp_kwargs:
        verdicts["composite"] = MarkovVerdict(**comp_kwargs)
    if red_kwargs:
        red_note = _NONLINEAR_NOTE if _NONLINEAR_NOTE in annotations else ""
        verdicts["reduced"] = MarkovVerdict(annotation=red_note, **red_kwargs)

    return RunReport(config=cfg.to_dict(), times=times, columns=tuple(columns),
                     verdicts=verdicts, annotations=tuple(annotations))


def _run_sx_lindblad(cfg):
    times = cfg.times
    annotations = list(cfg.parse_notes)
    params = CaseStudyParams(eps=cfg.drive.eps1.values[0],
                             j=cfg.drive.j.values[0], sd=cfg.sd)
    gen = build_generator(params)
    _, states_a = integrate(gen, cfg.rho0, times[-1], dt=cfg.dt, store_times=times)
    red_a = partial_trace_aux_traj(states_a)
    d_comp = d_red = None
    if cfg.rho0_pair is not None:
        _, states_b = integrate(gen, cfg.rho0_pair, times[-1], dt=cfg.dt,
                                store_times=times)
        red_b = partial_trace_aux_traj(states_b)
        d_comp = trace_distance(states_a, states_b)
        d_red = trace_distance(red_a, red_b)

    columns = []
    for name in cfg.outputs:
        if name == "composite":
            columns.extend(_composite_columns(states_a))
        elif name == "reduced":
            columns.extend(_reduced_columns(red_a))
        elif name == "d_composite":
            columns.append(("d_composite", d_comp))
        elif name == "d_reduced":
            columns.append(("d_reduced", d_red))

    verdicts = {}
    if "blp" in cfg.outputs:
        m_c, f_c = blp_witness(times, d_comp)
        m_r, f_r = blp_witness(times, d_red)
        verdicts["composite"] = MarkovVerdict(blp_measure=m_c, blp_backflow=f_c)
        verdicts["reduced"] = MarkovVerdict(blp_measure=m_r, blp_backflow=f_r)

    return RunReport(config=cfg.to_dict(), times=times, columns=tuple(columns),
                     verdicts=verdicts, annotations=tuple(annotations))


def run_scenario(cfg):
    if isinstance(cfg, dict):
        cfg = ScenarioConfig.from_dict(cfg)
    if cfg.model == "sx_lindblad":
        return _run_sx_lindblad(cfg)
    return _run_dephasing(cfg)


# ---------------------------------------------------------------------------
# presets

_R2 = math.sqrt(0.5)
_PLUS = [_R2, _R2]
_MINUS_X = [_R2, -_R2]
_OHMIC = {"family": "ohmic", "eta": 0.1, "omega_c": 1.0}
_LORENTZIAN = {"family": "lorentzian", "eta": 0.1, "peak": 0.01, "width": 0.01}
_FIG2_AUX = [math.sqrt(0.1), math.sqrt(0.9)]
_FIG3_AUX = [0.9, math.sqrt(0.19)]


def _rate_scenario(spectral, T, t_end, n_points):
    return {
        "model": "dephasing",
        "spectral": spectral,
        "temperature": T,
        "drive": {"eps1": 0.0, "eps2": 0.0, "j": 0.0},
        "initial_state": {"kind": "product", "qubit": _PLUS, "aux": _PLUS},
        "grid": {"t_end": t_end, "n_points": n_points},
        "outputs": ["gamma", "rhp"],
    }


def _distance_scenario(spectral, T, j, aux, t_end, n_points, outputs):
    return {
        "model": "dephasing",
        "spectral": spectral,
        "temperature": T,
        "drive": {"eps1": 0.0, "eps2": 0.0, "j": j},
        "initial_state": {"kind": "product", "qubit": _MINUS_X, "aux": aux},
        "pair": {"kind": "product", "qubit": _PLUS, "aux": aux},
        "grid": {"t_end": t_end, "n_points": n_points},
        "outputs": outputs,
    }


def _build_presets():
    presets = {}
    presets["fig1a"] = [
        (f"T={T:g}", _rate_scenario(_OHMIC, T, 40.0, 801)) for T in (0.0, 0.1, 1.0)]
    presets["fig1b"] = [
        (f"T={T:g}", _rate_scenario(_LORENTZIAN, T, 2000.0, 1001))
        for T in (2.5e-3, 1e-2, 1e-1)]
    presets["fig1c"] = [
        (f"J={j:g}", _distance_scenario(_OHMIC, 0.1, j, _PLUS, 400.0, 801,
                                        ["d_reduced", "blp", "rhp"]))
        for j in (0.02, 0.05)]
    presets["fig1d"] = [
        (f"J={j:g}", _distance_scenario(_LORENTZIAN, 1e-2, j, _PLUS, 400.0, 801,
                                        ["d_reduced", "blp", "rhp"]))
        for j in (0.02, 0.05)]
    presets["fig2a"] = [("rates", {
        "model": "dephasing",
        "spectral": _LORENTZIAN,
        "temperature": 2.5e-3,
        "drive": {"eps1": 0.0, "eps2": 0.0, "j": 2e-3},
        "initial_state": {"kind": "product", "qubit": _PLUS, "aux": _FIG2_AUX},
        "grid": {"t_end": 2000.0, "n_points": 1001},
        "outputs": ["gamma", "gamma_tilde", "rhp"],
    })]
    presets["fig2b"] = [("distances", _distance_scenario(
        _LORENTZIAN, 2.5e-3, 2e-3, _FIG2_AUX, 2000.0, 1001,
        ["d_composite", "d_reduced", "blp"]))]
    presets["fig3"] = [("distances", {
        "model": "sx_lindblad",
        "spectral": _OHMIC,
        "temperature": 0.0,
        "drive": {"eps1": 0.1, "eps2": 0.1, "j": 0.01},
        "initial_state": {"kind": "product", "qubit": _MINUS_X, "aux": _FIG3_AUX},
        "pair": {"kind": "product", "qubit": _PLUS, "aux": _FIG3_AUX},
        "grid": {"t_end": 1200.0, "n_points": 1201},
        "outputs": ["d_reduced", "d_composite", "blp"],
        "dt": 0.05,
    })]
    return presets


PRESETS = _build_presets()


def preset_config(name):
    """The full config bundle of a preset, as a plain dict (dumpable/editable)."""
    if name not in PRESETS:
        raise ConfigError(f"unknown preset {name!r}; expected one of {sorted(PRESETS)}")
    return {"preset": name,
            "scenarios": {label: json.loads(json.dumps(cfg))
                          for label, cfg in PRESETS[name]}}


def run_preset(name):
    """Run every scenario of a preset and merge them into one report.

    Scenarios of a preset share the time grid; merged column names are
    '<series>/<label>' and verdict keys '<level>/<label>'.
    """
    if name not in PRESETS:
        raise ConfigError(f"unknown preset {name!r}; expected one of {sorted(PRESETS)}")
    entries = PRESETS[name]
    times = None
    columns = []
    verdicts = {}
    annotations = []
    scenarios_echo = {}
    for label, cfg_dict in entries:
        cfg = ScenarioConfig.from_dict(cfg_dict)
        report = run_scenario(cfg)
        if times is None:
            times = report.times
        scenarios_echo[label] = report.config
        if len(entries) == 1:
            columns.extend(report.columns)
            verdicts.update(report.verdicts)
            annotations.extend(report.annotations)
        else:
            columns.extend((f"{col}/{label}", vals) for col, vals in report.columns)
            verdicts.update({f"{lvl}/{label}": v for lvl, v in report.verdicts.items()})
            annotations.extend(f"[{label}] {note}" for note in report.annotations)
    return RunReport(config={"preset": name, "scenarios": scenarios_echo},
                     times=times, columns=tuple(columns), verdicts=verdicts,
                     annotations=tuple(annotations))


# ---------------------------------------------------------------------------
# sweeps

_SWEEP_AXES = ("T", "J", "sigma2z", "aux_plus_amp", "eta", "s", "Omega", "l")


def _apply_axis(base, axis, value):
    d = json.loads(json.dumps(base))  # deep copy
    if axis == "T":
        d["temperature"] = value
    elif axis == "J":
        d["drive"]["j"] = value
    elif axis == "eta":
        d["spectral"]["eta"] = value
    elif axis == "s":
        if d["spectral"].get("family") != "power_law":
            raise ConfigError("sweep axis 's' needs a power_law spectral density")
        d["spectral"]["s"] = value
    elif axis == "Omega":
        if d["spectral"].get("family") != "lorentzian":
            raise ConfigError("sweep axis 'Omega' needs a lorentzian spectral density")
        d["spectral"]["peak"] = value
    elif axis == "l":
        if d["spectral"].get("family") != "lorentzian":
            raise ConfigError("sweep axis 'l' needs a lorentzian spectral density")
        d["spectral"]["width"] = value
    elif axis in ("sigma2z", "aux_plus_amp"):
        if axis == "sigma2z":
            if not -1.0 <= value <= 1.0:
                raise ConfigError("sweep axis 'sigma2z' values must lie in [-1, 1]")
            p_plus = 0.5 * (1.0 + value)
        else:
            if not 0.0 <= value <= 1.0:
                raise ConfigError("sweep axis 'aux_plus_amp' values must lie in [0, 1]")
            p_plus = value * value
        aux = [math.sqrt(p_plus), math.sqrt(1.0 - p_plus)]
        for key in ("initial_state", "pair"):
            if d.get(key) is not None:
                if d[key].get("kind") != "product":
                    raise ConfigError(
                        f"sweep axis {axis!r} needs product initial states ({key})")
                d[key]["aux"] = aux
    else:
        raise ConfigError(f"unknown sweep axis {axis!r}; expected one of {_SWEEP_AXES}")
    return d


def sweep(base_cfg, axis, values):
    """One summary row per value: min rates and back-flow measures.

    Returns a list of dicts with keys value, min_gamma, min_gamma_tilde,
    blp_composite, blp_reduced (NaN where not computable: no pair supplied,
    or every effective-rate sample singular).
    """
    if isinstance(base_cfg, ScenarioConfig):
        base = base_cfg.to_dict()
    elif isinstance(base_cfg, dict):
        base = json.loads(json.dumps(base_cfg))
    else:
        raise ConfigError("sweep needs a config dict or ScenarioConfig")
    if base.get("model", "dephasing") != "dephasing":
        raise ConfigError("sweep is defined for the dephasing model only")
    values = list(values)
    if not values:
        raise ConfigError("sweep needs a non-empty list of values")

    rows = []
    for v in values:
        v = _as_float(v, f"sweep value {v!r}")
        cfg = ScenarioConfig.from_dict(_apply_axis(base, axis, v))
        times = cfg.times
        gamma_arr = rate_trajectory(cfg.sd, cfg.temperature, times, cfg.quadrature)
        eff = effective_rates_trajectory(cfg.rho0, cfg.drive, times, gamma_arr)
        gt = eff["gamma_tilde"]
        min_gt = float(np.nanmin(gt)) if np.isfinite(gt).any() else float("nan")
        if cfg.rho0_pair is not None:
            exp_arr = exponent_trajectory(cfg.sd, cfg.temperature, times, cfg.quadrature)
            comp_a = composite_trajectory(cfg.rho0, cfg.drive, times, exp_arr)
            comp_b = composite_trajectory(cfg.rho0_pair, cfg.drive, times, exp_arr)
            blp_c, _ = blp_witness(times, trace_distance(comp_a, comp_b))
            d_red = reduced_trace_distance(
                ReducedParameters.from_composite(cfg.rho0),
                ReducedParameters.from_composite(cfg.rho0_pair),
                cfg.drive.phase_j(times), exp_arr)
            blp_r, _ = blp_witness(times, d_red)
        else:
            blp_c = blp_r = float("nan")
        rows.append({"value": v,
                     "min_gamma": float(gamma_arr.min()),
                     "min_gamma_tilde": min_gt,
                     "blp_composite": blp_c,
                     "blp_reduced": blp_r})
    return rows


def sweep_to_csv(rows, axis):
    lines = ["# sweep output",
             f"# axis: {axis}",
             "value,min_gamma,min_gamma_tilde,blp_composite,blp_reduced"]
    for r in rows:
        lines.append(",".join(_fmt(r[k]) for k in
                              ("value", "min_gamma", "min_gamma_tilde",
                               "blp_composite", "blp_reduced")))
    return "\n".join(lines) + "\n"
