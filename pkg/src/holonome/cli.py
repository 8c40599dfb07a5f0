"""Config-driven command line: verify, gate, sweep, compare.

Every subcommand reads one JSON config, writes a JSON report embedding the
fully resolved configuration, and renders a figure next to it; sweep also
writes the fidelity table as CSV.  Identical configs produce bitwise
identical JSON/CSV.  Exit codes: 0 success, 2 validation failure, 3
numerical-contract violation.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction
from functools import partial
from pathlib import Path

import numpy as np

from . import analytic, evolve, frames, paths, plotting, report, reverse
from .laws import LawsBuilder, PathLaws, random_laws
from .numerics import NumericalContractError, fidelity_up_to_global_phase, max_abs

FRAME_NAMES = ("lambda", "two_laser", "two_qubit")
SCHEDULE_KINDS = ("op", "ossp", "phi_loop")
VERIFY_TOLERANCE = 1e-8


class ConfigError(ValueError):
    """Invalid or missing configuration; maps to exit code 2."""


def parse_angle(value) -> float:
    """Angles: plain numbers are radians; strings like '1/3 pi' or '0.5 pi'
    are exact rational multiples of pi, evaluated as pi*num/den."""
    if isinstance(value, bool):
        raise ConfigError(f"cannot parse angle from {value!r}")
    if isinstance(value, (int, float)):
        return float(value)
    if isinstance(value, str):
        text = value.strip()
        if text.endswith("pi"):
            head = text[:-2].strip()
            try:
                frac = Fraction(head) if head else Fraction(1)
            except (ValueError, ZeroDivisionError) as exc:
                raise ConfigError(f"bad rational in angle {value!r}: {exc}") from None
            return math.pi * frac.numerator / frac.denominator
        raise ConfigError(f"angle string must end in 'pi', got {value!r}")
    raise ConfigError(f"cannot parse angle from {value!r}")


def _angle(cfg: dict, key: str, default=None) -> float:
    if key not in cfg:
        if default is None:
            raise ConfigError(f"missing required angle {key!r}")
        return default
    return parse_angle(cfg[key])


def load_config(path: str) -> dict:
    try:
        raw = json.loads(Path(path).read_text())
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from None
    if not isinstance(raw, dict):
        raise ConfigError("config root must be a JSON object")
    return raw


def _check_name(value: str, valid: tuple[str, ...], what: str) -> str:
    if value not in valid:
        raise ConfigError(f"unknown {what} {value!r}; valid: {', '.join(valid)}")
    return value


def _rate_k(cfg: dict) -> float:
    k_mhz = float(cfg.get("k_mhz", 20.0))
    if k_mhz <= 0.0:
        raise ConfigError(f"k_mhz must be > 0, got {k_mhz}")
    return 2.0 * math.pi * k_mhz * 1e6


def _build_schedule(sch: dict) -> tuple[paths.Schedule, dict]:
    kind = _check_name(sch.get("kind", ""), ("op", "ossp"), "schedule kind")
    k = _rate_k(sch)
    xi0 = _angle(sch, "xi0", 0.0)
    try:
        if kind == "op":
            chi1 = _angle(sch, "chi1")
            xi2 = _angle(sch, "xi2")
            schedule = paths.op_schedule(chi1, xi2, xi0=xi0, k=k)
            resolved = {"kind": kind, "chi1": chi1, "xi2": xi2, "xi0": xi0, "k_rad_s": k}
        else:
            xi2 = _angle(sch, "xi2")
            schedule = paths.ossp_schedule(xi2, xi0=xi0, k=k)
            resolved = {"kind": kind, "xi2": xi2, "xi0": xi0, "k_rad_s": k}
    except ValueError as exc:
        raise ConfigError(f"schedule rejected: {exc}") from None
    return schedule, resolved


def _phi_loop_laws(sch: dict) -> tuple[PathLaws, dict]:
    """Two-laser loop: theta, chi, xi constant while phi advances by delta_phi."""
    s2 = sch.get("sin_sq_half_theta")
    if s2 is not None:
        s2 = float(s2)
        if not 0.0 < s2 < 1.0:
            raise ConfigError(f"sin_sq_half_theta must be in (0, 1), got {s2}")
        theta = 2.0 * math.asin(math.sqrt(s2))
    else:
        theta = _angle(sch, "theta")
    chi = _angle(sch, "chi", math.pi)
    xi0 = _angle(sch, "xi0", 0.0)
    delta_phi = _angle(sch, "delta_phi", 2.0 * math.pi)
    duration = float(sch.get("duration_ns", 50.0)) * 1e-9
    if duration <= 0.0:
        raise ConfigError("duration_ns must be > 0")
    laws = (LawsBuilder(theta=theta, phi=0.0, chi=chi, xi=xi0)
            .run(duration, phi_rate=delta_phi / duration).build())
    resolved = {"kind": "phi_loop", "theta": theta, "chi": chi, "xi0": xi0,
                "delta_phi": delta_phi, "duration_s": duration}
    return laws, resolved


def _resolve_target(cfg, dim_hint: int = 2) -> tuple[np.ndarray, dict]:
    value = cfg.get("target", "S")
    if isinstance(value, str):
        try:
            gate = paths.named_target(value)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        resolved = {"name": value, "bloch": list(gate.bloch),
                    "alpha": gate.alpha, "convention": gate.convention}
        return paths.target_su2(gate), resolved
    if isinstance(value, dict):
        bloch = value.get("bloch")
        if not isinstance(bloch, (list, tuple)) or len(bloch) != 3:
            raise ConfigError("custom target needs bloch: [x, y, z]")
        gate = paths.GateTarget(tuple(float(b) for b in bloch),
                                parse_angle(value.get("alpha", 0.0)),
                                value.get("convention", "half"))
        resolved = {"name": "custom", "bloch": list(gate.bloch),
                    "alpha": gate.alpha, "convention": gate.convention}
        return paths.target_su2(gate), resolved
    raise ConfigError(f"cannot parse target from {value!r}")


def _rabi_from_h(h_fn, level: int):
    """Effective Rabi magnitude: twice the coupling-column norm into level."""
    def rabi_t(t: float) -> float:
        col = h_fn(t)[:, level].copy()
        col[level] = 0.0
        return 2.0 * float(np.linalg.norm(col))
    return rabi_t


def _numeric_area(laws: PathLaws, rabi_t, n: int = 2000) -> float:
    total = 0.0
    for t0, t1, _ in laws.smooth_segments():
        ts = np.linspace(t0, t1 - (t1 - t0) * 1e-12, n + 1)
        total += float(np.trapz([rabi_t(float(t)) for t in ts], ts))
    return total


def _gamma_rate(choice: str, laws: PathLaws, cfg: dict):
    if choice == "zero":
        return 0.0
    if choice == "excited_ancilla":
        return partial(analytic.gamma_rate_excited_ancilla, laws)
    if choice == "two_laser":
        return partial(analytic.gamma_rate_two_laser, laws)
    if choice == "custom":
        return float(cfg.get("gamma_rate_rad_s", 0.0))
    raise ConfigError(f"unknown gamma_choice {choice!r}; valid: zero, "
                      "excited_ancilla, two_laser, custom")


def _integrator(cfg: dict, steps_override: int | None) -> dict:
    integ = cfg.get("integrator", {})
    out = {
        "steps_unitary": int(integ.get("steps_unitary", evolve.DEFAULT_UNITARY_STEPS)),
        "steps_lindblad": int(integ.get("steps_lindblad", evolve.DEFAULT_LINDBLAD_STEPS)),
    }
    if steps_override is not None:
        out = {k: int(steps_override) for k in out}
    for k, v in out.items():
        if v < 1:
            raise ConfigError(f"{k} must be >= 1, got {v}")
    return out


def _outputs(cfg: dict, defaults: dict, out_dir: Path) -> dict:
    names = dict(defaults)
    names.update(cfg.get("outputs", {}))
    return {key: out_dir / name for key, name in names.items()}


# ---------------------------------------------------------------- gate

def _gate_core(config: dict, steps: int) -> dict:
    """Run one closed-system gate; returns laws, report and figure hooks."""
    frame_name = _check_name(config.get("frame", "lambda"), FRAME_NAMES, "frame")

    sch = config.get("schedule")
    if not isinstance(sch, dict):
        raise ConfigError("config needs a schedule object")

    kind = sch.get("kind", "")
    if (frame_name == "two_laser") != (kind == "phi_loop"):
        raise ConfigError("schedule kind phi_loop pairs with frame two_laser; "
                          "op and ossp pair with lambda or two_qubit")

    schedule = None
    if frame_name == "two_laser":
        laws, sch_resolved = _phi_loop_laws(sch)
        frame_fn = frames.two_laser_frame
        frame_at_point = frames.two_laser_frame_at
        gamma_default = "two_laser"
        level = 2
    elif frame_name == "lambda":
        schedule, sch_resolved = _build_schedule(sch)
        laws = schedule.to_laws()
        ancilla = _check_name(config.get("ancilla", "dark"),
                              ("dark", "excited"), "ancilla")
        sch_resolved["ancilla"] = ancilla
        frame_fn = partial(frames.lambda_frame, ancilla=ancilla)
        frame_at_point = partial(frames.lambda_frame_at, ancilla=ancilla)
        gamma_default = "zero"
        level = 2
    else:
        schedule, sch_resolved = _build_schedule(sch)
        theta = _angle(config, "theta", math.pi / 2)
        phi = _angle(config, "phi", 0.0)
        laws = schedule.to_laws(theta=theta, phi=phi)
        sch_resolved.update({"theta": theta, "phi": phi})
        frame_fn = frames.two_qubit_frame
        frame_at_point = frames.two_qubit_frame_at
        gamma_default = "two_qubit"
        level = 4

    gamma_choice = config.get("gamma_choice", gamma_default)
    if frame_name == "two_qubit":
        if gamma_choice == "two_qubit":
            gamma = (partial(_two_qubit_gamma, laws, 0), partial(_two_qubit_gamma, laws, 1))
        elif gamma_choice == "zero":
            gamma = (0.0, 0.0)
        else:
            raise ConfigError(f"unknown gamma_choice {gamma_choice!r} for "
                              "two_qubit; valid: two_qubit, zero")
        def h_fn(t: float) -> np.ndarray:
            return reverse.reverse_hamiltonian_two_ancilla(frame_fn(laws, t), gamma_rates=gamma)
    else:
        gamma = _gamma_rate(gamma_choice, laws, config)
        def h_fn(t: float) -> np.ndarray:
            return reverse.reverse_hamiltonian(frame_fn(laws, t), gamma_rate=gamma)

    integ = {"steps_unitary": steps}
    u = evolve.propagate_unitary(h_fn, laws.duration, steps,
                                 boundaries=laws.boundaries[1:-1])
    frame0 = frame_fn(laws, 0.0)
    phases = reverse.path_phases(laws, frame_at_point)
    comp_phases = [float(phases[i]) for i in frame0.computational]

    rabi_t = _rabi_from_h(h_fn, level)
    if schedule is not None and frame_name == "lambda":
        area = paths.pulse_area(schedule)
    else:
        area = _numeric_area(laws, rabi_t)

    invariance = None
    if frame_name == "two_qubit":
        # report in the bare product basis, where the spectator states
        # (|00>, |01>, |0e>) pin the identity part of the gate
        target, target_resolved = _two_qubit_target(laws, phases, frame0)
        realized = u[:4, :4].copy()
        invariance = _invariance_defect(u, (0, 1, 5))
        fidelity = fidelity_up_to_global_phase(realized[2:, 2:], target[2:, 2:])
    else:
        realized = evolve.realized_gate(u, frame0)
        target, target_resolved = _resolve_target(config)
        fidelity = fidelity_up_to_global_phase(realized, target)

    gr = evolve.GateReport(realized=realized, target=target, fidelity=fidelity,
                           leakage=evolve.gate_leakage(realized), pulse_area=area,
                           duration=laws.duration, phases=tuple(comp_phases))
    core = {
        "frame": frame_name,
        "schedule": sch_resolved,
        "gamma_choice": gamma_choice,
        "target": target_resolved,
        "integrator": integ,
        "duration_s": gr.duration,
        "pulse_area_rad": gr.pulse_area,
        "fidelity": gr.fidelity,
        "leakage": gr.leakage,
        "haar_average_fidelity": evolve.haar_average_fidelity(
            realized[2:, 2:] if frame_name == "two_qubit" else realized,
            target[2:, 2:] if frame_name == "two_qubit" else target),
        "phases_rad": list(gr.phases),
        "relative_phase_rad": gr.phases[-1] - gr.phases[0],
        "realized": report.complex_matrix_payload(gr.realized),
        "target_matrix": report.complex_matrix_payload(gr.target),
    }
    if invariance is not None:
        core["invariance_defect"] = invariance
    return {"core": core, "laws": laws, "rabi_t": rabi_t}


def _invariance_defect(u: np.ndarray, indices: tuple[int, ...]) -> float:
    eye = np.eye(u.shape[0])
    return max(max(max_abs(u[:, i] - eye[:, i]), max_abs(u[i, :] - eye[i, :]))
               for i in indices)


def _two_qubit_gamma(laws: PathLaws, which: int, t: float) -> float:
    return analytic.gamma_rates_two_qubit(laws, t)[which]


def _two_qubit_target(laws: PathLaws, phases: np.ndarray, frame0) -> tuple[np.ndarray, dict]:
    """Predicted two-qubit unitary: identity except a rotation on the last
    computational pair, axis set by (theta, phi), angle by the quadrature
    phase of the driven frame state."""
    p0 = laws.at(0.0)
    alpha = float(phases[frame0.computational[-1]])
    st, ct = math.sin(p0.theta), math.cos(p0.theta)
    axis = np.array([st * math.cos(p0.phi), st * math.sin(p0.phi), ct])
    sigma = np.array([[[0, 1], [1, 0]], [[0, -1j], [1j, 0]], [[1, 0], [0, -1]]], dtype=complex)
    block = np.exp(1j * alpha / 2) * (
        math.cos(alpha / 2) * np.eye(2) - 1j * math.sin(alpha / 2)
        * np.einsum("i,ijk->jk", axis, sigma))
    target = np.eye(frame0.dim, dtype=complex)
    target[2:4, 2:4] = block
    resolved = {"name": "auto", "bloch": [float(a) for a in axis],
                "alpha": alpha, "convention": "half"}
    return target[:4, :4], resolved


def run_gate(args) -> int:
    config = load_config(args.config)
    integ = _integrator(config, args.steps)
    result = _gate_core(config, integ["steps_unitary"])
    core = result["core"]
    core["integrator"] = integ

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    outs = _outputs(config, {"report": "gate_report.json",
                             "figure": "gate_pulse.png"}, out_dir)
    payload = {"subcommand": "gate", "config": core}
    report.write_json(outs["report"], payload)
    plotting.pulse_figure(result["laws"], result["rabi_t"], outs["figure"],
                          f"{core['schedule']['kind']} pulse")
    print(f"gate: fidelity={core['fidelity']:.9f} area={core['pulse_area_rad']:.6f} rad "
          f"duration={core['duration_s'] * 1e9:.4f} ns leakage={core['leakage']:.3e}")
    print(f"wrote {outs['report']} {outs['figure']}")
    return 0


# ---------------------------------------------------------------- verify

_VERIFY_ANGLES = ("theta", "phi", "chi", "xi")


def _verify_family(name: str, rng, cfg: dict) -> dict:
    draws = int(cfg.get("draws", 50))
    times = int(cfg.get("times", 20))
    duration = float(cfg.get("duration_s", 1.0))
    rate_scale = float(cfg.get("rate_scale", 1.0))
    etas = [float(e) for e in cfg.get("eta", [0.0, 0.5, 1.0, 2.0])]

    if name == "lambda_excited":
        frame_at = partial(frames.lambda_frame_at, ancilla="excited")
        analytic_route = "excited_ancilla"
    elif name == "lambda_dark":
        frame_at = partial(frames.lambda_frame_at, ancilla="dark")
        analytic_route = "dark_ancilla"
    elif name == "two_laser":
        frame_at = frames.two_laser_frame_at
        analytic_route = "two_laser"
    else:
        frame_at = frames.two_qubit_frame_at
        analytic_route = "two_qubit"

    two_anc = name == "two_qubit"
    vn_per_draw, pt_per_draw, dev_per_draw = [], [], []
    for _ in range(draws):
        laws_d = random_laws(rng, duration=duration, rate_scale=rate_scale,
                             chi_range=(0.2, math.pi - 0.05),
                             time_dependent=_VERIFY_ANGLES)
        # separate chi/xi-only draw for the closed forms (their validity domain)
        laws_a = random_laws(rng, duration=duration, rate_scale=rate_scale,
                             chi_range=(0.2, math.pi - 0.05),
                             time_dependent=("chi", "phi") if name == "two_laser"
                             else ("chi", "xi"))
        ts = rng.uniform(0.0, duration, size=times)
        vn = pt = dev = 0.0
        for t in ts:
            frame = frame_at(laws_d.at(float(t)))
            if two_anc:
                h = reverse.reverse_hamiltonian_two_ancilla(frame)
                vn = max(vn, reverse.von_neumann_residual(h, frame))
                pt = max(pt, reverse.parallel_transport_residual(h, frame))
            else:
                for eta in etas:
                    h = reverse.reverse_hamiltonian_unconv(frame, eta=eta)
                    vn = max(vn, reverse.von_neumann_residual(h, frame))
                    pt = max(pt, reverse.parallel_transport_residual(h, frame, eta=eta))
            dev = max(dev, _analytic_deviation(analytic_route, laws_a, float(t)))
        vn_per_draw.append(vn)
        pt_per_draw.append(pt)
        dev_per_draw.append(dev)

    return {
        "name": name,
        "analytic_route": analytic_route,
        "analytic_thresholded": name != "two_laser",
        "draws": draws,
        "von_neumann_max": max(vn_per_draw),
        "parallel_transport_max": max(pt_per_draw),
        "analytic_deviation_max": max(dev_per_draw),
        "_vn_series": vn_per_draw,
        "_pt_series": pt_per_draw,
    }


def _analytic_deviation(route: str, laws_a: PathLaws, t: float) -> float:
    if route == "excited_ancilla":
        frame = frames.lambda_frame(laws_a, t, ancilla="excited")
        h = reverse.reverse_hamiltonian(
            frame, gamma_rate=partial(analytic.gamma_rate_excited_ancilla, laws_a))
        h_ref = analytic.hamiltonian_excited_ancilla(laws_a, t)
    elif route == "dark_ancilla":
        frame = frames.lambda_frame(laws_a, t, ancilla="dark")
        h = reverse.reverse_hamiltonian(frame)
        h_ref = analytic.hamiltonian_dark_ancilla(laws_a, t)
    elif route == "two_laser":
        frame = frames.two_laser_frame(laws_a, t)
        h = reverse.reverse_hamiltonian(
            frame, gamma_rate=partial(analytic.gamma_rate_two_laser, laws_a))
        h_ref = analytic.hamiltonian_two_laser(laws_a, t)
    else:
        frame = frames.two_qubit_frame(laws_a, t)
        h = reverse.reverse_hamiltonian_two_ancilla(
            frame, gamma_rates=(partial(_two_qubit_gamma, laws_a, 0),
                                partial(_two_qubit_gamma, laws_a, 1)))
        h_ref = analytic.hamiltonian_two_qubit(laws_a, t)
    return max_abs(h - h_ref) / max(1.0, max_abs(h_ref))


def run_verify(args) -> int:
    config = load_config(args.config)
    frame_sel = config.get("frame", "all")
    _check_name(frame_sel, FRAME_NAMES + ("all",), "frame")
    tol = float(config.get("tolerance", VERIFY_TOLERANCE))
    seed = int(config.get("seed", 20240811))
    rng = np.random.default_rng(seed)

    names = []
    if frame_sel in ("lambda", "all"):
        names += ["lambda_excited", "lambda_dark"]
    if frame_sel in ("two_laser", "all"):
        names += ["two_laser"]
    if frame_sel in ("two_qubit", "all"):
        names += ["two_qubit"]

    families = [_verify_family(name, rng, config) for name in names]

    max_vn = max(f["von_neumann_max"] for f in families)
    max_pt = max(f["parallel_transport_max"] for f in families)
    max_dev = max((f["analytic_deviation_max"] for f in families
                   if f["analytic_thresholded"]), default=0.0)
    passed = max_vn < tol and max_pt < tol and max_dev < tol

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    outs = _outputs(config, {"report": "verify_report.json",
                             "figure": "verify_residuals.png"}, out_dir)

    series = []
    for f in families:
        series.append((f"{f['name']} von-Neumann", f.pop("_vn_series")))
        series.append((f"{f['name']} transport", f.pop("_pt_series")))
    plotting.residuals_figure(series, outs["figure"])

    resolved = {
        "frame": frame_sel,
        "draws": int(config.get("draws", 50)),
        "times": int(config.get("times", 20)),
        "duration_s": float(config.get("duration_s", 1.0)),
        "rate_scale": float(config.get("rate_scale", 1.0)),
        "eta": [float(e) for e in config.get("eta", [0.0, 0.5, 1.0, 2.0])],
        "seed": seed,
        "tolerance": tol,
    }
    payload = {
        "subcommand": "verify",
        "config": resolved,
        "families": families,
        "max_von_neumann": max_vn,
        "max_parallel_transport": max_pt,
        "max_analytic_deviation": max_dev,
        "passed": passed,
    }
    report.write_json(outs["report"], payload)
    status = "pass" if passed else "FAIL"
    print(f"verify: families={len(families)} max_vn={max_vn:.3e} "
          f"max_pt={max_pt:.3e} max_dev={max_dev:.3e} -> {status}")
    print(f"wrote {outs['report']} {outs['figure']}")
    if not passed:
        raise NumericalContractError(
            f"residuals exceed tolerance {tol:g}; see {outs['report']}")
    return 0


# ---------------------------------------------------------------- sweep

def _sweep_grid(cfg: dict) -> list[float]:
    grid = cfg.get("kappa_grid")
    if not isinstance(grid, dict):
        raise ConfigError("config needs a kappa_grid object")
    if "values_rad_s" in grid:
        values = [float(v) for v in grid["values_rad_s"]]
    elif "multiples" in grid:
        unit = float(grid.get("unit_rad_s", 2.0 * math.pi * 20e3))
        values = [float(m) * unit for m in grid["multiples"]]
    else:
        raise ConfigError("kappa_grid needs values_rad_s or multiples")
    if not values:
        raise ConfigError("kappa_grid is empty")
    if any(v < 0.0 for v in values):
        raise ConfigError("decoherence rates must be >= 0")
    return values


def run_sweep(args) -> int:
    config = load_config(args.config)
    frame_name = config.get("frame", "lambda")
    if frame_name != "lambda" or config.get("ancilla", "dark") != "dark":
        raise ConfigError("the sweep pipeline runs on the lambda frame with "
                          "the dark ancilla (the two compared schedules)")
    sch_cfg = config.get("schedules")
    if not isinstance(sch_cfg, dict) or set(sch_cfg) != {"op", "ossp"}:
        raise ConfigError("sweep needs schedules with exactly the keys op, ossp")

    integ = _integrator(config, args.steps)
    target, target_resolved = _resolve_target(config)
    values = _sweep_grid(config)

    cases = []
    resolved_schedules = {}
    for name in ("op", "ossp"):
        schedule, sch_resolved = _build_schedule(sch_cfg[name])
        laws = schedule.to_laws()
        frame0 = frames.lambda_frame(laws, 0.0, ancilla="dark")
        logical = frame0.states[list(frame0.computational)]
        cases.append(evolve.SweepCase(
            name=name, h_fn=None, tau=laws.duration,
            boundaries=tuple(laws.boundaries[1:-1]), logical=logical,
            target=target, batch_fn=partial(analytic.dark_ancilla_samples, laws)))
        resolved_schedules[name] = sch_resolved

    result = evolve.kappa_sweep(cases, values, steps=integ["steps_lindblad"])

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    outs = _outputs(config, {"report": "sweep_report.json", "csv": "sweep.csv",
                             "figure": "sweep_fidelity.png"}, out_dir)

    csv_rows = [(row[0], row[2][0], row[2][1]) for row in result.rows]
    report.write_sweep_csv(outs["csv"], csv_rows)
    plotting.sweep_figure(result.rows, result.names, outs["figure"])

    fo = [r[1] for r in csv_rows]
    fs = [r[2] for r in csv_rows]
    resolved = {
        "frame": "lambda",
        "ancilla": "dark",
        "schedules": resolved_schedules,
        "target": target_resolved,
        "kappa_rad_s": [r[0] for r in csv_rows],
        "integrator": integ,
    }
    payload = {
        "subcommand": "sweep",
        "config": resolved,
        "rows": [{"kappa_rad_s": k, "fidelity_op": a, "fidelity_ossp": b}
                 for k, a, b in csv_rows],
        "op_rowwise_ge_ossp": all(a >= b for _, a, b in csv_rows),
        "monotone_nonincreasing": bool(
            all(x >= y for x, y in zip(fo, fo[1:]))
            and all(x >= y for x, y in zip(fs, fs[1:]))),
        "diagnostics": {
            "trace_drift": result.trace_drift,
            "hermiticity_defect": result.hermiticity_defect,
            "min_eigenvalue": result.min_eigenvalue,
            "unitary_match": result.unitary_match,
        },
    }
    report.write_json(outs["report"], payload)
    print(f"sweep: {len(csv_rows)} rows, op[0]={fo[0]:.9f} ossp[0]={fs[0]:.9f}, "
          f"op>=ossp rowwise: {payload['op_rowwise_ge_ossp']}")
    print(f"wrote {outs['csv']} {outs['report']} {outs['figure']}")
    return 0


# ---------------------------------------------------------------- compare

def run_compare(args) -> int:
    config = load_config(args.config)
    integ = _integrator(config, args.steps)
    shared = {k: v for k, v in config.items() if k in ("target", "gamma_choice", "ancilla")}

    cores = {}
    figure_input = {}
    for name in ("op", "ossp"):
        if name not in config or not isinstance(config[name], dict):
            raise ConfigError(f"compare config needs an {name!r} schedule object")
        sub = dict(shared)
        sub["frame"] = "lambda"
        sub["schedule"] = config[name]
        result = _gate_core(sub, integ["steps_unitary"])
        cores[name] = result["core"]
        figure_input[name] = (result["laws"], result["rabi_t"])

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    outs = _outputs(config, {"report": "compare_report.json",
                             "figure": "compare_pulses.png"}, out_dir)
    plotting.compare_figure(figure_input, outs["figure"])

    payload = {
        "subcommand": "compare",
        "config": {"integrator": integ},
        "op": cores["op"],
        "ossp": cores["ossp"],
        "area_ratio_op_ossp": cores["op"]["pulse_area_rad"] / cores["ossp"]["pulse_area_rad"],
        "duration_ratio_op_ossp": cores["op"]["duration_s"] / cores["ossp"]["duration_s"],
    }
    report.write_json(outs["report"], payload)
    print(f"compare: area op/ossp={payload['area_ratio_op_ossp']:.6f} "
          f"duration op/ossp={payload['duration_ratio_op_ossp']:.6f}")
    print(f"wrote {outs['report']} {outs['figure']}")
    return 0


# ---------------------------------------------------------------- entry

_COMMANDS = {
    "verify": run_verify,
    "gate": run_gate,
    "sweep": run_sweep,
    "compare": run_compare,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="holonome",
        description="Synthesis checks, holonomic gate runs and decoherence sweeps.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
            ("verify", "residual checks on random frame paths"),
            ("gate", "run one gate schedule and report fidelity"),
            ("sweep", "decoherence sweep of the two compared schedules"),
            ("compare", "side-by-side closed-system gate reports")):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", required=True, help="JSON config path")
        p.add_argument("--out", default=".", help="output directory")
        p.add_argument("--steps", type=int, default=None,
                       help="override integrator step counts")
        p.add_argument("--seed", type=int, default=None,
                       help="reserved; the pipeline is deterministic")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except NumericalContractError as exc:
        print(f"numerical contract violated: {exc}", file=sys.stderr)
        return 3
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"invalid parameters: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
