"""Built-in scenarios and their structured reports."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np
import tomli_w

from .config import ScenarioConfig, StateSpec, config_to_dict
from .interferometry import fit_fringes, format_fringe_csv, synthesize_fringes
from .linalg import NumericalError
from .phase import (TRANSPORT_SIGN, PhaseTrace, estimate_spin, holonomy_phase, holonomy_unitary,
                    trace_phase, track_phase)
from .sphere import SphericalCircuit, discretize, perpendicular, solid_angle
from .spin import (DensityMatrix, SpinSystem, build_spin, diagonal_state, maximally_mixed,
                   pure_state_along, rotation_unitary)

__all__ = ["PhaseReport", "run_scenario", "write_outputs", "build_state", "singularity_loops"]


@dataclass
class PhaseReport:
    scenario: str
    phase_mod_2pi: float | None = None
    visibility: float | None = None
    singular: bool | None = None
    unwrapped_final: float | None = None
    winding: int | None = None
    singular_crossings: list[float] | None = None
    alpha: float | None = None
    betas: list[dict[str, Any]] | None = None
    extra: dict[str, Any] = field(default_factory=dict)
    runs: dict[str, "PhaseReport"] = field(default_factory=dict)
    config: dict[str, Any] | None = None
    artifacts: dict[str, str] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {"scenario": self.scenario}
        for key in ("phase_mod_2pi", "visibility", "singular", "unwrapped_final", "winding",
                    "singular_crossings", "alpha"):
            value = getattr(self, key)
            if value is not None:
                out[key] = value
        out.update(self.extra)
        for name, run in self.runs.items():
            out[name] = run.to_dict()
        if self.betas is not None:
            out["beta"] = self.betas
        if self.config is not None:
            out["config"] = self.config
        return _plain(out)

    def to_text(self) -> str:
        return tomli_w.dumps(self.to_dict())


def _plain(obj):
    """Strip numpy scalars so the TOML writer sees builtin types only."""
    if isinstance(obj, dict):
        return {k: _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    return obj


def build_state(s: SpinSystem, spec: StateSpec) -> DensityMatrix:
    if spec.kind == "maximally_mixed":
        return maximally_mixed(s.dim)
    if spec.kind == "weights":
        return diagonal_state(s, spec.weights, spec.axis)
    return pure_state_along(s, spec.axis, spec.two_m)


def _trace_fields(report: PhaseReport, trace: PhaseTrace) -> None:
    report.unwrapped_final = trace.unwrapped_final
    report.winding = trace.winding
    report.singular_crossings = list(trace.singular_crossings)
    report.extra["min_visibility"] = float(trace.column("visibility").min())


def _trace_csv(trace: PhaseTrace) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(("t", "raw_phase", "unwrapped_phase", "visibility"))
    for p in trace.samples:
        w.writerow((repr(p.t), repr(p.raw_phase), repr(p.unwrapped_phase), repr(p.visibility)))
    return buf.getvalue()


def _rotation_path(s: SpinSystem, rotvecs: np.ndarray) -> list[tuple[float, np.ndarray]]:
    ts = np.linspace(0.0, 1.0, len(rotvecs))
    out = []
    for t, r in zip(ts, rotvecs):
        angle = float(np.linalg.norm(r))
        u = np.eye(s.dim, dtype=complex) if angle == 0 else rotation_unitary(s, r / angle, angle)
        out.append((float(t), u))
    return out


def _neutron(cfg: ScenarioConfig, s: SpinSystem, rho: DensityMatrix, report: PhaseReport) -> None:
    c = cfg.circuit
    axis = np.array(c.axis)
    ts = np.linspace(0.0, 1.0, cfg.samples)
    final = rotation_unitary(s, axis, c.angle)
    res = trace_phase(final, rho, cfg.tolerances)
    report.phase_mod_2pi, report.visibility, report.singular = res.phase, res.visibility, res.singular
    report.extra["trace_re"] = res.value.real
    report.extra["trace_im"] = res.value.imag
    evolution = _rotation_path(s, ts[:, None] * c.angle * axis[None, :])
    trace = track_phase(evolution, rho, cfg.tolerances)
    _trace_fields(report, trace)
    report.artifacts["trace.csv"] = _trace_csv(trace)


def singularity_loops(n0: np.ndarray, samples: int) -> dict[str, np.ndarray]:
    """Rotation-vector loops from the identity in the plane spanned by ``e`` and ``n0``.

    For the pure state along ``n0`` the trace vanishes at rotation vector
    ``pi e`` (the rotation carrying ``n0`` to its antipode). One loop
    encloses that point, the other stays clear of it.
    """
    e = perpendicular(n0)
    s = 2 * np.pi * np.linspace(0.0, 1.0, samples)
    loops = {}
    for name, radius in (("enclosing", np.pi), ("non_enclosing", np.pi / 4)):
        a = radius - radius * np.cos(s)
        c = radius * np.sin(s)
        loop = a[:, None] * e[None, :] + c[:, None] * n0[None, :]
        loop[-1] = 0.0
        loops[name] = loop
    return loops


def _singularity_loop(cfg: ScenarioConfig, s: SpinSystem, rho: DensityMatrix, report: PhaseReport) -> None:
    n0 = np.array(cfg.state.axis)
    windings = {}
    for name, loop in singularity_loops(n0, cfg.samples).items():
        evolution = _rotation_path(s, loop)
        trace = track_phase(evolution, rho, cfg.tolerances)
        res = trace_phase(evolution[-1][1], rho, cfg.tolerances)
        run = PhaseReport(name, res.phase, res.visibility, res.singular)
        _trace_fields(run, trace)
        report.runs[name] = run
        report.artifacts[f"trace_{name}.csv"] = _trace_csv(trace)
        windings[name] = trace.winding
    enc, non = report.runs["enclosing"], report.runs["non_enclosing"]
    report.extra["phase_difference"] = float(abs(np.angle(np.exp(1j * (enc.phase_mod_2pi - non.phase_mod_2pi)))))
    report.extra["winding_difference"] = abs(windings["enclosing"] - windings["non_enclosing"])


def _beta_table(s: SpinSystem, circuit: SphericalCircuit, steps: int, cfg: ScenarioConfig) -> list[dict]:
    u = holonomy_unitary(s, discretize(circuit, steps))
    rows = []
    for two_m in s.two_ms:
        h = holonomy_phase(s, circuit, two_m, steps, cfg.tolerances, unitary=u)
        rows.append({"two_m": two_m, "m": h.m, "beta": h.beta, "predicted": h.predicted,
                     "error": h.error, "steps": h.steps})
    return rows


def _holonomy_sweep(cfg: ScenarioConfig, s: SpinSystem, rho: DensityMatrix, report: PhaseReport) -> None:
    circuit = cfg.circuit.build()
    report.alpha = solid_angle(circuit)
    report.betas = _beta_table(s, circuit, cfg.steps_per_edge, cfg)
    report.extra["max_error"] = max(r["error"] for r in report.betas)

    axis = circuit.axis if circuit.kind == "cap" else np.array([0.0, 0.0, 1.0])
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(("polar_angle", "alpha", "two_m", "beta", "predicted", "error"))
    worst = 0.0
    for k in range(1, cfg.samples + 1):
        theta = np.pi * k / (cfg.samples + 1)
        cap = SphericalCircuit.cap(theta, axis)
        for row in _beta_table(s, cap, cfg.steps_per_edge, cfg):
            worst = max(worst, row["error"])
            w.writerow((repr(theta), repr(solid_angle(cap)), row["two_m"], repr(row["beta"]),
                        repr(row["predicted"]), repr(row["error"])))
    report.extra["sweep_points"] = cfg.samples
    report.extra["sweep_max_error"] = worst
    report.artifacts["holonomy_sweep.csv"] = buf.getvalue()


def _spin_estimate(cfg: ScenarioConfig, s: SpinSystem, rho: DensityMatrix, report: PhaseReport) -> None:
    circuit = cfg.circuit.build()
    report.alpha = solid_angle(circuit)
    rows = _beta_table(s, circuit, cfg.steps_per_edge, cfg)
    for row in rows:
        row["estimate"] = estimate_spin(row["beta"], report.alpha, TRANSPORT_SIGN)
        row["estimate_error"] = abs(row["estimate"] - row["m"])
    report.betas = rows
    report.extra["max_estimate_error"] = max(r["estimate_error"] for r in rows)


def _fringes(cfg: ScenarioConfig, s: SpinSystem, rho: DensityMatrix, report: PhaseReport) -> None:
    c = cfg.circuit
    if c.kind == "rotation":
        u = rotation_unitary(s, np.array(c.axis), c.angle)
    else:
        circuit = c.build()
        u = holonomy_unitary(s, discretize(circuit, cfg.steps_per_edge))
        report.alpha = solid_angle(circuit)
    exact = trace_phase(u, rho, cfg.tolerances)
    chis = 2 * np.pi * np.arange(cfg.samples) / cfg.samples
    samples = synthesize_fringes(u, rho, chis, cfg.noise, cfg.seed, cfg.tolerances)
    fit = fit_fringes(samples, cfg.tolerances)
    report.phase_mod_2pi, report.visibility = fit.phase, fit.visibility
    report.singular = fit.visibility < cfg.tolerances.sing_tol
    report.extra.update(residual=fit.residual, mean_intensity=fit.mean,
                        exact_phase=exact.phase, exact_visibility=exact.visibility)
    report.artifacts["fringes.csv"] = format_fringe_csv(samples)


_RUNNERS = {
    "neutron-2pi": _neutron,
    "holonomy-sweep": _holonomy_sweep,
    "singularity-loop": _singularity_loop,
    "spin-estimate": _spin_estimate,
    "fringes": _fringes,
}


def run_scenario(cfg: ScenarioConfig) -> PhaseReport:
    """Execute one built-in scenario; files are returned in ``report.artifacts``.

    Module errors surface as :class:`NumericalError` with the scenario name
    prepended.
    """
    s = build_spin(cfg.two_j)
    report = PhaseReport(cfg.scenario, config=config_to_dict(cfg))
    try:
        rho = build_state(s, cfg.state)
        _RUNNERS[cfg.scenario](cfg, s, rho, report)
    except (NumericalError, ValueError, ArithmeticError) as exc:
        raise NumericalError(f"scenario {cfg.scenario}: {exc}") from exc
    return report


def write_outputs(report: PhaseReport, out_dir: str | Path, report_name: str) -> list[Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = [out / report_name]
    written[0].write_text(report.to_text())
    for name, text in sorted(report.artifacts.items()):
        path = out / name
        path.write_text(text)
        written.append(path)
    return written
