"""Scenario configuration: TOML schema, validation and serialization.

Schema (all angles in radians unless parsed with ``degrees=True``)::

    scenario = "neutron-2pi"      # see SCENARIOS
    two_j = 1                     # 2J
    samples = 101                 # path / fringe / sweep sample count
    steps_per_edge = 3334         # parallel-transport steps per polygon edge (or per cap)
    seed = 0
    noise = 0.0                   # fringe noise standard deviation
    output = "report.toml"        # report file name inside the output directory

    [state]
    kind = "maximally_mixed"      # | "weights" | "pure"
    weights = [0.5, 0.5]          # kind = "weights": m = J, ..., -J
    axis = [0.0, 0.0, 1.0]        # kind = "pure" (and optional for "weights")
    two_m = 1                     # kind = "pure"

    [circuit]
    kind = "rotation"             # | "polygon" | "cap"
    axis = [0.0, 0.0, 1.0]        # rotation axis, or cap axis
    angle = 6.283185307179586     # rotation: total angle
    vertices = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]   # polygon
    polar_angle = 0.5             # cap
    orientation = 1               # cap: +1 counterclockwise about axis

    [tolerances]
    herm_tol = 1e-10
    unit_tol = 1e-10
    sing_tol = 1e-9

Keys left out take the scenario's defaults; after parsing every field is
explicit, so ``parse_config(serialize_config(cfg)) == cfg``. Vectors are
normalised at load time.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Any

import tomli
import tomli_w

from .linalg import Tolerances
from .sphere import SphericalCircuit

__all__ = [
    "SCENARIOS",
    "ConfigError",
    "StateSpec",
    "CircuitSpec",
    "ScenarioConfig",
    "parse_config",
    "serialize_config",
    "config_to_dict",
]

SCENARIOS = {
    "neutron-2pi": "unpolarized spin-1/2 beam, one arm rotated by 2 pi",
    "holonomy-sweep": "beta_m versus solid angle for every weight m",
    "singularity-loop": "qubit loops around / not around the antipodal singularity",
    "spin-estimate": "weight m = beta / alpha from an infinitesimal cap",
    "fringes": "synthesize and refit an interference pattern",
}

OCTANT = ((1.0, 0.0, 0.0), (0.0, 1.0, 0.0), (0.0, 0.0, 1.0))
Z = (0.0, 0.0, 1.0)


class ConfigError(ValueError):
    """Invalid scenario configuration, addressed by key path and line."""

    def __init__(self, key: str, message: str, line: int | None = None):
        self.key, self.line = key, line
        where = f"line {line}: " if line else ""
        super().__init__(f"{where}{key}: {message}")


@dataclass(frozen=True)
class StateSpec:
    kind: str = "maximally_mixed"
    weights: tuple[float, ...] | None = None
    axis: tuple[float, float, float] | None = None
    two_m: int | None = None


@dataclass(frozen=True)
class CircuitSpec:
    kind: str = "rotation"
    axis: tuple[float, float, float] | None = None
    angle: float | None = None
    vertices: tuple[tuple[float, float, float], ...] | None = None
    polar_angle: float | None = None
    orientation: int | None = None

    def build(self) -> SphericalCircuit:
        if self.kind == "cap":
            return SphericalCircuit.cap(self.polar_angle, self.axis, self.orientation)
        if self.kind == "polygon":
            return SphericalCircuit.polygon(self.vertices)
        raise ValueError(f"a {self.kind!r} circuit is not a closed circuit on the sphere")


@dataclass(frozen=True)
class ScenarioConfig:
    scenario: str
    two_j: int
    state: StateSpec
    circuit: CircuitSpec | None
    samples: int
    steps_per_edge: int
    tolerances: Tolerances = field(default_factory=Tolerances)
    seed: int = 0
    noise: float = 0.0
    output: str = "report.toml"


_TOP = {"scenario", "two_j", "samples", "steps_per_edge", "seed", "noise", "output",
        "state", "circuit", "tolerances"}
_STATE = {"kind", "weights", "axis", "two_m"}
_CIRCUIT = {"kind", "axis", "angle", "vertices", "polar_angle", "orientation"}
_TOLS = {"herm_tol", "unit_tol", "sing_tol"}

_DEFAULTS: dict[str, dict[str, Any]] = {
    "neutron-2pi": dict(two_j=1, samples=101, steps_per_edge=1,
                        circuit=CircuitSpec("rotation", Z, 2 * math.pi)),
    "holonomy-sweep": dict(two_j=2, samples=9, steps_per_edge=3334,
                           circuit=CircuitSpec("polygon", vertices=OCTANT)),
    "singularity-loop": dict(two_j=1, samples=401, steps_per_edge=1, circuit=None,
                             state=StateSpec("pure", axis=Z, two_m=1)),
    "spin-estimate": dict(two_j=5, samples=1, steps_per_edge=10000,
                          circuit=CircuitSpec("cap", Z, polar_angle=math.acos(1 - 1e-3 / (2 * math.pi)),
                                              orientation=1)),
    "fringes": dict(two_j=1, samples=32, steps_per_edge=1,
                    circuit=CircuitSpec("rotation", Z, 0.0)),
}

_ALLOWED_CIRCUITS = {
    "neutron-2pi": {"rotation"},
    "holonomy-sweep": {"polygon", "cap"},
    "singularity-loop": set(),
    "spin-estimate": {"cap"},
    "fringes": {"rotation", "polygon", "cap"},
}


class _Locator:
    """Maps ``section.key`` paths back to source lines for error messages."""

    _section = re.compile(r"^\s*\[\s*([A-Za-z_]+)\s*\]")
    _key = re.compile(r"^\s*([A-Za-z_][A-Za-z0-9_]*)\s*=")

    def __init__(self, text: str):
        self.lines: dict[str, int] = {}
        section = ""
        for i, line in enumerate(text.splitlines(), start=1):
            if m := self._section.match(line):
                section = m.group(1)
                self.lines.setdefault(section, i)
            elif m := self._key.match(line):
                key = f"{section}.{m.group(1)}" if section else m.group(1)
                self.lines.setdefault(key, i)

    def error(self, key: str, message: str) -> ConfigError:
        line = self.lines.get(key) or self.lines.get(key.split(".")[0])
        return ConfigError(key, message, line)


def _int(loc: _Locator, key: str, value: Any, minimum: int | None = None) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise loc.error(key, f"expected an integer, got {value!r}")
    if minimum is not None and value < minimum:
        raise loc.error(key, f"must be >= {minimum}, got {value}")
    return value


def _float(loc: _Locator, key: str, value: Any) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
        raise loc.error(key, f"expected a finite number, got {value!r}")
    return float(value)


def _vector(loc: _Locator, key: str, value: Any) -> tuple[float, float, float]:
    if not isinstance(value, list) or len(value) != 3:
        raise loc.error(key, f"expected a 3-vector, got {value!r}")
    v = [_float(loc, key, x) for x in value]
    norm = math.sqrt(sum(x * x for x in v))
    if norm == 0:
        raise loc.error(key, "zero vector has no direction")
    if abs(norm - 1.0) <= 1e-15:
        # already unit; leave untouched so serialization round-trips bit-exactly
        return tuple(v)
    return tuple(x / norm for x in v)


def _table(loc: _Locator, key: str, value: Any, allowed: set[str]) -> dict:
    if not isinstance(value, dict):
        raise loc.error(key, "expected a table")
    for k in value:
        if k not in allowed:
            raise loc.error(f"{key}.{k}" if key else k, "unknown key")
    return value


def _parse_state(loc: _Locator, raw: dict, two_j: int, default: StateSpec) -> StateSpec:
    if not raw:
        return default
    kind = raw.get("kind", "maximally_mixed")
    dim = two_j + 1
    if kind == "maximally_mixed":
        for k in ("weights", "axis", "two_m"):
            if k in raw:
                raise loc.error(f"state.{k}", "not used by a maximally_mixed state")
        return StateSpec()
    if kind == "weights":
        if "two_m" in raw:
            raise loc.error("state.two_m", "not used by a weights state")
        w = raw.get("weights")
        if not isinstance(w, list):
            raise loc.error("state.weights", "expected a list of weights")
        w = tuple(_float(loc, "state.weights", x) for x in w)
        if len(w) != dim:
            raise loc.error("state.weights", f"expected {dim} weights for two_j = {two_j}, got {len(w)}")
        if any(x < 0 for x in w):
            raise loc.error("state.weights", "weights must be nonnegative")
        if abs(math.fsum(w) - 1.0) >= 1e-12:
            raise loc.error("state.weights", f"weights sum to {math.fsum(w)!r}, expected 1")
        axis = _vector(loc, "state.axis", raw["axis"]) if "axis" in raw else None
        return StateSpec("weights", w, axis)
    if kind == "pure":
        if "weights" in raw:
            raise loc.error("state.weights", "not used by a pure state")
        axis = _vector(loc, "state.axis", raw.get("axis", list(Z)))
        two_m = _int(loc, "state.two_m", raw.get("two_m", two_j))
        if abs(two_m) > two_j or (two_j - two_m) % 2:
            raise loc.error("state.two_m", f"{two_m}/2 is not a weight of spin {two_j}/2")
        return StateSpec("pure", axis=axis, two_m=two_m)
    raise loc.error("state.kind", f"unknown state kind {kind!r}")


def _parse_circuit(loc: _Locator, raw: dict | None, scenario: str, degrees: bool) -> CircuitSpec | None:
    default = _DEFAULTS[scenario]["circuit"]
    allowed = _ALLOWED_CIRCUITS[scenario]
    if raw is None:
        return default
    kind = raw.get("kind")
    if kind not in {"rotation", "polygon", "cap"}:
        raise loc.error("circuit.kind", f"expected rotation, polygon or cap, got {kind!r}")
    if kind not in allowed:
        need = ", ".join(sorted(allowed)) or "no circuit"
        raise loc.error("circuit.kind", f"scenario {scenario!r} accepts {need}")
    scale = math.pi / 180 if degrees else 1.0
    used = {"rotation": {"kind", "axis", "angle"}, "polygon": {"kind", "vertices"},
            "cap": {"kind", "axis", "polar_angle", "orientation"}}[kind]
    for k in raw:
        if k not in used:
            raise loc.error(f"circuit.{k}", f"not used by a {kind} circuit")
    if kind == "rotation":
        spec = CircuitSpec("rotation", _vector(loc, "circuit.axis", raw.get("axis", list(Z))),
                           scale * _float(loc, "circuit.angle", raw.get("angle", 0.0)))
    elif kind == "polygon":
        verts = raw.get("vertices")
        if not isinstance(verts, list) or len(verts) < 3:
            raise loc.error("circuit.vertices", "expected a list of at least 3 vectors")
        spec = CircuitSpec("polygon", vertices=tuple(_vector(loc, "circuit.vertices", v) for v in verts))
    else:
        if "polar_angle" not in raw:
            raise loc.error("circuit.polar_angle", "required for a cap circuit")
        orientation = _int(loc, "circuit.orientation", raw.get("orientation", 1))
        if orientation not in (1, -1):
            raise loc.error("circuit.orientation", "must be +1 or -1")
        spec = CircuitSpec("cap", _vector(loc, "circuit.axis", raw.get("axis", list(Z))),
                           polar_angle=scale * _float(loc, "circuit.polar_angle", raw["polar_angle"]),
                           orientation=orientation)
    if kind != "rotation":
        try:
            spec.build()
        except ValueError as exc:
            raise loc.error("circuit", str(exc)) from None
    return spec


def parse_config(text: str, degrees: bool = False) -> ScenarioConfig:
    """Parse and fully validate a scenario configuration document.

    Raises
    ------
    ConfigError
        For syntax errors and every validation failure, with the offending
        key path and (when known) its line number.
    """
    try:
        raw = tomli.loads(text)
    except tomli.TOMLDecodeError as exc:
        m = re.search(r"line (\d+)", str(exc))
        raise ConfigError("<document>", str(exc), int(m.group(1)) if m else None) from None
    loc = _Locator(text)
    _table(loc, "", raw, _TOP)

    scenario = raw.get("scenario")
    if scenario not in SCENARIOS:
        raise loc.error("scenario", f"unknown scenario {scenario!r}; choose from {', '.join(SCENARIOS)}")
    defaults = _DEFAULTS[scenario]

    two_j = _int(loc, "two_j", raw.get("two_j", defaults["two_j"]), minimum=0)
    if two_j > 14:
        raise loc.error("two_j", "spins above J = 7 are not supported")
    if scenario == "singularity-loop" and two_j != 1:
        raise loc.error("two_j", "singularity-loop is a qubit scenario (two_j = 1)")

    state_raw = _table(loc, "state", raw.get("state", {}), _STATE)
    state = _parse_state(loc, state_raw, two_j, defaults.get("state", StateSpec()))
    if scenario == "singularity-loop" and state.kind != "pure":
        raise loc.error("state.kind", "singularity-loop needs a pure state")

    circuit_raw = _table(loc, "circuit", raw["circuit"], _CIRCUIT) if "circuit" in raw else None
    if scenario == "singularity-loop" and circuit_raw is not None:
        raise loc.error("circuit", "singularity-loop builds its own parameter-space loops")
    circuit = _parse_circuit(loc, circuit_raw, scenario, degrees)

    samples = _int(loc, "samples", raw.get("samples", defaults["samples"]), minimum=1)
    if scenario in ("neutron-2pi", "singularity-loop") and samples < 2:
        raise loc.error("samples", "path tracking needs at least 2 samples")
    if scenario == "fringes" and samples < 3:
        raise loc.error("samples", "a fringe fit needs at least 3 samples")
    steps = _int(loc, "steps_per_edge", raw.get("steps_per_edge", defaults["steps_per_edge"]), minimum=1)

    tol_raw = _table(loc, "tolerances", raw.get("tolerances", {}), _TOLS)
    tol_values = {}
    for k, v in tol_raw.items():
        v = _float(loc, f"tolerances.{k}", v)
        if v <= 0:
            raise loc.error(f"tolerances.{k}", "must be strictly positive")
        tol_values[k] = v

    seed = _int(loc, "seed", raw.get("seed", 0))
    noise = _float(loc, "noise", raw.get("noise", 0.0))
    if noise < 0:
        raise loc.error("noise", "must be nonnegative")
    output = raw.get("output", "report.toml")
    if not isinstance(output, str) or not output or "/" in output or "\\" in output:
        raise loc.error("output", "expected a plain file name")

    return ScenarioConfig(scenario, two_j, state, circuit, samples, steps,
                          Tolerances(**tol_values), seed, noise, output)


def config_to_dict(cfg: ScenarioConfig) -> dict[str, Any]:
    doc: dict[str, Any] = {
        "scenario": cfg.scenario,
        "two_j": cfg.two_j,
        "samples": cfg.samples,
        "steps_per_edge": cfg.steps_per_edge,
        "seed": cfg.seed,
        "noise": cfg.noise,
        "output": cfg.output,
    }
    doc["state"] = {k: list(v) if isinstance(v, tuple) else v
                    for k, v in vars(cfg.state).items() if v is not None}
    if cfg.circuit is not None:
        circuit = {}
        for k, v in vars(cfg.circuit).items():
            if v is None:
                continue
            if k == "vertices":
                v = [list(p) for p in v]
            elif isinstance(v, tuple):
                v = list(v)
            circuit[k] = v
        doc["circuit"] = circuit
    doc["tolerances"] = vars(cfg.tolerances).copy()
    return doc


def serialize_config(cfg: ScenarioConfig) -> str:
    """Explicit TOML form of ``cfg`` (radians)."""
    return tomli_w.dumps(config_to_dict(cfg))
