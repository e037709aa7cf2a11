"""
Run configuration loading.

Reads a JSON run configuration, validates it against the RunConfig schema,
normalises "_over_2pi_Hz" entries to rad/s, resolves the preset, and produces an
immutable RunConfig. ``effective_config`` turns a RunConfig back into JSON that
reloads to the same operating point and grid.

Environment (.env is read by main.py through python-dotenv):
    MAGNOMECH_WORKERS      default worker count when the config sets none
    MAGNOMECH_OUTPUT_DIR   directory for relative output paths
"""

import os
import json
import math
import logging
from dataclasses import dataclass, asdict, field
from pathlib import Path
from typing import Dict, Any, Optional, Tuple

from .exceptions import ConfigError, DomainError
from .model import ANGULAR_FIELDS, DETUNING_FIELDS, SystemParams, MaterialParams, TWO_PI
from .presets import Preset, get_preset, literal_defaults
from .schemas import HZ_SUFFIX, validate_schema
from .sweep import SweepAxis, SweepSpec
from .measures import DEFAULT_PAIRS

logger = logging.getLogger(__name__)

DEFAULT_TOLERANCES: Dict[str, float] = {
    "steady_state_tol": 1e-12,
    "max_iter": 200,
    "lyapunov_residual": 1e-10,
    "time_integration": 1e-6,
    "measure_oracle": 1e-9,
    "symplectic_match": 1e-9,
    "drift_equivalence": 1e-10,
    "validation_draws": 1000,
    "time_integration_instances": 100,
}

_ABSOLUTE_FIELDS = ("omega_0", "omega_c_drive")


@dataclass(frozen=True)
class RunConfig:
    """
    Fully resolved run configuration.

    Attributes:
        system: Operating point (preset base with overrides applied)
        material: YIG material used for derived amplitudes
        preset: Preset name, if one was used
        sweep: Sweep definition, if the config or preset has axes
        output: Output path for CSV/JSON artefacts
        workers: Process count for sweeps
        tolerances: Solver settings and validation thresholds
        metadata: Provenance lines for CSV headers
    """
    system: SystemParams
    material: MaterialParams
    preset: Optional[str] = None
    sweep: Optional[SweepSpec] = None
    output: Optional[str] = None
    workers: int = 1
    tolerances: Dict[str, float] = field(default_factory=lambda: dict(DEFAULT_TOLERANCES))
    metadata: Dict[str, Any] = field(default_factory=dict)


def _normalise_frequencies(section: Dict[str, Any], angular: Tuple[str, ...]) -> Dict[str, Any]:
    """Convert "<name>_over_2pi_Hz" entries into rad/s under "<name>"."""
    out: Dict[str, Any] = {}
    for key, value in section.items():
        if key.endswith(HZ_SUFFIX):
            name = key[:-len(HZ_SUFFIX)]
            if name not in angular:
                raise ConfigError(f"{key}: {name} is not an angular frequency")
            if name in section:
                raise ConfigError(f"both {name} and {key} given")
            out[name] = TWO_PI * value
        else:
            out[key] = value
    return out


def _build_system(base: SystemParams, overrides: Dict[str, Any]) -> SystemParams:
    overrides = dict(overrides)
    absolute = any(overrides.get(k) is not None for k in _ABSOLUTE_FIELDS)
    direct = [k for k in DETUNING_FIELDS if k in overrides]
    if absolute and direct:
        raise ConfigError(
            f"give either drive frequencies ({', '.join(_ABSOLUTE_FIELDS)}) or detunings "
            f"({', '.join(direct)}), not both"
        )
    if "delta_m0" in overrides and "delta_m" not in overrides:
        # an explicit bare detuning releases the held effective one
        overrides["delta_m"] = None
    try:
        if absolute:
            merged = asdict(base)
            for key in DETUNING_FIELDS + ("detuning_source",) + _ABSOLUTE_FIELDS:
                merged.pop(key)
            merged.update(overrides)
            return SystemParams.from_frequencies(**merged)
        return base.with_updates(**overrides)
    except (DomainError, TypeError) as e:
        raise ConfigError(f"system: {e}") from e


_AXIS_UNITS = {"rad/s": 1.0, "2pi_Hz": TWO_PI, "K": 1.0, "rad": 1.0}


def _build_axis(entry: Dict[str, Any], omega_b: float) -> SweepAxis:
    unit = entry.get("unit", "rad/s")
    factor = omega_b if unit == "omega_b" else _AXIS_UNITS[unit]
    try:
        return SweepAxis(name=entry["name"], start=entry["start"] * factor,
                         stop=entry["stop"] * factor, count=entry["count"])
    except DomainError as e:
        raise ConfigError(f"sweep: {e}") from e


def _default_workers() -> int:
    raw = os.getenv("MAGNOMECH_WORKERS")
    if not raw:
        return 1
    try:
        workers = int(raw)
    except ValueError:
        raise ConfigError(f"MAGNOMECH_WORKERS must be an integer, got {raw!r}")
    if workers < 1:
        raise ConfigError(f"MAGNOMECH_WORKERS must be >= 1, got {workers}")
    return workers


def resolve_output(path: Optional[str]) -> Optional[str]:
    """Place relative output paths under MAGNOMECH_OUTPUT_DIR when it is set."""
    if path is None:
        return None
    out_dir = os.getenv("MAGNOMECH_OUTPUT_DIR")
    if out_dir and not Path(path).is_absolute():
        return str(Path(out_dir) / path)
    return path


def build_config(data: Dict[str, Any], preset: Optional[str] = None) -> RunConfig:
    """
    Build a RunConfig from parsed JSON.

    Args:
        data: Parsed configuration document
        preset: Preset name overriding the one in ``data`` (CLI --preset)

    Raises:
        ConfigError: schema violation, unknown preset, inconsistent values
    """
    if preset is not None:
        data = dict(data, preset=preset)
    is_valid, error = validate_schema(data, "run_config")
    if not is_valid:
        raise ConfigError(f"invalid configuration: {error}")

    sweep_section = data.get("sweep", {})
    preset_name = data.get("preset")
    if preset_name and ("axis1" in sweep_section or "axis2" in sweep_section):
        raise ConfigError("a preset and explicit sweep axes are mutually exclusive")
    if "axis2" in sweep_section and "axis1" not in sweep_section:
        raise ConfigError("sweep.axis2 given without sweep.axis1")

    try:
        material = MaterialParams(**_normalise_frequencies(data.get("material", {}), ("gamma_G",)))
    except DomainError as e:
        raise ConfigError(f"material: {e}") from e

    preset_obj: Optional[Preset] = get_preset(preset_name, material) if preset_name else None
    base = preset_obj.base if preset_obj else literal_defaults(material)
    system = _build_system(base, _normalise_frequencies(data.get("system", {}), ANGULAR_FIELDS))

    tolerances = dict(DEFAULT_TOLERANCES)
    tolerances.update(data.get("tolerances", {}))
    solver = {
        "steady_state_tol": tolerances["steady_state_tol"],
        "max_iter": int(tolerances["max_iter"]),
        "residual_tol": tolerances["lyapunov_residual"],
    }

    pairs = tuple(tuple(p) for p in sweep_section.get("pairs", ())) or None
    sweep = None
    try:
        if preset_obj is not None and preset_obj.axis1 is not None:
            sweep = SweepSpec(axis1=preset_obj.axis1, axis2=preset_obj.axis2, base=system,
                              pairs=pairs or preset_obj.pairs,
                              stability_only=preset_obj.stability_only, **solver)
        elif "axis1" in sweep_section:
            axis2 = sweep_section.get("axis2")
            sweep = SweepSpec(axis1=_build_axis(sweep_section["axis1"], system.omega_b),
                              axis2=_build_axis(axis2, system.omega_b) if axis2 else None,
                              base=system, pairs=pairs or DEFAULT_PAIRS,
                              stability_only=bool(sweep_section.get("stability_only", False)),
                              **solver)
    except DomainError as e:
        raise ConfigError(f"sweep: {e}") from e

    metadata = preset_obj.metadata() if preset_obj else {
        "preset": "none",
        "T": f"{system.T!r} K",
    }
    workers = data.get("workers") or _default_workers()
    logger.debug("resolved config: preset=%s sweep=%s workers=%d", preset_name, sweep is not None, workers)
    return RunConfig(system=system, material=material, preset=preset_name, sweep=sweep,
                     output=resolve_output(data.get("output")), workers=workers,
                     tolerances=tolerances, metadata=metadata)


def load_config(path: Optional[str], preset: Optional[str] = None) -> RunConfig:
    """
    Load and resolve a JSON run configuration.

    Args:
        path: Config file path, or None to start from the defaults
        preset: Preset name overriding the file's
    """
    if path is None:
        return build_config({}, preset=preset)
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = json.load(f)
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}")
    except json.JSONDecodeError as e:
        raise ConfigError(f"malformed JSON in {path}: {e}") from e
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: top level must be a JSON object")
    return build_config(data, preset=preset)


def _json_float(value):
    if isinstance(value, float) and not math.isfinite(value):
        raise ConfigError(f"cannot serialise non-finite value {value!r}")
    return value


def effective_config(config: RunConfig) -> Dict[str, Any]:
    """
    JSON document equivalent to ``config`` after preset resolution.

    Reloading it with ``build_config`` reproduces the same operating point,
    grid and settings.
    """
    system = asdict(config.system)
    source = system.pop("detuning_source")
    if source == "absolute":
        for key in DETUNING_FIELDS:
            system.pop(key)
    else:
        for key in _ABSOLUTE_FIELDS:
            system.pop(key)
    doc: Dict[str, Any] = {
        "system": {k: _json_float(v) for k, v in system.items()},
        "material": asdict(config.material),
        "workers": config.workers,
        "tolerances": dict(config.tolerances),
    }
    if config.sweep is not None:
        sweep: Dict[str, Any] = {"axis1": config.sweep.axis1.to_dict()}
        if config.sweep.axis2 is not None:
            sweep["axis2"] = config.sweep.axis2.to_dict()
        sweep["pairs"] = [list(p) for p in config.sweep.pairs]
        sweep["stability_only"] = config.sweep.stability_only
        doc["sweep"] = sweep
    if config.output is not None:
        doc["output"] = config.output
    return doc


def save_config(config: RunConfig, path: str) -> Path:
    """Write ``effective_config`` as indented JSON."""
    path = Path(path)
    with open(path, "w", encoding="utf-8") as f:
        json.dump(effective_config(config), f, indent=2)
    return path
