"""
JSON Schema definitions for magnomech run configurations.

A run configuration mirrors SystemParams / MaterialParams field names (snake_case,
SI units, angular frequencies in rad/s). Any angular field may instead be given
as "<field>_over_2pi_Hz" in plain Hz. Unknown keys are rejected everywhere.
"""

from dataclasses import fields
from typing import Dict, Any, Tuple

import jsonschema

from .model import ANGULAR_FIELDS, MODES, MaterialParams, SystemParams
from .sweep import SWEEP_PARAMETERS
from .presets import PRESET_CHOICES

HZ_SUFFIX = "_over_2pi_Hz"

_NUMBER_OR_NULL = {"type": ["number", "null"]}


def _system_properties() -> Dict[str, Any]:
    props: Dict[str, Any] = {}
    for f in fields(SystemParams):
        if f.name == "detuning_source":
            continue
        props[f.name] = dict(_NUMBER_OR_NULL, description=f"SystemParams.{f.name}")
        if f.name in ANGULAR_FIELDS:
            props[f.name + HZ_SUFFIX] = {
                "type": "number",
                "description": f"{f.name} / 2π in Hz",
            }
    return props


def _material_properties() -> Dict[str, Any]:
    props: Dict[str, Any] = {
        f.name: {"type": "number", "exclusiveMinimum": 0, "description": f"MaterialParams.{f.name}"}
        for f in fields(MaterialParams)
    }
    props["gamma_G" + HZ_SUFFIX] = {
        "type": "number",
        "exclusiveMinimum": 0,
        "description": "gyromagnetic ratio / 2π in Hz/T",
    }
    return props


SYSTEM_SCHEMA = {
    "$schema": "http://json-schema.org/draft-07/schema#",
    "title": "SystemParams",
    "description": "Operating point of the magnomechanical system",
    "type": "object",
    "additionalProperties": False,
    "properties": _system_properties(),
}

MATERIAL_SCHEMA = {
    "$schema": "http://json-schema.org/draft-07/schema#",
    "title": "MaterialParams",
    "description": "YIG sphere and drive power",
    "type": "object",
    "additionalProperties": False,
    "properties": _material_properties(),
}

AXIS_SCHEMA = {
    "$schema": "http://json-schema.org/draft-07/schema#",
    "title": "SweepAxis",
    "description": "Uniform grid over one parameter, endpoints included",
    "type": "object",
    "additionalProperties": False,
    "required": ["name", "start", "stop", "count"],
    "properties": {
        "name": {"type": "string", "enum": list(SWEEP_PARAMETERS)},
        "start": {"type": "number"},
        "stop": {"type": "number"},
        "count": {"type": "integer", "minimum": 2},
        "unit": {
            "type": "string",
            "enum": ["rad/s", "omega_b", "2pi_Hz", "K", "rad"],
            "description": "Unit of start/stop for frequency axes (default rad/s)",
        },
    },
}

SWEEP_SCHEMA = {
    "$schema": "http://json-schema.org/draft-07/schema#",
    "title": "Sweep",
    "type": "object",
    "additionalProperties": False,
    "properties": {
        "axis1": AXIS_SCHEMA,
        "axis2": AXIS_SCHEMA,
        "stability_only": {"type": "boolean"},
        "pairs": {
            "type": "array",
            "minItems": 1,
            "items": {
                "type": "array",
                "minItems": 2,
                "maxItems": 2,
                "items": {"type": "string", "enum": list(MODES)},
            },
        },
    },
}

TOLERANCES_SCHEMA = {
    "$schema": "http://json-schema.org/draft-07/schema#",
    "title": "Tolerances",
    "description": "Solver settings and validation thresholds",
    "type": "object",
    "additionalProperties": False,
    "properties": {
        "steady_state_tol": {"type": "number"},
        "max_iter": {"type": "integer", "minimum": 1},
        "lyapunov_residual": {"type": "number"},
        "time_integration": {"type": "number"},
        "measure_oracle": {"type": "number"},
        "symplectic_match": {"type": "number"},
        "drift_equivalence": {"type": "number"},
        "validation_draws": {"type": "integer", "minimum": 1},
        "time_integration_instances": {"type": "integer", "minimum": 1},
    },
}

RUN_CONFIG_SCHEMA = {
    "$schema": "http://json-schema.org/draft-07/schema#",
    "title": "RunConfig",
    "description": "Complete run configuration for the magnomech CLI",
    "type": "object",
    "additionalProperties": False,
    "properties": {
        "system": SYSTEM_SCHEMA,
        "material": MATERIAL_SCHEMA,
        "preset": {"type": "string", "enum": list(PRESET_CHOICES)},
        "sweep": SWEEP_SCHEMA,
        "output": {"type": "string", "minLength": 1},
        "workers": {"type": "integer", "minimum": 1},
        "tolerances": TOLERANCES_SCHEMA,
    },
}


# Export all schemas
SCHEMAS = {
    "run_config": RUN_CONFIG_SCHEMA,
    "system": SYSTEM_SCHEMA,
    "material": MATERIAL_SCHEMA,
    "axis": AXIS_SCHEMA,
    "sweep": SWEEP_SCHEMA,
    "tolerances": TOLERANCES_SCHEMA,
}


def validate_schema(data, schema_name: str) -> Tuple[bool, str]:
    """
    Validate data against a schema.

    Args:
        data: Data to validate
        schema_name: One of the SCHEMAS keys

    Returns:
        (is_valid, error_message)
    """
    schema = SCHEMAS.get(schema_name)
    if not schema:
        return False, f"Unknown schema: {schema_name}"

    try:
        jsonschema.validate(instance=data, schema=schema)
        return True, ""
    except jsonschema.ValidationError as e:
        location = "/".join(str(p) for p in e.absolute_path) or "<root>"
        return False, f"{location}: {e.message}"


if __name__ == "__main__":
    import json
    for name, schema in SCHEMAS.items():
        print(f"\n{'='*60}")
        print(f"Schema: {name.upper()}")
        print('='*60)
        print(json.dumps(schema, indent=2, ensure_ascii=False))
