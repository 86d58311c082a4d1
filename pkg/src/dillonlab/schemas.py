"""JSON schemas for the emitted documents (draft 2020-12)."""

_HEX = {"type": "string", "pattern": "^0x[0-9a-f]+$"}
_VERDICT = {"enum": ["D-function", "not-D-function"]}

_DREPORT_PROPS = {
    "schema": {"const": "dreport/1"},
    "n": {"type": "integer", "minimum": 1},
    "m": {"type": "integer", "minimum": 1},
    "method": {"enum": ["bruteforce", "ddt", "moment4", "moment3-quadratic",
                        "hyperplane-quadratic", "anf-span", "plateaued"]},
    "verdict": _VERDICT,
    "covered": {"type": "integer", "minimum": 0},
    "missing_total": {"type": "integer", "minimum": 0},
    "missing": {"type": "array", "items": _HEX},
    "witnesses": {
        "type": "object",
        "propertyNames": {"pattern": "^0x[0-9a-f]+$"},
        "additionalProperties": {
            "type": "object",
            "properties": {"a": _HEX, "b": _HEX, "x": _HEX},
            "required": ["a", "b"],
            "additionalProperties": False,
        },
    },
    "modulus": {"type": ["string", "null"]},
    "provenance": {"type": "object"},
    "threads": {"type": "integer", "minimum": 1},
    "elapsed_ms": {"type": "number", "minimum": 0},
}
_DREPORT_REQUIRED = ["schema", "n", "m", "method", "verdict", "covered", "missing_total", "missing",
                     "witnesses", "modulus", "provenance", "threads"]

DREPORT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "$id": "dreport/1",
    "type": "object",
    "properties": _DREPORT_PROPS,
    "required": _DREPORT_REQUIRED + ["elapsed_ms"],
    "additionalProperties": False,
}

# reports embedded in an analysis carry their timing in the top-level "timings" field
_EMBEDDED_DREPORT = {
    "type": "object",
    "properties": {k: v for k, v in _DREPORT_PROPS.items() if k != "elapsed_ms"},
    "required": _DREPORT_REQUIRED,
    "additionalProperties": False,
}

_OPT_INT = {"type": ["integer", "null"]}

ANALYSIS_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "$id": "analysis/1",
    "type": "object",
    "properties": {
        "schema": {"const": "analysis/1"},
        "function": {
            "type": "object",
            "properties": {
                "spec": {"type": "string"},
                "n": {"type": "integer"},
                "m": {"type": "integer"},
                "modulus": {"type": ["string", "null"]},
            },
            "required": ["spec", "n", "m", "modulus"],
        },
        "degree": {"type": "integer", "minimum": 0},
        "delta_F": _OPT_INT,
        "nonlinearity": _OPT_INT,
        "is_apn": {"type": ["boolean", "null"]},
        "plateaued": {
            "type": ["object", "null"],
            "properties": {
                "is_plateaued": {"type": "boolean"},
                "is_strongly_plateaued": {"type": "boolean"},
                "amplitude_histogram": {"type": "object", "additionalProperties": {"type": "integer"}},
                "bent_count": {"type": "integer"},
            },
            "required": ["is_plateaued", "amplitude_histogram", "bent_count"],
        },
        "verdict": _VERDICT,
        "d_reports": {"type": "array", "minItems": 1, "items": _EMBEDDED_DREPORT},
        "bounds": {
            "type": ["object", "null"],
            "properties": {
                "m_min": {"type": "integer"},
                "m_max": {"type": "integer"},
                "m_max_quadratic": _OPT_INT,
                "within": {"type": "boolean"},
            },
            "required": ["m_min", "m_max", "within"],
        },
        "skipped": {"type": "object", "additionalProperties": {"type": "string"}},
        "timings": {"type": "object", "additionalProperties": {"type": "number"}},
    },
    "required": ["schema", "function", "degree", "delta_F", "nonlinearity", "is_apn", "plateaued",
                 "verdict", "d_reports", "bounds", "timings"],
    "additionalProperties": False,
}
