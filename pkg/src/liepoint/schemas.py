"""JSON Schemas for the command outputs (draft 2020-12)."""

_str_map = {"type": "object", "additionalProperties": {"type": "string"}}
_table = {"type": "array", "items": {"type": "array", "items": {"type": "string"}}}

SYMM = {
    "type": "object",
    "required": ["system", "degree", "dimension", "generators"],
    "properties": {
        "system": {"type": "string"},
        "degree": {"type": "integer", "minimum": 0},
        "dimension": {"type": "integer", "minimum": 0},
        "generators": {"type": "array", "items": {
            "type": "object", "required": ["field", "components", "check_generator"],
            "properties": {"field": {"type": "string"}, "components": _str_map,
                           "check_generator": {"type": "boolean"}}}},
        "expected": {"type": "object", "required": ["labels", "contained", "span_equal"]},
    },
}

TABLE = {
    "type": "object",
    "required": ["labels", "commutator", "adjoint_sign", "adjoint"],
    "properties": {
        "labels": {"type": "array", "items": {"type": "string"}},
        "commutator": _table,
        "adjoint_sign": {"enum": ["eq6", "paper"]},
        "adjoint": _table,
        "differences": {"type": "array", "items": {
            "type": "object", "required": ["table", "row", "column", "printed", "computed",
                                           "reproducible_with_sign"]}},
        "unreproducible_rows": {"type": "array", "items": {"type": "string"}},
    },
}

FLOWS = {
    "type": "object",
    "required": ["flows"],
    "properties": {"flows": {"type": "array", "items": {
        "type": "object", "required": ["label", "map"],
        "properties": {"label": {"type": "string"}, "map": _str_map,
                       "matches_printed": {"type": "boolean"}}}}},
}

OPTIMAL = {
    "type": "object",
    "required": ["seed", "samples", "representatives", "bucket_counts", "case_counts",
                 "reference_diff", "inequivalence", "replay_ok"],
    "properties": {
        "seed": {"type": "integer"},
        "samples": {"type": "integer", "minimum": 1},
        "representatives": {"type": "object", "required": ["reference", "derived"]},
        "bucket_counts": {"type": "object", "additionalProperties": {"type": "integer"}},
        "case_counts": {"type": "object", "additionalProperties": {"type": "integer"}},
        "families": {"type": "object"},
        "reference_diff": {"type": "object",
                       "required": ["confirmed", "not_observed_in_samples", "additions",
                                    "fixed_points"]},
        "inequivalence": {"type": "object"},
        "replay_ok": {"type": "boolean"},
    },
}

REDUCE = {
    "type": "object",
    "required": ["element", "field", "characteristics", "ansatz", "reduced"],
    "properties": {
        "element": {"type": "string"},
        "characteristics": _str_map,
        "ansatz": {"type": "object",
                   "required": ["similarity_variable", "prefactors", "ansatz", "domain"]},
        "reduced": {"type": "object", "required": ["variable", "unknowns", "orders", "equations"],
                    "properties": {"equations": {"type": "array", "items": {"type": "string"}}}},
    },
}

VERIFY = {
    "type": "object",
    "required": ["grid", "mode", "equations", "max_residual", "passed", "tolerance"],
    "properties": {
        "mode": {"enum": ["analytic", "fd"]},
        "equations": {"type": "array", "items": {
            "type": "object", "required": ["index", "max_abs", "mean_abs"],
            "properties": {"max_abs": {"type": "number", "minimum": 0},
                           "mean_abs": {"type": "number", "minimum": 0}}}},
        "max_residual": {"type": "number", "minimum": 0},
        "passed": {"type": "boolean"},
    },
}

SCHEMAS = {"symm": SYMM, "table": TABLE, "flows": FLOWS, "optimal": OPTIMAL,
           "reduce": REDUCE, "verify": VERIFY}
