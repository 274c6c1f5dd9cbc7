"""Published JSON Schemas for every structured (--format structured) output.

Downstream tooling can validate against these; the test suite does.
Percentages that have a contractual 2-decimal rendering travel as
strings (e.g. "19.56"); open-ended statistics travel as numbers.
"""

from __future__ import annotations

_PCT_STRING = {"type": ["string", "null"], "pattern": r"^-?\d+\.\d{2}$"}
_RATE_STRING = {"type": "string", "pattern": r"^-?\d+\.\d{2}$"}

DISTRIBUTION_ROW = {
    "type": "object",
    "required": ["key", "label", "total", "true", "false", "pct_true"],
    "properties": {
        "key": {"type": "string"},
        "label": {"type": "string"},
        "total": {"type": "integer", "minimum": 0},
        "true": {"type": "integer", "minimum": 0},
        "false": {"type": "integer", "minimum": 0},
        "pct_true": _PCT_STRING,
    },
    "additionalProperties": False,
}

STATS_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["kind", "records", "rows", "any_error_pct", "consistency"],
    "properties": {
        "kind": {"const": "stats"},
        "records": {"type": "integer", "minimum": 0},
        "rows": {"type": "array", "items": DISTRIBUTION_ROW},
        "any_error_pct": _PCT_STRING,
        "consistency": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["annotator_id", "pairs", "identical", "rate"],
                "properties": {
                    "annotator_id": {"type": "string"},
                    "pairs": {"type": "integer", "minimum": 1},
                    "identical": {"type": "integer", "minimum": 0},
                    "rate": _RATE_STRING,
                },
                "additionalProperties": False,
            },
        },
        "violations": {"type": "array", "items": {"type": "string"}},
    },
    "additionalProperties": False,
}

VALIDATE_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["kind", "records", "violations", "valid"],
    "properties": {
        "kind": {"const": "validate"},
        "records": {"type": "integer", "minimum": 0},
        "violations": {"type": "array", "items": {"type": "string"}},
        "valid": {"type": "boolean"},
    },
    "additionalProperties": False,
}

AGREEMENT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["kind", "raters", "items", "classes"],
    "properties": {
        "kind": {"const": "agreement"},
        "raters": {"type": "array", "items": {"type": "string"}, "minItems": 2},
        "items": {"type": "integer", "minimum": 1},
        "classes": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["key", "label", "fleiss", "unanimous_pct", "pairs"],
                "properties": {
                    "key": {"type": "string"},
                    "label": {"type": "string"},
                    "fleiss": {"type": "number", "minimum": -1, "maximum": 1},
                    "unanimous_pct": {"type": "number", "minimum": 0, "maximum": 100},
                    "pairs": {
                        "type": "array",
                        "items": {
                            "type": "object",
                            "required": ["raters", "kappa"],
                            "properties": {
                                "raters": {
                                    "type": "array",
                                    "items": {"type": "string"},
                                    "minItems": 2,
                                    "maxItems": 2,
                                },
                                "kappa": {"type": "number", "minimum": -1, "maximum": 1},
                            },
                            "additionalProperties": False,
                        },
                    },
                },
                "additionalProperties": False,
            },
        },
    },
    "additionalProperties": False,
}

EVAL_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["kind", "detector", "orientation", "gold_policy", "targets"],
    "properties": {
        "kind": {"const": "eval"},
        "detector": {"type": "string"},
        "orientation": {"enum": ["higher_means_error", "higher_means_quality"]},
        "gold_policy": {"enum": ["union", "majority"]},
        "targets": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["key", "label", "metric", "value", "positives", "total"],
                "properties": {
                    "key": {"type": "string"},
                    "label": {"type": "string"},
                    "metric": {"enum": ["AUROC", "AUPRC"]},
                    "value": {"type": ["number", "null"], "minimum": 0, "maximum": 1},
                    "positives": {"type": "integer", "minimum": 0},
                    "total": {"type": "integer", "minimum": 0},
                    "note": {"type": "string"},
                },
                "additionalProperties": False,
            },
        },
    },
    "additionalProperties": False,
}

_FACT_SET = {"type": "array", "items": {"type": "string"}}

FACTS_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": [
        "kind",
        "facts",
        "maximally_simple",
        "information_errors",
        "simplification_sets",
        "substitutions",
    ],
    "properties": {
        "kind": {"const": "facts"},
        "facts": {"type": "integer", "minimum": 0},
        "maximally_simple": {"type": "boolean"},
        "information_errors": {
            "type": "object",
            "required": ["topic_shift", "faithfulness", "factuality"],
            "properties": {
                "topic_shift": _FACT_SET,
                "faithfulness": _FACT_SET,
                "factuality": _FACT_SET,
            },
            "additionalProperties": False,
        },
        "simplification_sets": {
            "type": "object",
            "required": [
                "out_of_scope",
                "loss",
                "summarization",
                "clarification",
                "potential_clarification",
                "out_of_scope_new",
            ],
            "properties": {
                "out_of_scope": _FACT_SET,
                "loss": _FACT_SET,
                "summarization": _FACT_SET,
                "clarification": _FACT_SET,
                "potential_clarification": _FACT_SET,
                "out_of_scope_new": _FACT_SET,
            },
            "additionalProperties": False,
        },
        "substitutions": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["source_fact", "generated_fact", "kind", "position"],
                "properties": {
                    "source_fact": {"type": "string"},
                    "generated_fact": {"type": "string"},
                    "kind": {
                        "enum": ["Overgeneralization", "Overspecification", "None"]
                    },
                    "position": {
                        "enum": ["subject", "relation", "object", None]
                    },
                },
                "additionalProperties": False,
            },
        },
    },
    "additionalProperties": False,
}

TAXONOMY_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["kind", "codes", "categories"],
    "properties": {
        "kind": {"const": "taxonomy"},
        "codes": {"type": "array", "items": {"type": "string"}, "minItems": 14, "maxItems": 14},
        "categories": {
            "type": "array",
            "minItems": 4,
            "maxItems": 4,
            "items": {
                "type": "object",
                "required": ["key", "letter", "label", "focus", "codes"],
                "properties": {
                    "key": {"type": "string"},
                    "letter": {"type": "string"},
                    "label": {"type": "string"},
                    "focus": {"type": "string"},
                    "codes": {
                        "type": "array",
                        "minItems": 1,
                        "items": {
                            "type": "object",
                            "required": ["code", "display", "name", "definition", "examples"],
                            "properties": {
                                "code": {"type": "string"},
                                "display": {"type": "string"},
                                "name": {"type": "string"},
                                "definition": {"type": "string", "minLength": 1},
                                "examples": {
                                    "type": "array",
                                    "minItems": 1,
                                    "items": {
                                        "type": "object",
                                        "required": ["source", "simplification"],
                                        "properties": {
                                            "source": {"type": "string"},
                                            "simplification": {"type": "string"},
                                        },
                                        "additionalProperties": False,
                                    },
                                },
                            },
                            "additionalProperties": False,
                        },
                    },
                },
                "additionalProperties": False,
            },
        },
    },
    "additionalProperties": False,
}

SCHEMAS: dict[str, dict] = {
    "stats": STATS_SCHEMA,
    "validate": VALIDATE_SCHEMA,
    "agreement": AGREEMENT_SCHEMA,
    "eval": EVAL_SCHEMA,
    "facts": FACTS_SCHEMA,
    "taxonomy": TAXONOMY_SCHEMA,
}
