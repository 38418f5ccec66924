# JSON schemas of the documents read by the solver

native_instance_schema = {
    "type": "object",
    "properties": {
        "name": {"type": "string"},
        # display scale only; serialize_native writes non-integer scales as "p/q"
        "ticks_per_day": {
            "oneOf": [
                {"type": "number", "exclusiveMinimum": 0},
                {"type": "string", "pattern": "^[1-9][0-9]*/[1-9][0-9]*$"}
            ]
        },
        "groups": {
            "type": "array",
            "items": {
                "type": "object",
                "properties": {
                    "id": {"type": "integer", "minimum": 1},
                    "name": {"type": "string"},
                    "capacity": {"type": "integer", "minimum": 1}
                },
                "required": ["id", "name", "capacity"],
                "additionalProperties": False
            }
        },
        "activities": {
            "type": "array",
            "minItems": 1,
            "items": {
                "type": "object",
                "properties": {
                    "id": {"type": "integer", "minimum": 1},
                    "duration": {"type": "integer", "minimum": 0},
                    "workgroup": {"type": "string"},
                    # keys are group ids in string form, JSON objects have string keys
                    "demands": {
                        "type": "object",
                        "patternProperties": {"^[1-9][0-9]*$": {"type": "integer", "minimum": 0}},
                        "additionalProperties": False
                    },
                    "successors": {"type": "array", "items": {"type": "integer", "minimum": 1}}
                },
                "required": ["id", "duration", "workgroup", "demands", "successors"],
                "additionalProperties": False
            }
        }
    },
    "required": ["name", "ticks_per_day", "groups", "activities"],
    "additionalProperties": False
}

_levels = {"type": "array", "minItems": 1}

sweep_spec_schema = {
    "type": "object",
    "properties": {
        "population_sizes": {**_levels, "items": {"type": "integer", "minimum": 2}},
        "crossover_probabilities": {**_levels, "items": {"type": "number", "minimum": 0, "maximum": 1}},
        "mutation_probabilities": {**_levels, "items": {"type": "number", "minimum": 0, "maximum": 1}},
        "crossovers": {**_levels, "items": {"enum": ["pmx", "pbx"]}},
        "mutations": {**_levels, "items": {"enum": ["swap", "insert"]}},
        "policies": {**_levels, "items": {"enum": ["est", "west"]}},
        "time_limit_ms": {"type": ["integer", "null"], "exclusiveMinimum": 0},
        "max_generations": {"type": ["integer", "null"], "minimum": 1},
        "seeds_per_cell": {"type": "integer", "minimum": 1},
        "master_seed": {"type": "integer", "minimum": 0},
        "elite_count": {"type": "integer", "minimum": 1}
    },
    "additionalProperties": False
}

generator_spec_schema = {
    "type": "object",
    "properties": {
        "activities": {"type": "integer", "minimum": 1},
        "workgroups": {"type": "integer", "minimum": 1},
        "groups": {"type": "integer", "minimum": 1},
        "capacity_range": {"type": "array", "items": {"type": "integer", "minimum": 1}, "minItems": 2, "maxItems": 2},
        "duration_range": {"type": "array", "items": {"type": "integer", "minimum": 0}, "minItems": 2, "maxItems": 2},
        "demand_range": {"type": "array", "items": {"type": "integer", "minimum": 0}, "minItems": 2, "maxItems": 2},
        "groups_per_activity": {"type": "integer", "minimum": 0},
        "precedence_density": {"type": "number", "minimum": 0, "maximum": 1},
        "ticks_per_day": {"type": "number", "exclusiveMinimum": 0},
        "seed": {"type": "integer", "minimum": 0},
        "name": {"type": "string"}
    },
    "additionalProperties": False
}
