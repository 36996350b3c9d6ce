"""Cross-checks the fraclap configuration validator against the jsonschema package."""

import json
import subprocess
import sys
import tempfile

import jsonschema

BINARY, SCHEMA = sys.argv[1], sys.argv[2]

CASES = [
    ("constants", {"n": 1, "s": 0.5}),
    ("constants", {"n": 1, "s": 0.5, "extra": True}),
    ("constants", {"n": 4, "s": 0.5}),
    ("constants", {"n": 2, "s": 1.0}),
    ("constants", {"n": 2}),
    ("constants", {"n": 1.0, "s": 0.25}),
    ("constants", {"n": "1", "s": 0.25}),
    ("eval", {"field": "gaussian", "s": 0.3, "points": [0.0, [0.5]]}),
    ("eval", {"field": "gauss", "s": 0.3, "points": [0.0]}),
    ("eval", {"field": {"name": "bump", "lambda": 2.0, "shift": [1.0]}, "s": 0.3, "points": [0.0]}),
    ("eval", {"field": {"name": "bump", "lambda": 0.0}, "s": 0.3, "points": [0.0]}),
    ("eval", {"field": {"name": "bump", "colour": 1}, "s": 0.3, "points": [0.0]}),
    ("eval", {"field": "gaussian", "s": 0.3, "points": []}),
    ("eval", {"field": "gaussian", "s": 0.3, "points": [[0, 1, 2, 3]]}),
    ("eval", {"field": "gaussian", "s": 0.3, "points": [0.0], "quadrature": {"tol_rel": 1e-8}}),
    ("eval", {"field": "gaussian", "s": 0.3, "points": [0.0], "quadrature": {"tol": 1e-8}}),
    ("eval", {"field": "gaussian", "s": 0.3, "points": [0.0], "quadrature": {"tail_mode": "numeric"}}),
    ("spectral", {"field": "gaussian", "s": 0.5, "n": 3}),
    ("spectral", {"field": "gaussian", "s": 0.5, "N": 64, "compose": 0.2}),
    ("extend", {"field": "gaussian", "s": 0.5, "points": [[0.0, 0.5]], "trace": [0.0]}),
    ("extend", {"field": "gaussian", "s": 0.5, "points": [[0.0]]}),
    ("solve-ball", {"s": 0.5, "g": "gaussian", "g_radii": [1.5], "points": [0.0]}),
    ("solve-ball", {"s": 0.5, "g": "gaussian", "g_radii": [-1.5], "points": [0.0]}),
    ("mc", {"s": 0.5, "g": "gaussian", "points": [0.0], "seed": 3, "N": 10,
            "domain": {"balls": [{"radius": 1.0}], "boxes": [{"lo": [-1], "hi": [1]}]}}),
    ("mc", {"s": 0.5, "g": "gaussian", "points": [0.0], "domain": {"balls": [{"centre": 0, "radius": 1}]}}),
    ("mc", {"s": 0.5, "g": "gaussian", "points": [0.0], "seed": -1}),
    ("mc", {"s": 0.5, "g": "gaussian", "points": [0.0], "mode": "walk"}),
    ("mc", {"s": 0.5, "g": "gaussian", "points": [0.0], "t": [0.1]}),
    ("verify", {"suite": "max"}),
    ("verify", {"suite": "liouville"}),
    ("verify", {"suites": "max"}),
    ("approx", {"target": "x2", "m": 40, "R": 3, "s": 0.5, "norm": "C1"}),
    ("approx", {"target": "x2", "R": 1.0}),
    ("approx", {"target": "cubic"}),
]


def main():
    with open(SCHEMA) as f:
        schema = json.load(f)
    failures = 0
    for sub, config in CASES:
        oracle = jsonschema.Draft7Validator({**schema, "$ref": "#/definitions/" + sub})
        expected = oracle.is_valid(config)
        with tempfile.NamedTemporaryFile("w", suffix=".json", delete=False) as tmp:
            json.dump(config, tmp)
        proc = subprocess.run([BINARY, sub, "--config", tmp.name, "--validate-only"],
                              capture_output=True, text=True)
        got = proc.returncode == 0
        status = "ok" if got == expected else "MISMATCH"
        if got != expected or (not got and proc.returncode != 2):
            failures += 1
        print(f"{status:8} {sub:10} expected={'valid' if expected else 'invalid':7} exit={proc.returncode} {json.dumps(config)}")
    print(f"{len(CASES) - failures}/{len(CASES)} cases agree")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
