"""Validate every committed fixture against the problem file schema."""
import json
import pathlib
import sys

import jsonschema


def main() -> int:
    docs = pathlib.Path(sys.argv[1])
    schema = json.loads((docs / "problem_schema.json").read_text())
    jsonschema.Draft202012Validator.check_schema(schema)
    validator = jsonschema.Draft202012Validator(schema)
    failures = 0
    fixtures = sorted((docs / "fixtures").glob("*.json"))
    for path in fixtures:
        errors = list(validator.iter_errors(json.loads(path.read_text())))
        for e in errors:
            print(f"{path.name}: {'/'.join(map(str, e.absolute_path))}: {e.message}")
        failures += bool(errors)
    print(f"{len(fixtures) - failures}/{len(fixtures)} fixtures valid")
    return 1 if failures or not fixtures else 0


if __name__ == "__main__":
    sys.exit(main())
