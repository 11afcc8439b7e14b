#!/usr/bin/env python3
"""Runs every dsn subcommand on small inputs, validates the JSON it prints
against docs/schemas and checks that a second run prints the same bytes."""

import json
import pathlib
import subprocess
import sys
import tempfile

import jsonschema
from referencing import Registry, Resource


def load_registry(schema_dir):
    resources = []
    for path in sorted(schema_dir.glob("*.schema.json")):
        resources.append((path.name, Resource.from_contents(json.loads(path.read_text()))))
    return Registry().with_resources(resources)


def main():
    if len(sys.argv) != 4:
        print("usage: check_schemas.py <dsn binary> <schema dir> <data dir>", file=sys.stderr)
        return 2
    dsn, schema_dir, data = sys.argv[1], pathlib.Path(sys.argv[2]), pathlib.Path(sys.argv[3])
    registry = load_registry(schema_dir)
    failures = 0

    def run(args, schema, codes=(0,), save=None):
        nonlocal failures
        first = subprocess.run([dsn, *args], capture_output=True)
        second = subprocess.run([dsn, *args], capture_output=True)
        label = " ".join(args)
        if first.returncode not in codes:
            print(f"FAIL {label}: exit {first.returncode}: {first.stderr.decode().strip()}")
            failures += 1
            return
        if first.returncode >= 2:
            if first.stdout:
                print(f"FAIL {label}: output on stdout alongside exit {first.returncode}")
                failures += 1
            else:
                print(f"ok   {label} (exit {first.returncode})")
            return
        if first.stdout != second.stdout:
            print(f"FAIL {label}: output differs between runs")
            failures += 1
            return
        try:
            doc = json.loads(first.stdout)
            validator = jsonschema.Draft202012Validator(
                registry.contents(schema), registry=registry
            )
            validator.validate(doc)
        except (json.JSONDecodeError, jsonschema.ValidationError) as e:
            print(f"FAIL {label}: {e}")
            failures += 1
            return
        if save:
            pathlib.Path(save).write_bytes(first.stdout)
        print(f"ok   {label}")

    with tempfile.TemporaryDirectory() as tmp:
        tmp = pathlib.Path(tmp)
        inst = [str(p) for p in sorted(data.glob("*.json"))]
        for kind, k in [("pure-diamond", "3"), ("flawed-diamond", "3"), ("cycle", "4"), ("expander", "4")]:
            out = tmp / f"{kind}.json"
            run(["generate", kind, "--k", k, "--seed", "7"], "instance.schema.json", save=out)
            inst.append(str(out))
        run(["generate", "pure-diamond", "--k", "3", "--seed", "7", "--orientation", "in"], "instance.schema.json")
        for f in inst:
            name = pathlib.Path(f).stem
            sol = tmp / f"{name}.sol.json"
            run(["oracle", f, "--max-edges", "1000"], "solution.schema.json", codes=(0, 1), save=sol)
            if name != "expander":
                run(["solve", f], "solution.schema.json", codes=(0, 1, 4))
            run(["verify", f, str(sol)], "verify.schema.json", codes=(0, 1))
            run(["classify", f, "--lambda", "1", "--delta", "1"], "classify.schema.json", codes=(0, 1))
            run(["classify", f, "--lambda", "2", "--delta", "2", "--star"], "classify.schema.json", codes=(0, 1, 4))
            if json.loads(sol.read_text())["cost"] is not None:
                run(["analyze", f, "--solution", str(sol)], "analyze.schema.json", codes=(0, 4))
    print("schema check:", "PASS" if failures == 0 else f"FAIL ({failures})")
    return 0 if failures == 0 else 1


if __name__ == "__main__":
    sys.exit(main())
