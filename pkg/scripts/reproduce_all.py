#!/usr/bin/env python3
"""Run every scenario with its default parameters and print the summaries.

    python scripts/reproduce_all.py [OUT_DIR] [--only NAME ...]

Each scenario writes into OUT_DIR/<scenario>/.  The rotor density run uses
the full j=1000 default here; expect it to take the better part of a minute.
"""
import argparse
import json
import sys
import time
from pathlib import Path

from qmatrix.errors import QMatrixError
from qmatrix.scenarios import SCENARIOS, ScenarioConfig, run


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("out", nargs="?", default="reproduction", type=Path)
    parser.add_argument("--only", nargs="+", choices=sorted(SCENARIOS), default=sorted(SCENARIOS))
    args = parser.parse_args(argv)

    failures = 0
    for name in args.only:
        start = time.perf_counter()
        try:
            manifest = run(ScenarioConfig(name, {}, args.out / name))
        except QMatrixError as exc:
            failures += 1
            print(f"{name:18s} failed: {exc}")
            continue
        elapsed = time.perf_counter() - start
        print(f"{name:18s} {elapsed:7.2f} s  {json.dumps(manifest.summary, default=float)}")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
