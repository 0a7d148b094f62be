"""``qmatrix`` command line: run named scenarios and list their defaults.

Exit status: 0 success, 2 configuration error, 3 computation error, 4 I/O error.
"""
from __future__ import annotations

import argparse
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import __version__
from .errors import ConfigError, QMatrixError
from .io import default_output_dir
from .scenarios import (
    FORMATS,
    SCENARIOS,
    ScenarioConfig,
    load_config_file,
    parse_overrides,
    resolve,
    run,
)

EXIT_OK, EXIT_CONFIG, EXIT_COMPUTE, EXIT_IO = 0, 2, 3, 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise ConfigError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qmatrix", description="Matrix-mechanics scenario runner.")
    parser.add_argument("--version", action="version", version=f"qmatrix {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    run_p = sub.add_parser("run", help="run one scenario")
    run_p.add_argument("scenario")
    run_p.add_argument("overrides", nargs="*", metavar="key=value")
    run_p.add_argument("--config", action="append", default=[], metavar="FILE",
                       help="flat JSON parameter file; repeat to run several configurations")
    run_p.add_argument("--out", type=Path, default=None, metavar="DIR")
    run_p.add_argument("--formats", default="csv,pgm")
    run_p.add_argument("--jobs", type=int, default=1, metavar="N")
    run_p.add_argument("--j", type=int, default=None, dest="j_value",
                       help="angular momentum for rotor-density (shorthand for j=...)")

    sub.add_parser("list", help="list scenarios and their defaults")
    return parser


def _formats(text: str) -> frozenset:
    chosen = frozenset(f.strip() for f in text.split(",") if f.strip())
    if not chosen or chosen - FORMATS:
        raise ConfigError(f"--formats must be a subset of {sorted(FORMATS)}, got {text!r}")
    return chosen


def _configs(args) -> list[ScenarioConfig]:
    overrides = parse_overrides(args.overrides)
    if args.j_value is not None:
        if args.scenario != "rotor-density":
            raise ConfigError("--j applies only to rotor-density")
        overrides.setdefault("j", args.j_value)
    out = args.out if args.out is not None else default_output_dir()
    formats = _formats(args.formats)
    files = args.config or [None]
    configs = []
    for path in files:
        params = load_config_file(path) if path else {}
        params.update(overrides)  # command-line overrides win
        resolve(args.scenario, params)  # validate before anything runs
        target = out if len(files) == 1 else out / Path(path).stem
        configs.append(ScenarioConfig(args.scenario, params, target, formats))
    return configs


def _describe(manifest) -> str:
    return f"{manifest.scenario}: wrote {len(manifest.artifacts)} artifacts in {manifest.duration_s:.2f} s"


def _run(args) -> int:
    configs = _configs(args)
    if args.jobs < 1:
        raise ConfigError(f"--jobs must be >= 1, got {args.jobs}")
    if args.jobs == 1 or len(configs) == 1:
        manifests = [run(c) for c in configs]
    else:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            manifests = list(pool.map(run, configs))
    for cfg, m in zip(configs, manifests):
        print(f"{_describe(m)} -> {cfg.out_dir}")
    return EXIT_OK


def _list() -> int:
    for name, scenario in SCENARIOS.items():
        print(f"{name}  ({scenario.description})")
        for key, value in scenario.defaults.items():
            print(f"    {key} = {value!r}")
    return EXIT_OK


def main(argv=None) -> int:
    try:
        parser = build_parser()
        args, extra = parser.parse_known_args(argv)
        # key=value pairs placed after an option land in extra
        stray = [item for item in extra if "=" not in item or item.startswith("-")]
        if stray or (extra and args.command != "run"):
            parser.error(f"unrecognized arguments: {' '.join(stray or extra)}")
        if extra:
            args.overrides = list(args.overrides) + extra
        return _list() if args.command == "list" else _run(args)
    except ConfigError as exc:
        print(f"qmatrix: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (QMatrixError, ArithmeticError, ValueError) as exc:
        print(f"qmatrix: computation failed: {exc}", file=sys.stderr)
        return EXIT_COMPUTE
    except OSError as exc:
        print(f"qmatrix: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
