"""Command-line entry point: ``timesmn run <config.json>``, ``timesmn verify``, ``timesmn print-schema``.

Exit codes: 0 success, 2 invalid config, 3 runtime failure (``verify`` exits
1 when any criterion fails).
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from . import __version__
from .config import SCHEMA, DEFAULTS, load_config_text
from .errors import ConfigError, TimesMNError

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INVALID = 2
EXIT_RUNTIME = 3


def build_record(config_text: str, cfg, payload: dict, wall_time: float) -> dict:
    return {
        "config_text": config_text,
        "config": cfg.to_dict(),
        "version": __version__,
        "kind": cfg.kind,
        "payload": payload,
        "wall_time": wall_time,
    }


def _summary(kind: str, payload: dict) -> str:
    if kind == "equidist":
        v = payload.get("verdict")
        if v is None:
            return "equidist: hypotheses do not hold; distances reported without verdict"
        return (f"equidist: median max-mode error {v['median_max_mode_error']:.4f}, "
                f"trend ratio {v['trend_ratio']:.3f}")
    if kind == "fourier":
        return f"fourier: {len(payload['coefficients'])} coefficients"
    if kind == "dimension":
        return f"dimension: {payload['dimension']:.6f}"
    if kind == "scenery":
        return f"scenery: median stationarity gap {payload['median_gap']}"
    if kind == "density":
        return f"density: fraction of points with decreasing density {payload['fraction_decreasing']}"
    return f"convdim: {json.dumps(payload['growth'])}"


def cmd_run(path: str, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    from .pipelines import run_experiment

    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        print(f"error: cannot read config: {exc}", file=err)
        return EXIT_INVALID
    try:
        cfg = load_config_text(text)
    except ConfigError as exc:
        print(f"invalid config: {exc}", file=err)
        return EXIT_INVALID
    start = time.perf_counter()
    try:
        payload, table = run_experiment(cfg)
    except (TimesMNError, ValueError, ArithmeticError) as exc:
        print(f"run failed: {type(exc).__name__}: {exc}", file=err)
        return EXIT_RUNTIME
    record = build_record(text, cfg, payload, time.perf_counter() - start)
    if cfg.output:
        target = Path(cfg.output)
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_text(json.dumps(record, sort_keys=True, indent=1) + "\n", encoding="utf-8")
        target.with_suffix(".csv").write_text(table, encoding="utf-8")
        print(f"wrote {target} and {target.with_suffix('.csv')}", file=out)
    else:
        print(json.dumps(record, sort_keys=True), file=out)
    print(_summary(cfg.kind, payload), file=out)
    return EXIT_OK


def cmd_verify(out=None) -> int:
    out = out or sys.stdout
    from .acceptance import run_all

    results = run_all(lambda line: print(line, file=out, flush=True))
    failed = [r.number for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} criteria passed"
          + (f"; failed: {failed}" if failed else ""), file=out)
    return EXIT_OK if not failed else EXIT_FAILED


def cmd_print_schema(out=None) -> int:
    out = out or sys.stdout
    print(json.dumps({"fields": SCHEMA, "defaults": DEFAULTS}, indent=2, sort_keys=True), file=out)
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="timesmn", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="run one experiment from a JSON config")
    run.add_argument("config")
    sub.add_parser("verify", help="run the acceptance suite")
    sub.add_parser("print-schema", help="print the config schema and defaults")
    args = parser.parse_args(argv)
    if args.command == "run":
        return cmd_run(args.config)
    if args.command == "verify":
        return cmd_verify()
    return cmd_print_schema()


if __name__ == "__main__":
    sys.exit(main())
