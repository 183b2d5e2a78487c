"""Command-line front end.

Exit codes: 0 success, 2 usage, 3 config error, 4 dimension mismatch,
5 output I/O error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from tnnsim import bench, config, ppa, trace
from tnnsim.column import ColumnConfig
from tnnsim.errors import ConfigError, OutputError, TnnError

SEED_ENV = "TNNSIM_SEED"


def _seed(args) -> int | None:
    if args.seed is not None:
        return args.seed
    env = os.environ.get(SEED_ENV)
    if env:
        try:
            return int(env)
        except ValueError:
            raise ConfigError(f"{SEED_ENV}={env!r} is not an integer") from None
    return None


def _inputs(model, args, cycles):
    if not args.data:
        return None
    try:
        ds = bench.load_csv(args.data)
    except OSError as exc:
        raise ConfigError(f"{args.data}: cannot read dataset: {exc.strerror}") from None
    except TnnError:
        raise
    except ValueError as exc:
        raise ConfigError(f"{args.data}: bad dataset: {exc}") from None
    first = model if isinstance(model, ColumnConfig) else model.layers[0].column_config
    enc = bench.EncoderConfig(ds.dim, gamma_period_ticks=first.gamma_period_ticks)
    return trace.dataset_inputs(ds, enc, cycles)


def cmd_run(args, learn: bool) -> int:
    model = config.parse_config(args.config, _seed(args))
    rec = trace.run(model, args.cycles, learn, _inputs(model, args, args.cycles), getattr(args, "snapshot_every", 0))
    for p in trace.emit_trace(rec, args.out, args.format):
        print(f"wrote {p}")
    return 0


def _write_or_print(text: str, out) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    try:
        Path(out).write_text(text)
    except OSError as exc:
        raise OutputError(f"{out}: {exc.strerror}") from None


def cmd_ppa(args) -> int:
    print("# macro table (leakage nW, delay ps, area um^2)")
    sys.stdout.write(ppa.macros_to_csv())
    reports = []
    for path in args.config or []:
        model = config.parse_config(path)
        name = Path(path).stem
        if isinstance(model, ColumnConfig):
            r = ppa.estimate_column(model, design=name)
        else:
            r = ppa.estimate_network(model, design=name)
        if args.freq:
            r = ppa.scale_power_with_frequency(r, args.freq)
        reports.append(r)
    if reports:
        print("# estimates")
        text = ppa.reports_to_json(reports) + "\n" if args.format == "json" else ppa.reports_to_csv(reports)
        _write_or_print(text, args.out)
    return 0


def cmd_bench(args) -> int:
    fn = bench.SUITES[args.suite]
    seeds = [args.seed_base + i for i in range(args.seeds)] if args.seed is None else [args.seed]
    if args.jobs > 1 and len(seeds) > 1:
        with ProcessPoolExecutor(args.jobs) as ex:
            results = list(ex.map(fn, seeds, [args.cycles] * len(seeds)))
    else:
        results = [fn(s, args.cycles) for s in seeds]
    _write_or_print(json.dumps(results, indent=2) + "\n", args.out)
    return 0


def cmd_schema(args) -> int:
    _write_or_print(json.dumps(config.SCHEMA, indent=2) + "\n", args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="tnnsim", description="Temporal neural network simulator and PPA estimator")
    sub = ap.add_subparsers(dest="command", required=True)

    for name, helptext in (("simulate", "inference only"), ("learn", "online STDP learning")):
        sp = sub.add_parser(name, help=helptext)
        sp.add_argument("--config", required=True)
        sp.add_argument("--cycles", type=int, required=True)
        sp.add_argument("--out", required=True)
        sp.add_argument("--format", choices=("csv", "json"), default="csv")
        sp.add_argument("--seed", type=int, help=f"overrides the config seed and ${SEED_ENV}")
        sp.add_argument("--data", help="dataset CSV (label, features...); default: random spikes")
        if name == "learn":
            sp.add_argument("--snapshot-every", type=int, default=0, metavar="K")

    sp = sub.add_parser("ppa", help="power/performance/area estimate")
    sp.add_argument("--config", action="append", help="column or network config; repeatable")
    sp.add_argument("--freq", type=float, help="aclk frequency in Hz (default 100 kHz)")
    sp.add_argument("--format", choices=("csv", "json"), default="csv")
    sp.add_argument("--out")

    sp = sub.add_parser("bench", help="desk-scale learning benchmarks")
    sp.add_argument("--suite", choices=sorted(bench.SUITES), required=True)
    sp.add_argument("--cycles", type=int, default=1500)
    sp.add_argument("--seed", type=int)
    sp.add_argument("--seeds", type=int, default=1)
    sp.add_argument("--seed-base", type=int, default=0)
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("--out")

    sp = sub.add_parser("schema", help="print the config JSON schema")
    sp.add_argument("--out")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "simulate":
            return cmd_run(args, learn=False)
        if args.command == "learn":
            return cmd_run(args, learn=True)
        if args.command == "ppa":
            return cmd_ppa(args)
        if args.command == "bench":
            return cmd_bench(args)
        return cmd_schema(args)
    except TnnError as exc:
        print(f"tnnsim: error: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
