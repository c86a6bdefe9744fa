"""Command-line entry point for running offloading sweeps.

Every flag can also be supplied through an environment variable with the
``UAV_OFFLOAD_`` prefix (for example ``UAV_OFFLOAD_TRIALS=50``); explicit
flags win. ``UAV_OFFLOAD_BACKEND`` selects the numba or numpy kernel backend
before import.
"""
from __future__ import annotations

import argparse
import os
import sys

from . import kernels
from .controller import Scheme
from .errors import ConfigError
from .harness import SweepSpec, emit_results, run_sweep, trial_plan
from .params import ScenarioConfig, load_config

ENV_PREFIX = "UAV_OFFLOAD_"
_SCHEME_CHOICES = ("snr", "load", "random", "greedy", "all")
_EMIT_CHOICES = ("csv", "summary", "plan")


def _env_default(name: str, fallback):
    return os.environ.get(ENV_PREFIX + name.upper(), fallback)


def parse_excess(text: str) -> tuple[int, ...]:
    """Parse '10,30,50' lists or 'start:stop[:step]' inclusive ranges."""
    text = text.strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) not in (2, 3):
            raise ValueError(f"bad excess range {text!r}; use start:stop[:step]")
        start, stop = int(parts[0]), int(parts[1])
        step = int(parts[2]) if len(parts) == 3 else 1
        if step <= 0 or stop < start:
            raise ValueError(f"bad excess range {text!r}")
        return tuple(range(start, stop + 1, step))
    values = tuple(int(v) for v in text.split(",") if v.strip() != "")
    if not values:
        raise ValueError("excess list is empty")
    return values


def _schemes_for(name: str) -> tuple[Scheme, ...]:
    if name == "all":
        return (Scheme.SNR_AWARE, Scheme.LOAD_AWARE,
                Scheme.RANDOM_HANDOVER, Scheme.GREEDY_BASELINE)
    return (Scheme.from_name(name),)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="uav-offload",
        description="Monte Carlo sweeps of multi-UAV traffic offloading schemes",
    )
    parser.add_argument("--config", default=_env_default("config", None),
                        help="INI config file overriding the built-in defaults")
    parser.add_argument("--scheme", choices=_SCHEME_CHOICES,
                        default=_env_default("scheme", "all"),
                        help="offloading scheme to run (default: all)")
    parser.add_argument("--excess", default=_env_default("excess", "0:50:5"),
                        help="excess users: '10,30,50' or 'start:stop[:step]'")
    parser.add_argument("--trials", type=int,
                        default=int(_env_default("trials", 1000)),
                        help="Monte Carlo trials per grid point")
    parser.add_argument("--seed", type=int, default=int(_env_default("seed", 1)),
                        help="base seed (unsigned 64-bit)")
    parser.add_argument("--out", default=_env_default("out", "results"),
                        help="output directory")
    parser.add_argument("--workers", type=int,
                        default=int(_env_default("workers", 1)),
                        help="parallel worker processes")
    parser.add_argument("--emit", action="append", choices=_EMIT_CHOICES,
                        default=None,
                        help="artifacts to write; repeatable "
                             "(default: csv and summary)")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    emit = tuple(args.emit) if args.emit else \
        tuple(_env_default("emit", "csv,summary").split(","))

    try:
        config = load_config(args.config) if args.config else ScenarioConfig()
        spec = SweepSpec(
            excess_values=parse_excess(args.excess),
            trials=args.trials,
            schemes=_schemes_for(args.scheme),
            base_seed=args.seed,
        )
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    print(f"backend={kernels.BACKEND} schemes={[s.short_name for s in spec.schemes]} "
          f"excess={list(spec.excess_values)} trials={spec.trials} "
          f"seed={spec.base_seed} workers={args.workers}")

    result = run_sweep(spec, config, workers=args.workers)
    ok = sum(c.trials_ok for c in result.combos.values())
    total = spec.trials * len(spec.schemes) * len(spec.excess_values)
    print(f"completed {ok}/{total} trials in {result.wall_time_s:.1f} s "
          f"({len(result.failures)} infeasible)")

    if ok == 0:
        print("error: every trial failed", file=sys.stderr)
        return 1

    paths = {}
    if "csv" in emit or "summary" in emit:
        written = emit_results(result, args.out)
        if "csv" in emit:
            paths["csv"] = written["csv"]
        if "summary" in emit:
            paths["summary"] = written["summary"]
    if "plan" in emit:
        os.makedirs(args.out, exist_ok=True)
        for scheme in spec.schemes:
            for excess in spec.excess_values:
                plan = trial_plan(config.with_excess(excess).with_seed(spec.base_seed),
                                  scheme, trial_index=0)
                path = os.path.join(
                    args.out, f"plan_{scheme.short_name}_excess{excess}.json")
                with open(path, "w", encoding="utf-8", newline="\n") as fh:
                    fh.write(plan.to_json() + "\n")
                paths[f"plan_{scheme.short_name}_{excess}"] = path

    for label, path in paths.items():
        print(f"  {label}: {path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
