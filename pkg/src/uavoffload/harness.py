"""Monte Carlo experiment runner: seeded trials, excess-user sweeps over all
schemes, deterministic aggregation and result emission.

Every trial owns its world exclusively and is keyed by
(scheme, excess, trial_index); the user realization depends only on
(seed, excess, trial_index), so schemes compare on identical instances.
Aggregation sorts by key before reducing, which makes the output independent
of worker count and arrival order.
"""
from __future__ import annotations

import concurrent.futures
import os
import time
from dataclasses import dataclass, field

import numpy as np

from .controller import Scheme, plan_from_state, run_afd, validate_plan, DeploymentPlan
from .errors import InfeasibleError
from .metrics import TrialMetrics, aggregate_trial
from .params import ScenarioConfig
from .scenario import build_world

_CHUNK_TRIALS = 100

CSV_HEADER = "scheme,excess,metric,mean,std,trials"


@dataclass(frozen=True)
class SweepSpec:
    excess_values: tuple[int, ...] = tuple(range(0, 51, 5))
    trials: int = 1000
    schemes: tuple[Scheme, ...] = (Scheme.SNR_AWARE, Scheme.LOAD_AWARE,
                                   Scheme.RANDOM_HANDOVER, Scheme.GREEDY_BASELINE)
    base_seed: int = 1

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("need at least one trial")
        if not self.excess_values or any(e < 0 for e in self.excess_values):
            raise ValueError("excess values must be nonempty and nonnegative")
        if not self.schemes:
            raise ValueError("need at least one scheme")


@dataclass
class ComboResult:
    """Aggregates for one (scheme, excess) grid point."""

    scheme: Scheme
    excess: int
    trials_ok: int
    infeasible: int
    means: dict[str, float]
    stds: dict[str, float]


@dataclass
class AggregateResult:
    spec: SweepSpec
    combos: dict[tuple[Scheme, int], ComboResult]
    failures: list[str] = field(default_factory=list)
    wall_time_s: float = 0.0

    def mean(self, scheme: Scheme, excess: int, metric: str) -> float:
        return self.combos[(scheme, excess)].means[metric]


def _trial_rngs(config: ScenarioConfig, trial_index: int):
    """Two independent streams per trial: user generation and scheme randomness."""
    root = np.random.SeedSequence(
        entropy=[config.rng_seed, config.excess_users, trial_index])
    users_ss, algo_ss = root.spawn(2)
    return np.random.default_rng(users_ss), np.random.default_rng(algo_ss)


def trial_plan(config: ScenarioConfig, scheme: Scheme,
               trial_index: int) -> DeploymentPlan:
    """Run one trial end to end and return the validated deployment plan."""
    users_rng, algo_rng = _trial_rngs(config, trial_index)
    if scheme == Scheme.GREEDY_BASELINE:
        state = build_world(config, users_rng, enforce_capacity=True)
        plan = plan_from_state(state)
    else:
        state = build_world(config, users_rng, enforce_capacity=False)
        plan = run_afd(state, scheme, algo_rng)

    violations = validate_plan(plan, config)
    fairness_only = [v for v in violations if v.kind == "fairness"]
    hard = [v for v in violations if v.kind != "fairness"]
    if hard:
        raise RuntimeError(
            f"plan violates constraints ({scheme.short_name}, "
            f"excess={config.excess_users}, trial={trial_index}): "
            + "; ".join(v.message for v in hard))
    if fairness_only:
        raise InfeasibleError(
            f"{fairness_only[0].message} ({scheme.short_name}, "
            f"excess={config.excess_users}, trial={trial_index})")
    return plan


def run_trial(config: ScenarioConfig, scheme: Scheme,
              trial_index: int) -> TrialMetrics:
    """One Monte Carlo realization; bitwise deterministic in its inputs."""
    return aggregate_trial(trial_plan(config, scheme, trial_index), config)


def _run_chunk(args):
    config, scheme, lo, hi = args
    rows, fails = [], []
    for t in range(lo, hi):
        try:
            rows.append((t, run_trial(config, scheme, t).scalar_fields()))
        except InfeasibleError as exc:
            fails.append((t, str(exc)))
    return (scheme, config.excess_users, rows, fails)


def run_sweep(spec: SweepSpec, config: ScenarioConfig,
              workers: int = 1) -> AggregateResult:
    """Run trials x excess_values x schemes and aggregate per grid point.

    Results are identical for any worker count: trials are seeded by key and
    sorted before reduction.
    """
    start = time.perf_counter()
    tasks = []
    for scheme in spec.schemes:
        for excess in spec.excess_values:
            combo_cfg = config.with_excess(excess).with_seed(spec.base_seed)
            for lo in range(0, spec.trials, _CHUNK_TRIALS):
                tasks.append((combo_cfg, scheme, lo,
                              min(lo + _CHUNK_TRIALS, spec.trials)))

    outputs = []
    if workers <= 1:
        outputs = [_run_chunk(t) for t in tasks]
    else:
        with concurrent.futures.ProcessPoolExecutor(max_workers=workers) as pool:
            outputs = list(pool.map(_run_chunk, tasks))

    by_combo: dict[tuple[Scheme, int], list] = {}
    fail_msgs: dict[tuple[Scheme, int], list] = {}
    for scheme, excess, rows, fails in outputs:
        by_combo.setdefault((scheme, excess), []).extend(rows)
        fail_msgs.setdefault((scheme, excess), []).extend(fails)

    combos = {}
    failures = []
    for scheme in spec.schemes:
        for excess in spec.excess_values:
            key = (scheme, excess)
            rows = sorted(by_combo.get(key, []))
            fails = sorted(fail_msgs.get(key, []))
            failures.extend(msg for _, msg in fails)
            means, stds = {}, {}
            if rows:
                names = rows[0][1].keys()
                for name in names:
                    vals = np.array([r[1][name] for r in rows])
                    means[name] = float(vals.mean())
                    stds[name] = float(vals.std(ddof=1)) if vals.size > 1 else 0.0
            combos[key] = ComboResult(
                scheme=scheme, excess=excess, trials_ok=len(rows),
                infeasible=len(fails), means=means, stds=stds)

    return AggregateResult(spec=spec, combos=combos, failures=failures,
                           wall_time_s=time.perf_counter() - start)


def emit_results(result: AggregateResult, out_dir: str) -> dict[str, str]:
    """Write the long-format CSV and the JSON summary; both byte-stable."""
    import json

    os.makedirs(out_dir, exist_ok=True)
    csv_path = os.path.join(out_dir, "results.csv")
    json_path = os.path.join(out_dir, "summary.json")

    lines = [CSV_HEADER]
    for scheme in sorted(result.spec.schemes):
        for excess in sorted(result.spec.excess_values):
            combo = result.combos[(scheme, excess)]
            for metric in combo.means:
                lines.append(
                    f"{scheme.short_name},{excess},{metric},"
                    f"{combo.means[metric]:.17g},{combo.stds[metric]:.17g},"
                    f"{combo.trials_ok}")
    try:
        with open(csv_path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("\n".join(lines) + "\n")
    except OSError as exc:
        raise OSError(f"cannot write results CSV to {csv_path}: {exc}") from exc

    summary = {
        "base_seed": result.spec.base_seed,
        "trials": result.spec.trials,
        "excess_values": sorted(result.spec.excess_values),
        "schemes": [s.short_name for s in sorted(result.spec.schemes)],
        "combos": [
            {
                "scheme": combo.scheme.short_name,
                "excess": combo.excess,
                "trials_ok": combo.trials_ok,
                "infeasible": combo.infeasible,
                "mean": combo.means,
                "std": combo.stds,
            }
            for key in sorted(result.combos)
            for combo in [result.combos[key]]
        ],
    }
    try:
        with open(json_path, "w", encoding="utf-8", newline="\n") as fh:
            json.dump(summary, fh, indent=2, sort_keys=True)
            fh.write("\n")
    except OSError as exc:
        raise OSError(f"cannot write summary JSON to {json_path}: {exc}") from exc

    return {"csv": csv_path, "summary": json_path}
