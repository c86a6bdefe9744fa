"""Centralized offloading controller: re-association schemes, the main
altitude/power optimization loop, and the deployment-plan audit.

The controller drains every overloaded cell one user at a time. Each handover
picks a (user, target cell) pair via the selected scheme, raises the target to
the altitude that covers the user at the optimal elevation angle, and finally
re-optimizes hover and link powers of every cell whose altitude or membership
changed.
"""
from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import kernels
from .channel import optimal_elevation_angle
from .errors import InfeasibleError, NoCandidateError
from .params import ScenarioConfig
from .power import hover_power
from .scenario import AssociationMap, WorldState, count_excess


class Scheme(enum.IntEnum):
    """Re-association scheme selector; values mirror the controller input codes."""

    SNR_AWARE = 0
    LOAD_AWARE = 1
    RANDOM_HANDOVER = 2
    GREEDY_BASELINE = 3      # no controller involvement; capacity-enforced greedy

    @property
    def short_name(self) -> str:
        return {0: "snr", 1: "load", 2: "random", 3: "greedy"}[int(self)]

    @classmethod
    def from_name(cls, name: str) -> "Scheme":
        table = {"snr": cls.SNR_AWARE, "load": cls.LOAD_AWARE,
                 "random": cls.RANDOM_HANDOVER, "greedy": cls.GREEDY_BASELINE}
        try:
            return table[name.strip().lower()]
        except KeyError:
            raise ValueError(f"unknown scheme name {name!r}") from None


class Reassociation(NamedTuple):
    user: int
    uav: int
    comparisons: int     # instrumented operation count for the complexity audit


@dataclass(frozen=True)
class Violation:
    kind: str            # altitude | power | capacity | fairness
    subject: int | None  # uav id, user id, or None for system-level checks
    message: str


@dataclass
class DeploymentPlan:
    """Controller output: altitudes, hover powers, link powers, association.

    Carries the trial geometry so capacities and audits can be recomputed from
    the plan alone.
    """

    altitudes: np.ndarray         # (K,) m
    hover_powers: np.ndarray      # (K,) W
    tx_powers: np.ndarray         # (N, K) W
    association: AssociationMap
    users_xy: np.ndarray          # (N, 2) m
    uav_xy: np.ndarray            # (K, 2) m

    @property
    def n_uavs(self) -> int:
        return len(self.altitudes)

    def link_range(self, user: int, uav: int) -> float:
        return math.hypot(self.users_xy[user, 0] - self.uav_xy[uav, 0],
                          self.users_xy[user, 1] - self.uav_xy[uav, 1])

    def to_json(self) -> str:
        """Stable text form (per-cell altitude/hover power, per-link power)."""
        links = []
        for j, members in enumerate(self.association.omega):
            for i in members:
                links.append({
                    "user": int(i),
                    "uav": int(j),
                    "served": bool(self.association.served[i]),
                    "power_w": float(self.tx_powers[i, j]),
                })
        links.sort(key=lambda e: (e["uav"], e["user"]))
        doc = {
            "altitudes_m": [float(h) for h in self.altitudes],
            "hover_powers_w": [float(p) for p in self.hover_powers],
            "links": links,
        }
        return json.dumps(doc, indent=2, sort_keys=True)


def _argmin_lowest_id(values, keys):
    """Key of the smallest value; exact ties resolve to the lowest key."""
    best, best_key = None, None
    for v, k in zip(values, keys):
        if best is None or v < best or (v == best and k < best_key):
            best, best_key = v, k
    return best_key


def reassociate(scheme: Scheme, overloaded_j: int, state: WorldState,
                rng: np.random.Generator) -> Reassociation:
    """Pick the (user, target cell) pair to hand over from an overloaded cell.

    Only cells with spare capacity are candidates; picking a full cell would
    recreate the overload elsewhere. All argmin ties break to the lowest id.
    Raises NoCandidateError when every other cell is full.
    """
    omega_j = state.assoc.omega[overloaded_j]
    if count_excess(omega_j, state.config.omega_max) <= 0:
        raise ValueError(f"cell {overloaded_j} is not overloaded")
    candidates = [
        j for j in range(state.n_uavs)
        if j != overloaded_j and len(state.assoc.omega[j]) < state.config.omega_max
    ]
    if not candidates:
        raise NoCandidateError(
            f"no neighbor of cell {overloaded_j} has spare capacity"
        )

    comparisons = 0
    radio, env = state.config.radio, state.config.env

    if scheme == Scheme.SNR_AWARE:
        # worst currently-committed link of the overloaded cell
        members = np.asarray(omega_j)
        pl = kernels.path_loss_db(
            state.r_matrix[members, overloaded_j],
            np.full(members.size, state.altitudes[overloaded_j]),
            env.a, env.b, env.excess_diff_db, env.beta_db)
        snr = state.assoc.tx_power[members, overloaded_j] * 10.0 ** (-pl / 10.0) \
            / radio.noise_power_w
        comparisons += members.size
        i_star = int(_argmin_lowest_id(snr.tolist(), members.tolist()))
        # nearest candidate in slant distance at the coverage-optimal geometry
        theta_opt = optimal_elevation_angle(env)
        sec = 1.0 / math.cos(theta_opt)
        dists = []
        for j in candidates:
            comparisons += 4     # angle, altitude, distance, argmin step
            dists.append(float(state.r_matrix[i_star, j]) * sec)
        j_star = int(_argmin_lowest_id(dists, candidates))

    elif scheme == Scheme.LOAD_AWARE:
        loads = [len(state.assoc.omega[j]) for j in candidates]
        comparisons += len(candidates)
        j_star = int(_argmin_lowest_id(loads, candidates))
        ranges = state.r_matrix[np.asarray(omega_j), j_star]
        comparisons += len(omega_j)
        i_star = int(_argmin_lowest_id(ranges.tolist(), omega_j))

    elif scheme == Scheme.RANDOM_HANDOVER:
        comparisons += 1
        i_star = int(omega_j[int(rng.integers(len(omega_j)))])
        ranges = [float(state.r_matrix[i_star, j]) for j in candidates]
        comparisons += len(candidates)
        j_star = int(_argmin_lowest_id(ranges, candidates))

    else:
        raise ValueError(f"scheme {scheme!r} performs no re-association")

    return Reassociation(i_star, j_star, comparisons)


def _reoptimize_marked(state: WorldState) -> None:
    """Recompute hover and link powers for every cell flagged as changed."""
    radio, env, phys = state.config.radio, state.config.env, state.config.phys
    for j in range(state.n_uavs):
        if not state.altitude_changed[j]:
            continue
        state.hover_powers[j] = hover_power(phys, float(state.altitudes[j]))
        members = [i for i in state.assoc.omega[j] if state.assoc.served[i]]
        if not members:
            continue
        idx = np.asarray(members)
        pl = kernels.path_loss_db(
            state.r_matrix[idx, j], np.full(idx.size, state.altitudes[j]),
            env.a, env.b, env.excess_diff_db, env.beta_db)
        p_min = kernels.min_tx_power_w(pl, radio.snr_threshold, radio.noise_power_w)
        gains = 10.0 ** (-pl / 10.0)
        state.assoc.tx_power[idx, j] = kernels.optimal_tx_power_w(
            gains, state.hover_powers[j], p_min,
            radio.snr_threshold, radio.noise_power_w, radio.p_max_bound_w)


def _plan_of(state: WorldState) -> DeploymentPlan:
    return DeploymentPlan(
        altitudes=state.altitudes.copy(),
        hover_powers=state.hover_powers.copy(),
        tx_powers=state.assoc.tx_power.copy(),
        association=state.assoc,
        users_xy=state.users_xy,
        uav_xy=state.uav_xy,
    )


def run_afd(state: WorldState, scheme: Scheme, rng: np.random.Generator,
            trace: list | None = None) -> DeploymentPlan:
    """Drain every overloaded cell, then re-optimize the cells that changed.

    Target altitudes are the coverage requirement of the handed-over user,
    clamped to the legal band and never lowered below an earlier commit (so
    previously moved users keep coverage). Pass a list as ``trace`` to collect
    per-handover instrumentation records.
    """
    if scheme == Scheme.GREEDY_BASELINE:
        raise ValueError("the greedy baseline bypasses the controller")
    config = state.config
    tan_opt = math.tan(optimal_elevation_angle(config.env))

    for j in range(state.n_uavs):
        while count_excess(state.assoc.omega[j], config.omega_max) > 0:
            try:
                move = reassociate(scheme, j, state, rng)
            except NoCandidateError as exc:
                raise InfeasibleError(
                    f"cell {j} still has "
                    f"{count_excess(state.assoc.omega[j], config.omega_max)} "
                    f"excess users but every neighbor is full"
                ) from exc
            if trace is not None:
                trace.append({
                    "scheme": scheme,
                    "omega_size": len(state.assoc.omega[j]),
                    "n_uavs": state.n_uavs,
                    "comparisons": move.comparisons,
                })
            i_star, j_star = move.user, move.uav

            h_cover = float(state.r_matrix[i_star, j_star]) * tan_opt
            h_new = max(config.bounds.clamp(h_cover), float(state.altitudes[j_star]))

            state.assoc.omega[j].remove(i_star)
            state.assoc.omega[j_star].append(i_star)
            state.assoc.tx_power[i_star, j] = 0.0
            state.altitudes[j_star] = h_new
            state.altitude_changed[j_star] = True
            state.altitude_changed[j] = True    # membership changed; re-audit powers

    _reoptimize_marked(state)
    return _plan_of(state)


def plan_from_state(state: WorldState) -> DeploymentPlan:
    """Package the current state unchanged (used by the greedy baseline)."""
    return _plan_of(state)


def validate_plan(plan: DeploymentPlan, config: ScenarioConfig) -> list[Violation]:
    """Audit a plan against the deployment constraints.

    Recomputes path losses and per-link minimum powers from the raw geometry,
    so a plan produced with stale powers fails here. Checks altitude bounds,
    power bounds, the per-link minimum whenever it is attainable, per-cell
    capacity, and the fairness floor.
    """
    from .metrics import cell_capacity, jain_fairness

    violations = []
    bounds, radio, env = config.bounds, config.radio, config.env

    for j in range(plan.n_uavs):
        h = float(plan.altitudes[j])
        if not bounds.h_min_m - 1e-9 <= h <= bounds.h_max_m + 1e-9:
            violations.append(Violation(
                "altitude", j, f"cell {j} altitude {h:.3f} m outside "
                f"[{bounds.h_min_m}, {bounds.h_max_m}] m"))
        load = len(plan.association.omega[j])
        if load > config.omega_max:
            violations.append(Violation(
                "capacity", j, f"cell {j} holds {load} users, above "
                f"{config.omega_max}"))

    p = plan.tx_powers
    bad = np.argwhere((p < 0.0) | (p > radio.p_max_bound_w * (1 + 1e-12)))
    for i, j in bad[:16]:
        violations.append(Violation(
            "power", int(i), f"link ({i},{j}) power {p[i, j]:.6g} W outside "
            f"[0, {radio.p_max_bound_w:.6g}] W"))

    for j in range(plan.n_uavs):
        members = [i for i in plan.association.omega[j]
                   if plan.association.served[i]]
        if not members:
            continue
        idx = np.asarray(members)
        r = np.hypot(plan.users_xy[idx, 0] - plan.uav_xy[j, 0],
                     plan.users_xy[idx, 1] - plan.uav_xy[j, 1])
        pl = kernels.path_loss_db(r, float(plan.altitudes[j]), env.a, env.b,
                                  env.excess_diff_db, env.beta_db)
        p_min = kernels.min_tx_power_w(pl, radio.snr_threshold,
                                       radio.noise_power_w)
        weak = (p_min <= radio.p_max_bound_w) & \
               (plan.tx_powers[idx, j] < p_min * (1 - 1e-9))
        for pos in np.nonzero(weak)[0]:
            i = int(idx[pos])
            violations.append(Violation(
                "power", i,
                f"served link ({i},{j}) power {plan.tx_powers[i, j]:.6g} W "
                f"below its attainable minimum {p_min[pos]:.6g} W"))

    jfi = jain_fairness([cell_capacity(plan, j, radio, env)
                         for j in range(plan.n_uavs)])
    if jfi < config.jfi_threshold - 1e-12:
        violations.append(Violation(
            "fairness", None,
            f"fairness index {jfi:.6f} below the floor {config.jfi_threshold}"))

    return violations
