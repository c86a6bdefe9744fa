"""Initial topology, hotspot user generation and the greedy association.

The layout places one cell at the origin and the remaining cells on a ring at
sqrt(3) * cell_radius, the spacing at which equal coverage disks tile without
holes. Users pile into the central cell (capacity + configured excess) and the
rest spread round-robin over the neighbor cells.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import ConfigError
from .params import RadioParams, EnvironmentParams, ScenarioConfig
from .power import hover_power

RING_SPACING_FACTOR = math.sqrt(3.0)


@dataclass(frozen=True)
class GroundUser:
    id: int
    x_m: float
    y_m: float


@dataclass
class UavBsState:
    id: int
    x_m: float
    y_m: float
    h_m: float
    p_hov_w: float
    altitude_changed: bool = False


@dataclass
class AssociationMap:
    """Per-cell ordered user lists, the link power matrix and served flags."""

    omega: list[list[int]]
    tx_power: np.ndarray          # (n_users, n_uavs) W; zero for absent links
    served: np.ndarray            # (n_users,) bool

    def cell_of(self, user_id: int) -> int | None:
        for j, members in enumerate(self.omega):
            if user_id in members:
                return j
        return None


def uav_layout(n_uavs: int, cell_radius_m: float) -> np.ndarray:
    """(K, 2) positions: origin first, neighbors evenly spaced on the ring."""
    if n_uavs < 1:
        raise ConfigError("need at least one cell")
    xy = np.zeros((n_uavs, 2))
    ring = RING_SPACING_FACTOR * cell_radius_m
    for m in range(n_uavs - 1):
        ang = 2.0 * math.pi * m / (n_uavs - 1)
        xy[m + 1] = (ring * math.cos(ang), ring * math.sin(ang))
    return xy


def place_uavbs(config: ScenarioConfig) -> list[UavBsState]:
    """All cells at the initial altitude with their hover power committed."""
    xy = uav_layout(config.n_uavs, config.cell_radius_m)
    p_hov = hover_power(config.phys, config.h_init_m)
    return [
        UavBsState(id=j, x_m=float(x), y_m=float(y), h_m=config.h_init_m, p_hov_w=p_hov)
        for j, (x, y) in enumerate(xy)
    ]


def generate_users(config: ScenarioConfig, rng: np.random.Generator) -> list[GroundUser]:
    """Hotspot realization: an overloaded central disk, the rest round-robin.

    Deterministic given the generator state; positions are uniform on each
    disk via the square-root-radius transform.
    """
    n_central = config.omega_max + config.excess_users
    n_rest = config.n_users - n_central
    if n_rest < 0:
        raise ConfigError("central cell demand exceeds the user population")
    n_neighbors = config.n_uavs - 1
    if n_rest > 0 and n_neighbors == 0:
        raise ConfigError("leftover users but no neighbor cells to hold them")

    centers = uav_layout(config.n_uavs, config.cell_radius_m)
    cells = [0] * n_central + [1 + (k % n_neighbors) for k in range(n_rest)]

    users = []
    for uid, cell in enumerate(cells):
        u, v = rng.random(), rng.random()
        radius = config.cell_radius_m * math.sqrt(u)
        ang = 2.0 * math.pi * v
        users.append(GroundUser(
            id=uid,
            x_m=float(centers[cell, 0] + radius * math.cos(ang)),
            y_m=float(centers[cell, 1] + radius * math.sin(ang)),
        ))
    return users


def count_excess(omega_j, omega_max: int) -> int:
    """Users beyond capacity in one cell, never negative."""
    return max(0, len(omega_j) - omega_max)


def _link_matrices(users_xy, uav_xy, altitudes, env: EnvironmentParams):
    """Horizontal distances and path losses for every (user, uav) pair."""
    dx = users_xy[:, 0:1] - uav_xy[:, 0][None, :]
    dy = users_xy[:, 1:2] - uav_xy[:, 1][None, :]
    r = np.hypot(dx, dy)
    h = np.broadcast_to(altitudes[None, :], r.shape)
    pl = kernels.path_loss_db(r, np.ascontiguousarray(h),
                              env.a, env.b, env.excess_diff_db, env.beta_db)
    return r, pl


def _commit_link_powers(assoc: AssociationMap, r_matrix, altitudes,
                        hover_powers, env: EnvironmentParams, radio: RadioParams,
                        cells=None) -> None:
    """Set served-link powers via the per-link power rule, one cell at a time."""
    for j in (range(len(assoc.omega)) if cells is None else cells):
        members = [i for i in assoc.omega[j] if assoc.served[i]]
        if not members:
            continue
        idx = np.asarray(members)
        pl = kernels.path_loss_db(
            r_matrix[idx, j], np.full(idx.size, altitudes[j]),
            env.a, env.b, env.excess_diff_db, env.beta_db)
        p_min = kernels.min_tx_power_w(pl, radio.snr_threshold, radio.noise_power_w)
        gains = 10.0 ** (-pl / 10.0)
        assoc.tx_power[idx, j] = kernels.optimal_tx_power_w(
            gains, hover_powers[j], p_min,
            radio.snr_threshold, radio.noise_power_w, radio.p_max_bound_w)


def greedy_associate(users, uavs, radio: RadioParams, env: EnvironmentParams,
                     omega_max: int, enforce_capacity: bool) -> AssociationMap:
    """Associate every user with its best-SNR cell.

    SNR is compared at a common reference power (the configured maximum), so
    the winner is the cell with the least average path loss; ties go to the
    lowest cell id. With ``enforce_capacity`` each cell admits only its
    omega_max best-SNR users and the rest stay unserved (the uncoordinated
    baseline); without it every user is associated and overload is left for
    the controller to fix.
    """
    if not uavs:
        raise ConfigError("need at least one cell to associate with")
    users_xy = np.array([[u.x_m, u.y_m] for u in users])
    uav_xy = np.array([[u.x_m, u.y_m] for u in uavs])
    altitudes = np.array([u.h_m for u in uavs])
    hover_powers = np.array([u.p_hov_w for u in uavs])
    n_users, n_uavs = len(users), len(uavs)

    r, pl = _link_matrices(users_xy, uav_xy, altitudes, env)
    # argmax of SNR at equal power == argmin path loss; first index wins ties
    best = np.argmin(pl, axis=1)

    omega: list[list[int]] = [[] for _ in range(n_uavs)]
    served = np.ones(n_users, dtype=bool)
    for i in range(n_users):
        omega[best[i]].append(i)

    if enforce_capacity:
        for j in range(n_uavs):
            if len(omega[j]) <= omega_max:
                continue
            members = np.asarray(omega[j])
            # strongest links first; stable sort keeps id order on exact ties
            order = np.argsort(pl[members, j], kind="stable")
            keep = members[order[:omega_max]]
            drop = members[order[omega_max:]]
            served[drop] = False
            keep_set = set(keep.tolist())
            omega[j] = [i for i in omega[j] if i in keep_set]

    assoc = AssociationMap(omega=omega, tx_power=np.zeros((n_users, n_uavs)),
                           served=served)
    _commit_link_powers(assoc, r, altitudes, hover_powers, env, radio)
    return assoc


@dataclass
class WorldState:
    """Mutable per-trial snapshot consumed by the controller."""

    config: ScenarioConfig
    users_xy: np.ndarray          # (N, 2)
    uav_xy: np.ndarray            # (K, 2)
    altitudes: np.ndarray         # (K,)
    hover_powers: np.ndarray      # (K,)
    assoc: AssociationMap
    r_matrix: np.ndarray          # (N, K) horizontal distances
    altitude_changed: np.ndarray = field(default=None)  # (K,) bool

    def __post_init__(self):
        if self.altitude_changed is None:
            self.altitude_changed = np.zeros(len(self.altitudes), dtype=bool)

    @property
    def n_users(self) -> int:
        return self.users_xy.shape[0]

    @property
    def n_uavs(self) -> int:
        return self.uav_xy.shape[0]


def build_world(config: ScenarioConfig, rng: np.random.Generator,
                enforce_capacity: bool) -> WorldState:
    """Assemble the initial per-trial state with link powers committed."""
    uavs = place_uavbs(config)
    users = generate_users(config, rng)
    assoc = greedy_associate(users, uavs, config.radio, config.env,
                             config.omega_max, enforce_capacity)
    users_xy = np.array([[u.x_m, u.y_m] for u in users])
    uav_xy = np.array([[u.x_m, u.y_m] for u in uavs])
    altitudes = np.array([u.h_m for u in uavs])
    hover_powers = np.array([u.p_hov_w for u in uavs])
    dx = users_xy[:, 0:1] - uav_xy[:, 0][None, :]
    dy = users_xy[:, 1:2] - uav_xy[:, 1][None, :]
    return WorldState(
        config=config,
        users_xy=users_xy,
        uav_xy=uav_xy,
        altitudes=altitudes,
        hover_powers=hover_powers,
        assoc=assoc,
        r_matrix=np.hypot(dx, dy),
    )
