"""Per-cell and system-level performance metrics for one trial."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .controller import DeploymentPlan
from .params import EnvironmentParams, RadioParams, ScenarioConfig

# fixed CSV column order for one trial row; vector fields join their entries
# with ';' inside a single cell
TRIAL_CSV_COLUMNS = (
    "total_capacity_bps",
    "total_ee_bit_per_j",
    "ee_ratio_bit_per_j",
    "jfi",
    "jfi_load",
    "jfi_degenerate",
    "hover_power_total_w",
    "power_total_w",
    "served_count",
    "unserved_count",
    "per_cell_capacity_bps",
    "per_cell_ee_bit_per_j",
)


@dataclass(frozen=True)
class TrialMetrics:
    per_cell_capacity: np.ndarray    # (K,) bit/s
    total_capacity: float            # bit/s
    per_cell_ee: np.ndarray          # (K,) bit/J
    total_ee: float                  # bit/J, sum of per-cell efficiencies
    ee_ratio: float                  # bit/J, total rate over total power
    hover_power_total: float         # W
    power_total: float               # W
    jfi: float                       # fairness over cell capacities
    jfi_load: float                  # fairness over served user counts
    jfi_degenerate: bool             # all-zero capacity vector
    served_count: int
    unserved_count: int

    def scalar_fields(self) -> dict[str, float]:
        """Scalar metrics in a fixed order, the unit aggregated over trials."""
        return {
            "total_capacity_bps": self.total_capacity,
            "total_ee_bit_per_j": self.total_ee,
            "ee_ratio_bit_per_j": self.ee_ratio,
            "jfi": self.jfi,
            "jfi_load": self.jfi_load,
            "hover_power_total_w": self.hover_power_total,
            "power_total_w": self.power_total,
            "served_count": float(self.served_count),
            "unserved_count": float(self.unserved_count),
        }

    def to_csv_row(self) -> str:
        cells = [
            f"{self.total_capacity:.17g}",
            f"{self.total_ee:.17g}",
            f"{self.ee_ratio:.17g}",
            f"{self.jfi:.17g}",
            f"{self.jfi_load:.17g}",
            "1" if self.jfi_degenerate else "0",
            f"{self.hover_power_total:.17g}",
            f"{self.power_total:.17g}",
            str(self.served_count),
            str(self.unserved_count),
            ";".join(f"{c:.17g}" for c in self.per_cell_capacity),
            ";".join(f"{e:.17g}" for e in self.per_cell_ee),
        ]
        return ",".join(cells)


def _served_members(plan: DeploymentPlan, j: int) -> list[int]:
    return [i for i in plan.association.omega[j] if plan.association.served[i]]


def cell_capacity(plan: DeploymentPlan, j: int, radio: RadioParams,
                  env: EnvironmentParams) -> float:
    """Summed Shannon rate of one cell at the committed powers and geometry."""
    members = _served_members(plan, j)
    if not members:
        return 0.0
    idx = np.asarray(members)
    r = np.hypot(plan.users_xy[idx, 0] - plan.uav_xy[j, 0],
                 plan.users_xy[idx, 1] - plan.uav_xy[j, 1])
    pl = kernels.path_loss_db(r, np.full(idx.size, float(plan.altitudes[j])),
                              env.a, env.b, env.excess_diff_db, env.beta_db)
    gamma = plan.tx_powers[idx, j] * 10.0 ** (-pl / 10.0) / radio.noise_power_w
    return float(np.sum(radio.bandwidth_hz * np.log2(1.0 + gamma)))


def jain_fairness(capacities) -> float:
    """Fairness index (sum C)^2 / (K sum C^2) in [1/K, 1]; 1 when all are zero."""
    c = np.asarray(capacities, dtype=np.float64)
    if c.size == 0:
        raise ValueError("need at least one cell capacity")
    if np.any(c < 0):
        raise ValueError("capacities cannot be negative")
    total_sq = float(np.sum(c * c))
    if total_sq == 0.0:
        return 1.0
    return float(np.sum(c)) ** 2 / (c.size * total_sq)


def aggregate_trial(plan: DeploymentPlan, config: ScenarioConfig) -> TrialMetrics:
    """Fill every trial metric from a validated plan."""
    radio, env = config.radio, config.env
    k = plan.n_uavs

    capacities = np.array([cell_capacity(plan, j, radio, env) for j in range(k)])
    tx_sums = np.zeros(k)
    for j in range(k):
        members = _served_members(plan, j)
        if members:
            tx_sums[j] = float(np.sum(plan.tx_powers[np.asarray(members), j]))
    cell_power = tx_sums + plan.hover_powers
    per_cell_ee = capacities / cell_power

    served = int(np.count_nonzero(plan.association.served))
    total_cap = float(np.sum(capacities))
    hover_total = float(np.sum(plan.hover_powers))
    power_total = float(np.sum(cell_power))
    served_loads = [len(_served_members(plan, j)) for j in range(k)]

    return TrialMetrics(
        per_cell_capacity=capacities,
        total_capacity=total_cap,
        per_cell_ee=per_cell_ee,
        total_ee=float(np.sum(per_cell_ee)),
        ee_ratio=total_cap / power_total,
        hover_power_total=hover_total,
        power_total=power_total,
        jfi=jain_fairness(capacities),
        jfi_load=jain_fairness(served_loads),
        jfi_degenerate=bool(np.all(capacities == 0.0)),
        served_count=served,
        unserved_count=int(plan.association.served.size - served),
    )
