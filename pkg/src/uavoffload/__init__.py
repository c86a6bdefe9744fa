"""Multi-UAV cellular traffic offloading: channel and hover-power models,
energy-efficient power control, fair re-association, and a Monte Carlo harness.
"""
from .channel import (
    LinkGeometry,
    achievable_rate,
    average_path_loss,
    coverage_radius,
    linear_gain,
    los_probability,
    max_los_distance,
    min_tx_power,
    optimal_elevation_angle,
    required_altitude,
    snr,
)
from .controller import (
    DeploymentPlan,
    Reassociation,
    Scheme,
    Violation,
    plan_from_state,
    reassociate,
    run_afd,
    validate_plan,
)
from .errors import (
    ConfigError,
    HoverLimitError,
    InfeasibleError,
    NoCandidateError,
    NoRootError,
)
from .harness import (
    AggregateResult,
    SweepSpec,
    emit_results,
    run_sweep,
    run_trial,
    trial_plan,
)
from .metrics import TrialMetrics, aggregate_trial, cell_capacity, jain_fairness
from .params import (
    AltitudeBounds,
    EnvironmentParams,
    RadioParams,
    ScenarioConfig,
    UavPhysicalParams,
    load_config,
)
from .power import (
    altitude_from_hover_power,
    energy_efficiency,
    hover_power,
    optimal_tx_power,
    total_power,
)
from .scenario import (
    AssociationMap,
    GroundUser,
    UavBsState,
    WorldState,
    build_world,
    count_excess,
    generate_users,
    greedy_associate,
    place_uavbs,
)

__version__ = "0.1.0"
