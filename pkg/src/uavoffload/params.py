"""Parameter sets for the channel, the airframe, the radio and the scenario.

Defaults reproduce the canonical urban setup: 7 cells, 250 users, 20 MHz links
at 2.4 GHz, altitudes limited to [30, 400] m. Everything is overridable through
an INI-style config file (see :func:`load_config`).
"""
from __future__ import annotations

import configparser
import math
from dataclasses import dataclass, field, replace

from .errors import ConfigError
from .units import db_to_linear, dbm_to_watt


@dataclass(frozen=True)
class EnvironmentParams:
    """Air-to-ground propagation constants for one environment type."""

    a: float = 9.61
    b: float = 0.16
    eta_los_db: float = 1.0
    eta_nlos_db: float = 20.0
    carrier_hz: float = 2.4e9
    light_speed: float = 3e8

    def __post_init__(self):
        if self.a <= 0 or self.b <= 0:
            raise ConfigError("environment constants a, b must be positive")
        if not 0 <= self.eta_los_db <= self.eta_nlos_db:
            raise ConfigError("excess losses must satisfy 0 <= eta_los <= eta_nlos")
        if self.carrier_hz <= 0 or self.light_speed <= 0:
            raise ConfigError("carrier frequency and light speed must be positive")

    @property
    def excess_diff_db(self) -> float:
        """LoS-minus-NLoS excess loss (negative for every real environment)."""
        return self.eta_los_db - self.eta_nlos_db

    @property
    def beta_db(self) -> float:
        """Frequency-dependent offset of the average path-loss curve."""
        return 20.0 * math.log10(4.0 * math.pi * self.carrier_hz / self.light_speed) + self.eta_nlos_db


@dataclass(frozen=True)
class UavPhysicalParams:
    """Rotor and airframe constants feeding the hovering-power model."""

    w_vehicle_kg: float = 10.0
    w_battery_kg: float = 2.0
    w_payload_kg: float = 8.0
    epsilon: float = 9.7e-5          # 1/m altitude decay constant
    rho0: float = 1.225              # air density, kg/m^3
    chord_length_m: float = 167.6e-3
    blade_drag_coeff: float = 1.57e-3
    advance_ratio: float = 0.4
    prop_radius_m: float = 558.2e-3 / 2.0
    rotor_count: int = 4
    disk_area_m2: float | None = None   # defaults to pi * prop_radius^2
    p_hov_max_w: float | None = None    # defaults to 2x hover power at 400 m

    def __post_init__(self):
        positives = (
            self.w_vehicle_kg, self.w_battery_kg, self.w_payload_kg, self.epsilon,
            self.rho0, self.chord_length_m, self.blade_drag_coeff,
            self.advance_ratio, self.prop_radius_m, self.rotor_count,
        )
        if any(v <= 0 for v in positives):
            raise ConfigError("all airframe constants must be positive")
        if self.disk_area_m2 is None:
            object.__setattr__(self, "disk_area_m2", math.pi * self.prop_radius_m ** 2)
        if self.disk_area_m2 <= 0:
            raise ConfigError("disk area must be positive")
        if self.p_hov_max_w is None:
            # the airframe bound is never published; leave generous headroom
            object.__setattr__(
                self, "p_hov_max_w",
                2.0 * self.base_hover_power_w * math.exp(self.epsilon * 400.0 / 2.0),
            )

    @property
    def total_weight_kg(self) -> float:
        return self.w_vehicle_kg + self.w_battery_kg + self.w_payload_kg

    @property
    def p0_w(self) -> float:
        """Induced-power coefficient of the hover model."""
        w = self.total_weight_kg
        return w ** 1.5 / math.sqrt(2.0 * self.rho0 * self.rotor_count * self.disk_area_m2)

    @property
    def blade_profile_factor(self) -> float:
        """Profile-drag correction added on top of the induced power."""
        return self.blade_drag_coeff * self.chord_length_m / (
            8.0 * self.advance_ratio ** 3 * math.pi * self.prop_radius_m
        )

    @property
    def base_hover_power_w(self) -> float:
        """Hover power at zero altitude, p0 * (1 + profile factor)."""
        return self.p0_w * (1.0 + self.blade_profile_factor)


@dataclass(frozen=True)
class RadioParams:
    """Per-link radio parameters in SI linear units."""

    bandwidth_hz: float = 20e6
    noise_w_per_hz: float = dbm_to_watt(-174.0)
    snr_threshold: float = db_to_linear(3.0)
    p_min_bound_w: float = 0.0
    p_max_bound_w: float = dbm_to_watt(29.0)

    def __post_init__(self):
        if self.bandwidth_hz <= 0 or self.noise_w_per_hz <= 0:
            raise ConfigError("bandwidth and noise density must be positive")
        if self.snr_threshold <= 0:
            raise ConfigError("SNR threshold must be positive")
        if not 0 <= self.p_min_bound_w < self.p_max_bound_w:
            raise ConfigError("power bounds must satisfy 0 <= p_min < p_max")

    @property
    def noise_power_w(self) -> float:
        """Total in-band noise power, bandwidth * density."""
        return self.bandwidth_hz * self.noise_w_per_hz


@dataclass(frozen=True)
class AltitudeBounds:
    h_min_m: float = 30.0
    h_max_m: float = 400.0

    def __post_init__(self):
        if not 0 < self.h_min_m < self.h_max_m:
            raise ConfigError("altitude bounds must satisfy 0 < h_min < h_max")

    def clamp(self, h: float) -> float:
        return min(max(h, self.h_min_m), self.h_max_m)


@dataclass(frozen=True)
class ScenarioConfig:
    """Full description of one simulated deployment."""

    n_users: int = 250
    n_uavs: int = 7
    omega_max: int = 50
    cell_radius_m: float = 200.0
    excess_users: int = 50
    h_init_m: float = 30.0
    jfi_threshold: float = 0.0
    pl_allow_db: float = 100.0   # documented limit only; no computation reads it
    rng_seed: int = 1
    env: EnvironmentParams = field(default_factory=EnvironmentParams)
    phys: UavPhysicalParams = field(default_factory=UavPhysicalParams)
    radio: RadioParams = field(default_factory=RadioParams)
    bounds: AltitudeBounds = field(default_factory=AltitudeBounds)

    def __post_init__(self):
        if self.n_uavs < 2:
            raise ConfigError("need at least a central cell and one neighbor")
        if self.omega_max < 1:
            raise ConfigError("omega_max must be at least 1")
        if self.excess_users < 0:
            raise ConfigError("excess_users cannot be negative")
        if self.n_users < self.omega_max + self.excess_users:
            raise ConfigError(
                f"n_users={self.n_users} cannot seat omega_max + excess = "
                f"{self.omega_max + self.excess_users} users in the central cell"
            )
        if self.cell_radius_m <= 0:
            raise ConfigError("cell radius must be positive")
        if not self.bounds.h_min_m <= self.h_init_m <= self.bounds.h_max_m:
            raise ConfigError("initial altitude must lie within the altitude bounds")
        if not 0 <= self.jfi_threshold <= 1:
            raise ConfigError("fairness threshold must lie in [0, 1]")
        if not 0 <= self.rng_seed < 2 ** 64:
            raise ConfigError("rng_seed must be an unsigned 64-bit integer")

    def with_excess(self, excess_users: int) -> "ScenarioConfig":
        return replace(self, excess_users=excess_users)

    def with_seed(self, rng_seed: int) -> "ScenarioConfig":
        return replace(self, rng_seed=rng_seed)


# config file sections -> (dataclass kwarg, parser); dB/dBm/degree fields are
# converted here so that everything downstream is linear SI
_SCENARIO_FIELDS = {
    "n_users": int,
    "n_uavs": int,
    "omega_max": int,
    "cell_radius_m": float,
    "excess_users": int,
    "h_init_m": float,
    "jfi_threshold": float,
    "pl_allow_db": float,
    "rng_seed": int,
}
_ENV_FIELDS = {
    "a": float,
    "b": float,
    "eta_los_db": float,
    "eta_nlos_db": float,
    "carrier_hz": float,
    "light_speed": float,
}
_PHYS_FIELDS = {
    "w_vehicle_kg": float,
    "w_battery_kg": float,
    "w_payload_kg": float,
    "epsilon": float,
    "rho0": float,
    "chord_length_m": float,
    "blade_drag_coeff": float,
    "advance_ratio": float,
    "prop_radius_m": float,
    "rotor_count": int,
    "disk_area_m2": float,
    "p_hov_max_w": float,
}
_RADIO_CONVERTED = {
    "bandwidth_hz": ("bandwidth_hz", float),
    "noise_dbm_per_hz": ("noise_w_per_hz", dbm_to_watt),
    "snr_threshold_db": ("snr_threshold", db_to_linear),
    "p_min_dbm": ("p_min_bound_w", dbm_to_watt),
    "p_max_dbm": ("p_max_bound_w", dbm_to_watt),
}
_BOUNDS_FIELDS = {"h_min_m": float, "h_max_m": float}


def _parse_section(section, fields, label):
    kwargs = {}
    for key in section:
        if key not in fields:
            raise ConfigError(f"unknown key '{key}' in section [{label}]")
        kwargs[key] = fields[key](section[key])
    return kwargs


def load_config(path: str) -> ScenarioConfig:
    """Load a ScenarioConfig from an INI file; absent keys keep their defaults."""
    parser = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    read = parser.read(path)
    if not read:
        raise ConfigError(f"cannot read config file: {path}")

    known = {"scenario", "environment", "uav", "radio", "altitude"}
    extra = set(parser.sections()) - known
    if extra:
        raise ConfigError(f"unknown config sections: {sorted(extra)}")

    try:
        scen = _parse_section(parser["scenario"], _SCENARIO_FIELDS, "scenario") \
            if parser.has_section("scenario") else {}
        env = _parse_section(parser["environment"], _ENV_FIELDS, "environment") \
            if parser.has_section("environment") else {}
        phys = _parse_section(parser["uav"], _PHYS_FIELDS, "uav") \
            if parser.has_section("uav") else {}
        bounds = _parse_section(parser["altitude"], _BOUNDS_FIELDS, "altitude") \
            if parser.has_section("altitude") else {}
        radio = {}
        if parser.has_section("radio"):
            for key in parser["radio"]:
                if key not in _RADIO_CONVERTED:
                    raise ConfigError(f"unknown key '{key}' in section [radio]")
                target, conv = _RADIO_CONVERTED[key]
                radio[target] = conv(float(parser["radio"][key]))
    except ValueError as exc:
        raise ConfigError(f"bad value in config file {path}: {exc}") from exc

    return ScenarioConfig(
        env=EnvironmentParams(**env),
        phys=UavPhysicalParams(**phys),
        radio=RadioParams(**radio),
        bounds=AltitudeBounds(**bounds),
        **scen,
    )
