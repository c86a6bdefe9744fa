"""Air-to-ground channel model: geometry, LoS probability, path loss, SNR,
rates, minimum power and the optimal elevation angle.

All functions are pure and operate on scalars in SI linear units; batched
variants for hot paths live in :mod:`uavoffload.kernels`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from .errors import NoRootError
from .params import EnvironmentParams, RadioParams

_HALF_PI = math.pi / 2.0
_ANGLE_TOL_RAD = 1e-10


@dataclass(frozen=True)
class LinkGeometry:
    """Horizontal distance, altitude, slant distance and elevation angle of one link."""

    r_m: float
    h_m: float

    @property
    def distance_m(self) -> float:
        return math.hypot(self.r_m, self.h_m)

    @property
    def elevation_rad(self) -> float:
        # straight overhead when the horizontal offset vanishes
        return _HALF_PI if self.r_m == 0.0 else math.atan(self.h_m / self.r_m)


def los_probability(env: EnvironmentParams, theta_rad: float) -> float:
    """Probability of a line-of-sight link at elevation angle theta."""
    if not 0.0 <= theta_rad <= _HALF_PI:
        raise ValueError(f"elevation angle {theta_rad} outside [0, pi/2]")
    return 1.0 / (1.0 + env.a * math.exp(-env.b * (math.degrees(theta_rad) - env.a)))


def average_path_loss(env: EnvironmentParams, h_m: float, r_m: float) -> float:
    """LoS/NLoS-weighted mean path loss in dB at altitude h and horizontal range r."""
    geom = LinkGeometry(r_m, h_m)
    d = geom.distance_m
    if d <= 0.0:
        raise ValueError("slant distance must be positive")
    p_los = los_probability(env, geom.elevation_rad)
    return env.excess_diff_db * p_los + 20.0 * math.log10(d) + env.beta_db


def linear_gain(pl_db: float) -> float:
    """Convert a dB path loss to the multiplicative channel gain."""
    return 10.0 ** (-pl_db / 10.0)


def snr(p_tx_w: float, pl_db: float, radio: RadioParams) -> float:
    """Received SNR (linear) of a link at the given transmit power."""
    if p_tx_w < 0:
        raise ValueError("transmit power cannot be negative")
    return p_tx_w * linear_gain(pl_db) / radio.noise_power_w


def achievable_rate(radio: RadioParams, gamma: float) -> float:
    """Shannon rate in bit/s for a linear SNR gamma."""
    if gamma < 0:
        raise ValueError("SNR cannot be negative")
    return radio.bandwidth_hz * math.log2(1.0 + gamma)


def min_tx_power(pl_db: float, radio: RadioParams) -> float:
    """Transmit power at which the link SNR equals the threshold exactly.

    Includes the in-band noise power so that feeding the result back through
    :func:`snr` reproduces the threshold.
    """
    return radio.snr_threshold * radio.noise_power_w * 10.0 ** (pl_db / 10.0)


def _angle_stationarity(a: float, b: float, excess_diff_db: float,
                        theta_rad: float) -> float:
    """Residual whose root balances LoS gain against slant-distance loss."""
    e = math.exp(-b * (math.degrees(theta_rad) - a))
    return (math.pi * math.tan(theta_rad)) / (9.0 * math.log(10.0)) + (
        a * b * excess_diff_db * e
    ) / (a * e + 1.0) ** 2


@lru_cache(maxsize=None)
def _cached_angle(a: float, b: float, excess_diff_db: float) -> float:
    lo, hi = 1e-6, _HALF_PI - 1e-6
    f_lo = _angle_stationarity(a, b, excess_diff_db, lo)
    f_hi = _angle_stationarity(a, b, excess_diff_db, hi)
    if f_lo == 0.0:
        return lo
    if f_hi == 0.0:
        return hi
    if f_lo * f_hi > 0.0:
        raise NoRootError(
            "stationarity residual does not change sign on (0, pi/2); "
            "environment parameters admit no optimal elevation angle"
        )
    while hi - lo > _ANGLE_TOL_RAD:
        mid = 0.5 * (lo + hi)
        f_mid = _angle_stationarity(a, b, excess_diff_db, mid)
        if f_lo * f_mid <= 0.0:
            hi = mid
        else:
            lo, f_lo = mid, f_mid
    return 0.5 * (lo + hi)


def optimal_elevation_angle(env: EnvironmentParams) -> float:
    """Elevation angle (rad) that minimizes the coverage-edge path loss.

    Bracketed bisection to 1e-10 rad; the result depends only on (a, b) and the
    LoS/NLoS excess-loss difference, so it is cached per environment.
    """
    return _cached_angle(env.a, env.b, env.excess_diff_db)


def coverage_radius(h_m: float, theta_opt_rad: float) -> float:
    """Ground radius covered from altitude h at the optimal elevation angle."""
    if not 0.0 < theta_opt_rad < _HALF_PI:
        raise ValueError("optimal angle must lie strictly inside (0, pi/2)")
    if h_m <= 0:
        raise ValueError("altitude must be positive")
    return h_m / math.tan(theta_opt_rad)


def required_altitude(r_m: float, theta_opt_rad: float) -> float:
    """Altitude needed to reach horizontal range r at the optimal angle (unclamped)."""
    if r_m < 0:
        raise ValueError("range cannot be negative")
    return r_m * math.tan(theta_opt_rad)


def max_los_distance(r_max_m: float, theta_opt_rad: float) -> float:
    """Slant distance to the edge of a cell of radius r_max at the optimal angle."""
    if r_max_m <= 0:
        raise ValueError("coverage radius must be positive")
    return r_max_m / math.cos(theta_opt_rad)
