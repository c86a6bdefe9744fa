"""Hovering-power physics, power accounting, energy efficiency, and the
energy-efficiency-optimal transmit-power solver.
"""
from __future__ import annotations

import math
from typing import Sequence

from .errors import HoverLimitError
from .params import RadioParams, UavPhysicalParams

# bisection bracket for the stationary point of rate/(power + hover), scaled by
# the configured maximum power
_BRACKET_LO_W = 1e-9
_BRACKET_HI_FACTOR = 10.0
_REL_TOL = 1e-9
_MAX_BISECT = 200


def hover_power(phys: UavPhysicalParams, h_m: float) -> float:
    """Power needed to hold position at altitude h; grows exponentially with h."""
    if h_m < 0:
        raise ValueError("altitude cannot be negative")
    p = phys.base_hover_power_w * math.exp(phys.epsilon * h_m / 2.0)
    if p > phys.p_hov_max_w:
        raise HoverLimitError(
            f"hovering at {h_m:.1f} m needs {p:.1f} W, above the airframe "
            f"limit {phys.p_hov_max_w:.1f} W"
        )
    return p


def altitude_from_hover_power(phys: UavPhysicalParams, p_w: float) -> float:
    """Invert the hover-power curve; defined for p at or above the zero-altitude power."""
    if p_w < phys.base_hover_power_w:
        raise ValueError(
            f"{p_w} W is below the zero-altitude hover power "
            f"{phys.base_hover_power_w:.3f} W"
        )
    return (2.0 / phys.epsilon) * math.log(p_w / phys.base_hover_power_w)


def total_power(tx_powers_w: Sequence[float], p_hov_w: float) -> float:
    """Communication plus hovering power of one cell."""
    if any(p < 0 for p in tx_powers_w):
        raise ValueError("transmit powers cannot be negative")
    return float(sum(tx_powers_w)) + p_hov_w


def energy_efficiency(rates_bps: Sequence[float], tx_powers_w: Sequence[float],
                      p_hov_w: float) -> float:
    """Cell energy efficiency in bit/J: summed rate over summed power."""
    if len(rates_bps) != len(tx_powers_w):
        raise ValueError("rates and powers must pair up")
    denom = total_power(tx_powers_w, p_hov_w)
    if denom <= 0:
        raise ValueError("total power must be positive")
    return float(sum(rates_bps)) / denom


def _ee_derivative_sign(p_w: float, gain: float, radio: RadioParams,
                        p_hov_w: float) -> float:
    """Sign-equivalent of d/dp [ B log2(1 + p g / (B s2)) / (p + p_hov) ]."""
    noise = radio.noise_power_w
    lhs = (p_w + p_hov_w) * gain / ((noise + p_w * gain) * math.log(2.0))
    return lhs - math.log2(1.0 + p_w * gain / noise)


def ee_objective(p_w: float, gain: float, radio: RadioParams, p_hov_w: float) -> float:
    """Per-link energy efficiency rate/(p + p_hov); the quantity the solver maximizes."""
    snr = p_w * gain / radio.noise_power_w
    return radio.bandwidth_hz * math.log2(1.0 + snr) / (p_w + p_hov_w)


def optimal_tx_power(gain: float, radio: RadioParams, p_hov_w: float,
                     p_min_link_w: float) -> float:
    """Transmit power maximizing per-link energy efficiency, clamped to the box.

    Bisects the analytic derivative of rate/(p + p_hov) over
    [1e-9 W, 10 * p_max]; the objective is strictly quasi-concave, so the
    derivative changes sign at most once. A stationary point outside the
    bracket resolves to the nearer bound, and the final value obeys the
    per-link minimum (when attainable) and the global maximum.
    """
    if not 0.0 < gain <= 1.0:
        raise ValueError("channel gain must lie in (0, 1]")
    if p_hov_w <= 0:
        raise ValueError("hover power must be positive")
    if p_min_link_w < 0:
        raise ValueError("per-link minimum power cannot be negative")
    p_max = radio.p_max_bound_w

    lo, hi = _BRACKET_LO_W, _BRACKET_HI_FACTOR * p_max
    if _ee_derivative_sign(hi, gain, radio, p_hov_w) > 0.0:
        p_star = hi          # still climbing at the bracket top
    elif _ee_derivative_sign(lo, gain, radio, p_hov_w) < 0.0:
        p_star = lo          # already falling at the bracket bottom
    else:
        for _ in range(_MAX_BISECT):
            if hi - lo <= _REL_TOL * hi:
                break
            mid = 0.5 * (lo + hi)
            if _ee_derivative_sign(mid, gain, radio, p_hov_w) > 0.0:
                lo = mid
            else:
                hi = mid
        p_star = 0.5 * (lo + hi)

    if p_min_link_w <= p_max:
        return min(max(p_star, p_min_link_w), p_max)
    return p_max
