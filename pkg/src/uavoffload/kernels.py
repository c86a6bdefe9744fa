"""Hot numeric kernels, batched over links.

Two interchangeable backends provide the same three functions:

* ``numba`` (default when importable): per-element ``@njit`` loops, cached to disk
  so worker processes skip recompilation;
* ``numpy``: pure vectorized fallback.

Select explicitly with ``UAV_OFFLOAD_BACKEND=numba|numpy``; anything else is an
error. ``benchmarks/bench_kernels.py`` compares the two.
"""
from __future__ import annotations

import math
import os

import numpy as np

_ENV_FLAG = "UAV_OFFLOAD_BACKEND"
_MAX_BISECT = 200
_REL_TOL = 1e-9
# search bracket for the power stationary point, scaled by p_max at call time
_BRACKET_LO = 1e-9
_BRACKET_HI_FACTOR = 10.0


# --- pure numpy implementations ---

def _path_loss_db_numpy(r, h, a, b, excess_diff_db, beta_db):
    r = np.asarray(r, dtype=np.float64)
    h = np.asarray(h, dtype=np.float64)
    theta_deg = np.degrees(np.arctan2(h, r))
    d = np.hypot(r, h)
    p_los = 1.0 / (1.0 + a * np.exp(-b * (theta_deg - a)))
    return excess_diff_db * p_los + 20.0 * np.log10(d) + beta_db


def _min_tx_power_w_numpy(pl_db, snr_threshold, noise_power_w):
    pl_db = np.asarray(pl_db, dtype=np.float64)
    return snr_threshold * noise_power_w * 10.0 ** (pl_db / 10.0)


def _opt_power_sign_numpy(p, gain, noise_power_w, p_hov):
    # sign of d/dp [ B log2(1 + p g / (B s2)) / (p + p_hov) ], common positive
    # factors dropped
    snr = p * gain / noise_power_w
    lhs = (p + p_hov) * gain / ((noise_power_w + p * gain) * math.log(2.0))
    return lhs - np.log2(1.0 + snr)


def _optimal_tx_power_w_numpy(gain, p_hov, p_min_link, snr_threshold,
                              noise_power_w, p_max):
    gain = np.asarray(gain, dtype=np.float64)
    p_hov = np.broadcast_to(np.asarray(p_hov, dtype=np.float64), gain.shape)
    p_min_link = np.asarray(p_min_link, dtype=np.float64)

    lo = np.full(gain.shape, _BRACKET_LO)
    hi = np.full(gain.shape, _BRACKET_HI_FACTOR * p_max)
    s_lo = _opt_power_sign_numpy(lo, gain, noise_power_w, p_hov)
    s_hi = _opt_power_sign_numpy(hi, gain, noise_power_w, p_hov)

    # derivative positive on the whole bracket: stationary point beyond hi
    above = s_hi > 0.0
    # derivative negative already at lo: stationary point below lo
    below = s_lo < 0.0
    bracketed = ~(above | below)

    for _ in range(_MAX_BISECT):
        if not np.any(bracketed & (hi - lo > _REL_TOL * hi)):
            break
        mid = 0.5 * (lo + hi)
        s_mid = _opt_power_sign_numpy(mid, gain, noise_power_w, p_hov)
        take_hi = bracketed & (s_mid > 0.0)
        take_lo = bracketed & ~take_hi
        lo = np.where(take_hi, mid, lo)
        hi = np.where(take_lo, mid, hi)

    p_star = 0.5 * (lo + hi)
    p_star = np.where(above, hi, p_star)
    p_star = np.where(below, lo, p_star)

    clamped = np.minimum(np.maximum(p_star, p_min_link), p_max)
    return np.where(p_min_link <= p_max, clamped, p_max)


# --- numba implementations ---

def _build_numba():
    from numba import njit

    @njit(cache=True)
    def path_loss_db(r, h, a, b, excess_diff_db, beta_db):
        out = np.empty(r.size, dtype=np.float64)
        for k in range(r.size):
            theta_deg = math.degrees(math.atan2(h[k], r[k]))
            d = math.hypot(r[k], h[k])
            p_los = 1.0 / (1.0 + a * math.exp(-b * (theta_deg - a)))
            out[k] = excess_diff_db * p_los + 20.0 * math.log10(d) + beta_db
        return out

    @njit(cache=True)
    def min_tx_power_w(pl_db, snr_threshold, noise_power_w):
        out = np.empty(pl_db.size, dtype=np.float64)
        for k in range(pl_db.size):
            out[k] = snr_threshold * noise_power_w * 10.0 ** (pl_db[k] / 10.0)
        return out

    @njit(cache=True)
    def _sign(p, gain, noise_power_w, p_hov):
        lhs = (p + p_hov) * gain / ((noise_power_w + p * gain) * math.log(2.0))
        return lhs - math.log2(1.0 + p * gain / noise_power_w)

    @njit(cache=True)
    def optimal_tx_power_w(gain, p_hov, p_min_link, snr_threshold,
                           noise_power_w, p_max):
        out = np.empty(gain.size, dtype=np.float64)
        for k in range(gain.size):
            lo = _BRACKET_LO
            hi = _BRACKET_HI_FACTOR * p_max
            if _sign(hi, gain[k], noise_power_w, p_hov[k]) > 0.0:
                p_star = hi
            elif _sign(lo, gain[k], noise_power_w, p_hov[k]) < 0.0:
                p_star = lo
            else:
                for _ in range(_MAX_BISECT):
                    if hi - lo <= _REL_TOL * hi:
                        break
                    mid = 0.5 * (lo + hi)
                    if _sign(mid, gain[k], noise_power_w, p_hov[k]) > 0.0:
                        lo = mid
                    else:
                        hi = mid
                p_star = 0.5 * (lo + hi)
            if p_min_link[k] <= p_max:
                out[k] = min(max(p_star, p_min_link[k]), p_max)
            else:
                out[k] = p_max
        return out

    return path_loss_db, min_tx_power_w, optimal_tx_power_w


def _as_1d(x, like=None):
    # scalars expand to the companion array's length BEFORE any contiguity
    # massaging (ascontiguousarray silently promotes 0-d to length-1, which
    # the bounds-unchecked kernels must never see)
    arr = np.asarray(x, dtype=np.float64)
    if arr.ndim == 0:
        n = like.size if like is not None else 1
        return np.full(n, float(arr))
    out = np.ascontiguousarray(arr).ravel()
    if like is not None and out.size != like.size:
        raise ValueError(f"length mismatch: {out.size} vs {like.size}")
    return out


_requested = os.environ.get(_ENV_FLAG, "numba").strip().lower()
if _requested not in ("numba", "numpy"):
    raise RuntimeError(f"{_ENV_FLAG} must be 'numba' or 'numpy', got {_requested!r}")

if _requested == "numba":
    try:
        _pl_impl, _pmin_impl, _popt_impl = _build_numba()
        BACKEND = "numba"
    except ImportError:
        _pl_impl, _pmin_impl, _popt_impl = None, None, None
        BACKEND = "numpy"
else:
    _pl_impl, _pmin_impl, _popt_impl = None, None, None
    BACKEND = "numpy"


def path_loss_db(r, h, a, b, excess_diff_db, beta_db):
    """Average air-to-ground path loss in dB for horizontal/vertical offsets."""
    shape = np.shape(r)
    if BACKEND == "numba":
        r1 = _as_1d(r)
        out = _pl_impl(r1, _as_1d(h, like=r1), a, b, excess_diff_db, beta_db)
        return out.reshape(shape) if shape else float(out[0])
    out = _path_loss_db_numpy(r, h, a, b, excess_diff_db, beta_db)
    return out if shape else float(out)


def min_tx_power_w(pl_db, snr_threshold, noise_power_w):
    """Smallest transmit power that meets the SNR threshold at this path loss."""
    shape = np.shape(pl_db)
    if BACKEND == "numba":
        out = _pmin_impl(_as_1d(pl_db), snr_threshold, noise_power_w)
        return out.reshape(shape) if shape else float(out[0])
    out = _min_tx_power_w_numpy(pl_db, snr_threshold, noise_power_w)
    return out if shape else float(out)


def optimal_tx_power_w(gain, p_hov, p_min_link, snr_threshold, noise_power_w, p_max):
    """Energy-efficiency-optimal transmit power, clamped to the feasible box."""
    shape = np.shape(gain)
    if BACKEND == "numba":
        g1 = _as_1d(gain)
        out = _popt_impl(g1, _as_1d(p_hov, like=g1), _as_1d(p_min_link, like=g1),
                         snr_threshold, noise_power_w, p_max)
        return out.reshape(shape) if shape else float(out[0])
    g = np.atleast_1d(np.asarray(gain, dtype=np.float64))
    out = _optimal_tx_power_w_numpy(g, p_hov, np.broadcast_to(
        np.asarray(p_min_link, dtype=np.float64), g.shape),
        snr_threshold, noise_power_w, p_max)
    return out.reshape(shape) if shape else float(out[0])
