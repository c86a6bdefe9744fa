"""Micro-benchmark: numba kernels vs the pure-numpy fallback.

Run: python benchmarks/bench_kernels.py --size 2000 --repeats 200
"""
import argparse
import time

import numpy as np

from uavoffload import kernels
from uavoffload.kernels import (
    _min_tx_power_w_numpy,
    _optimal_tx_power_w_numpy,
    _path_loss_db_numpy,
)
from uavoffload.params import EnvironmentParams, RadioParams


def time_it(fn, repeats):
    fn()  # warm up (JIT compile / cache load)
    t0 = time.perf_counter()
    for _ in range(repeats):
        fn()
    return (time.perf_counter() - t0) / repeats * 1e3


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--size", type=int, default=2000, help="links per call")
    ap.add_argument("--repeats", type=int, default=200)
    args = ap.parse_args()

    env = EnvironmentParams()
    radio = RadioParams()
    rng = np.random.default_rng(0)
    r = rng.uniform(0, 600, size=args.size)
    h = rng.uniform(30, 400, size=args.size)
    pl = _path_loss_db_numpy(r, h, env.a, env.b, env.excess_diff_db, env.beta_db)
    gains = 10.0 ** (-pl / 10.0)
    p_hov = rng.uniform(0.01, 60.0, size=args.size)
    p_min = rng.uniform(0, 0.05, size=args.size)

    cases = {
        "path_loss": (
            lambda: _path_loss_db_numpy(r, h, env.a, env.b,
                                        env.excess_diff_db, env.beta_db),
            lambda: kernels._pl_impl(r, h, env.a, env.b,
                                     env.excess_diff_db, env.beta_db),
        ),
        "min_tx_power": (
            lambda: _min_tx_power_w_numpy(pl, radio.snr_threshold,
                                          radio.noise_power_w),
            lambda: kernels._pmin_impl(pl, radio.snr_threshold,
                                       radio.noise_power_w),
        ),
        "optimal_tx_power": (
            lambda: _optimal_tx_power_w_numpy(gains, p_hov, p_min,
                                              radio.snr_threshold,
                                              radio.noise_power_w,
                                              radio.p_max_bound_w),
            lambda: kernels._popt_impl(gains, p_hov, p_min,
                                       radio.snr_threshold,
                                       radio.noise_power_w,
                                       radio.p_max_bound_w),
        ),
    }

    print(f"size={args.size} repeats={args.repeats} active backend={kernels.BACKEND}")
    if kernels.BACKEND != "numba":
        print("numba unavailable or disabled; timing the numpy path only")
    print(f"{'kernel':<18} {'numpy ms':>10} {'numba ms':>10} {'speedup':>8}")
    for name, (numpy_fn, numba_fn) in cases.items():
        t_np = time_it(numpy_fn, args.repeats)
        if kernels.BACKEND == "numba":
            t_nb = time_it(numba_fn, args.repeats)
            np.testing.assert_allclose(numba_fn(), numpy_fn(), rtol=1e-9)
            print(f"{name:<18} {t_np:>10.4f} {t_nb:>10.4f} {t_np / t_nb:>7.1f}x")
        else:
            print(f"{name:<18} {t_np:>10.4f} {'-':>10} {'-':>8}")


if __name__ == "__main__":
    main()
