"""Batched-kernel tests: agreement with the scalar reference on both backends.

The numba/numpy selection happens at import, so the cross-backend check runs
the numpy reference implementation functions directly against whatever backend
is active.
"""
import numpy as np
import pytest

from uavoffload import kernels
from uavoffload.channel import average_path_loss, min_tx_power
from uavoffload.kernels import (
    _min_tx_power_w_numpy,
    _optimal_tx_power_w_numpy,
    _path_loss_db_numpy,
)
from uavoffload.power import optimal_tx_power


class TestPathLossKernel:
    def test_matches_scalar_reference(self, urban_env, rng):
        r = rng.uniform(0, 2000, size=500)
        h = rng.uniform(1, 500, size=500)
        got = kernels.path_loss_db(r, h, urban_env.a, urban_env.b,
                                   urban_env.excess_diff_db, urban_env.beta_db)
        want = [average_path_loss(urban_env, hh, rr) for rr, hh in zip(r, h)]
        np.testing.assert_allclose(got, want, rtol=1e-12)

    def test_scalar_height_broadcast(self, urban_env, rng):
        r = rng.uniform(0, 2000, size=64)
        got = kernels.path_loss_db(r, 120.0, urban_env.a, urban_env.b,
                                   urban_env.excess_diff_db, urban_env.beta_db)
        want = [average_path_loss(urban_env, 120.0, rr) for rr in r]
        np.testing.assert_allclose(got, want, rtol=1e-12)

    def test_overhead_link(self, urban_env):
        got = kernels.path_loss_db(0.0, 100.0, urban_env.a, urban_env.b,
                                   urban_env.excess_diff_db, urban_env.beta_db)
        assert got == pytest.approx(81.04647060406064, abs=1e-9)

    def test_backends_agree(self, urban_env, rng):
        r = rng.uniform(0, 2000, size=256)
        h = rng.uniform(1, 500, size=256)
        active = kernels.path_loss_db(r, h, urban_env.a, urban_env.b,
                                      urban_env.excess_diff_db, urban_env.beta_db)
        reference = _path_loss_db_numpy(r, h, urban_env.a, urban_env.b,
                                        urban_env.excess_diff_db, urban_env.beta_db)
        np.testing.assert_allclose(active, reference, rtol=1e-12)


class TestMinPowerKernel:
    def test_matches_scalar_reference(self, radio, rng):
        pl = rng.uniform(60, 130, size=400)
        got = kernels.min_tx_power_w(pl, radio.snr_threshold, radio.noise_power_w)
        want = [min_tx_power(p, radio) for p in pl]
        np.testing.assert_allclose(got, want, rtol=1e-12)

    def test_backends_agree(self, radio, rng):
        pl = rng.uniform(60, 130, size=400)
        active = kernels.min_tx_power_w(pl, radio.snr_threshold,
                                        radio.noise_power_w)
        reference = _min_tx_power_w_numpy(pl, radio.snr_threshold,
                                          radio.noise_power_w)
        np.testing.assert_allclose(active, reference, rtol=1e-12)


class TestOptimalPowerKernel:
    def test_matches_scalar_reference(self, radio, rng):
        gains = 10.0 ** rng.uniform(-13, -6, size=400)
        p_hov = 10.0 ** rng.uniform(-2, 2, size=400)
        p_min = rng.uniform(0, 0.1, size=400)
        got = kernels.optimal_tx_power_w(gains, p_hov, p_min, radio.snr_threshold,
                                         radio.noise_power_w, radio.p_max_bound_w)
        want = [optimal_tx_power(g, radio, ph, pm)
                for g, ph, pm in zip(gains, p_hov, p_min)]
        np.testing.assert_allclose(got, want, rtol=1e-9)

    def test_scalar_hover_power_broadcast(self, radio, rng):
        # scalar p_hov must expand to the gain vector's length, never truncate
        gains = 10.0 ** rng.uniform(-13, -6, size=32)
        p_min = np.zeros(32)
        got = kernels.optimal_tx_power_w(gains, 58.0, p_min, radio.snr_threshold,
                                         radio.noise_power_w, radio.p_max_bound_w)
        want = [optimal_tx_power(g, radio, 58.0, 0.0) for g in gains]
        np.testing.assert_allclose(got, want, rtol=1e-9)

    def test_backends_agree(self, radio, rng):
        gains = 10.0 ** rng.uniform(-13, -6, size=300)
        p_hov = 10.0 ** rng.uniform(-2, 2, size=300)
        p_min = rng.uniform(0, 0.1, size=300)
        active = kernels.optimal_tx_power_w(
            gains, p_hov, p_min, radio.snr_threshold, radio.noise_power_w,
            radio.p_max_bound_w)
        reference = _optimal_tx_power_w_numpy(
            gains, p_hov, p_min, radio.snr_threshold, radio.noise_power_w,
            radio.p_max_bound_w)
        np.testing.assert_allclose(active, reference, rtol=1e-9)

    def test_length_mismatch_rejected(self, radio):
        with pytest.raises(ValueError):
            kernels.optimal_tx_power_w(
                np.ones(4) * 1e-9, np.ones(3) * 58.0, np.zeros(4),
                radio.snr_threshold, radio.noise_power_w, radio.p_max_bound_w)


class TestBackendSelection:
    def test_backend_reported(self):
        assert kernels.BACKEND in ("numba", "numpy")

    def test_env_flag_forces_numpy(self):
        import subprocess
        import sys
        out = subprocess.run(
            [sys.executable, "-c",
             "from uavoffload import kernels; print(kernels.BACKEND)"],
            env={"PATH": "/usr/bin:/bin", "UAV_OFFLOAD_BACKEND": "numpy"},
            capture_output=True, text=True)
        assert out.stdout.strip() == "numpy"

    def test_env_flag_rejects_garbage(self):
        import subprocess
        import sys
        out = subprocess.run(
            [sys.executable, "-c", "import uavoffload.kernels"],
            env={"PATH": "/usr/bin:/bin", "UAV_OFFLOAD_BACKEND": "cuda"},
            capture_output=True, text=True)
        assert out.returncode != 0
        assert "UAV_OFFLOAD_BACKEND" in out.stderr
