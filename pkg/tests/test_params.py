"""Parameter validation, derived constants and config-file loading."""
import math
import textwrap

import pytest

from uavoffload.errors import ConfigError
from uavoffload.params import (
    EnvironmentParams,
    RadioParams,
    ScenarioConfig,
    UavPhysicalParams,
    load_config,
)
from uavoffload.units import db_to_linear, dbm_to_watt, linear_to_db, watt_to_dbm


class TestUnits:
    def test_db_round_trip(self, rng):
        for x in rng.uniform(-50, 50, size=100):
            assert linear_to_db(db_to_linear(x)) == pytest.approx(x, abs=1e-12)

    def test_dbm_anchors(self):
        assert dbm_to_watt(30.0) == pytest.approx(1.0, rel=1e-12)
        assert dbm_to_watt(0.0) == pytest.approx(1e-3, rel=1e-12)
        assert watt_to_dbm(0.7943282347242815) == pytest.approx(29.0, abs=1e-12)


class TestEnvironmentParams:
    def test_derived_constants(self, urban_env):
        assert urban_env.excess_diff_db == -19.0
        assert urban_env.beta_db == pytest.approx(60.0459970202808, rel=1e-12)

    def test_invalid_rejected(self):
        with pytest.raises(ConfigError):
            EnvironmentParams(a=-1.0)
        with pytest.raises(ConfigError):
            EnvironmentParams(eta_los_db=25.0, eta_nlos_db=20.0)


class TestUavPhysicalParams:
    def test_derived_power_terms(self, phys):
        assert phys.total_weight_kg == 20.0
        assert phys.p0_w == pytest.approx(57.75600998595037, rel=1e-12)
        assert phys.blade_profile_factor == pytest.approx(
            0.0005861300621089075, rel=1e-12)
        assert phys.base_hover_power_w == pytest.approx(
            57.78986251967059, rel=1e-12)

    def test_default_disk_area(self, phys):
        assert phys.disk_area_m2 == pytest.approx(
            math.pi * phys.prop_radius_m ** 2, rel=1e-15)

    def test_default_hover_limit_has_headroom(self, phys):
        from uavoffload.power import hover_power
        assert phys.p_hov_max_w > hover_power(phys, 400.0)

    def test_invalid_rejected(self):
        with pytest.raises(ConfigError):
            UavPhysicalParams(rotor_count=0)


class TestRadioParams:
    def test_linear_conversion_defaults(self, radio):
        assert radio.noise_w_per_hz == pytest.approx(10.0 ** (-20.4), rel=1e-12)
        assert radio.snr_threshold == pytest.approx(db_to_linear(3.0), rel=1e-15)
        assert radio.p_max_bound_w == pytest.approx(dbm_to_watt(29.0), rel=1e-15)
        assert radio.noise_power_w == pytest.approx(7.962143411069971e-14, rel=1e-12)

    def test_bad_bounds_rejected(self):
        with pytest.raises(ConfigError):
            RadioParams(p_min_bound_w=1.0, p_max_bound_w=0.5)


class TestScenarioConfig:
    def test_defaults_are_canonical(self, canonical_config):
        c = canonical_config
        assert (c.n_users, c.n_uavs, c.omega_max) == (250, 7, 50)
        assert (c.bounds.h_min_m, c.bounds.h_max_m) == (30.0, 400.0)
        assert c.h_init_m == 30.0

    def test_capacity_shortfall_rejected(self):
        with pytest.raises(ConfigError):
            ScenarioConfig(n_users=90, omega_max=50, excess_users=50)

    def test_single_uav_rejected(self):
        with pytest.raises(ConfigError):
            ScenarioConfig(n_uavs=1)

    def test_with_excess_and_seed(self, canonical_config):
        c = canonical_config.with_excess(10).with_seed(99)
        assert (c.excess_users, c.rng_seed) == (10, 99)
        assert canonical_config.excess_users == 50


class TestConfigFile:
    def test_load_overrides(self, tmp_path):
        path = tmp_path / "scenario.ini"
        path.write_text(textwrap.dedent("""
            [scenario]
            n_users = 100
            excess_users = 10
            rng_seed = 77

            [radio]
            bandwidth_hz = 10e6
            p_max_dbm = 20
            snr_threshold_db = 5

            [altitude]
            h_max_m = 300

            [environment]
            a = 4.88
            b = 0.43
        """))
        cfg = load_config(str(path))
        assert cfg.n_users == 100 and cfg.rng_seed == 77
        assert cfg.radio.bandwidth_hz == 10e6
        assert cfg.radio.p_max_bound_w == pytest.approx(dbm_to_watt(20.0))
        assert cfg.radio.snr_threshold == pytest.approx(db_to_linear(5.0))
        assert cfg.bounds.h_max_m == 300.0
        assert cfg.env.a == 4.88
        # untouched fields keep canonical defaults
        assert cfg.n_uavs == 7 and cfg.omega_max == 50

    def test_inline_comments_allowed(self, tmp_path):
        path = tmp_path / "commented.ini"
        path.write_text("[scenario]\nn_users = 120   ; hotspot study\n")
        assert load_config(str(path)).n_users == 120

    def test_unknown_key_rejected(self, tmp_path):
        path = tmp_path / "bad.ini"
        path.write_text("[scenario]\nwarp_drive = 9\n")
        with pytest.raises(ConfigError):
            load_config(str(path))

    def test_unknown_section_rejected(self, tmp_path):
        path = tmp_path / "bad.ini"
        path.write_text("[quantum]\nx = 1\n")
        with pytest.raises(ConfigError):
            load_config(str(path))

    def test_missing_file_rejected(self, tmp_path):
        with pytest.raises(ConfigError):
            load_config(str(tmp_path / "nope.ini"))
