import numpy as np
import pytest

from uavoffload.params import (
    AltitudeBounds,
    EnvironmentParams,
    RadioParams,
    ScenarioConfig,
    UavPhysicalParams,
)


@pytest.fixture(scope="session")
def urban_env():
    return EnvironmentParams()


@pytest.fixture(scope="session")
def radio():
    return RadioParams()


@pytest.fixture(scope="session")
def phys():
    return UavPhysicalParams()


@pytest.fixture(scope="session")
def bounds():
    return AltitudeBounds()


@pytest.fixture(scope="session")
def canonical_config():
    return ScenarioConfig()


@pytest.fixture()
def rng():
    return np.random.default_rng(123)
