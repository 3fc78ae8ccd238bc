import numpy as np
import pytest

from flightdeck.tasks.environment import default_environment
from flightdeck.vehicle import TrackerParams, VehicleConfig


@pytest.fixture
def env():
    return default_environment()


@pytest.fixture
def params():
    return TrackerParams()


@pytest.fixture
def config():
    return VehicleConfig()


@pytest.fixture
def rng():
    return np.random.default_rng(0xF11D)
