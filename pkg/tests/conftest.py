import numpy as np
import pytest

from gripscribe import DynamicParams, HandImpedance, MechanismConfig


@pytest.fixture
def config():
    return MechanismConfig()


@pytest.fixture
def params():
    return DynamicParams()


@pytest.fixture
def imp():
    return HandImpedance()


@pytest.fixture
def rng():
    return np.random.default_rng(20240811)


def random_admissible_states(config, rng, n):
    """Uniform draw over the admissible joint-state set (zero velocity)."""
    d = config.joint_clearance_delta
    theta1 = rng.uniform(-np.pi, np.pi, n)
    mag = rng.uniform(d, np.pi - d, n)
    sign = np.where(rng.uniform(size=n) < 0.5, -1.0, 1.0)
    return theta1, theta1 + sign * mag
