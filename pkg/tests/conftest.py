import os

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from foldcap.crosscap import CrossCapParams

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.register_profile("thorough", max_examples=500, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture
def rng():
    return np.random.default_rng(20241015)


@pytest.fixture
def minimal():
    return CrossCapParams()


@pytest.fixture
def generic():
    return CrossCapParams(
        a=1.5, b=1.0, p3=0.3, p4=0.2, q30=0.1, q31=0.4, q32=-0.2, q33=0.3, q40=0.1, q42=-0.3
    )
