import numpy as np
import pytest

from pdsq.states import PhaseNoise, SqueezingParams, StateModel

# The reference catalog used throughout: one squeezed state, five noise laws.
CATALOG_PARAMS = SqueezingParams(0.36, 5.28)
CATALOG_NOISES = [
    ("0.0", PhaseNoise.delta()),
    ("6.3", PhaseNoise.gaussian(6.3, "deg")),
    ("12.6", PhaseNoise.gaussian(12.6, "deg")),
    ("22.2", PhaseNoise.gaussian(22.2, "deg")),
    ("inf", PhaseNoise.uniform()),
]


def catalog_models():
    return [(label, StateModel(CATALOG_PARAMS, noise))
            for label, noise in CATALOG_NOISES]


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20240817)
