import numpy as np
import pytest

import revsurf as rs

CORPUS_SEED = 20260809


@pytest.fixture(scope="session")
def sphere():
    return rs.preset("sphere")


@pytest.fixture(scope="session")
def bump05():
    return rs.preset("bump:0.5")


@pytest.fixture(scope="session")
def dumbbell025():
    return rs.preset("dumbbell:0.25")


@pytest.fixture(scope="session")
def corpus200():
    """200 randomized valid profiles (rejection-sampled trig polynomials)."""
    rng = np.random.default_rng(CORPUS_SEED)
    return [rs.random_trig_profile(rng) for _ in range(200)]


@pytest.fixture(scope="session")
def corpus_presets_plus_50(corpus200):
    """The three presets plus 50 random profiles: the curvature-identity
    corpus."""
    return [rs.preset("sphere"), rs.preset("bump:0.5"),
            rs.preset("dumbbell:0.25")] + corpus200[:50]
