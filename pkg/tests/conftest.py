import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from jcsim.params import ModelParams, from_ratios


@pytest.fixture(scope="session")
def weak_params():
    """Strong-coupling, weak-drive reference point (the fig2a numbers)."""
    return from_ratios(100.0, 1.0, 0.05, n_max=30)


@pytest.fixture(scope="session")
def small_params():
    """Four-level field, everything dense-checkable in milliseconds."""
    return ModelParams(g=5.0, gamma=1.2, drive=0.8j, n_max=3)


@pytest.fixture(scope="session")
def tiny8_params():
    """Moderate coupling on a small space; cheap correlation traces."""
    return from_ratios(8.0, 0.5, 0.05, n_max=12)
