import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from ssh_dispersive import HoppingParams


@pytest.fixture
def topological():
    return HoppingParams(1.0, 2.0)


@pytest.fixture
def trivial():
    return HoppingParams(1.0, 0.5)


@pytest.fixture
def complex_phase():
    return HoppingParams(0.8, 1.6 * np.exp(0.7j))


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
