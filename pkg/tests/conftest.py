import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from seqnorm.family_engine import Exhaustive, SegmentDP, get_engine
from seqnorm.qsum_engine import QSumConfig, get_qsum_engine


@pytest.fixture(scope="session")
def ex_engine():
    return get_engine(Exhaustive())


@pytest.fixture(scope="session")
def seg_engine():
    return get_engine(SegmentDP())


@pytest.fixture(scope="session")
def small_engine():
    return get_qsum_engine(QSumConfig.small())


@pytest.fixture(scope="session")
def paper_engine():
    return get_qsum_engine(QSumConfig.paper_faithful())


@pytest.fixture()
def rng():
    return np.random.default_rng(20240817)


def random_test_vector(rng, max_support, span=4, scale=3.0):
    from seqnorm.core import FiniteVector

    n = int(rng.integers(1, max_support + 1))
    indices = 1 + np.sort(rng.choice(span * max_support, size=n, replace=False))
    coeffs = rng.uniform(0.1, scale, size=n) * rng.choice([-1.0, 1.0], size=n)
    return FiniteVector(zip((int(i) for i in indices), coeffs))
