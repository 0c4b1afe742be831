# tests/conftest.py

import os
import sys

import numpy as np
import pytest

# Add project root to Python path
sys.path.append(os.path.abspath(os.path.join(os.path.dirname(__file__), "..")))

from config import Settings  # noqa: E402
from core.builtins import example1, example2, orthonormal_pair  # noqa: E402


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def settings():
    return Settings(threads=1)


@pytest.fixture
def ex1():
    return example1(4)


@pytest.fixture
def ex2():
    return example2()


@pytest.fixture
def onb3():
    return orthonormal_pair(3)
