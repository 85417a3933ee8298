"""Shared fixtures for the loewnerlab test suite."""

import copy

import numpy as np
import pytest

from loewnerlab.config import DEFAULT_CONFIG
from loewnerlab.core_model import Driving
from loewnerlab.curves import segment_curve
from loewnerlab.forward_solver import ForwardSolver
from loewnerlab.inverse_solver import ZipperSolver


@pytest.fixture
def config():
    """A private copy of the default configuration."""
    return copy.deepcopy(DEFAULT_CONFIG)


@pytest.fixture
def rng():
    return np.random.default_rng(42)


@pytest.fixture(scope="session")
def zero_evolution():
    """λ ≡ 0 on [0, 1] with 400 vertical steps; K_1 is the slit [0, 2i]."""
    return ForwardSolver().solve_forward(Driving.constant(0.0, 1.0, 401), "vertical")


@pytest.fixture(scope="session")
def unit_slit_evolution():
    """λ ≡ 0 on [0, 1/4]; K_T is the slit [0, i]."""
    return ForwardSolver().solve_forward(Driving.constant(0.0, 0.25, 201), "vertical")


@pytest.fixture(scope="session")
def tilted_segment_zipper():
    """Zipper of the segment of length 2 at angle π/3."""
    return ZipperSolver().extract_driving(segment_curve(2.0, 1.0 / 3.0, 400))
