# conftest.py - Shared pytest fixtures
import numpy as np
import pytest

from models.linalg import BipartiteDims, BipartiteOperator
from utils.linalg import maximally_entangled_projector

# 2 (x) 2 state whose top eigenvector is entangled although it is separable
EXAMPLE_RHO = np.array([
    [2, 1, 1, 1],
    [1, 1, 1, 1],
    [1, 1, 1, 1],
    [1, 1, 1, 1],
]) / 5


@pytest.fixture
def rng():
    return np.random.default_rng(20240617)


@pytest.fixture
def example_rho():
    return BipartiteOperator.from_matrix(EXAMPLE_RHO, 2, 2)


@pytest.fixture
def dims22():
    return BipartiteDims(n=2, m=2)


@pytest.fixture
def dims33():
    return BipartiteDims(n=3, m=3)


def scaled_werner_pt(n: int, alpha: float) -> BipartiteOperator:
    """(n^2 - alpha n) rho_alpha^Gamma = I - alpha n E, valid for any real alpha."""
    entries = np.eye(n * n) - alpha * n * maximally_entangled_projector(n).entries.real
    return BipartiteOperator.from_matrix(entries, n, n)


@pytest.fixture
def werner_scaled():
    return scaled_werner_pt
