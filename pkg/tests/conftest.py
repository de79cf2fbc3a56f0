import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from flatmass import Layer, Lead, Structure  # noqa: E402


BETAS = (-1.0, -0.75, -0.5, -0.25, 0.0)

# (criterion, line) pairs from the acceptance tests, echoed in the terminal summary
ACCEPTANCE_LINES = []


def random_structure(rng, max_layers=6, V_span=(-1.0, 3.0)):
    """Random structure whose leads share potential 0 on the left."""
    n = int(rng.integers(0, max_layers + 1))
    layers = tuple(
        Layer(float(rng.uniform(0.1, 2.0)), float(rng.uniform(0.1, 5.0)),
              float(rng.uniform(*V_span)))
        for _ in range(n))
    left = Lead(float(rng.uniform(0.1, 5.0)), 0.0)
    right = Lead(float(rng.uniform(0.1, 5.0)), float(rng.uniform(-1.0, 1.0)))
    return Structure(left, layers, right)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
