import json
from pathlib import Path

import numpy as np
import pytest

from projanosov.anosov import lift_boundary, sample_boundary
from projanosov.families import schottky_sl2, tau_rep

GOLDEN = json.loads((Path(__file__).parent / "golden" / "golden.json").read_text())


@pytest.fixture(scope="session")
def golden():
    return GOLDEN


@pytest.fixture(scope="session")
def schottky():
    return schottky_sl2(3.0, np.pi / 4)


@pytest.fixture(scope="session")
def tau3(schottky):
    return tau_rep(schottky, 3)


@pytest.fixture(scope="session")
def tau3_samples(tau3):
    return sample_boundary(tau3, 6)


@pytest.fixture(scope="session")
def tau3_lifted(tau3_samples):
    return lift_boundary(tau3_samples)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_sl2(rng, n):
    """n random matrices with det 1 and moderate condition number."""
    out = []
    while len(out) < n:
        m = rng.normal(size=(2, 2))
        det = np.linalg.det(m)
        if abs(det) < 0.2:
            continue
        if det < 0:
            m[:, 0] *= -1
            det = -det
        out.append(m / np.sqrt(det))
    return out


def random_gl(rng, d, max_cond=1e3):
    while True:
        m = rng.normal(size=(d, d))
        if np.linalg.cond(m) < max_cond:
            return m


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[n])
