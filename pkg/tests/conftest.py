import os

import numpy as np
import pytest

DEFAULT_SEED = 20100


def suite_seed() -> int:
    return int(os.environ.get("SPECTRAL_TWINS_SEED", DEFAULT_SEED))


@pytest.fixture
def rng():
    return np.random.default_rng(suite_seed())


def reference_L1(a, b, c):
    return -np.array(
        [
            [0, 0, 0, c, 0, 0],
            [0, 0, 0, 0, a, 0],
            [0, 0, 0, 0, 0, b],
            [c, 0, 0, 0, c, b],
            [0, a, 0, c, 0, a],
            [0, 0, b, b, a, 0],
        ],
        dtype=float,
    )


def reference_L2(a, b, c):
    return -np.array(
        [
            [0, 0, 0, b, 0, 0],
            [0, 0, 0, 0, a, 0],
            [0, 0, 0, 0, 0, c],
            [b, 0, 0, 0, b, c],
            [0, a, 0, b, 0, a],
            [0, 0, c, c, a, 0],
        ],
        dtype=float,
    )


REFERENCE_T = np.array(
    [
        [0, -1, 0, 0, 0, 1],
        [-1, 0, 0, 0, 1, 0],
        [0, 0, -1, 1, 0, 0],
        [0, 0, 1, 1, 0, 0],
        [0, 1, 0, 0, 0, 1],
        [1, 0, 0, 0, 1, 0],
    ],
    dtype=float,
)


def pytest_terminal_summary(terminalreporter):
    from . import test_acceptance

    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in test_acceptance.RESULTS:
            terminalreporter.write_line(line)
