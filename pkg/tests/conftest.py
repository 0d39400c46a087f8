import math

import numpy as np
import pytest

from avgrecon.measures import AveragingMeasure, experiment1_measure, experiment2_measure, validate_measure

PI = math.pi
DELTAS = [PI / 4, PI / 3, PI / 2, 2 * PI / 3]
SEED = 20261015


@pytest.fixture
def exp2_ctx():
    return validate_measure(experiment2_measure(), PI / 2)


@pytest.fixture
def exp1_ctx():
    return validate_measure(experiment1_measure(), PI / 2)


@pytest.fixture
def point_ctx():
    return validate_measure(AveragingMeasure.point_mass(), PI / 2)


@pytest.fixture
def rng():
    return np.random.default_rng(SEED)


def experiment_contexts():
    return [
        validate_measure(m, d)
        for m in (experiment1_measure(), experiment2_measure())
        for d in DELTAS
    ]


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
