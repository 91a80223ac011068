"""Shared fixtures: small analytic problems with known geometry."""

import numpy as np
import pytest

from cpso.problem import Problem


def make_toy1() -> Problem:
    """Minimize x1 + x2 subject to x1 + x2 <= 1 on the box [-2, 2]^2.

    The feasible region covers exactly 71.875% of the box area.
    """
    return Problem(
        name="toy1",
        lower=np.array([-2.0, -2.0]),
        upper=np.array([2.0, 2.0]),
        objective=lambda x: x[:, 0] + x[:, 1],
        inequalities=(lambda x: x[:, 0] + x[:, 1] - 1.0,),
    )


def make_toy_eq() -> Problem:
    """Minimize x1 + x2 subject to x1 - x2 = 0 on the box [-2, 2]^2."""
    return Problem(
        name="toy-eq",
        lower=np.array([-2.0, -2.0]),
        upper=np.array([2.0, 2.0]),
        objective=lambda x: x[:, 0] + x[:, 1],
        equalities=(lambda x: x[:, 0] - x[:, 1],),
    )


def make_halfline(limit: float = 0.0, lower: float = -100.0, upper: float = 100.0):
    """1-D problem: minimize x subject to x <= limit."""
    return Problem(
        name="halfline",
        lower=np.array([lower]),
        upper=np.array([upper]),
        objective=lambda x: x[:, 0],
        inequalities=(lambda x, c=limit: x[:, 0] - c,),
    )


class FixedRng:
    """Generator stand-in returning a constant for every uniform draw."""

    def __init__(self, value: float):
        self.value = value

    def random(self, size=None):
        if size is None:
            return self.value
        return np.full(size, self.value)

    def uniform(self, low=0.0, high=1.0, size=None):
        span = high - low
        if size is None:
            return low + span * self.value
        return np.full(size, low + span * self.value)


@pytest.fixture
def toy1():
    return make_toy1()


@pytest.fixture
def toy_eq():
    return make_toy_eq()
