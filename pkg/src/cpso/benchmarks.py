"""Benchmark problem registry and Monte Carlo feasibility-ratio estimation.

Two suites are registered:

* the engineering suite (pressure vessel in mixed-discrete and continuous
  form, welded beam, tension/compression spring, Himmelblau's nonlinear
  problem), with formulations as in Hu, Eberhart & Shi, "Engineering
  Optimization with Particle Swarm", SIS 2003;
* the g01..g13 suite in the formulations popularized by Runarsson & Yao
  ("Stochastic ranking for constrained evolutionary optimization", IEEE
  TEC 4(3), 2000) and used by Toscano Pulido & Coello Coello (CEC 2004).

Maximization problems are stored in minimization form.  Double-sided
constraints (``a <= expr <= b``) are stored as a single function
``max(expr - b, a - expr)`` so constraint counts match the usual
suite descriptions.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Optional

import numpy as np

from .problem import BatchEval, Problem, Tolerances, evaluate_batch

__all__ = [
    "SuiteEntry",
    "get_entry",
    "get_problem",
    "registry_names",
    "all_entries",
    "estimate_feasibility_ratio",
]


@dataclass(frozen=True)
class SuiteEntry:
    """A registered problem plus the reference metadata used to describe it."""

    problem: Problem
    suite: str  # "engineering" | "g-suite"
    n_inequalities: int
    n_equalities: int
    dimension: int
    reported_feasibility_ratio: Optional[float] = None  # percent
    reported_optimum: Optional[float] = None
    optimum_position: Optional[np.ndarray] = None


def _interval(expr, low, high):
    """One constraint for ``low <= expr(x) <= high``."""

    def g(x):
        e = expr(x)
        return np.maximum(e - high, low - e)

    return g


# ----------------------------------------------------------------- engineering


def _pressure_vessel(name: str, mixed: bool) -> SuiteEntry:
    # x = (shell thickness, head thickness, inner radius, cylinder length)
    def f(x):
        x1, x2, x3, x4 = x.T
        return (
            0.6224 * x1 * x3 * x4
            + 1.7781 * x2 * x3**2
            + 3.1661 * x1**2 * x4
            + 19.84 * x1**2 * x3
        )

    gs = (
        lambda x: -x[:, 0] + 0.0193 * x[:, 2],
        lambda x: -x[:, 1] + 0.00954 * x[:, 2],
        lambda x: -np.pi * x[:, 2] ** 2 * x[:, 3]
        - (4.0 / 3.0) * np.pi * x[:, 2] ** 3
        + 1296000.0,
    )
    steps = np.array([0.0625, 0.0625, np.nan, np.nan]) if mixed else None
    problem = Problem(
        name=name,
        lower=np.array([0.0625, 0.0625, 10.0, 10.0]),
        upper=np.array([99.0, 99.0, 200.0, 200.0]),
        objective=f,
        inequalities=gs,
        grid_steps=steps,
    )
    return SuiteEntry(
        problem=problem,
        suite="engineering",
        n_inequalities=3,
        n_equalities=0,
        dimension=4,
        reported_feasibility_ratio=75.8937 if mixed else 75.9314,
        reported_optimum=6059.714335 if mixed else None,
        optimum_position=(
            np.array([0.8125, 0.4375, 42.098445596, 176.636595842])
            if mixed
            else None
        ),
    )


def _welded_beam() -> SuiteEntry:
    # x = (weld thickness h, weld length l, bar height t, bar thickness b)
    P, L, E, G = 6000.0, 14.0, 30e6, 12e6
    tau_max, sigma_max, delta_max = 13600.0, 30000.0, 0.25

    def _tau(x):
        x1, x2, x3, _ = x.T
        tau1 = P / (np.sqrt(2.0) * x1 * x2)
        M = P * (L + x2 / 2.0)
        R = np.sqrt(x2**2 / 4.0 + ((x1 + x3) / 2.0) ** 2)
        J = 2.0 * (np.sqrt(2.0) * x1 * x2 * (x2**2 / 12.0 + ((x1 + x3) / 2.0) ** 2))
        tau2 = M * R / J
        return np.sqrt(tau1**2 + 2.0 * tau1 * tau2 * x2 / (2.0 * R) + tau2**2)

    def f(x):
        x1, x2, x3, x4 = x.T
        return 1.10471 * x1**2 * x2 + 0.04811 * x3 * x4 * (L + x2)

    def _pc(x):
        _, _, x3, x4 = x.T
        return (4.013 * E * np.sqrt(x3**2 * x4**6 / 36.0) / L**2) * (
            1.0 - x3 / (2.0 * L) * np.sqrt(E / (4.0 * G))
        )

    gs = (
        lambda x: _tau(x) - tau_max,
        lambda x: P * 6.0 * L / (x[:, 3] * x[:, 2] ** 2) - sigma_max,
        lambda x: x[:, 0] - x[:, 3],
        lambda x: 0.10471 * x[:, 0] ** 2
        + 0.04811 * x[:, 2] * x[:, 3] * (L + x[:, 1])
        - 5.0,
        lambda x: 0.125 - x[:, 0],
        lambda x: 4.0 * P * L**3 / (E * x[:, 2] ** 3 * x[:, 3]) - delta_max,
        lambda x: P - _pc(x),
    )
    problem = Problem(
        name="welded-beam",
        lower=np.array([0.1, 0.1, 0.1, 0.1]),
        upper=np.array([2.0, 10.0, 10.0, 2.0]),
        objective=f,
        inequalities=gs,
    )
    return SuiteEntry(
        problem=problem,
        suite="engineering",
        n_inequalities=7,
        n_equalities=0,
        dimension=4,
        reported_feasibility_ratio=2.6475,
        reported_optimum=1.724852,
        optimum_position=np.array(
            [0.205729640, 3.470488666, 9.036623910, 0.205729640]
        ),
    )


def _spring() -> SuiteEntry:
    # x = (wire diameter d, mean coil diameter D, active coil count N)
    def f(x):
        d, D, N = x.T
        return (N + 2.0) * D * d**2

    gs = (
        lambda x: 1.0 - x[:, 1] ** 3 * x[:, 2] / (71785.0 * x[:, 0] ** 4),
        lambda x: (4.0 * x[:, 1] ** 2 - x[:, 0] * x[:, 1])
        / (12566.0 * (x[:, 1] * x[:, 0] ** 3 - x[:, 0] ** 4))
        + 1.0 / (5108.0 * x[:, 0] ** 2)
        - 1.0,
        lambda x: 1.0 - 140.45 * x[:, 0] / (x[:, 1] ** 2 * x[:, 2]),
        lambda x: (x[:, 0] + x[:, 1]) / 1.5 - 1.0,
    )
    problem = Problem(
        name="spring",
        lower=np.array([0.05, 0.25, 2.0]),
        upper=np.array([2.0, 1.3, 15.0]),
        objective=f,
        inequalities=gs,
    )
    return SuiteEntry(
        problem=problem,
        suite="engineering",
        n_inequalities=4,
        n_equalities=0,
        dimension=3,
        reported_feasibility_ratio=0.7467,
        reported_optimum=0.012665,
        optimum_position=np.array([0.051689061, 0.356717744, 11.288965504]),
    )


def _himmelblau() -> SuiteEntry:
    # Same structure as g04 with the 0.00026 coefficient of the Hu et al.
    # statement of the problem (and three double-sided constraints).
    def f(x):
        x1, _, x3, _, x5 = x.T
        return (
            5.3578547 * x3**2 + 0.8356891 * x1 * x5 + 37.293239 * x1 - 40792.141
        )

    g1 = _interval(
        lambda x: 85.334407
        + 0.0056858 * x[:, 1] * x[:, 4]
        + 0.00026 * x[:, 0] * x[:, 3]
        - 0.0022053 * x[:, 2] * x[:, 4],
        0.0,
        92.0,
    )
    g2 = _interval(
        lambda x: 80.51249
        + 0.0071317 * x[:, 1] * x[:, 4]
        + 0.0029955 * x[:, 0] * x[:, 1]
        + 0.0021813 * x[:, 2] ** 2,
        90.0,
        110.0,
    )
    g3 = _interval(
        lambda x: 9.300961
        + 0.0047026 * x[:, 2] * x[:, 4]
        + 0.0012547 * x[:, 0] * x[:, 2]
        + 0.0019085 * x[:, 2] * x[:, 3],
        20.0,
        25.0,
    )
    problem = Problem(
        name="himmelblau",
        lower=np.array([78.0, 33.0, 27.0, 27.0, 27.0]),
        upper=np.array([102.0, 45.0, 45.0, 45.0, 45.0]),
        objective=f,
        inequalities=(g1, g2, g3),
    )
    return SuiteEntry(
        problem=problem,
        suite="engineering",
        n_inequalities=3,
        n_equalities=0,
        dimension=5,
        reported_feasibility_ratio=52.0696,
        reported_optimum=-31025.561420,
        optimum_position=np.array(
            [78.0, 33.0, 27.070997106, 45.0, 44.969242550]
        ),
    )


# --------------------------------------------------------------------- g-suite


def _g01() -> SuiteEntry:
    def f(x):
        return (
            5.0 * x[:, :4].sum(axis=1)
            - 5.0 * (x[:, :4] ** 2).sum(axis=1)
            - x[:, 4:13].sum(axis=1)
        )

    gs = (
        lambda x: 2 * x[:, 0] + 2 * x[:, 1] + x[:, 9] + x[:, 10] - 10,
        lambda x: 2 * x[:, 0] + 2 * x[:, 2] + x[:, 9] + x[:, 11] - 10,
        lambda x: 2 * x[:, 1] + 2 * x[:, 2] + x[:, 10] + x[:, 11] - 10,
        lambda x: -8 * x[:, 0] + x[:, 9],
        lambda x: -8 * x[:, 1] + x[:, 10],
        lambda x: -8 * x[:, 2] + x[:, 11],
        lambda x: -2 * x[:, 3] - x[:, 4] + x[:, 9],
        lambda x: -2 * x[:, 5] - x[:, 6] + x[:, 10],
        lambda x: -2 * x[:, 7] - x[:, 8] + x[:, 11],
    )
    lower = np.zeros(13)
    upper = np.array([1.0] * 9 + [100.0] * 3 + [1.0])
    problem = Problem("g01", lower, upper, f, inequalities=gs)
    x_star = np.array([1.0] * 9 + [3.0] * 3 + [1.0])
    return SuiteEntry(
        problem, "g-suite", 9, 0, 13,
        reported_feasibility_ratio=0.0003,
        reported_optimum=-15.0,
        optimum_position=x_star,
    )


def _g02() -> SuiteEntry:
    n = 20

    def f(x):
        c = np.cos(x)
        num = (c**4).sum(axis=1) - 2.0 * (c**2).prod(axis=1)
        den = np.sqrt((np.arange(1, n + 1) * x**2).sum(axis=1))
        return -np.abs(num / den)

    gs = (
        lambda x: 0.75 - x.prod(axis=1),
        lambda x: x.sum(axis=1) - 7.5 * n,
    )
    problem = Problem("g02", np.zeros(n), np.full(n, 10.0), f, inequalities=gs)
    x_star = np.array([
        3.162460842, 3.128330867, 3.094792006, 3.061450527, 3.027929784,
        2.993826197, 2.958668753, 2.921843078, 0.494825115, 0.488358210,
        0.482316426, 0.476645305, 0.471295503, 0.466231000, 0.461420050,
        0.456836648, 0.452458769, 0.448267622, 0.444247009, 0.440382860,
    ])
    return SuiteEntry(
        problem, "g-suite", 2, 0, n,
        reported_feasibility_ratio=99.9964,
        reported_optimum=-0.803619,
        optimum_position=x_star,
    )


def _g03() -> SuiteEntry:
    n = 10
    scale = np.sqrt(n) ** n

    def f(x):
        return -scale * x.prod(axis=1)

    hs = (lambda x: (x**2).sum(axis=1) - 1.0,)
    problem = Problem("g03", np.zeros(n), np.ones(n), f, equalities=hs)
    x_star = np.full(n, 1.0 / np.sqrt(n))
    return SuiteEntry(
        problem, "g-suite", 0, 1, n,
        reported_feasibility_ratio=0.0,
        reported_optimum=-1.0,
        optimum_position=x_star,
    )


def _g04() -> SuiteEntry:
    def f(x):
        x1, _, x3, _, x5 = x.T
        return (
            5.3578547 * x3**2 + 0.8356891 * x1 * x5 + 37.293239 * x1 - 40792.141
        )

    g1 = _interval(
        lambda x: 85.334407
        + 0.0056858 * x[:, 1] * x[:, 4]
        + 0.0006262 * x[:, 0] * x[:, 3]
        - 0.0022053 * x[:, 2] * x[:, 4],
        0.0,
        92.0,
    )
    g2 = _interval(
        lambda x: 80.51249
        + 0.0071317 * x[:, 1] * x[:, 4]
        + 0.0029955 * x[:, 0] * x[:, 1]
        + 0.0021813 * x[:, 2] ** 2,
        90.0,
        110.0,
    )
    g3 = _interval(
        lambda x: 9.300961
        + 0.0047026 * x[:, 2] * x[:, 4]
        + 0.0012547 * x[:, 0] * x[:, 2]
        + 0.0019085 * x[:, 2] * x[:, 3],
        20.0,
        25.0,
    )
    lower = np.array([78.0, 33.0, 27.0, 27.0, 27.0])
    upper = np.array([102.0, 45.0, 45.0, 45.0, 45.0])
    problem = Problem("g04", lower, upper, f, inequalities=(g1, g2, g3))
    x_star = np.array([78.0, 33.0, 29.9952560256816, 45.0, 36.7758129057882])
    return SuiteEntry(
        problem, "g-suite", 3, 0, 5,
        reported_feasibility_ratio=26.9552,
        reported_optimum=-30665.539,
        optimum_position=x_star,
    )


def _g05() -> SuiteEntry:
    def f(x):
        x1, x2 = x[:, 0], x[:, 1]
        return 3.0 * x1 + 1e-6 * x1**3 + 2.0 * x2 + (2e-6 / 3.0) * x2**3

    g1 = _interval(lambda x: x[:, 2] - x[:, 3], -0.55, 0.55)
    hs = (
        lambda x: 1000.0 * np.sin(-x[:, 2] - 0.25)
        + 1000.0 * np.sin(-x[:, 3] - 0.25)
        + 894.8
        - x[:, 0],
        lambda x: 1000.0 * np.sin(x[:, 2] - 0.25)
        + 1000.0 * np.sin(x[:, 2] - x[:, 3] - 0.25)
        + 894.8
        - x[:, 1],
        lambda x: 1000.0 * np.sin(x[:, 3] - 0.25)
        + 1000.0 * np.sin(x[:, 3] - x[:, 2] - 0.25)
        + 1294.8,
    )
    lower = np.array([0.0, 0.0, -0.55, -0.55])
    upper = np.array([1200.0, 1200.0, 0.55, 0.55])
    problem = Problem("g05", lower, upper, f, inequalities=(g1,), equalities=hs)
    x_star = np.array([679.945148297, 1026.06697600, 0.118876369094, -0.396233485215])
    return SuiteEntry(
        problem, "g-suite", 1, 3, 4,
        reported_feasibility_ratio=0.0,
        reported_optimum=5126.498,
        optimum_position=x_star,
    )


def _g06() -> SuiteEntry:
    def f(x):
        return (x[:, 0] - 10.0) ** 3 + (x[:, 1] - 20.0) ** 3

    gs = (
        lambda x: -((x[:, 0] - 5.0) ** 2) - (x[:, 1] - 5.0) ** 2 + 100.0,
        lambda x: (x[:, 0] - 6.0) ** 2 + (x[:, 1] - 5.0) ** 2 - 82.81,
    )
    problem = Problem(
        "g06", np.array([13.0, 0.0]), np.array([100.0, 100.0]), f, inequalities=gs
    )
    x_star = np.array([14.095, 0.84296079])
    return SuiteEntry(
        problem, "g-suite", 2, 0, 2,
        reported_feasibility_ratio=0.0067,
        reported_optimum=-6961.81388,
        optimum_position=x_star,
    )


def _g07() -> SuiteEntry:
    def f(x):
        x1, x2, x3, x4, x5, x6, x7, x8, x9, x10 = x.T
        return (
            x1**2 + x2**2 + x1 * x2 - 14 * x1 - 16 * x2
            + (x3 - 10) ** 2 + 4 * (x4 - 5) ** 2 + (x5 - 3) ** 2
            + 2 * (x6 - 1) ** 2 + 5 * x7**2 + 7 * (x8 - 11) ** 2
            + 2 * (x9 - 10) ** 2 + (x10 - 7) ** 2 + 45
        )

    gs = (
        lambda x: -105 + 4 * x[:, 0] + 5 * x[:, 1] - 3 * x[:, 6] + 9 * x[:, 7],
        lambda x: 10 * x[:, 0] - 8 * x[:, 1] - 17 * x[:, 6] + 2 * x[:, 7],
        lambda x: -8 * x[:, 0] + 2 * x[:, 1] + 5 * x[:, 8] - 2 * x[:, 9] - 12,
        lambda x: 3 * (x[:, 0] - 2) ** 2
        + 4 * (x[:, 1] - 3) ** 2
        + 2 * x[:, 2] ** 2
        - 7 * x[:, 3]
        - 120,
        lambda x: 5 * x[:, 0] ** 2
        + 8 * x[:, 1]
        + (x[:, 2] - 6) ** 2
        - 2 * x[:, 3]
        - 40,
        lambda x: x[:, 0] ** 2
        + 2 * (x[:, 1] - 2) ** 2
        - 2 * x[:, 0] * x[:, 1]
        + 14 * x[:, 4]
        - 6 * x[:, 5],
        lambda x: 0.5 * (x[:, 0] - 8) ** 2
        + 2 * (x[:, 1] - 4) ** 2
        + 3 * x[:, 4] ** 2
        - x[:, 5]
        - 30,
        lambda x: -3 * x[:, 0] + 6 * x[:, 1] + 12 * (x[:, 8] - 8) ** 2 - 7 * x[:, 9],
    )
    problem = Problem(
        "g07", np.full(10, -10.0), np.full(10, 10.0), f, inequalities=gs
    )
    x_star = np.array([
        2.171996, 2.363683, 8.773926, 5.095984, 0.990655,
        1.430574, 1.321644, 9.828726, 8.280092, 8.375927,
    ])
    return SuiteEntry(
        problem, "g-suite", 8, 0, 10,
        reported_feasibility_ratio=0.0001,
        reported_optimum=24.306209,
        optimum_position=x_star,
    )


def _g08() -> SuiteEntry:
    def f(x):
        x1, x2 = x[:, 0], x[:, 1]
        return -(np.sin(2 * np.pi * x1) ** 3 * np.sin(2 * np.pi * x2)) / (
            x1**3 * (x1 + x2)
        )

    gs = (
        lambda x: x[:, 0] ** 2 - x[:, 1] + 1.0,
        lambda x: 1.0 - x[:, 0] + (x[:, 1] - 4.0) ** 2,
    )
    # The objective is singular at x1 = 0; the open interval (0, 10) is
    # realized with a tiny positive lower bound so every in-box point
    # evaluates to a finite value.
    problem = Problem(
        "g08", np.full(2, 1e-6), np.full(2, 10.0), f, inequalities=gs
    )
    x_star = np.array([1.22797135260752599, 4.24537336612274885])
    return SuiteEntry(
        problem, "g-suite", 2, 0, 2,
        reported_feasibility_ratio=0.8607,
        reported_optimum=-0.095825,
        optimum_position=x_star,
    )


def _g09() -> SuiteEntry:
    def f(x):
        x1, x2, x3, x4, x5, x6, x7 = x.T
        return (
            (x1 - 10) ** 2 + 5 * (x2 - 12) ** 2 + x3**4 + 3 * (x4 - 11) ** 2
            + 10 * x5**6 + 7 * x6**2 + x7**4 - 4 * x6 * x7 - 10 * x6 - 8 * x7
        )

    gs = (
        lambda x: -127
        + 2 * x[:, 0] ** 2
        + 3 * x[:, 1] ** 4
        + x[:, 2]
        + 4 * x[:, 3] ** 2
        + 5 * x[:, 4],
        lambda x: -282
        + 7 * x[:, 0]
        + 3 * x[:, 1]
        + 10 * x[:, 2] ** 2
        + x[:, 3]
        - x[:, 4],
        lambda x: -196
        + 23 * x[:, 0]
        + x[:, 1] ** 2
        + 6 * x[:, 5] ** 2
        - 8 * x[:, 6],
        lambda x: 4 * x[:, 0] ** 2
        + x[:, 1] ** 2
        - 3 * x[:, 0] * x[:, 1]
        + 2 * x[:, 2] ** 2
        + 5 * x[:, 5]
        - 11 * x[:, 6],
    )
    problem = Problem(
        "g09", np.full(7, -10.0), np.full(7, 10.0), f, inequalities=gs
    )
    x_star = np.array([
        2.330499, 1.951372, -0.477541, 4.365726, -0.624487, 1.038131, 1.594227,
    ])
    return SuiteEntry(
        problem, "g-suite", 4, 0, 7,
        reported_feasibility_ratio=0.5264,
        reported_optimum=680.630057,
        optimum_position=x_star,
    )


def _g10() -> SuiteEntry:
    def f(x):
        return x[:, 0] + x[:, 1] + x[:, 2]

    gs = (
        lambda x: -1.0 + 0.0025 * (x[:, 3] + x[:, 5]),
        lambda x: -1.0 + 0.0025 * (x[:, 4] + x[:, 6] - x[:, 3]),
        lambda x: -1.0 + 0.01 * (x[:, 7] - x[:, 4]),
        lambda x: -x[:, 0] * x[:, 5]
        + 833.33252 * x[:, 3]
        + 100.0 * x[:, 0]
        - 83333.333,
        lambda x: -x[:, 1] * x[:, 6]
        + 1250.0 * x[:, 4]
        + x[:, 1] * x[:, 3]
        - 1250.0 * x[:, 3],
        lambda x: -x[:, 2] * x[:, 7]
        + 1250000.0
        + x[:, 2] * x[:, 4]
        - 2500.0 * x[:, 4],
    )
    lower = np.array([100.0, 1000.0, 1000.0] + [10.0] * 5)
    upper = np.array([10000.0] * 3 + [1000.0] * 5)
    problem = Problem("g10", lower, upper, f, inequalities=gs)
    x_star = np.array([
        579.306685018, 1359.97067807, 5109.97065743,
        182.017699631, 295.601173703, 217.982300369,
        286.416525928, 395.601173703,
    ])
    return SuiteEntry(
        problem, "g-suite", 6, 0, 8,
        reported_feasibility_ratio=0.0006,
        reported_optimum=7049.25,
        optimum_position=x_star,
    )


def _g11() -> SuiteEntry:
    def f(x):
        return x[:, 0] ** 2 + (x[:, 1] - 1.0) ** 2

    hs = (lambda x: x[:, 1] - x[:, 0] ** 2,)
    problem = Problem(
        "g11", np.full(2, -1.0), np.ones(2), f, equalities=hs
    )
    x_star = np.array([1.0 / np.sqrt(2.0), 0.5])
    return SuiteEntry(
        problem, "g-suite", 0, 1, 2,
        reported_feasibility_ratio=0.0,
        reported_optimum=0.75,
        optimum_position=x_star,
    )


def _g12() -> SuiteEntry:
    # Feasible space: 9^3 disjoint spheres of radius 0.25 centred on the
    # integer grid {1..9}^3.  Membership in the nearest sphere decides
    # feasibility, so the whole family collapses to one stepwise
    # constraint whose violation grades by distance to the nearest sphere.
    def f(x):
        return -(
            100.0 - (x[:, 0] - 5.0) ** 2 - (x[:, 1] - 5.0) ** 2 - (x[:, 2] - 5.0) ** 2
        ) / 100.0

    def g(x):
        centers = np.clip(np.round(x), 1.0, 9.0)
        return ((x - centers) ** 2).sum(axis=1) - 0.0625

    problem = Problem(
        "g12", np.zeros(3), np.full(3, 10.0), f, inequalities=(g,)
    )
    x_star = np.array([5.0, 5.0, 5.0])
    return SuiteEntry(
        problem, "g-suite", 1, 0, 3,
        reported_feasibility_ratio=4.7713,
        reported_optimum=-1.0,
        optimum_position=x_star,
    )


def _g13() -> SuiteEntry:
    def f(x):
        return np.exp(x.prod(axis=1))

    hs = (
        lambda x: (x**2).sum(axis=1) - 10.0,
        lambda x: x[:, 1] * x[:, 2] - 5.0 * x[:, 3] * x[:, 4],
        lambda x: x[:, 0] ** 3 + x[:, 1] ** 3 + 1.0,
    )
    lower = np.array([-2.3, -2.3, -3.2, -3.2, -3.2])
    upper = np.array([2.3, 2.3, 3.2, 3.2, 3.2])
    problem = Problem("g13", lower, upper, f, equalities=hs)
    x_star = np.array([
        -1.717143, 1.595709, 1.827247, -0.7636413, -0.763645,
    ])
    return SuiteEntry(
        problem, "g-suite", 0, 3, 5,
        reported_feasibility_ratio=0.0,
        reported_optimum=0.053950,
        optimum_position=x_star,
    )


def _build_registry() -> Dict[str, SuiteEntry]:
    entries = [
        _pressure_vessel("pressure-vessel-mixed", mixed=True),
        _pressure_vessel("pressure-vessel-continuous", mixed=False),
        _welded_beam(),
        _spring(),
        _himmelblau(),
        _g01(), _g02(), _g03(), _g04(), _g05(), _g06(), _g07(),
        _g08(), _g09(), _g10(), _g11(), _g12(), _g13(),
    ]
    registry = {}
    for entry in entries:
        problem = entry.problem
        assert entry.n_inequalities == problem.n_inequalities
        assert entry.n_equalities == problem.n_equalities
        assert entry.dimension == problem.dimension
        registry[problem.name] = entry
    return registry


_REGISTRY = _build_registry()


def registry_names() -> list:
    return list(_REGISTRY)


def all_entries() -> list:
    return list(_REGISTRY.values())


def get_entry(name: str) -> SuiteEntry:
    """Look a registry entry (problem plus metadata) up by name."""
    try:
        return _REGISTRY[name]
    except KeyError:
        valid = ", ".join(_REGISTRY)
        raise KeyError(f"unknown problem {name!r}; valid names: {valid}") from None


def get_problem(name: str) -> Problem:
    """Look a problem up by registry name."""
    return get_entry(name).problem


def estimate_feasibility_ratio(
    problem: Problem,
    samples: int,
    tolerances: Tolerances,
    seed: int,
    chunk: int = 200_000,
) -> float:
    """Percentage of uniform box samples that are feasible.

    Deterministic for a fixed seed.  Discrete dimensions are snapped to
    their grid before testing, mirroring swarm initialization.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    rng = np.random.default_rng(seed)
    feasible = 0
    remaining = samples
    while remaining > 0:
        m = min(chunk, remaining)
        pts = problem.sample_uniform(rng, m)
        ev = evaluate_batch(problem, pts)
        feasible += int(np.count_nonzero(ev.feasible(tolerances)))
        remaining -= m
    return 100.0 * feasible / samples
