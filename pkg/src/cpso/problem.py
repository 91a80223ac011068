"""Constrained-problem representation, point evaluation and tolerance handling.

A problem is a box-bounded minimization task with ordered inequality
constraints (satisfied when ``g(x) <= 0``) and equality constraints
(satisfied when ``g(x) == 0``).  Box bounds are treated as additional
inequality terms and charged into the violation aggregate, so points
outside the box are legal inputs to :func:`evaluate`.

All constraint and objective callables are vectorized: they accept an
array of shape ``(m, n)`` and return shape ``(m,)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

Vectorized = Callable[[np.ndarray], np.ndarray]


class EvaluationFault(RuntimeError):
    """A constraint or objective returned a non-finite value inside the box."""


@dataclass(frozen=True)
class Tolerances:
    """Feasibility tolerances for inequality/box and equality constraints."""

    ineq: float = 1e-12
    eq: float = 1e-12

    def __post_init__(self):
        if self.ineq < 0 or self.eq < 0:
            raise ValueError("tolerances must be nonnegative")


@dataclass(frozen=True)
class Problem:
    """A box-bounded constrained minimization problem.

    Parameters
    ----------
    name : str
        Registry identifier.
    lower, upper : ndarray
        Box bounds, ``lower < upper`` elementwise.
    objective : callable
        Vectorized conflict function, ``(m, n) -> (m,)``.
    inequalities : sequence of callables
        Each satisfied when ``g(x) <= 0``.
    equalities : sequence of callables
        Each satisfied when ``g(x) == 0``.
    grid_steps : ndarray or None
        Per-dimension step for discrete dimensions, NaN for continuous
        ones.  None means all dimensions are continuous.
    known_optimum : float or None
        Reference conflict value (metadata only, never used in search).
    """

    name: str
    lower: np.ndarray
    upper: np.ndarray
    objective: Vectorized
    inequalities: tuple = ()
    equalities: tuple = ()
    grid_steps: Optional[np.ndarray] = None
    known_optimum: Optional[float] = None

    def __post_init__(self):
        lower = np.asarray(self.lower, dtype=float)
        upper = np.asarray(self.upper, dtype=float)
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)
        object.__setattr__(self, "inequalities", tuple(self.inequalities))
        object.__setattr__(self, "equalities", tuple(self.equalities))
        if lower.shape != upper.shape or lower.ndim != 1:
            raise ValueError("bounds must be 1-D arrays of equal length")
        if not np.all(lower < upper):
            raise ValueError("lower bounds must be strictly below upper bounds")
        if self.grid_steps is not None:
            steps = np.asarray(self.grid_steps, dtype=float)
            object.__setattr__(self, "grid_steps", steps)
            if steps.shape != lower.shape:
                raise ValueError("grid_steps length must match dimension")
            mask = ~np.isnan(steps)
            if np.any(steps[mask] <= 0):
                raise ValueError("discrete steps must be positive")
            spans = upper[mask] - lower[mask]
            if np.any(spans < steps[mask]):
                raise ValueError("discrete dimensions need >= 2 grid values")

    @property
    def dimension(self) -> int:
        return self.lower.size

    @property
    def n_inequalities(self) -> int:
        return len(self.inequalities)

    @property
    def n_equalities(self) -> int:
        return len(self.equalities)

    @property
    def span(self) -> np.ndarray:
        return self.upper - self.lower

    @property
    def vmax(self) -> np.ndarray:
        """Velocity clamp: half the dynamic range per dimension."""
        return 0.5 * self.span

    @property
    def discrete_mask(self) -> np.ndarray:
        if self.grid_steps is None:
            return np.zeros(self.dimension, dtype=bool)
        return ~np.isnan(self.grid_steps)

    def snap_to_grid(self, x: np.ndarray) -> np.ndarray:
        """Round discrete dimensions to the nearest step multiple.

        Exact half-step ties round toward the lower multiple.  Works on
        a single point ``(n,)`` or a batch ``(m, n)``.
        """
        if self.grid_steps is None:
            return np.array(x, dtype=float)
        x = np.array(x, dtype=float)
        mask = self.discrete_mask
        steps = self.grid_steps[mask]
        ratio = x[..., mask] / steps
        x[..., mask] = np.ceil(ratio - 0.5) * steps
        return x

    def sample_uniform(self, rng: np.random.Generator, count: int) -> np.ndarray:
        """Draw ``count`` points uniformly in the box, snapped to the grid."""
        pts = self.lower + rng.random((count, self.dimension)) * self.span
        return self.snap_to_grid(pts)


@dataclass(frozen=True)
class EvaluatedPoint:
    """A position together with its conflict and violation breakdown."""

    position: np.ndarray
    conflict: float
    ineq_violations: np.ndarray
    eq_violations: np.ndarray
    box_violations: np.ndarray
    cv: float
    nac: int


@dataclass
class BatchEval:
    """Evaluation of many points at once; row ``i`` describes point ``i``."""

    positions: np.ndarray        # (m, n)
    conflict: np.ndarray         # (m,)
    ineq_violations: np.ndarray  # (m, q)
    eq_violations: np.ndarray    # (m, m-q)
    box_violations: np.ndarray   # (m, n)
    cv: np.ndarray               # (m,)

    def __len__(self) -> int:
        return self.positions.shape[0]

    def nac(self, tolerances: Tolerances) -> np.ndarray:
        """Active-constraint count per point under the given tolerances."""
        return (
            np.count_nonzero(self.ineq_violations > tolerances.ineq, axis=1)
            + np.count_nonzero(self.eq_violations > tolerances.eq, axis=1)
            + np.count_nonzero(self.box_violations > tolerances.ineq, axis=1)
        )

    def feasible(self, tolerances: Tolerances) -> np.ndarray:
        """Boolean feasibility mask under the given tolerances."""
        return (
            np.all(self.ineq_violations <= tolerances.ineq, axis=1)
            & np.all(self.eq_violations <= tolerances.eq, axis=1)
            & np.all(self.box_violations <= tolerances.ineq, axis=1)
        )

    def point(self, i: int, tolerances: Tolerances) -> EvaluatedPoint:
        """Materialize row ``i`` as an :class:`EvaluatedPoint`."""
        return EvaluatedPoint(
            position=self.positions[i].copy(),
            conflict=float(self.conflict[i]),
            ineq_violations=self.ineq_violations[i].copy(),
            eq_violations=self.eq_violations[i].copy(),
            box_violations=self.box_violations[i].copy(),
            cv=float(self.cv[i]),
            nac=int(self.nac(tolerances)[i]),
        )

    def take(self, rows: np.ndarray) -> "BatchEval":
        return BatchEval(
            positions=self.positions[rows],
            conflict=self.conflict[rows],
            ineq_violations=self.ineq_violations[rows],
            eq_violations=self.eq_violations[rows],
            box_violations=self.box_violations[rows],
            cv=self.cv[rows],
        )

    def put(self, i: int, other: "BatchEval", j: int) -> None:
        """Overwrite row ``i`` with row ``j`` of ``other``."""
        self.positions[i] = other.positions[j]
        self.conflict[i] = other.conflict[j]
        self.ineq_violations[i] = other.ineq_violations[j]
        self.eq_violations[i] = other.eq_violations[j]
        self.box_violations[i] = other.box_violations[j]
        self.cv[i] = other.cv[j]

    def copy(self) -> "BatchEval":
        return BatchEval(
            positions=self.positions.copy(),
            conflict=self.conflict.copy(),
            ineq_violations=self.ineq_violations.copy(),
            eq_violations=self.eq_violations.copy(),
            box_violations=self.box_violations.copy(),
            cv=self.cv.copy(),
        )


def _sanitize(values: np.ndarray, in_box: np.ndarray, what: str) -> np.ndarray:
    """Replace non-finite outputs for out-of-box points; fault inside the box.

    Out-of-box positions are legal (particles overshoot) but the problem
    functions only promise finite output inside the box, so non-finite
    values there are mapped to +inf, which deprioritizes the point in
    every comparison.
    """
    finite = np.isfinite(values)
    if finite.all():
        return values
    bad_rows = ~finite if values.ndim == 1 else ~finite.all(axis=1)
    if np.any(bad_rows & in_box):
        idx = int(np.flatnonzero(bad_rows & in_box)[0])
        raise EvaluationFault(f"non-finite {what} at in-box point index {idx}")
    return np.where(finite, values, np.inf)


def evaluate_batch(problem: Problem, positions: np.ndarray) -> BatchEval:
    """Evaluate a batch of points: conflicts and raw violation amounts.

    ``cv`` is the plain sum of inequality excesses, equality magnitudes
    and box excesses; no tolerance is subtracted anywhere.
    """
    x = np.atleast_2d(np.asarray(positions, dtype=float))
    if x.shape[1] != problem.dimension:
        raise ValueError(
            f"expected dimension {problem.dimension}, got {x.shape[1]}"
        )
    if not np.isfinite(x).all():
        raise ValueError("positions must be finite")

    in_box = np.all((x >= problem.lower) & (x <= problem.upper), axis=1)

    conflict = _sanitize(
        np.asarray(problem.objective(x), dtype=float), in_box, "objective"
    )

    q = problem.n_inequalities
    ineq = np.empty((x.shape[0], q))
    for j, g in enumerate(problem.inequalities):
        raw = _sanitize(
            np.asarray(g(x), dtype=float), in_box, f"inequality {j}"
        )
        ineq[:, j] = np.maximum(0.0, raw)

    me = problem.n_equalities
    eq = np.empty((x.shape[0], me))
    for j, h in enumerate(problem.equalities):
        raw = _sanitize(
            np.asarray(h(x), dtype=float), in_box, f"equality {j}"
        )
        eq[:, j] = np.abs(raw)

    box = np.maximum(0.0, x - problem.upper) + np.maximum(0.0, problem.lower - x)

    cv = ineq.sum(axis=1) + eq.sum(axis=1) + box.sum(axis=1)
    return BatchEval(
        positions=x,
        conflict=conflict,
        ineq_violations=ineq,
        eq_violations=eq,
        box_violations=box,
        cv=cv,
    )


def evaluate(
    problem: Problem, x: Sequence[float], tolerances: Tolerances
) -> EvaluatedPoint:
    """Evaluate a single point."""
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or x.size != problem.dimension:
        raise ValueError(
            f"expected a vector of length {problem.dimension}, got shape {x.shape}"
        )
    return evaluate_batch(problem, x[None, :]).point(0, tolerances)


def is_feasible(point: EvaluatedPoint, tolerances: Tolerances) -> bool:
    """True iff every violation is within its governing tolerance."""
    return bool(
        np.all(point.ineq_violations <= tolerances.ineq)
        and np.all(point.eq_violations <= tolerances.eq)
        and np.all(point.box_violations <= tolerances.ineq)
    )


@dataclass(frozen=True)
class RecSchedule:
    """Time-decreasing equality tolerance.

    Starts at ``initial_tol`` at step 1, reaches ``final_tol`` once a
    fixed fraction of the search has elapsed, and stays there.  The
    linear variant interpolates between those two anchors; the
    exponential variant multiplies by ``rate`` every step (floored at
    ``final_tol``) and is likewise forced to ``final_tol`` from the
    switch step onwards.
    """

    initial_tol: float
    final_tol: float = 1e-12
    switch_fraction: float = 0.8
    decrease: str = "linear"  # "linear" | "exponential"
    rate: float = 0.995

    def __post_init__(self):
        if self.initial_tol < self.final_tol:
            raise ValueError("initial_tol must be >= final_tol")
        if not (0.0 < self.switch_fraction <= 1.0):
            raise ValueError("switch_fraction must be in (0, 1]")
        if self.decrease not in ("linear", "exponential"):
            raise ValueError("decrease must be 'linear' or 'exponential'")
        if self.decrease == "exponential" and not (0.0 < self.rate < 1.0):
            raise ValueError("exponential rate must be in (0, 1)")

    @classmethod
    def for_problem(cls, problem: Problem, **kwargs) -> "RecSchedule":
        """Initial tolerance: half the mean dynamic range of the box."""
        return cls(initial_tol=float(np.mean(problem.span)) / 2.0, **kwargs)

    def switch_step(self, t_max: int) -> int:
        return max(1, int(np.ceil(self.switch_fraction * t_max)))

    def tolerance_at(self, t: int, t_max: int) -> float:
        if t < 1 or t_max < 1:
            raise ValueError("steps are 1-based and t_max must be >= 1")
        t_switch = self.switch_step(t_max)
        if t >= t_switch:
            return self.final_tol
        if self.decrease == "linear":
            frac = (t - 1) / (t_switch - 1)
            return self.initial_tol + frac * (self.final_tol - self.initial_tol)
        return max(self.final_tol, self.initial_tol * self.rate ** (t - 1))


def tolerance_at(schedule: RecSchedule, t: int, t_max: int) -> float:
    """Equality tolerance in force at step ``t`` of a ``t_max``-step run."""
    return schedule.tolerance_at(t, t_max)
