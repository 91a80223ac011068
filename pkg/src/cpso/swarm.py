"""Particle swarm state machine with pluggable topologies and strategies.

The swarm advances synchronously: every neighbourhood-best lookup in
step ``t`` reads memories as they stood at the end of step ``t - 1``, so
the processing order of particles within a step is immaterial.

Randomness contract (per step, one generator per run):

1. One ``rng.random((size, dimension, 2))`` block, consumed in C order:
   particle-major, then dimension, with the individuality draw before
   the sociality draw in each dimension.
2. For the probabilistic-memory techniques, one extra scalar uniform per
   particle (ascending index order) whenever that particle's memory
   comparison involves an infeasible point.
3. For repair with random factors, one block of ``max_repair_trials``
   uniforms per particle needing repair, ascending index order.

Initialization consumes one ``(count, dimension)`` uniform block per
sampling request; feasible initialization draws candidate chunks of 256
positions per particle and keeps the first feasible one.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np

from .handlers import ChtConfig, RepairResult, penalized_batch, repair_move
from .problem import BatchEval, EvaluatedPoint, Problem, Tolerances, evaluate_batch

_INIT_CHUNK = 256


class InitializationFailure(RuntimeError):
    """A particle could not be seeded feasibly within the attempt budget."""


@dataclass(frozen=True)
class CoefficientSet:
    """Inertia ``w``, individuality ``iw`` and sociality ``sw`` weights."""

    w: float
    iw: float
    sw: float


COEFFICIENT_PRESETS = (
    CoefficientSet(0.5, 2.0, 2.0),
    CoefficientSet(0.7298, 1.49609, 1.49609),
    CoefficientSet(0.7, 2.0, 2.0),
)


def assign_coefficients(particle_index: int, swarm_size: int) -> CoefficientSet:
    """Coefficient preset by contiguous index thirds.

    The first third of indices gets the first preset and so on; when the
    size is not divisible by three the remainder joins the last third.
    """
    if not 0 <= particle_index < swarm_size:
        raise ValueError("particle index out of range")
    third = swarm_size // 3
    if particle_index < third:
        return COEFFICIENT_PRESETS[0]
    if particle_index < 2 * third:
        return COEFFICIENT_PRESETS[1]
    return COEFFICIENT_PRESETS[2]


@dataclass(frozen=True)
class Topology:
    """Neighbourhood structure over particle indices.

    kinds: ``ring`` (cyclic window of ``window`` indices centred on each
    particle, the extra neighbour on the successor side when the window
    is even), ``fully-connected``, and ``wheel`` (the hub sees everyone,
    spokes see themselves and the hub).
    """

    kind: str
    swarm_size: int
    window: int = 3
    hub: int = 0

    def __post_init__(self):
        if self.kind not in ("ring", "fully-connected", "wheel"):
            raise ValueError(f"unknown topology kind {self.kind!r}")
        if self.swarm_size < 1:
            raise ValueError("swarm_size must be positive")
        if self.kind == "ring":
            if not 3 <= self.window <= self.swarm_size:
                raise ValueError("ring window must be in [3, swarm_size]")
        if self.kind == "wheel" and not 0 <= self.hub < self.swarm_size:
            raise ValueError("wheel hub out of range")

    @classmethod
    def from_nn(cls, nn: int, swarm_size: int) -> "Topology":
        """Topology for ``nn`` neighbours per particle excluding itself."""
        if nn < 2:
            raise ValueError("nn must be >= 2")
        if nn >= swarm_size - 1:
            return cls("fully-connected", swarm_size)
        return cls("ring", swarm_size, window=nn + 1)

    def neighbor_matrix(self) -> np.ndarray:
        """Boolean ``(s, s)`` matrix; row i marks {i} and its neighbours."""
        s = self.swarm_size
        out = np.zeros((s, s), dtype=bool)
        if self.kind == "fully-connected":
            out[:] = True
        elif self.kind == "wheel":
            np.fill_diagonal(out, True)
            out[self.hub, :] = True
            out[:, self.hub] = True
        else:
            others = self.window - 1
            left = others // 2
            right = others - left
            idx = np.arange(s)
            for off in range(-left, right + 1):
                out[idx, (idx + off) % s] = True
        return out

    def candidates(self, i: int) -> np.ndarray:
        """Sorted candidate indices for particle ``i`` (always contains i)."""
        return np.flatnonzero(self.neighbor_matrix()[i])


@dataclass(frozen=True)
class SwarmConfig:
    size: int
    steps: int
    topology: Topology
    seed: object  # int or anything np.random.default_rng accepts
    tolerances: Tolerances = field(default_factory=Tolerances)

    def __post_init__(self):
        # Three sub-swarms must each be nonempty.
        if self.size < 3:
            raise ValueError("swarm size must be >= 3")
        if self.steps < 1:
            raise ValueError("steps must be >= 1")
        if self.topology.swarm_size != self.size:
            raise ValueError("topology size must match swarm size")


@dataclass
class Particle:
    """One particle's view of the swarm state (scalar API convenience)."""

    index: int
    position: np.ndarray
    velocity: np.ndarray
    coefficients: CoefficientSet
    current_eval: Optional[EvaluatedPoint] = None
    pbest_position: Optional[np.ndarray] = None
    pbest_eval: Optional[EvaluatedPoint] = None


def velocity_update(
    v: np.ndarray,
    x: np.ndarray,
    pbest: np.ndarray,
    lbest: np.ndarray,
    coefficients: CoefficientSet,
    rng: np.random.Generator,
    vmax: np.ndarray,
) -> np.ndarray:
    """One particle's velocity update with clamping.

    Uniform draws are consumed dimension-major, individuality before
    sociality within each dimension.
    """
    u = rng.random((v.size, 2))
    c = coefficients
    v_new = c.w * v + c.iw * u[:, 0] * (pbest - x) + c.sw * u[:, 1] * (lbest - x)
    return np.clip(v_new, -vmax, vmax)


def position_update(x: np.ndarray, v_new: np.ndarray, problem: Problem) -> np.ndarray:
    """``x + v`` with discrete dimensions snapped to their grid."""
    return problem.snap_to_grid(x + v_new)


class Swarm:
    """Mutable swarm state: positions, velocities, memories, counters.

    Build with :func:`init_swarm`.  ``evaluations`` counts every
    objective evaluation charged to the run, including initialization
    rejections and repair trials; ``repair_evaluations`` and
    ``init_evaluations`` break those out.
    """

    def __init__(
        self,
        problem: Problem,
        config: SwarmConfig,
        cht: ChtConfig,
        rng: np.random.Generator,
        positions: np.ndarray,
        init_evaluations: int,
    ):
        self.problem = problem
        self.config = config
        self.cht = cht
        self.rng = rng
        self.t = 0
        s = config.size
        self.positions = positions
        self.velocities = np.zeros_like(positions)
        coeffs = [assign_coefficients(i, s) for i in range(s)]
        self.w = np.array([c.w for c in coeffs])
        self.iw = np.array([c.iw for c in coeffs])
        self.sw = np.array([c.sw for c in coeffs])
        self.neighbors = config.topology.neighbor_matrix()
        self._neighbor_lists = [np.flatnonzero(row) for row in self.neighbors]
        self.current = evaluate_batch(problem, positions)
        self.init_evaluations = init_evaluations + s
        self.repair_evaluations = 0
        self.evaluations = self.init_evaluations
        self.pbest = self.current.copy()
        self.tolerances = self._tolerances_at(1 if cht.uses_rec else 0)

    # -- tolerance schedule -------------------------------------------------

    def _tolerances_at(self, t: int) -> Tolerances:
        base = self.config.tolerances
        if not self.cht.uses_rec or t < 1:
            return base
        eq = self.cht.rec.tolerance_at(t, self.config.steps)
        return Tolerances(ineq=base.ineq, eq=eq)

    # -- comparator keys ----------------------------------------------------

    def _keys(self, ev: BatchEval, tol: Tolerances) -> Tuple[np.ndarray, np.ndarray]:
        """Lexicographic sort keys (primary, secondary) for the technique.

        Penalty search orders by penalized conflict alone; every other
        technique orders by (infeasible flag, conflict-or-cv).
        """
        cht = self.cht
        if cht.uses_penalty:
            fp = penalized_batch(
                ev, cht.penalty_k, cht.penalty_alpha, cht.unit_exponent_below_one
            )
            return np.zeros(len(ev)), fp
        feas = ev.feasible(tol)
        primary = (~feas).astype(float)
        secondary = np.where(feas, ev.conflict, ev.cv)
        return primary, secondary

    def _lbest_positions(self, tol: Tolerances) -> np.ndarray:
        primary, secondary = self._keys(self.pbest, tol)
        s = self.config.size
        idx = np.empty(s, dtype=int)
        order = np.arange(s)
        for i in range(s):
            c = self._neighbor_lists[i]
            # lexsort: last key is most significant; ties keep lowest index.
            idx[i] = c[np.lexsort((order[c], secondary[c], primary[c]))[0]]
        return self.pbest.positions[idx]

    # -- stepping -----------------------------------------------------------

    def step(self) -> None:
        """Advance one synchronous step."""
        t = self.t + 1
        tol = self._tolerances_at(t)
        self.tolerances = tol

        lbest = self._lbest_positions(tol)
        s, n = self.positions.shape
        u = self.rng.random((s, n, 2))
        v_new = (
            self.w[:, None] * self.velocities
            + self.iw[:, None] * u[:, :, 0] * (self.pbest.positions - self.positions)
            + self.sw[:, None] * u[:, :, 1] * (lbest - self.positions)
        )
        vmax = self.problem.vmax
        np.clip(v_new, -vmax, vmax, out=v_new)

        x_new = self.problem.snap_to_grid(self.positions + v_new)
        new_eval = evaluate_batch(self.problem, x_new)
        self.evaluations += s

        if self.cht.is_repair:
            self._repair_step(x_new, v_new, new_eval, tol)
        else:
            self.positions = x_new
            self.velocities = v_new
            self.current = new_eval

        self._update_memories(tol)
        self.t = t

    def _repair_step(self, x_new, v_new, new_eval, tol):
        feasible = new_eval.feasible(tol)
        for i in np.flatnonzero(~feasible):
            res: RepairResult = repair_move(
                self.positions[i],
                v_new[i],
                self.problem,
                tol,
                self.cht.kind,
                self.rng,
                self.cht.max_repair_trials,
                full_eval=new_eval.take(np.array([i])),
            )
            extra = res.evals_used - 1  # the full step is already charged
            self.repair_evaluations += extra
            self.evaluations += extra
            x_new[i] = res.position
            v_new[i] = res.velocity
            if res.evaluation is None:
                new_eval.put(i, self.current, i)  # position kept
            else:
                new_eval.put(i, res.evaluation, res.accepted_row)
        self.positions = x_new
        self.velocities = v_new
        self.current = new_eval

    def _update_memories(self, tol: Tolerances) -> None:
        cht = self.cht
        cand, inc = self.current, self.pbest
        if cht.probabilistic_memory:
            self._update_memories_probabilistic(tol)
            return
        if cht.kind == "pf":
            replace = cand.feasible(tol) & (cand.conflict < inc.conflict)
        elif cht.uses_penalty:
            fp_c = penalized_batch(
                cand, cht.penalty_k, cht.penalty_alpha, cht.unit_exponent_below_one
            )
            fp_i = penalized_batch(
                inc, cht.penalty_k, cht.penalty_alpha, cht.unit_exponent_below_one
            )
            replace = fp_c < fp_i
        elif cht.is_repair:
            replace = cand.conflict < inc.conflict
        else:
            cf, nf = cand.feasible(tol), inc.feasible(tol)
            replace = (cf & ~nf) | (
                cf & nf & (cand.conflict < inc.conflict)
            ) | (~cf & ~nf & (cand.cv < inc.cv))
        for i in np.flatnonzero(replace):
            self.pbest.put(i, cand, i)

    def _update_memories_probabilistic(self, tol: Tolerances) -> None:
        """Priority rules, overridden with probability 1 - prob by a raw
        conflict comparison whenever an infeasible point is involved.
        One uniform is drawn per particle needing a draw, index order."""
        cand, inc = self.current, self.pbest
        cf, nf = cand.feasible(tol), inc.feasible(tol)
        for i in range(self.config.size):
            if cf[i] and nf[i]:
                replace = cand.conflict[i] < inc.conflict[i]
            elif self.rng.random() < self.cht.prob:
                if cf[i] != nf[i]:
                    replace = cf[i]
                else:
                    replace = cand.cv[i] < inc.cv[i]
            else:
                replace = cand.conflict[i] < inc.conflict[i]
            if replace:
                self.pbest.put(i, cand, i)

    # -- results ------------------------------------------------------------

    def best(self) -> Tuple[int, EvaluatedPoint]:
        """Best memory under the technique's plain comparator.

        Returns ``(particle_index, point)``; ties keep the lowest index.
        """
        primary, secondary = self._keys(self.pbest, self.tolerances)
        order = np.arange(self.config.size)
        i = int(np.lexsort((order, secondary, primary))[0])
        return i, self.pbest.point(i, self.tolerances)


def init_swarm(
    problem: Problem,
    config: SwarmConfig,
    cht: ChtConfig,
    max_attempts_per_particle: int = 1_000_000,
) -> Swarm:
    """Build a swarm: uniform positions, zero velocities, memories seeded.

    When the technique requires a feasible start, each particle is
    re-sampled until feasible under the tolerances in force at step 1
    (the relaxed equality tolerance when that schedule is active).
    Candidates are drawn in chunks of 256 and consumed in order, so the
    attempt count is well defined; exceeding the budget raises
    :class:`InitializationFailure`.
    """
    rng = np.random.default_rng(config.seed)
    s = config.size
    tol0 = config.tolerances
    if cht.uses_rec:
        if cht.rec is None:
            raise ValueError("REC technique configured without a schedule")
        tol0 = Tolerances(
            ineq=tol0.ineq, eq=cht.rec.tolerance_at(1, config.steps)
        )

    if not cht.requires_feasible_init:
        positions = problem.sample_uniform(rng, s)
        return Swarm(problem, config, cht, rng, positions, init_evaluations=0)

    positions = np.empty((s, problem.dimension))
    extra = 0
    for i in range(s):
        attempts = 0
        found = False
        while attempts < max_attempts_per_particle:
            m = min(_INIT_CHUNK, max_attempts_per_particle - attempts)
            chunk = problem.sample_uniform(rng, m)
            feas = evaluate_batch(problem, chunk).feasible(tol0)
            hit = np.flatnonzero(feas)
            if hit.size:
                k = int(hit[0])
                positions[i] = chunk[k]
                attempts += k + 1
                found = True
                break
            attempts += m
        if not found:
            raise InitializationFailure(
                f"particle {i} found no feasible position in "
                f"{max_attempts_per_particle} attempts on {problem.name}"
            )
        # Rejected candidates cost one evaluation each; the accepted
        # one is charged by the swarm's initial batch evaluation.
        extra += attempts - 1
    return Swarm(problem, config, cht, rng, positions, init_evaluations=extra)
