"""Constrained particle swarm optimization engine and benchmark harness."""

from .benchmarks import (
    SuiteEntry,
    all_entries,
    estimate_feasibility_ratio,
    get_entry,
    get_problem,
    registry_names,
)
from .handlers import (
    ChtConfig,
    ComparisonOutcome,
    KINDS,
    compare_priority,
    compare_probabilistic,
    penalized_conflict,
    repair_bisection,
    reported_conflict,
    update_pbest,
)
from .harness import (
    ExperimentConfig,
    RunResult,
    SummaryRow,
    run_experiment,
    run_single,
    sweep,
)
from .problem import (
    BatchEval,
    EvaluatedPoint,
    EvaluationFault,
    Problem,
    RecSchedule,
    Tolerances,
    evaluate,
    evaluate_batch,
    is_feasible,
    tolerance_at,
)
from .swarm import (
    COEFFICIENT_PRESETS,
    CoefficientSet,
    InitializationFailure,
    Particle,
    Swarm,
    SwarmConfig,
    Topology,
    assign_coefficients,
    init_swarm,
    position_update,
    velocity_update,
)

__version__ = "0.1.0"
