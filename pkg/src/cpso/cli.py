"""Command-line front end: run experiments, sweeps and feasibility estimates.

Output is JSON (default) or CSV.  Reals are serialized with 12
significant digits, enough to distinguish six-decimal table values and
the 1e-12 tolerance regime.  Data-level failures (all runs failing
feasible initialization) are reported as FAIL rows with exit status 0;
only operator errors (unknown names, malformed flags or config files)
exit nonzero.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import List, Optional, Sequence, TextIO

from .benchmarks import all_entries, get_entry, estimate_feasibility_ratio
from .handlers import KINDS, ChtConfig
from .harness import ExperimentConfig, SummaryRow, run_experiment, sweep
from .problem import Tolerances

SCHEMA_VERSION = 1

CSV_COLUMNS = (
    "problem",
    "cht",
    "nn",
    "particles",
    "steps",
    "runs",
    "seed",
    "best_conflict",
    "best_cv",
    "best_nac",
    "mean_conflict",
    "mean_cv",
    "mean_nac",
    "failures",
    "fes",
    "extra_evals",
)

_SWEEP_KEYS = {
    "problem",
    "cht",
    "nn",
    "particles",
    "steps",
    "runs",
    "seed",
    "tol-ineq",
    "tol-eq",
    "rec-switch",
    "rec-decrease",
    "rec-rate",
    "prob",
}


class UsageError(Exception):
    """Operator error: bad names, flags, or config files."""


def _real(x: float) -> str:
    return format(float(x), ".12g")


def _row_dict(row: SummaryRow, detail: bool = False) -> dict:
    cfg = row.config
    out = {
        "schema_version": SCHEMA_VERSION,
        "config": {
            "problem": cfg.problem,
            "cht": cfg.cht.kind,
            "nn": cfg.nn,
            "particles": cfg.particles,
            "steps": cfg.steps,
            "runs": cfg.runs,
            "seed": cfg.master_seed,
            "tol_ineq": float(cfg.tolerances.ineq),
            "tol_eq": float(cfg.tolerances.eq),
            "prob": cfg.cht.prob,
            "rec_switch": cfg.rec_switch,
            "rec_decrease": cfg.rec_decrease,
        },
        "summary": {
            "failed": row.failed,
            "best_conflict": row.best_conflict,
            "best_cv": row.best_cv,
            "best_nac": row.best_nac,
            "best_run": row.best_run,
            "best_position": (
                None
                if row.best_position is None
                else [float(v) for v in row.best_position]
            ),
            "mean_conflict": row.mean_conflict,
            "mean_cv": row.mean_cv,
            "mean_nac": row.mean_nac,
            "failures": row.failures,
            "fes": cfg.fes,
            "extra_evals": row.extra_evals,
        },
    }
    if row.error is not None:
        out["summary"]["error"] = row.error
    if detail and row.runs is not None:
        out["runs"] = [
            {
                "index": r.index,
                "termination": r.termination,
                "conflict": r.conflict,
                "cv": r.cv,
                "nac": r.nac,
                "evaluations": r.evaluations,
            }
            for r in row.runs
        ]
    return out


def _csv_line(row: SummaryRow) -> str:
    cfg = row.config
    if row.failed:
        stats = ["FAIL"] * 6
    else:
        stats = [
            _real(row.best_conflict),
            _real(row.best_cv),
            str(row.best_nac),
            _real(row.mean_conflict),
            _real(row.mean_cv),
            _real(row.mean_nac),
        ]
    cells = [
        cfg.problem,
        cfg.cht.kind,
        str(cfg.nn),
        str(cfg.particles),
        str(cfg.steps),
        str(cfg.runs),
        str(cfg.master_seed),
        *stats,
        str(row.failures),
        str(cfg.fes),
        str(row.extra_evals),
    ]
    return ",".join(cells)


def _emit_rows(rows: List[SummaryRow], fmt: str, out: TextIO, detail: bool) -> None:
    if fmt == "csv":
        print(",".join(CSV_COLUMNS), file=out)
        for row in rows:
            print(_csv_line(row), file=out)
    else:
        records = [_row_dict(r, detail) for r in rows]
        payload = records[0] if len(records) == 1 else records
        json.dump(payload, out, indent=2, default=float)
        out.write("\n")


def _open_out(path: Optional[str]):
    if path is None or path == "-":
        return sys.stdout, False
    return open(path, "w"), True


def _build_config(args: argparse.Namespace) -> ExperimentConfig:
    try:
        get_entry(args.problem)
    except KeyError as exc:
        raise UsageError(str(exc)) from None
    if args.cht not in KINDS:
        raise UsageError(
            f"unknown CHT {args.cht!r}; valid names: {', '.join(KINDS)}"
        )
    decrease = {"linear": "linear", "exp": "exponential"}[args.rec_decrease]
    cht = ChtConfig(kind=args.cht, prob=args.prob)
    try:
        return ExperimentConfig(
            problem=args.problem,
            cht=cht,
            nn=args.nn,
            particles=args.particles,
            steps=args.steps,
            runs=args.runs,
            master_seed=args.seed,
            tolerances=Tolerances(ineq=args.tol_ineq, eq=args.tol_eq),
            rec_switch=args.rec_switch,
            rec_decrease=decrease,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def cmd_run(args: argparse.Namespace) -> int:
    config = _build_config(args)
    trace_fh = None
    trace = None
    if args.trace is not None:
        trace_fh = open(args.trace, "w")
        print("run,step,best_conflict,best_cv", file=trace_fh)

        def trace(run, step, conflict, cv):
            print(f"{run},{step},{_real(conflict)},{_real(cv)}", file=trace_fh)

    try:
        row = run_experiment(config, jobs=args.jobs, trace=trace)
    finally:
        if trace_fh is not None:
            trace_fh.close()
    out, close = _open_out(args.out)
    try:
        _emit_rows([row], args.format, out, args.detail)
    finally:
        if close:
            out.close()
    return 0


def parse_sweep_file(text: str) -> List[ExperimentConfig]:
    """Parse the sweep config format: defaults, then one [run] per row.

    Lines are ``key = value`` pairs; ``#`` starts a comment.  Pairs
    before the first ``[run]`` section set defaults; each ``[run]``
    section overrides them for one experiment.  Keys: problem, cht, nn,
    particles, steps, runs, seed, tol-ineq, tol-eq, rec-switch,
    rec-decrease, rec-rate, prob.
    """
    defaults: dict = {}
    sections: List[dict] = []
    current = defaults
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line == "[run]":
            current = dict(defaults)
            sections.append(current)
            continue
        if line.startswith("["):
            raise UsageError(f"line {lineno}: unknown section {line!r}")
        if "=" not in line:
            raise UsageError(f"line {lineno}: expected key = value, got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in _SWEEP_KEYS:
            raise UsageError(
                f"line {lineno}: unknown key {key!r}; "
                f"valid keys: {', '.join(sorted(_SWEEP_KEYS))}"
            )
        current[key] = (value, lineno)
    if not sections:
        raise UsageError("config file defines no [run] sections")
    return [_section_config(s) for s in sections]


def _section_config(section: dict) -> ExperimentConfig:
    def need(key):
        if key not in section:
            raise UsageError(f"missing required key {key!r} in a [run] section")
        return section[key]

    def conv(key, fn, default=None):
        if key not in section:
            return default
        value, lineno = section[key]
        try:
            return fn(value)
        except (ValueError, KeyError):
            raise UsageError(f"line {lineno}: bad value for {key}: {value!r}") from None

    problem = need("problem")[0]
    try:
        get_entry(problem)
    except KeyError as exc:
        raise UsageError(str(exc)) from None
    kind = need("cht")[0]
    if kind not in KINDS:
        raise UsageError(f"unknown CHT {kind!r}; valid names: {', '.join(KINDS)}")
    decrease = conv(
        "rec-decrease",
        lambda v: {"linear": "linear", "exp": "exponential"}[v],
        "linear",
    )
    try:
        return ExperimentConfig(
            problem=problem,
            cht=ChtConfig(kind=kind, prob=conv("prob", float, 0.9)),
            nn=conv("nn", int, 2),
            particles=conv("particles", int, 20),
            steps=conv("steps", int, 10000),
            runs=conv("runs", int, 11),
            master_seed=conv("seed", int, 0),
            tolerances=Tolerances(
                ineq=conv("tol-ineq", float, 1e-12),
                eq=conv("tol-eq", float, 1e-12),
            ),
            rec_switch=conv("rec-switch", float, 0.8),
            rec_decrease=decrease,
            rec_rate=conv("rec-rate", float, 0.995),
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def cmd_sweep(args: argparse.Namespace) -> int:
    try:
        with open(args.config) as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read config file: {exc}") from None
    configs = parse_sweep_file(text)
    rows = sweep(configs, jobs=args.jobs)
    out, close = _open_out(args.out)
    try:
        _emit_rows(rows, args.format, out, detail=False)
    finally:
        if close:
            out.close()
    return 0


def cmd_feasibility(args: argparse.Namespace) -> int:
    try:
        entry = get_entry(args.problem)
    except KeyError as exc:
        raise UsageError(str(exc)) from None
    if args.samples < 1:
        raise UsageError("samples must be >= 1")
    ratio = estimate_feasibility_ratio(
        entry.problem,
        args.samples,
        Tolerances(ineq=args.tol_ineq, eq=args.tol_eq),
        args.seed,
    )
    record = {
        "schema_version": SCHEMA_VERSION,
        "problem": args.problem,
        "samples": args.samples,
        "seed": args.seed,
        "feasibility_percent": ratio,
    }
    out, close = _open_out(args.out)
    try:
        if args.format == "csv":
            print("problem,samples,seed,feasibility_percent", file=out)
            print(
                f"{args.problem},{args.samples},{args.seed},{_real(ratio)}",
                file=out,
            )
        else:
            json.dump(record, out, indent=2)
            out.write("\n")
    finally:
        if close:
            out.close()
    return 0


def cmd_list(args: argparse.Namespace) -> int:
    suites = {"engineering": "engineering", "g": "g-suite"}
    wanted = suites[args.suite] if args.suite else None
    print("name,suite,dimension,NI,NE,reported_ratio_percent,reported_optimum")
    for entry in all_entries():
        if wanted is not None and entry.suite != wanted:
            continue
        ratio = "" if entry.reported_feasibility_ratio is None else _real(
            entry.reported_feasibility_ratio
        )
        opt = "" if entry.reported_optimum is None else _real(entry.reported_optimum)
        print(
            f"{entry.problem.name},{entry.suite},{entry.dimension},"
            f"{entry.n_inequalities},{entry.n_equalities},{ratio},{opt}"
        )
    return 0


def _add_common_output(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--out", default=None, help="output path (default stdout)")
    p.add_argument("--jobs", type=int, default=1, help="parallel run workers")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cpso",
        description="Constrained particle swarm optimization benchmark harness",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run one experiment")
    run.add_argument("--problem", required=True)
    run.add_argument("--cht", required=True)
    run.add_argument("--nn", type=int, default=2)
    run.add_argument("--particles", type=int, default=20)
    run.add_argument("--steps", type=int, default=10000)
    run.add_argument("--runs", type=int, default=11)
    run.add_argument("--seed", type=int, default=0)
    run.add_argument("--tol-ineq", type=float, default=1e-12)
    run.add_argument("--tol-eq", type=float, default=1e-12)
    run.add_argument("--rec-switch", type=float, default=0.8)
    run.add_argument("--rec-decrease", choices=("linear", "exp"), default="linear")
    run.add_argument("--prob", type=float, default=0.9)
    run.add_argument("--trace", default=None, help="per-step best log path")
    run.add_argument("--detail", action="store_true", help="include per-run detail")
    _add_common_output(run)
    run.set_defaults(func=cmd_run)

    sw = sub.add_parser("sweep", help="run experiments from a config file")
    sw.add_argument("config", help="sweep config file path")
    _add_common_output(sw)
    sw.set_defaults(func=cmd_sweep)

    fz = sub.add_parser("feasibility", help="Monte Carlo feasibility ratio")
    fz.add_argument("--problem", required=True)
    fz.add_argument("--samples", type=int, default=1_000_000)
    fz.add_argument("--seed", type=int, default=0)
    fz.add_argument("--tol-ineq", type=float, default=1e-12)
    fz.add_argument("--tol-eq", type=float, default=1e-12)
    fz.add_argument("--format", choices=("json", "csv"), default="json")
    fz.add_argument("--out", default=None)
    fz.set_defaults(func=cmd_feasibility)

    ls = sub.add_parser("list", help="list registered problems")
    ls.add_argument("--suite", choices=("engineering", "g"), default=None)
    ls.set_defaults(func=cmd_list)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"cpso: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
