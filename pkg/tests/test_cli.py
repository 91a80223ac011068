import json

import pytest

from cpso.cli import main, parse_sweep_file, CSV_COLUMNS, UsageError

RUN_ARGS = [
    "run",
    "--problem",
    "g08",
    "--cht",
    "pfpr",
    "--nn",
    "2",
    "--particles",
    "10",
    "--steps",
    "50",
    "--runs",
    "2",
    "--seed",
    "7",
]


def test_run_csv_output(capsys):
    assert main(RUN_ARGS + ["--format", "csv"]) == 0
    out = capsys.readouterr().out
    lines = out.strip().splitlines()
    assert lines[0] == ",".join(CSV_COLUMNS)
    cells = lines[1].split(",")
    assert cells[:7] == ["g08", "pfpr", "2", "10", "50", "2", "7"]
    assert float(cells[7]) < 0.0  # best conflict
    assert cells[14] == "500"  # fes = particles * steps


def test_run_csv_byte_identical_reruns(capsys):
    main(RUN_ARGS + ["--format", "csv"])
    first = capsys.readouterr().out
    main(RUN_ARGS + ["--format", "csv"])
    second = capsys.readouterr().out
    assert first == second


def test_run_json_round_trip(capsys):
    assert main(RUN_ARGS + ["--detail"]) == 0
    record = json.loads(capsys.readouterr().out)
    assert record["schema_version"] == 1
    assert record["config"]["problem"] == "g08"
    assert record["config"]["runs"] == 2
    assert record["summary"]["failed"] is False
    assert record["summary"]["fes"] == 500
    assert len(record["runs"]) == 2
    assert json.loads(json.dumps(record)) == record


def test_run_writes_output_file(tmp_path, capsys):
    out = tmp_path / "row.csv"
    assert main(RUN_ARGS + ["--format", "csv", "--out", str(out)]) == 0
    assert out.read_text().startswith(",".join(CSV_COLUMNS))
    assert capsys.readouterr().out == ""


def test_run_trace_logs_every_step(tmp_path, capsys):
    trace = tmp_path / "trace.csv"
    assert main(RUN_ARGS + ["--trace", str(trace)]) == 0
    capsys.readouterr()
    lines = trace.read_text().strip().splitlines()
    assert lines[0] == "run,step,best_conflict,best_cv"
    assert len(lines) == 1 + 2 * 50  # two runs, one line per step
    run, step, conflict, cv = lines[1].split(",")
    assert (run, step) == ("0", "1")
    float(conflict), float(cv)


def test_unknown_problem_exits_nonzero(capsys):
    code = main(["run", "--problem", "nosuch", "--cht", "pfpr"])
    assert code == 2
    assert "valid names" in capsys.readouterr().err


def test_unknown_cht_exits_nonzero(capsys):
    code = main(["run", "--problem", "g08", "--cht", "nosuch"])
    assert code == 2
    assert "pfpr" in capsys.readouterr().err


def test_fail_row_still_exits_zero(capsys):
    code = main(
        [
            "run",
            "--problem",
            "g08",
            "--cht",
            "pf",
            "--particles",
            "5",
            "--steps",
            "5",
            "--runs",
            "1",
            "--format",
            "csv",
        ]
    )
    # g08 has a 0.86% feasible box; feasible init still succeeds
    assert code == 0
    out = capsys.readouterr().out
    assert "FAIL" not in out


def test_list_cardinality(capsys):
    assert main(["list"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert len(lines) == 1 + 18
    assert main(["list", "--suite", "g"]) == 0
    assert len(capsys.readouterr().out.strip().splitlines()) == 1 + 13
    assert main(["list", "--suite", "engineering"]) == 0
    assert len(capsys.readouterr().out.strip().splitlines()) == 1 + 5


def test_list_metadata_content(capsys):
    main(["list", "--suite", "g"])
    out = capsys.readouterr().out
    assert "g01,g-suite,13,9,0," in out


def test_feasibility_single_sample(capsys):
    assert main(["feasibility", "--problem", "g02", "--samples", "1"]) == 0
    record = json.loads(capsys.readouterr().out)
    assert record["feasibility_percent"] in (0.0, 100.0)


def test_feasibility_csv(capsys):
    assert (
        main(
            [
                "feasibility",
                "--problem",
                "g04",
                "--samples",
                "20000",
                "--seed",
                "3",
                "--format",
                "csv",
            ]
        )
        == 0
    )
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0] == "problem,samples,seed,feasibility_percent"
    assert abs(float(lines[1].split(",")[3]) - 26.9552) < 2.0


SWEEP_TEXT = """
# shared defaults
particles = 10
steps = 30
runs = 2
seed = 5
nn = 2

[run]
problem = g08
cht = pfpr

[run]
problem = g08
cht = apm
"""


def test_sweep_config_parsing():
    configs = parse_sweep_file(SWEEP_TEXT)
    assert len(configs) == 2
    assert configs[0].cht.kind == "pfpr"
    assert configs[1].cht.kind == "apm"
    assert all(c.particles == 10 and c.master_seed == 5 for c in configs)


def test_sweep_end_to_end(tmp_path, capsys):
    path = tmp_path / "sweep.cfg"
    path.write_text(SWEEP_TEXT)
    assert main(["sweep", str(path), "--format", "csv"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert len(lines) == 3
    assert lines[1].startswith("g08,pfpr,")
    assert lines[2].startswith("g08,apm,")


def test_sweep_malformed_reports_line_number():
    with pytest.raises(UsageError, match="line 3"):
        parse_sweep_file("[run]\nproblem = g08\nbogus-key = 1\ncht = pfpr\n")
    with pytest.raises(UsageError, match="line 2"):
        parse_sweep_file("[run]\nno equals sign here\n")


def test_sweep_without_sections_is_usage_error(tmp_path, capsys):
    path = tmp_path / "empty.cfg"
    path.write_text("particles = 10\n")
    assert main(["sweep", str(path)]) == 2
    assert "no [run] sections" in capsys.readouterr().err


def test_sweep_missing_file_is_usage_error(tmp_path, capsys):
    assert main(["sweep", str(tmp_path / "none.cfg")]) == 2
    assert "cannot read" in capsys.readouterr().err
