"""Tests for bench records, result files and reports."""

import pandas as pd
import pytest

from src.benchmarks import BenchCase, run_case
from src.metrics import (
    CSV_COLUMNS,
    BenchRecord,
    BenchResults,
    generate_markdown_report,
    load_and_report,
    print_bench_report,
)
from src.solver import SolveConfig


@pytest.fixture
def results():
    res = BenchResults(suite="smoke", seed=3)
    res.add_record(BenchRecord(family="torus_flow", n=64, nnz=192, build_ms=5.0, solve_ms=2.0,
                               iterations=6, measured_eps=1e-9, chain_nnz=300))
    res.add_record(BenchRecord(family="cycle", n=64, nnz=128, build_ms=1.0, solve_ms=1.0,
                               iterations=4, measured_eps=2e-9, chain_nnz=256))
    res.add_record(BenchRecord(family="cycle", n=36, nnz=72, build_ms=3.0, solve_ms=3.0,
                               iterations=8, measured_eps=4e-9, chain_nnz=144))
    res.add_record(BenchRecord(family="cycle", n=144, error="Stagnated: cap reached"))
    return res


def test_summary_per_family(results):
    summary = results.calculate_summary()
    assert set(summary) == {"cycle", "torus_flow"}
    cycle = summary["cycle"]
    assert cycle["count"] == 3 and cycle["failures"] == 1
    assert cycle["avg_iterations"] == pytest.approx(6.0)
    assert cycle["max_measured_eps"] == pytest.approx(4e-9)
    assert cycle["avg_chain_fill"] == pytest.approx(2.0)


def test_frame_columns_and_order(results, tmp_path):
    frame = results.to_frame()
    assert list(frame.columns[: len(CSV_COLUMNS)]) == CSV_COLUMNS
    assert list(zip(frame["family"], frame["n"])) == [
        ("cycle", 36), ("cycle", 64), ("cycle", 144), ("torus_flow", 64)
    ]
    path = tmp_path / "out" / "bench.csv"
    results.save_csv(path)
    back = pd.read_csv(path)
    assert list(back.columns[: len(CSV_COLUMNS)]) == CSV_COLUMNS
    assert len(back) == 4


def test_empty_frame_has_columns():
    assert list(BenchResults(suite="smoke", seed=0).to_frame().columns) == CSV_COLUMNS


def test_json_round_trip(results, tmp_path):
    results.records[0].contraction = float("inf")
    path = tmp_path / "bench.json"
    results.save(path)
    back = BenchResults.load(path)
    assert back.suite == "smoke" and back.seed == 3
    assert len(back.records) == 4
    assert back.records[0].contraction is None
    assert back.records[3].error == "Stagnated: cap reached"
    assert back.records[1] == results.records[1]


def test_markdown_report(results):
    text = generate_markdown_report(results)
    assert text.startswith("# Bench Results: smoke")
    assert "| cycle | 36 | 72 |" in text
    assert "## Failures" in text
    assert "cycle n=144: Stagnated: cap reached" in text


def test_print_bench_report(results, quiet):
    print_bench_report(results, quiet)


def test_run_case_small_cycle(quiet):
    record = run_case(BenchCase("cycle", 36), seed=1, solve_config=SolveConfig(eps=1e-6),
                      validate=True, console=quiet)
    assert record.error is None
    assert record.converged
    assert record.depth == 1
    assert record.chain_passed
    assert record.measured_eps <= 1e-6


def test_run_case_records_errors(quiet):
    record = run_case(BenchCase("torus_flow", 10), console=quiet)
    assert record.error is not None and record.error.startswith("UsageError")

    record = run_case(BenchCase("cycle", 36), solve_config=SolveConfig(eps=1e-10, max_iter=1), console=quiet)
    assert record.error.startswith("Stagnated")
    assert record.iterations == 1


def test_load_and_report(results, tmp_path, quiet):
    results.save(tmp_path / "bench_smoke.json")
    load_and_report(tmp_path, quiet)
    load_and_report(tmp_path / "empty", quiet)
