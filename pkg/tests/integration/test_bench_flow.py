"""
Integration tests for the benchmark workflow
Real services, real files and a real SQLite results store
"""

import json

import pandas as pd
import pytest

from app.database import (
	create_results_engine,
	results_path,
	results_session,
)
from app.exceptions.bench_exceptions import CorruptResultsError
from app.models.bench import CSV_COLUMNS, AnnealOverrides, BenchConfig
from app.models.solver import SolverName
from app.repositories.bench_repository import BenchResultRepository

QUICK_SA = AnnealOverrides(sweeps=200, restarts=8)


def _tiny_config(instance_file, output_dir, **overrides) -> BenchConfig:
	values = {
		"instance_files": [instance_file],
		"solvers": [SolverName.EXHAUSTIVE, SolverName.EXACT, SolverName.SA],
		"seeds": [0, 1],
		"output_dir": output_dir,
		"sa": QUICK_SA,
	}
	values.update(overrides)
	return BenchConfig(**values)


@pytest.mark.integration
class TestBenchRunIntegration:
	"""Integration tests for run_bench."""

	def test_tiny_matrix(self, tmp_path, bench_service, tiny_instance_file):
		"""
		GIVEN the tiny instance file and three solvers over two seeds
		WHEN running the benchmark
		THEN every row succeeds and exact methods have gap 0
		"""
		# Arrange
		config = _tiny_config(tiny_instance_file, tmp_path / "run")

		# Act
		outcome = bench_service.run_bench(config)

		# Assert
		assert len(outcome.rows) == 6
		assert [row.solver for row in outcome.rows] == [
			"exhaustive",
			"exhaustive",
			"exact",
			"exact",
			"sa",
			"sa",
		]
		for row in outcome.rows:
			assert row.error is None
			assert row.instance_id == "tiny"
			assert row.oracle_objective == pytest.approx(13.0)
			assert row.feasible_post is True
			assert row.gap_percent >= 0.0
		for row in outcome.rows[:4]:
			assert row.gap_percent == 0.0

	def test_exports_written(
		self, tmp_path, bench_service, tiny_instance_file
	):
		"""
		GIVEN a finished run
		WHEN inspecting the output directory
		THEN the CSV, summary JSON and results store agree with the rows
		"""
		# Arrange
		config = _tiny_config(tiny_instance_file, tmp_path / "run")

		# Act
		outcome = bench_service.run_bench(config)

		# Assert
		frame = pd.read_csv(outcome.rows_csv)
		assert tuple(frame.columns) == CSV_COLUMNS
		assert len(frame) == 6

		summary = json.loads(outcome.summary_json.read_text())
		assert [item["solver"] for item in summary] == [
			"exhaustive",
			"exact",
			"sa",
		]
		assert all(item["rows"] == 2 for item in summary)

		assert outcome.database == results_path(tmp_path / "run")
		engine = create_results_engine(tmp_path / "run")
		try:
			with results_session(engine) as session:
				stored = BenchResultRepository(session).get_all()
		finally:
			engine.dispose()
		assert stored == outcome.rows

	def test_rerun_is_reproducible(
		self, tmp_path, bench_service, tiny_instance_file
	):
		"""
		GIVEN the same config run serially and with four workers
		WHEN comparing the row CSVs
		THEN they are identical apart from wall time
		"""
		# Arrange
		first = _tiny_config(
			tiny_instance_file,
			tmp_path / "out",
			solvers=[SolverName.SA, SolverName.CIM],
			cim={"steps": 300, "restarts": 4},
		)
		second = first.model_copy(update={"workers": 4})

		# Act
		bench_service.run_bench(first)
		before = pd.read_csv(tmp_path / "out" / "rows.csv")
		bench_service.run_bench(second)
		after = pd.read_csv(tmp_path / "out" / "rows.csv")

		# Assert
		pd.testing.assert_frame_equal(
			before.drop(columns=["wall_time"]),
			after.drop(columns=["wall_time"]),
		)

	def test_solution_files_reproduce_objectives(
		self,
		tmp_path,
		bench_service,
		solution_repository,
		sip_service,
		tiny_instance,
		tiny_instance_file,
	):
		"""
		GIVEN the rows of a run
		WHEN re-evaluating each saved solution against the instance
		THEN the reported objective is reproduced within 1e-6
		"""
		# Arrange
		output_dir = tmp_path / "run"
		outcome = bench_service.run_bench(
			_tiny_config(tiny_instance_file, output_dir)
		)

		for row in outcome.rows:
			# Act
			record = solution_repository.load(output_dir / row.solution_file)
			objective = sip_service.evaluate_objective(
				tiny_instance, record.solution
			)

			# Assert
			assert (record.instance_id, record.solver) == (
				row.instance_id,
				row.solver,
			)
			assert record.seed == row.seed
			assert objective.total == pytest.approx(row.objective, abs=1e-6)
			assert record.feasibility.feasible == row.feasible_post

	def test_too_large_instance_recorded(self, tmp_path, bench_service):
		"""
		GIVEN the S preset with the exhaustive solver and a quick SA
		WHEN running the benchmark
		THEN the exhaustive row carries an error while SA still runs
		"""
		# Arrange
		config = BenchConfig(
			presets=["S"],
			solvers=[SolverName.EXHAUSTIVE, SolverName.SA],
			seeds=[0],
			oracle=False,
			output_dir=tmp_path,
			sa=AnnealOverrides(sweeps=50, restarts=2),
		)

		# Act
		outcome = bench_service.run_bench(config)

		# Assert
		exhaustive, annealing = outcome.rows
		assert exhaustive.error.startswith("ProblemTooLargeError")
		assert exhaustive.objective is None
		assert annealing.error is None
		assert annealing.num_vars == 80
		assert annealing.feasible_post is True
		failures = {item.solver: item.failures for item in outcome.summary}
		assert failures == {"exhaustive": 1, "sa": 0}


@pytest.mark.integration
class TestReportIntegration:
	"""Integration tests for report."""

	def test_report_after_run(
		self, tmp_path, bench_service, tiny_instance_file
	):
		"""
		GIVEN a finished run
		WHEN building the report
		THEN one table per instance is rendered and plot.csv is written
		"""
		# Arrange
		output_dir = tmp_path / "run"
		bench_service.run_bench(_tiny_config(tiny_instance_file, output_dir))

		# Act
		outcome = bench_service.report(output_dir)

		# Assert
		assert outcome.text.startswith("== tiny ==")
		for solver in ("exhaustive", "exact", "sa"):
			assert solver in outcome.text
		plot = pd.read_csv(outcome.plot_csv)
		assert list(plot.columns) == [
			"instance_id",
			"solver",
			"median_log10_objective",
			"median_objective",
			"median_wall_time",
		]
		assert len(plot) == 3
		assert [item.solver for item in outcome.summary] == [
			"exhaustive",
			"exact",
			"sa",
		]

	def test_corrupt_results_store(self, tmp_path, bench_service):
		"""
		GIVEN a results.db that is not a SQLite database
		WHEN building the report
		THEN CorruptResultsError is raised
		"""
		# Arrange
		results_path(tmp_path).write_bytes(b"definitely not sqlite" * 100)

		# Act & Assert
		with pytest.raises(CorruptResultsError):
			bench_service.report(tmp_path)
