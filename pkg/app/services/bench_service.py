"""
Benchmark harness: runs the solver matrix and reports its results
"""

import logging
import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Mapping, NamedTuple, Optional, Sequence

import pandas as pd
from pydantic import TypeAdapter
from sqlalchemy.exc import SQLAlchemyError

from app.database import (
	create_results_engine,
	reset_results_db,
	results_path,
	results_session,
)
from app.exceptions.bench_exceptions import (
	CorruptResultsError,
	OutputNotWritableError,
	ResultsNotFoundError,
)
from app.exceptions.optimization_exceptions import (
	InfeasibleWithinBoundsError,
	SearchBudgetExceededError,
)
from app.models.bench import (
	CSV_COLUMNS,
	BenchConfig,
	BenchOutcome,
	BenchRow,
	BenchSummaryRow,
	ReportOutcome,
	SolveSettings,
)
from app.models.instance import ProblemInstance
from app.models.qubo import QuboProblem
from app.models.solution import (
	ExactBounds,
	ExactResult,
	SipSolution,
	SolutionRecord,
)
from app.models.solver import SolverName
from app.repositories.base import BaseDocumentRepository
from app.repositories.bench_repository import BenchResultRepository
from app.services.encoding_service import EncodingService
from app.services.instance_service import InstanceService
from app.services.qubo_service import QuboService
from app.services.sip_service import SipService
from app.services.solvers.base import BaseSolver

logger = logging.getLogger(__name__)

ROWS_CSV = "rows.csv"
SUMMARY_JSON = "summary.json"
PLOT_CSV = "plot.csv"
SOLUTIONS_DIR = "solutions"
GAP_NOISE = 1e-9

SUMMARY_ADAPTER = TypeAdapter(list[BenchSummaryRow])


class _PreparedInstance(NamedTuple):
	instance_id: str
	instance: ProblemInstance
	problem: Optional[QuboProblem]
	build_error: Optional[str]
	exact: Optional[ExactResult]
	exact_time: float
	exact_error: Optional[str]


def _error_text(error: Exception) -> str:
	return f"{type(error).__name__}: {error}"


def summarize(rows: Sequence[BenchRow]) -> list[BenchSummaryRow]:
	"""
	Aggregate rows per (instance, solver) in first-appearance order

	Medians skip rows without a value; the feasibility rate is taken over
	rows that produced a solution.
	"""
	if not rows:
		return []
	frame = pd.DataFrame(
		[row.model_dump() for row in rows], columns=list(CSV_COLUMNS)
	)
	frame["failed"] = frame["error"].notna()
	frame["feasible"] = frame["feasible_post"].map({True: 1.0, False: 0.0})
	numeric = ["objective", "log10_objective", "wall_time", "gap_percent"]
	frame[numeric] = frame[numeric].astype(float)

	grouped = frame.groupby(["instance_id", "solver"], sort=False)
	table = grouped.agg(
		rows=("seed", "size"),
		failures=("failed", "sum"),
		median_objective=("objective", "median"),
		median_log10_objective=("log10_objective", "median"),
		median_wall_time=("wall_time", "median"),
		median_gap_percent=("gap_percent", "median"),
		feasibility_rate=("feasible", "mean"),
	).reset_index()

	def _value(value) -> Optional[float]:
		return None if pd.isna(value) else float(value)

	return [
		BenchSummaryRow(
			instance_id=record["instance_id"],
			solver=record["solver"],
			rows=int(record["rows"]),
			failures=int(record["failures"]),
			median_objective=_value(record["median_objective"]),
			median_log10_objective=_value(record["median_log10_objective"]),
			median_wall_time=_value(record["median_wall_time"]),
			median_gap_percent=_value(record["median_gap_percent"]),
			feasibility_rate=_value(record["feasibility_rate"]),
		)
		for record in table.to_dict("records")
	]


class BenchService:
	"""
	Runs every (instance, solver, seed) triple of a BenchConfig

	Rows are computed independently, collected in matrix order and written
	by a single writer once all of them are done.
	"""

	def __init__(
		self,
		instance_service: InstanceService,
		sip_service: SipService,
		encoding_service: EncodingService,
		qubo_service: QuboService,
		solvers: Mapping[str, BaseSolver],
		solution_repository: BaseDocumentRepository[SolutionRecord],
	):
		"""
		Initialize bench service with dependency injection

		Args:
			instance_service: Instance generation and loading
			sip_service: Objective, feasibility and exact oracle
			encoding_service: Bit encoding and repair
			qubo_service: QUBO construction
			solvers: QUBO solvers by name
			solution_repository: Writer for per-row solution files
		"""
		self._instance_service = instance_service
		self._sip_service = sip_service
		self._encoding_service = encoding_service
		self._qubo_service = qubo_service
		self._solvers = dict(solvers)
		self._solution_repository = solution_repository
		logger.info("BenchService initialized")

	def run_bench(self, config: BenchConfig) -> BenchOutcome:
		"""
		Run the full benchmark matrix

		Args:
			config: Instances, solvers, seeds and penalty settings

		Returns:
			Rows, per-(instance, solver) summary and the files written

		Raises:
			OutputNotWritableError: If the output directory is not writable
		"""
		output_dir = Path(config.output_dir)
		self._ensure_writable(output_dir)
		logger.info(
			f"Starting benchmark (presets: {config.presets}, files: "
			f"{len(config.instance_files)}, solvers: "
			f"{[str(s) for s in config.solvers]}, seeds: {config.seeds})"
		)

		prepared = [
			self._prepare(instance_id, instance, config.solvers, config)
			for instance_id, instance in self._instances(config)
		]
		tasks = [
			(item, str(solver), seed)
			for item in prepared
			for solver in config.solvers
			for seed in config.seeds
		]
		with ThreadPoolExecutor(max_workers=config.workers) as executor:
			rows = list(
				executor.map(
					lambda task: self._run_row(*task, config, output_dir),
					tasks,
				)
			)

		database = results_path(output_dir)
		engine = create_results_engine(output_dir)
		try:
			reset_results_db(engine)
			with results_session(engine) as session:
				BenchResultRepository(session).add_all(rows)
		except SQLAlchemyError as e:
			raise OutputNotWritableError(
				f"Cannot write results store {database}: {e}"
			) from e
		finally:
			engine.dispose()

		summary = summarize(rows)
		rows_csv = output_dir / ROWS_CSV
		summary_json = output_dir / SUMMARY_JSON
		try:
			self._rows_frame(rows).to_csv(rows_csv, index=False)
			summary_json.write_bytes(
				SUMMARY_ADAPTER.dump_json(summary, indent=2)
			)
		except OSError as e:
			raise OutputNotWritableError(f"Cannot write exports: {e}") from e

		failures = sum(row.error is not None for row in rows)
		logger.info(
			f"Benchmark finished: {len(rows)} rows, {failures} failures, "
			f"results in {output_dir}"
		)
		return BenchOutcome(
			output_dir=output_dir,
			database=database,
			rows_csv=rows_csv,
			summary_json=summary_json,
			rows=rows,
			summary=summary,
		)

	def report(self, output_dir: Path) -> ReportOutcome:
		"""
		Summarize a finished run and write a plot-ready CSV

		Args:
			output_dir: Directory of a previous run

		Returns:
			Per-scale tables as text, the summary and the CSV path

		Raises:
			ResultsNotFoundError: If the directory holds no results
			CorruptResultsError: If the results store cannot be read
		"""
		output_dir = Path(output_dir)
		database = results_path(output_dir)
		if not database.is_file():
			raise ResultsNotFoundError(f"No results in {output_dir}")
		engine = create_results_engine(output_dir)
		try:
			with results_session(engine) as session:
				rows = BenchResultRepository(session).get_all()
		except SQLAlchemyError as e:
			raise CorruptResultsError(
				f"Cannot read results store {database}: {e}"
			) from e
		finally:
			engine.dispose()
		if not rows:
			raise ResultsNotFoundError(f"No results in {output_dir}")

		summary = summarize(rows)
		frame = pd.DataFrame([item.model_dump() for item in summary])
		plot_csv = output_dir / PLOT_CSV
		frame[
			[
				"instance_id",
				"solver",
				"median_log10_objective",
				"median_objective",
				"median_wall_time",
			]
		].to_csv(plot_csv, index=False)

		sections = []
		for instance_id, table in frame.groupby("instance_id", sort=False):
			view = table[
				[
					"solver",
					"rows",
					"failures",
					"median_objective",
					"median_gap_percent",
					"median_wall_time",
					"feasibility_rate",
				]
			]
			sections.append(
				f"== {instance_id} ==\n{view.to_string(index=False)}"
			)
		logger.info(f"Report built from {len(rows)} rows")
		return ReportOutcome(
			text="\n\n".join(sections), plot_csv=plot_csv, summary=summary
		)

	def solve_one(
		self,
		instance_id: str,
		instance: ProblemInstance,
		solver: SolverName,
		seed: int,
		settings: SolveSettings,
	) -> BenchRow:
		"""
		Run a single solver on a single instance

		The solution file is written under the settings' output directory;
		the results store is left untouched.

		Args:
			instance_id: Name used for the solution file
			instance: Instance to solve
			solver: Solver to run
			seed: Solver seed
			settings: Penalty, repair, oracle and schedule settings

		Returns:
			The measurement row, with `error` set if the solver failed
		"""
		output_dir = Path(settings.output_dir)
		self._ensure_writable(output_dir)
		item = self._prepare(instance_id, instance, [solver], settings)
		return self._run_row(item, str(solver), seed, settings, output_dir)

	def _instances(
		self, config: BenchConfig
	) -> list[tuple[str, ProblemInstance]]:
		instances = [
			(
				preset,
				self._instance_service.generate_instance(
					preset, config.instance_seed
				),
			)
			for preset in config.presets
		]
		instances.extend(
			(Path(path).stem, self._instance_service.load_instance(path))
			for path in config.instance_files
		)
		return instances

	def _prepare(
		self,
		instance_id: str,
		instance: ProblemInstance,
		solvers: Sequence[SolverName],
		settings: SolveSettings,
	) -> _PreparedInstance:
		"""Build the QUBO and run the oracle once per instance"""
		problem, build_error = None, None
		if any(solver != SolverName.EXACT for solver in solvers):
			try:
				encoding = self._encoding_service.build_encoding(instance)
				problem = self._qubo_service.build_qubo(
					instance,
					encoding,
					alpha=settings.alpha,
					beta=settings.beta,
					mode=settings.penalty_mode,
				)
			except Exception as e:
				build_error = _error_text(e)
				logger.warning(f"{instance_id}: QUBO build failed: {e}")

		exact, exact_time, exact_error = None, 0.0, None
		if settings.oracle or SolverName.EXACT in solvers:
			started = time.perf_counter()
			try:
				exact = self._sip_service.solve_exact(
					instance, ExactBounds(budget=settings.oracle_budget)
				)
			except (
				SearchBudgetExceededError,
				InfeasibleWithinBoundsError,
			) as e:
				exact_error = _error_text(e)
				logger.info(f"{instance_id}: no oracle optimum ({e.message})")
			exact_time = time.perf_counter() - started

		return _PreparedInstance(
			instance_id=instance_id,
			instance=instance,
			problem=problem,
			build_error=build_error,
			exact=exact,
			exact_time=exact_time,
			exact_error=exact_error,
		)

	def _run_row(
		self,
		item: _PreparedInstance,
		solver: str,
		seed: int,
		settings: SolveSettings,
		output_dir: Path,
	) -> BenchRow:
		oracle = (
			item.exact.objective.total
			if settings.oracle and item.exact is not None
			else None
		)
		row = BenchRow(
			instance_id=item.instance_id,
			solver=solver,
			seed=seed,
			oracle_objective=oracle,
		)
		try:
			if solver == SolverName.EXACT:
				return self._exact_row(item, row, output_dir)
			return self._qubo_row(item, row, settings, output_dir)
		except Exception as e:
			logger.warning(
				f"{item.instance_id}/{solver}/seed {seed} failed: {e}"
			)
			return row.model_copy(update={"error": _error_text(e)})

	def _exact_row(
		self, item: _PreparedInstance, row: BenchRow, output_dir: Path
	) -> BenchRow:
		if item.exact is None:
			return row.model_copy(
				update={
					"error": item.exact_error,
					"wall_time": item.exact_time,
				}
			)
		solution_file = self._save_solution(
			item, row, item.exact.solution, output_dir
		)
		return self._finish_row(
			row,
			objective=item.exact.objective.total,
			feasible_pre=True,
			feasible_post=True,
			wall_time=item.exact_time,
			solution_file=solution_file,
		)

	def _qubo_row(
		self,
		item: _PreparedInstance,
		row: BenchRow,
		settings: SolveSettings,
		output_dir: Path,
	) -> BenchRow:
		if item.problem is None:
			return row.model_copy(update={"error": item.build_error})
		problem = item.problem
		solver = self._solvers[row.solver]
		overrides = {
			SolverName.SA.value: settings.sa.model_dump(),
			SolverName.CIM.value: settings.cim.model_dump(),
		}.get(row.solver)
		schedule = solver.schedule_for(problem, overrides)
		report = solver.solve(problem, seed=row.seed, schedule=schedule)

		bits = report.best_bits
		if settings.repair:
			repaired = self._encoding_service.decode_and_repair(
				bits, item.instance, problem.encoding
			)
			solution = repaired.solution
			feasible_pre = repaired.before.feasible
			feasible_post = repaired.after.feasible
		else:
			solution = self._encoding_service.decode_bits(
				bits, problem.encoding
			)
			feasible_pre = self._sip_service.check_feasibility(
				item.instance, solution
			).feasible
			feasible_post = feasible_pre

		solution_file = self._save_solution(item, row, solution, output_dir)
		objective = self._sip_service.evaluate_objective(
			item.instance, solution
		).total
		return self._finish_row(
			row,
			num_vars=problem.num_vars,
			objective=objective,
			raw_energy=report.best_energy,
			feasible_pre=feasible_pre,
			feasible_post=feasible_post,
			wall_time=report.wall_time,
			solution_file=solution_file,
		)

	def _finish_row(self, row: BenchRow, **values) -> BenchRow:
		objective = values["objective"]
		values["log10_objective"] = (
			math.log10(objective) if objective > 0 else None
		)
		oracle = row.oracle_objective
		if oracle is not None and values["feasible_post"]:
			if oracle > 0:
				gap = 100.0 * (objective - oracle) / oracle
				# float noise around an exact tie
				values["gap_percent"] = 0.0 if -GAP_NOISE < gap < 0 else gap
			elif objective == 0:
				values["gap_percent"] = 0.0
		return row.model_copy(update=values)

	def _save_solution(
		self,
		item: _PreparedInstance,
		row: BenchRow,
		solution: SipSolution,
		output_dir: Path,
	) -> str:
		relative = Path(SOLUTIONS_DIR) / (
			f"{item.instance_id}__{row.solver}__seed{row.seed}.json"
		)
		record = SolutionRecord(
			instance_id=item.instance_id,
			solver=row.solver,
			seed=row.seed,
			solution=solution,
			objective=self._sip_service.evaluate_objective(
				item.instance, solution
			),
			feasibility=self._sip_service.check_feasibility(
				item.instance, solution
			),
		)
		self._solution_repository.save(record, output_dir / relative)
		return relative.as_posix()

	def _rows_frame(self, rows: Sequence[BenchRow]) -> pd.DataFrame:
		return pd.DataFrame(
			[row.model_dump() for row in rows], columns=list(CSV_COLUMNS)
		)

	def _ensure_writable(self, output_dir: Path) -> None:
		try:
			(output_dir / SOLUTIONS_DIR).mkdir(parents=True, exist_ok=True)
		except OSError as e:
			raise OutputNotWritableError(
				f"Cannot create output directory {output_dir}: {e}"
			) from e
		if not os.access(output_dir, os.W_OK):
			raise OutputNotWritableError(
				f"Output directory {output_dir} is not writable"
			)
