"""
Command-line controller: maps verbs onto services and domain errors onto
exit codes
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import Any, Callable, Optional, Sequence

from pydantic import BaseModel, ValidationError
from pydantic_core import from_json

from app.dependencies.container import Container
from app.exceptions.bench_exceptions import (
	CorruptResultsError,
	InvalidBenchConfigError,
	OutputNotWritableError,
	ResultsNotFoundError,
)
from app.exceptions.instance_exceptions import (
	InstanceFileError,
	InvalidScaleError,
)
from app.exceptions.optimization_exceptions import (
	BitLengthError,
	DimensionMismatchError,
	EncodingCapError,
	EncodingRangeError,
	InfeasibleWithinBoundsError,
	InvalidScheduleError,
	PenaltyWeightError,
	ProblemTooLargeError,
	SearchBudgetExceededError,
	SolverDivergenceError,
)
from app.models.bench import BenchConfig, SolveSettings
from app.models.instance import PRESETS
from app.models.qubo import DEFAULT_ALPHA, DEFAULT_BETA, PenaltyMode
from app.models.solution import DEFAULT_EXACT_BUDGET
from app.models.solver import SolverName
from app.services.analysis_service import DEFAULT_K_VALUES

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_UNEXPECTED = 1
EXIT_DOMAIN_ERROR = 2

DOMAIN_ERRORS: tuple[type[Exception], ...] = (
	InstanceFileError,
	InvalidScaleError,
	DimensionMismatchError,
	SearchBudgetExceededError,
	InfeasibleWithinBoundsError,
	EncodingRangeError,
	EncodingCapError,
	PenaltyWeightError,
	BitLengthError,
	ProblemTooLargeError,
	InvalidScheduleError,
	SolverDivergenceError,
	InvalidBenchConfigError,
	OutputNotWritableError,
	ResultsNotFoundError,
	CorruptResultsError,
)

SA_OPTIONS: dict[str, type] = {
	"t_initial": float,
	"t_final": float,
	"sweeps": int,
	"restarts": int,
	"workers": int,
}
CIM_OPTIONS: dict[str, type] = {
	"steps": int,
	"dt": float,
	"pump_start": float,
	"pump_end": float,
	"coupling_strength": float,
	"noise_amplitude": float,
	"restarts": int,
	"workers": int,
}

Handler = Callable[[argparse.Namespace], int]


def _on_off(value: str) -> bool:
	if value not in ("on", "off"):
		raise argparse.ArgumentTypeError("expected 'on' or 'off'")
	return value == "on"


def _seed(value: str) -> int:
	seed = int(value)
	if seed < 0:
		raise argparse.ArgumentTypeError(f"seed must be nonnegative: {seed}")
	return seed


def _overrides(
	args: argparse.Namespace, prefix: str, options: dict[str, type]
) -> dict[str, Any]:
	"""Schedule flags that were given, keyed by schedule field"""
	values = {name: getattr(args, f"{prefix}_{name}") for name in options}
	return {
		name: value for name, value in values.items() if value is not None
	}


class CliController:
	"""
	Command-line front end

	Only parses arguments, calls services and prints their results; all
	domain logic lives behind the container.
	"""

	def __init__(self, container: Container):
		"""
		Initialize CLI controller with dependency injection

		Args:
			container: Dependency injection container
		"""
		self.parser = argparse.ArgumentParser(
			prog="edge-sip",
			description=(
				"Two-stage edge-data subscription planning: instances, "
				"exact oracle, QUBO solvers and benchmarks"
			),
		)
		self._container = container
		self._setup_commands()
		logger.info("CliController initialized")

	def run(self, argv: Optional[Sequence[str]] = None) -> int:
		"""
		Parse arguments and dispatch to the selected verb

		Args:
			argv: Arguments without the program name; sys.argv when None

		Returns:
			0 on success, 2 on a domain error, 1 on anything unexpected
		"""
		args = self.parser.parse_args(argv)
		logging.getLogger().setLevel(args.log_level)
		handler: Handler = args.handler
		try:
			return handler(args)
		except DOMAIN_ERRORS as e:
			message = getattr(e, "message", str(e))
			logger.warning(f"{args.command} failed: {message}")
			print(f"error: {message}", file=sys.stderr)
			return EXIT_DOMAIN_ERROR
		except Exception as e:
			logger.exception(f"Unexpected error in {args.command}: {e}")
			print(f"unexpected error: {e}", file=sys.stderr)
			return EXIT_UNEXPECTED

	def _setup_commands(self) -> None:
		"""Register verbs and their flags"""
		self.parser.add_argument(
			"--log-level",
			default="INFO",
			choices=["DEBUG", "INFO", "WARNING", "ERROR"],
			help="Logging level (default: INFO)",
		)
		commands = self.parser.add_subparsers(dest="command", required=True)

		gen = commands.add_parser("gen", help="Generate an instance file")
		self._add_scale_arguments(gen)
		gen.add_argument("--seed", type=_seed, default=1)
		gen.add_argument("--out", type=Path, required=True)
		gen.add_argument(
			"--qubo", type=Path, help="Also write the QUBO in sparse form"
		)
		gen.add_argument(
			"--ising", type=Path, help="Also write the Ising form"
		)
		self._add_penalty_arguments(gen)
		gen.set_defaults(handler=self.generate)

		solve = commands.add_parser(
			"solve", help="Run one solver on one instance"
		)
		source = solve.add_mutually_exclusive_group(required=True)
		source.add_argument("--instance", type=Path)
		source.add_argument("--preset", choices=sorted(PRESETS))
		solve.add_argument("--instance-seed", type=_seed, default=1)
		solve.add_argument(
			"--solver",
			choices=[name.value for name in SolverName],
			default=SolverName.SA.value,
		)
		solve.add_argument("--seed", type=_seed, default=0)
		solve.add_argument("--out", type=Path, default=Path("results"))
		solve.add_argument(
			"--oracle",
			action=argparse.BooleanOptionalAction,
			default=False,
			help="Also run the exact oracle and report the gap",
		)
		solve.add_argument(
			"--oracle-budget", type=int, default=DEFAULT_EXACT_BUDGET
		)
		self._add_penalty_arguments(solve)
		solve.add_argument("--repair", type=_on_off, default=True)
		self._add_schedule_arguments(solve)
		solve.set_defaults(handler=self.solve)

		bench = commands.add_parser("bench", help="Run the benchmark matrix")
		bench.add_argument(
			"--config", type=Path, help="JSON file with BenchConfig fields"
		)
		bench.add_argument(
			"--preset", action="append", choices=sorted(PRESETS)
		)
		bench.add_argument("--instance", action="append", type=Path)
		bench.add_argument("--instance-seed", type=_seed)
		bench.add_argument(
			"--solver",
			action="append",
			choices=[name.value for name in SolverName],
		)
		bench.add_argument("--seeds", nargs="+", type=_seed)
		bench.add_argument("--alpha", type=float)
		bench.add_argument("--beta", type=float)
		bench.add_argument(
			"--penalty-mode", choices=[mode.value for mode in PenaltyMode]
		)
		bench.add_argument("--repair", type=_on_off)
		bench.add_argument(
			"--oracle", action=argparse.BooleanOptionalAction, default=None
		)
		bench.add_argument("--oracle-budget", type=int)
		bench.add_argument("--workers", type=int)
		bench.add_argument("--out", type=Path)
		self._add_schedule_arguments(bench)
		bench.set_defaults(handler=self.bench)

		report = commands.add_parser(
			"report", help="Summarize a finished benchmark run"
		)
		report.add_argument("--out", type=Path, default=Path("results"))
		report.set_defaults(handler=self.report)

		quantization = commands.add_parser(
			"quantization",
			help="Exact optimum against the best K-bit encodable solution",
		)
		quantization.add_argument(
			"--preset", choices=sorted(PRESETS), default="S"
		)
		quantization.add_argument(
			"--seeds", nargs="+", type=_seed, default=list(range(20))
		)
		quantization.add_argument(
			"--k", nargs="+", type=int, default=list(DEFAULT_K_VALUES)
		)
		quantization.add_argument(
			"--budget", type=int, default=DEFAULT_EXACT_BUDGET
		)
		quantization.set_defaults(handler=self.quantization)

		oracle = commands.add_parser(
			"oracle-check",
			help="Compare QUBO ground states with the exact oracle",
		)
		oracle.add_argument("--count", type=int, default=50)
		oracle.add_argument("--seed", type=_seed, default=0)
		oracle.add_argument("--alpha", type=float, default=DEFAULT_ALPHA)
		oracle.add_argument("--beta", type=float, default=DEFAULT_BETA)
		oracle.set_defaults(handler=self.oracle_check)

	def _add_scale_arguments(self, parser: argparse.ArgumentParser) -> None:
		scale = parser.add_mutually_exclusive_group()
		scale.add_argument("--preset", choices=sorted(PRESETS), default="S")
		scale.add_argument(
			"--scale-config",
			type=Path,
			help="JSON file with custom ScaleConfig fields",
		)

	def _add_penalty_arguments(self, parser: argparse.ArgumentParser) -> None:
		parser.add_argument("--alpha", type=float, default=DEFAULT_ALPHA)
		parser.add_argument("--beta", type=float, default=DEFAULT_BETA)
		parser.add_argument(
			"--penalty-mode",
			choices=[mode.value for mode in PenaltyMode],
			default=PenaltyMode.PAPER.value,
		)

	def _add_schedule_arguments(
		self, parser: argparse.ArgumentParser
	) -> None:
		for prefix, options in (("sa", SA_OPTIONS), ("cim", CIM_OPTIONS)):
			for name, kind in options.items():
				parser.add_argument(
					f"--{prefix}-{name.replace('_', '-')}",
					dest=f"{prefix}_{name}",
					type=kind,
				)

	def generate(self, args: argparse.Namespace) -> int:
		"""Write a generated instance and, optionally, its QUBO and Ising"""
		instance_service = self._container.instance_service()
		scale = (
			self._read_json(args.scale_config, InvalidScaleError)
			if args.scale_config
			else args.preset
		)
		instance = instance_service.generate_instance(scale, args.seed)
		instance_service.save_instance(instance, args.out)
		print(
			f"instance: {args.out} (msps={instance.msps}, "
			f"edges={instance.num_edges}, "
			f"scenarios={instance.num_scenarios})"
		)

		if args.qubo or args.ising:
			encoding_service = self._container.encoding_service()
			qubo_service = self._container.qubo_service(
				encoding_service=encoding_service
			)
			problem = qubo_service.build_qubo(
				instance,
				encoding_service.build_encoding(instance),
				alpha=args.alpha,
				beta=args.beta,
				mode=PenaltyMode(args.penalty_mode),
			)
			repository = self._container.qubo_repository()
			if args.qubo:
				repository.save_qubo(problem, args.qubo)
				print(f"qubo: {args.qubo} (num_vars={problem.num_vars})")
			if args.ising:
				ising = qubo_service.to_ising(problem)
				repository.save_ising(ising, args.ising)
				print(f"ising: {args.ising}")
		return EXIT_OK

	def solve(self, args: argparse.Namespace) -> int:
		"""Run one solver and print its measurement row"""
		settings = self._validated(
			SolveSettings,
			{
				"alpha": args.alpha,
				"beta": args.beta,
				"penalty_mode": args.penalty_mode,
				"output_dir": args.out,
				"repair": args.repair,
				"oracle": args.oracle,
				"oracle_budget": args.oracle_budget,
				"sa": _overrides(args, "sa", SA_OPTIONS),
				"cim": _overrides(args, "cim", CIM_OPTIONS),
			},
		)
		instance_service = self._container.instance_service()
		if args.instance:
			instance_id = args.instance.stem
			instance = instance_service.load_instance(args.instance)
		else:
			instance_id = args.preset
			instance = instance_service.generate_instance(
				args.preset, args.instance_seed
			)

		row = self._container.bench_service().solve_one(
			instance_id,
			instance,
			SolverName(args.solver),
			args.seed,
			settings,
		)
		print(row.model_dump_json(indent=2))
		if row.error is not None:
			logger.warning(f"solve failed: {row.error}")
			return EXIT_DOMAIN_ERROR
		return EXIT_OK

	def bench(self, args: argparse.Namespace) -> int:
		"""Run the matrix from a config file merged with CLI flags"""
		data: dict[str, Any] = (
			self._read_json(args.config, InvalidBenchConfigError)
			if args.config
			else {}
		)
		flags = {
			"presets": args.preset,
			"instance_files": args.instance,
			"instance_seed": args.instance_seed,
			"solvers": args.solver,
			"seeds": args.seeds,
			"alpha": args.alpha,
			"beta": args.beta,
			"penalty_mode": args.penalty_mode,
			"repair": args.repair,
			"oracle": args.oracle,
			"oracle_budget": args.oracle_budget,
			"workers": args.workers,
			"output_dir": args.out,
		}
		data.update({k: v for k, v in flags.items() if v is not None})
		for section, options in (("sa", SA_OPTIONS), ("cim", CIM_OPTIONS)):
			given = _overrides(args, section, options)
			if given:
				merged = dict(data.get(section) or {})
				merged.update(given)
				data[section] = merged
		config = self._validated(BenchConfig, data)

		outcome = self._container.bench_service().run_bench(config)
		failures = sum(row.error is not None for row in outcome.rows)
		print(
			f"{len(outcome.rows)} rows ({failures} failed) written to "
			f"{outcome.output_dir}"
		)
		print(f"rows: {outcome.rows_csv}")
		print(f"summary: {outcome.summary_json}")
		return EXIT_OK

	def report(self, args: argparse.Namespace) -> int:
		outcome = self._container.bench_service().report(args.out)
		print(outcome.text)
		print(f"\nplot data: {outcome.plot_csv}")
		return EXIT_OK

	def quantization(self, args: argparse.Namespace) -> int:
		result = self._container.analysis_service().measure_quantization(
			preset=args.preset,
			seeds=args.seeds,
			k_values=args.k,
			budget=args.budget,
		)
		print(result.model_dump_json(indent=2))
		return EXIT_OK

	def oracle_check(self, args: argparse.Namespace) -> int:
		result = self._container.analysis_service().measure_oracle_agreement(
			count=args.count, seed=args.seed, alpha=args.alpha, beta=args.beta
		)
		print(result.model_dump_json(indent=2, exclude={"rows"}))
		return EXIT_OK

	def _read_json(
		self, path: Path, error: type[Exception]
	) -> dict[str, Any]:
		"""Read a JSON object, reporting failures as `error`"""
		try:
			data = from_json(Path(path).read_bytes())
		except (OSError, ValueError) as e:
			raise error(f"Cannot read {path}: {e}") from e
		if not isinstance(data, dict):
			raise error(f"{path}: top level must be an object")
		return data

	def _validated(
		self, model: type[BaseModel], data: dict[str, Any]
	) -> Any:
		try:
			return model.model_validate(data)
		except ValidationError as e:
			details = "; ".join(
				f"{'.'.join(str(p) for p in err['loc']) or '<root>'}: "
				f"{err['msg']}"
				for err in e.errors()
			)
			raise InvalidBenchConfigError(
				f"Invalid configuration: {details}"
			) from e
