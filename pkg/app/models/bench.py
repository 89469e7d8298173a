"""
Benchmark configuration, result rows and measurement reports
"""

from pathlib import Path
from typing import Annotated, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from app.models.qubo import DEFAULT_ALPHA, DEFAULT_BETA, PenaltyMode
from app.models.solution import DEFAULT_EXACT_BUDGET
from app.models.solver import SolverName

PresetName = Literal["S", "M", "L"]


class AnnealOverrides(BaseModel):
	"""Optional replacements for the scale-aware SA defaults"""

	t_initial: Optional[float] = Field(None, gt=0.0)
	t_final: Optional[float] = Field(None, gt=0.0)
	sweeps: Optional[int] = Field(None, ge=1)
	restarts: Optional[int] = Field(None, ge=1)
	workers: Optional[int] = Field(None, ge=1)


class CimOverrides(BaseModel):
	"""Optional replacements for the CIM-sim defaults"""

	steps: Optional[int] = Field(None, ge=1)
	dt: Optional[float] = Field(None, gt=0.0)
	pump_start: Optional[float] = None
	pump_end: Optional[float] = None
	coupling_strength: Optional[float] = Field(None, gt=0.0)
	noise_amplitude: Optional[float] = Field(None, ge=0.0)
	restarts: Optional[int] = Field(None, ge=1)
	workers: Optional[int] = Field(None, ge=1)


class SolveSettings(BaseModel):
	"""Penalty, repair, oracle and schedule settings of solver runs"""

	alpha: float = Field(default=DEFAULT_ALPHA, gt=0.0)
	beta: float = Field(default=DEFAULT_BETA, gt=0.0)
	penalty_mode: PenaltyMode = PenaltyMode.PAPER
	output_dir: Path = Path("results")
	repair: bool = True
	oracle: bool = True
	oracle_budget: int = Field(default=DEFAULT_EXACT_BUDGET, ge=1)
	sa: AnnealOverrides = Field(default_factory=AnnealOverrides)
	cim: CimOverrides = Field(default_factory=CimOverrides)


class BenchConfig(SolveSettings):
	"""
	Full benchmark matrix

	Preset instances are generated once from `instance_seed`; `seeds`
	drive the solvers. Every field can be given in a JSON config file and
	overridden from the command line.
	"""

	presets: list[PresetName] = Field(default_factory=list)
	instance_files: list[Path] = Field(default_factory=list)
	instance_seed: int = Field(default=1, ge=0)
	solvers: list[SolverName] = Field(..., min_length=1)
	seeds: list[Annotated[int, Field(ge=0)]] = Field(..., min_length=1)
	workers: int = Field(default=1, ge=1)

	@model_validator(mode="after")
	def _needs_instances(self) -> "BenchConfig":
		if not self.presets and not self.instance_files:
			raise ValueError("at least one preset or instance file is needed")
		return self


class BenchRow(BaseModel):
	"""One (instance, solver, seed) measurement"""

	instance_id: str
	solver: str
	seed: int
	num_vars: Optional[int] = None
	objective: Optional[float] = None
	log10_objective: Optional[float] = None
	raw_energy: Optional[float] = None
	feasible_pre: Optional[bool] = None
	feasible_post: Optional[bool] = None
	wall_time: float = Field(default=0.0, ge=0.0)
	oracle_objective: Optional[float] = None
	gap_percent: Optional[float] = None
	solution_file: Optional[str] = None
	error: Optional[str] = None

	model_config = ConfigDict(from_attributes=True)


CSV_COLUMNS: tuple[str, ...] = tuple(BenchRow.model_fields)
TIMING_COLUMNS: tuple[str, ...] = ("wall_time",)


class BenchSummaryRow(BaseModel):
	"""Aggregate of all seeds of one (instance, solver) pair"""

	instance_id: str
	solver: str
	rows: int
	failures: int
	median_objective: Optional[float] = None
	median_log10_objective: Optional[float] = None
	median_wall_time: Optional[float] = None
	median_gap_percent: Optional[float] = None
	feasibility_rate: Optional[float] = None


class QuantizationRow(BaseModel):
	"""
	Exact optimum against the best solution the K-bit encoding can hold

	The capped solve limits reserved bundles to 2^K − 1 and on-demand
	bundles to 2^L − 1 per edge. When nothing within those caps meets
	demand, `capped_objective` is None and `infeasible_reason` says why.
	"""

	seed: int
	k_bits: int
	reserved_cap: int
	on_demand_cap: int
	exact_objective: float
	capped_objective: Optional[float] = None
	gap_percent: Optional[float] = None
	infeasible_reason: Optional[str] = None


class QuantizationReport(BaseModel):
	preset: str
	max_reserved: int
	rows: list[QuantizationRow]
	median_gap_percent: dict[int, Optional[float]]
	max_gap_percent: dict[int, Optional[float]]
	infeasible_count: dict[int, int]


class OracleAgreementRow(BaseModel):
	"""QUBO ground state versus the exact SIP oracle on one instance"""

	index: int
	num_vars: int
	exact_objective: float
	qubo_objective: float
	matching_admitted: bool
	agrees: bool


class OracleAgreementReport(BaseModel):
	rows: list[OracleAgreementRow]
	admitted: int
	admitted_agreeing: int
	oversupply_forced: int
	oversupply_agreeing: int


class BenchOutcome(BaseModel):
	"""Files written by one benchmark run"""

	output_dir: Path
	database: Path
	rows_csv: Path
	summary_json: Path
	rows: list[BenchRow]
	summary: list[BenchSummaryRow]


class ReportOutcome(BaseModel):
	"""Rendered report plus the plot-ready CSV it wrote"""

	text: str
	plot_csv: Path
	summary: list[BenchSummaryRow]
