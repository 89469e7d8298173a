"""
Solver schedules and reports
"""

from enum import StrEnum
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator


class SolverName(StrEnum):
	EXACT = "exact"
	EXHAUSTIVE = "exhaustive"
	SA = "sa"
	CIM = "cim"


class AnnealSchedule(BaseModel):
	"""Geometric single-flip Metropolis schedule"""

	t_initial: float = Field(..., gt=0.0)
	t_final: float = Field(..., gt=0.0)
	sweeps: int = Field(..., ge=1)
	restarts: int = Field(default=32, ge=1)
	workers: int = Field(default=1, ge=1)
	record_trace: bool = False

	model_config = ConfigDict(frozen=True)

	@model_validator(mode="after")
	def _cooling(self) -> "AnnealSchedule":
		if self.t_initial < self.t_final:
			raise ValueError("t_initial must be at least t_final")
		return self


class CimSchedule(BaseModel):
	"""Mean-field amplitude dynamics with a linear pump ramp"""

	steps: int = Field(default=2000, ge=1)
	dt: float = Field(default=0.01, gt=0.0)
	pump_start: float = 0.0
	pump_end: float = 1.2
	coupling_strength: float = Field(..., gt=0.0)
	noise_amplitude: float = Field(default=0.05, ge=0.0)
	restarts: int = Field(default=32, ge=1)
	workers: int = Field(default=1, ge=1)

	model_config = ConfigDict(frozen=True)


class SolveReport(BaseModel):
	"""
	Outcome of one solver call

	best_energy is the re-evaluated energy of best_bits and the minimum of
	per_restart_energies. Restarts that diverged are listed by index in
	failed_restarts and contribute no energy.
	"""

	solver_name: str
	best_bits: list[int]
	best_energy: float
	wall_time: float = Field(..., ge=0.0)
	restarts: int = Field(..., ge=1)
	per_restart_energies: list[float]
	failed_restarts: list[int] = Field(default_factory=list)
	rng_seed: Optional[int] = None
	schedule_params: dict[str, float | int | bool] = Field(
		default_factory=dict
	)
	trace: Optional[list[list[float]]] = Field(
		None, description="Best-so-far energy per sweep, one row per restart"
	)
