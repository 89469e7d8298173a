"""
Solver abstraction shared by the QUBO engines
"""

import logging
import time
from abc import ABC, abstractmethod
from typing import Any, Mapping, Optional, TypeVar

import numpy as np
from pydantic import BaseModel, ValidationError

from app.exceptions.optimization_exceptions import InvalidScheduleError
from app.models.qubo import QuboProblem
from app.models.solver import SolveReport
from app.services.qubo_service import QuboService

logger = logging.getLogger(__name__)

ScheduleT = TypeVar("ScheduleT", bound=BaseModel)

DEFAULT_SEED = 0


class BaseSolver(ABC):
	"""
	Abstract QUBO solver

	Solvers are reentrant: one instance may solve several problems from
	different threads at once.
	"""

	name: str

	def __init__(self, qubo_service: QuboService):
		"""
		Initialize solver with dependency injection

		Args:
			qubo_service: Service used to re-evaluate reported energies
		"""
		self._qubo_service = qubo_service
		logger.debug(f"{type(self).__name__} initialized")

	@abstractmethod
	def solve(
		self, problem: QuboProblem, seed: Optional[int] = None, **options: Any
	) -> SolveReport:
		"""Minimize the QUBO energy and report the best bitstring"""
		pass

	def schedule_for(
		self,
		problem: QuboProblem,
		overrides: Optional[Mapping[str, Any]] = None,
	) -> Optional[BaseModel]:
		"""Schedule to pass to `solve`; None for parameter-free solvers"""
		return None

	def _report(
		self,
		problem: QuboProblem,
		candidates: np.ndarray,
		started: float,
		seed: Optional[int] = None,
		failed_restarts: Optional[list[int]] = None,
		schedule_params: Optional[dict[str, Any]] = None,
		trace: Optional[list[list[float]]] = None,
	) -> SolveReport:
		"""
		Build a report from per-restart best bitstrings

		Energies are re-evaluated exactly; the first restart with the
		minimum energy wins.
		"""
		energies = self._qubo_service.qubo_energies(problem, candidates)
		best = int(np.argmin(energies))
		report = SolveReport(
			solver_name=self.name,
			best_bits=candidates[best].astype(int).tolist(),
			best_energy=float(energies[best]),
			wall_time=time.perf_counter() - started,
			restarts=len(candidates) + len(failed_restarts or []),
			per_restart_energies=energies.tolist(),
			failed_restarts=failed_restarts or [],
			rng_seed=seed,
			schedule_params=schedule_params or {},
			trace=trace,
		)
		logger.info(
			f"{self.name} finished (best energy: {report.best_energy:.6f}, "
			f"wall time: {report.wall_time:.6f}s)"
		)
		return report


def restart_chunks(restarts: int, workers: int) -> list[range]:
	"""Split restart indices into contiguous chunks, one per worker"""
	workers = max(1, min(workers, restarts))
	bounds = np.linspace(0, restarts, workers + 1).astype(int)
	return [
		range(lo, hi) for lo, hi in zip(bounds[:-1], bounds[1:]) if hi > lo
	]


def resolve_seed(seed: Optional[int]) -> int:
	"""
	Base seed a solve runs and reports with; None means DEFAULT_SEED

	Raises:
		InvalidScheduleError: If the seed is negative
	"""
	if seed is None:
		return DEFAULT_SEED
	if seed < 0:
		raise InvalidScheduleError(
			f"Solver seed must be nonnegative, got {seed}"
		)
	return int(seed)


def restart_rng(seed: int, restart: int) -> np.random.Generator:
	"""Independent stream per (seed, restart) so chunking never matters"""
	return np.random.default_rng(np.random.SeedSequence([seed, restart]))


def merge_schedule(
	defaults: ScheduleT, overrides: Optional[Mapping[str, Any]] = None
) -> ScheduleT:
	"""
	Replace default schedule fields with the given overrides

	Raises:
		InvalidScheduleError: If the merged schedule is invalid
	"""
	fields = defaults.model_dump()
	given = overrides or {}
	fields.update({k: v for k, v in given.items() if v is not None})
	try:
		return type(defaults).model_validate(fields)
	except ValidationError as e:
		details = "; ".join(
			f"{'.'.join(str(p) for p in err['loc']) or 'schedule'}: "
			f"{err['msg']}"
			for err in e.errors()
		)
		raise InvalidScheduleError(f"Invalid schedule: {details}") from e
