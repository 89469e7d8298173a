"""
Simulated coherent Ising machine: mean-field amplitude dynamics with a
pump ramp
"""

import logging
import math
import time
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Mapping, Optional

import numpy as np
from scipy import sparse

from app.exceptions.optimization_exceptions import SolverDivergenceError
from app.models.qubo import IsingProblem, QuboProblem
from app.models.solver import CimSchedule, SolveReport, SolverName
from app.services.solvers.base import (
	BaseSolver,
	merge_schedule,
	resolve_seed,
	restart_chunks,
	restart_rng,
)

logger = logging.getLogger(__name__)

AMPLITUDE_LIMIT = 1.5
INITIAL_AMPLITUDE = 0.1


class CimSolver(BaseSolver):
	"""
	Euler–Maruyama integration of

		da_i = [(p − 1)a_i − a_i³ − c·(Σ_j J_ij a_j + h_i)]·dt + η·dW_i

	on the Ising form of the QUBO, with J and h scaled to unit maximum
	magnitude. The field h acts as the coupling to an auxiliary spin fixed
	at +1. Final spins are the signs of the amplitudes.
	"""

	name = SolverName.CIM.value

	def default_schedule(self, problem: QuboProblem) -> CimSchedule:
		"""Defaults with coupling strength 0.5/√num_vars"""
		return CimSchedule(
			coupling_strength=0.5 / math.sqrt(max(problem.num_vars, 1))
		)

	def schedule_for(
		self,
		problem: QuboProblem,
		overrides: Optional[Mapping[str, Any]] = None,
	) -> CimSchedule:
		return merge_schedule(self.default_schedule(problem), overrides)

	def solve(
		self,
		problem: QuboProblem,
		seed: Optional[int] = None,
		schedule: Optional[CimSchedule] = None,
		**options: Any,
	) -> SolveReport:
		"""
		Integrate the dynamics from small random amplitudes

		Args:
			problem: QUBO to minimize
			seed: Base seed of the per-restart random streams, 0 when None
			schedule: Integration and pump parameters; defaults when None

		Returns:
			Report over the restarts that stayed finite

		Raises:
			SolverDivergenceError: If every restart diverged
		"""
		seed = resolve_seed(seed)
		schedule = schedule or self.default_schedule(problem)
		logger.info(
			f"Running CIM dynamics on {problem.num_vars} spins (steps: "
			f"{schedule.steps}, restarts: {schedule.restarts}, seed: {seed})"
		)
		started = time.perf_counter()
		ising = self._qubo_service.to_ising(problem)
		couplings, fields = self._normalized(ising)
		pumps = np.linspace(
			schedule.pump_start, schedule.pump_end, schedule.steps
		)

		chunks = restart_chunks(schedule.restarts, schedule.workers)
		with ThreadPoolExecutor(max_workers=len(chunks)) as executor:
			results = list(
				executor.map(
					lambda chunk: self._integrate(
						couplings, fields, pumps, chunk, seed, schedule
					),
					chunks,
				)
			)

		spins = np.vstack([amplitudes for amplitudes, _ in results])
		finite = np.concatenate([ok for _, ok in results])
		failed = np.flatnonzero(~finite).tolist()
		if not finite.any():
			raise SolverDivergenceError(
				f"All {schedule.restarts} CIM restarts diverged"
			)
		if failed:
			logger.warning(f"CIM restarts {failed} diverged and were dropped")

		bits = (spins[finite] >= 0).astype(np.int8)
		return self._report(
			problem,
			bits,
			started,
			seed=seed,
			failed_restarts=failed,
			schedule_params=schedule.model_dump(),
		)

	def _normalized(
		self, ising: IsingProblem
	) -> tuple[sparse.csr_array, np.ndarray]:
		"""Symmetric couplings and fields divided by their largest magnitude"""
		couplings = sparse.csr_array(ising.couplings + ising.couplings.T)
		scale = max(
			float(np.abs(couplings.data).max(initial=0.0)),
			float(np.abs(ising.h).max(initial=0.0)),
		)
		if scale == 0.0:
			return couplings, ising.h.copy()
		return couplings / scale, ising.h / scale

	def _integrate(
		self,
		couplings: sparse.csr_array,
		fields: np.ndarray,
		pumps: np.ndarray,
		restarts: range,
		seed: int,
		schedule: CimSchedule,
	) -> tuple[np.ndarray, np.ndarray]:
		n = fields.shape[0]
		rngs = [restart_rng(seed, r) for r in restarts]
		amplitudes = np.vstack(
			[
				rng.uniform(-INITIAL_AMPLITUDE, INITIAL_AMPLITUDE, size=n)
				for rng in rngs
			]
		)
		finite = np.ones(len(rngs), dtype=bool)
		noise_scale = schedule.noise_amplitude * math.sqrt(schedule.dt)

		for pump in pumps:
			feedback = (couplings @ amplitudes.T).T + fields
			drift = (
				(pump - 1.0) * amplitudes
				- amplitudes**3
				- schedule.coupling_strength * feedback
			)
			noise = np.vstack([rng.standard_normal(n) for rng in rngs])
			amplitudes = np.clip(
				amplitudes + drift * schedule.dt + noise_scale * noise,
				-AMPLITUDE_LIMIT,
				AMPLITUDE_LIMIT,
			)
			diverged = ~np.isfinite(amplitudes).all(axis=1)
			if diverged.any():
				finite &= ~diverged
				amplitudes[diverged] = 0.0

		return amplitudes, finite
