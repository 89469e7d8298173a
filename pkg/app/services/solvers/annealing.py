"""
Single-flip Metropolis simulated annealing
"""

import logging
import time
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Mapping, Optional

import numpy as np
from scipy import sparse

from app.models.qubo import QuboProblem
from app.models.solver import AnnealSchedule, SolveReport, SolverName
from app.services.solvers.base import (
	BaseSolver,
	merge_schedule,
	resolve_seed,
	restart_chunks,
	restart_rng,
)

logger = logging.getLogger(__name__)

T_FINAL_FLOOR = 1e-3


class _LocalFields:
	"""
	Off-diagonal couplings in symmetric CSR form

	f_i = Σ_{j≠i} (Q_ij + Q_ji) x_j is kept per restart so that flipping
	bit i costs ΔE = (1 − 2x_i)(Q_ii + f_i).
	"""

	def __init__(self, problem: QuboProblem):
		upper = sparse.csr_array(sparse.triu(problem.coefficients, k=1))
		self.symmetric = sparse.csr_array(upper + upper.T)
		self.diagonal = problem.coefficients.diagonal()

	def initial(self, states: np.ndarray) -> np.ndarray:
		return (self.symmetric @ states.T).T

	def row(self, i: int) -> tuple[np.ndarray, np.ndarray]:
		lo, hi = self.symmetric.indptr[i], self.symmetric.indptr[i + 1]
		return self.symmetric.indices[lo:hi], self.symmetric.data[lo:hi]


def flip_delta(
	fields: _LocalFields, local: np.ndarray, states: np.ndarray, i: int
) -> np.ndarray:
	"""Energy change of flipping bit i in every row of `states`"""
	return (1.0 - 2.0 * states[:, i]) * (fields.diagonal[i] + local[:, i])


class SimulatedAnnealingSolver(BaseSolver):
	"""
	Geometric-cooling simulated annealing over single-bit flips

	Restarts run as one vectorized batch per worker; each restart draws
	from its own (seed, restart) random stream, so results do not depend
	on the number of workers.
	"""

	name = SolverName.SA.value

	def default_schedule(self, problem: QuboProblem) -> AnnealSchedule:
		"""
		Scale-aware defaults: t_initial = 10·max|Q|, t_final =
		max(0.01·min nonzero |Q|, 1e-3) and 100 sweeps per variable
		"""
		magnitudes = np.abs(problem.coefficients.data)
		magnitudes = magnitudes[magnitudes > 0]
		if magnitudes.size:
			t_final = max(0.01 * float(magnitudes.min()), T_FINAL_FLOOR)
			t_initial = max(10.0 * float(magnitudes.max()), t_final)
		else:
			t_initial, t_final = 1.0, T_FINAL_FLOOR
		return AnnealSchedule(
			t_initial=t_initial,
			t_final=t_final,
			sweeps=100 * max(problem.num_vars, 1),
		)

	def schedule_for(
		self,
		problem: QuboProblem,
		overrides: Optional[Mapping[str, Any]] = None,
	) -> AnnealSchedule:
		return merge_schedule(self.default_schedule(problem), overrides)

	def solve(
		self,
		problem: QuboProblem,
		seed: Optional[int] = None,
		schedule: Optional[AnnealSchedule] = None,
		**options: Any,
	) -> SolveReport:
		"""
		Anneal from random starts and keep the best state seen

		Args:
			problem: QUBO to minimize
			seed: Base seed of the per-restart random streams, 0 when None
			schedule: Temperatures, sweeps and restarts; defaults when None

		Returns:
			Report with one re-evaluated energy per restart
		"""
		seed = resolve_seed(seed)
		schedule = schedule or self.default_schedule(problem)
		logger.info(
			f"Annealing {problem.num_vars} variables (sweeps: "
			f"{schedule.sweeps}, restarts: {schedule.restarts}, seed: {seed})"
		)
		started = time.perf_counter()
		fields = _LocalFields(problem)
		temperatures = np.geomspace(
			schedule.t_initial, schedule.t_final, schedule.sweeps
		)

		chunks = restart_chunks(schedule.restarts, schedule.workers)
		with ThreadPoolExecutor(max_workers=len(chunks)) as executor:
			results = list(
				executor.map(
					lambda chunk: self._anneal(
						problem, fields, temperatures, chunk, seed, schedule
					),
					chunks,
				)
			)

		best_states = np.vstack([states for states, _ in results])
		trace = (
			[row for _, rows in results for row in rows]
			if schedule.record_trace
			else None
		)
		return self._report(
			problem,
			best_states,
			started,
			seed=seed,
			schedule_params=schedule.model_dump(),
			trace=trace,
		)

	def _anneal(
		self,
		problem: QuboProblem,
		fields: _LocalFields,
		temperatures: np.ndarray,
		restarts: range,
		seed: int,
		schedule: AnnealSchedule,
	) -> tuple[np.ndarray, list[list[float]]]:
		n = problem.num_vars
		rngs = [restart_rng(seed, r) for r in restarts]
		states = np.vstack(
			[rng.integers(0, 2, size=n) for rng in rngs]
		).astype(float)
		energies = self._qubo_service.qubo_energies(problem, states)
		local = fields.initial(states)
		best_states = states.copy()
		best_energies = energies.copy()
		trace: list[list[float]] = [[] for _ in restarts]

		for temperature in temperatures:
			draws = np.vstack([rng.random(n) for rng in rngs])
			for i in range(n):
				delta = flip_delta(fields, local, states, i)
				accept = (delta <= 0) | (
					draws[:, i] < np.exp(-np.maximum(delta, 0.0) / temperature)
				)
				if not accept.any():
					continue
				step = np.where(accept, 1.0 - 2.0 * states[:, i], 0.0)
				states[:, i] += step
				energies += np.where(accept, delta, 0.0)
				cols, values = fields.row(i)
				local[:, cols] += step[:, None] * values

				improved = energies < best_energies
				if improved.any():
					best_energies[improved] = energies[improved]
					best_states[improved] = states[improved]
			if schedule.record_trace:
				for row, value in zip(trace, best_energies.tolist()):
					row.append(value)

		return best_states.astype(np.int8), trace
