"""
Brute-force ground-state search
"""

import logging
import time
from typing import Any, Optional

import numpy as np

from app.exceptions.optimization_exceptions import ProblemTooLargeError
from app.models.qubo import QuboProblem
from app.models.solver import SolveReport, SolverName
from app.services.solvers.base import BaseSolver

logger = logging.getLogger(__name__)

MAX_EXHAUSTIVE_VARS = 24
CHUNK_BITS = 16


class ExhaustiveSolver(BaseSolver):
	"""
	Enumerates every bitstring

	States are visited as big-endian integers (x_0 is the most significant
	bit), so among equal energies the lowest integer wins.
	"""

	name = SolverName.EXHAUSTIVE.value

	def solve(
		self, problem: QuboProblem, seed: Optional[int] = None, **options: Any
	) -> SolveReport:
		"""
		Global minimum of a QUBO

		Args:
			problem: QUBO with at most 24 variables
			seed: Recorded only

		Returns:
			Single-restart report with the ground state

		Raises:
			ProblemTooLargeError: If the problem has more than 24 variables
		"""
		n = problem.num_vars
		if n > MAX_EXHAUSTIVE_VARS:
			raise ProblemTooLargeError(
				f"Exhaustive search is capped at {MAX_EXHAUSTIVE_VARS} "
				f"variables, problem has {n}"
			)
		logger.info(f"Enumerating {2**n} states")
		started = time.perf_counter()

		shifts = np.arange(n - 1, -1, -1)
		chunk = 1 << min(CHUNK_BITS, n)
		best_state, best_energy = 0, np.inf
		for start in range(0, 1 << n, chunk):
			states = np.arange(start, start + chunk, dtype=np.int64)
			batch = (states[:, None] >> shifts) & 1
			energies = self._qubo_service.qubo_energies(problem, batch)
			index = int(np.argmin(energies))
			if energies[index] < best_energy:
				best_state, best_energy = start + index, energies[index]

		bits = (np.array([best_state]) >> shifts) & 1
		return self._report(
			problem,
			bits.reshape(1, n),
			started,
			seed=seed,
			schedule_params={"num_states": 2**n},
		)
