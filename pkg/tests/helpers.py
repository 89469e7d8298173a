"""
Helper functions for tests
Independent reference evaluators the services are checked against
"""

import itertools
from typing import Iterator, Optional

import numpy as np
from scipy import sparse

from app.models.instance import ProblemInstance
from app.models.qubo import EncodingScheme, QuboProblem


def all_bitstrings(n: int) -> Iterator[np.ndarray]:
	"""Every 0/1 vector of length n."""
	for bits in itertools.product((0, 1), repeat=n):
		yield np.array(bits, dtype=np.int8)


def bitstring_chunks(n: int, size: int = 1 << 16) -> Iterator[np.ndarray]:
	"""Every 0/1 vector of length n in blocks of at most `size` rows."""
	shifts = np.arange(n - 1, -1, -1)
	for start in range(0, 2**n, size):
		values = np.arange(start, min(start + size, 2**n))
		yield ((values[:, None] >> shifts) & 1).astype(np.int8)


def naive_qubo_energy(problem: QuboProblem, bits: np.ndarray) -> float:
	"""
	Double loop over the dense matrix.

	Args:
		problem: QUBO problem
		bits: 0/1 vector

	Returns:
		offset + Σ_{i≤j} Q_ij x_i x_j
	"""
	matrix = problem.dense()
	energy = problem.offset
	for i in range(problem.num_vars):
		for j in range(i, problem.num_vars):
			energy += matrix[i, j] * bits[i] * bits[j]
	return float(energy)


def brute_force_minimum(problem: QuboProblem) -> float:
	"""Lowest energy over all bitstrings, evaluated one by one."""
	return min(
		naive_qubo_energy(problem, bits)
		for bits in all_bitstrings(problem.num_vars)
	)


def random_qubo(
	rng: np.random.Generator, n: int, density: float = 1.0
) -> QuboProblem:
	"""Random upper-triangular QUBO with entries in [-1, 1]."""
	matrix = np.triu(rng.uniform(-1.0, 1.0, size=(n, n)))
	if density < 1.0:
		matrix *= rng.random((n, n)) < density
	return QuboProblem(
		coefficients=sparse.csr_array(matrix),
		offset=float(rng.uniform(-1.0, 1.0)),
	)


def naive_sip_objective(
	instance: ProblemInstance,
	subscribe: np.ndarray,
	reserved: np.ndarray,
	on_demand: np.ndarray,
) -> float:
	"""Objective by explicit summation over MSPs, edges and scenarios."""
	total = 0.0
	for w in range(instance.msps):
		for e, edge in enumerate(instance.edges):
			total += subscribe[w, e] * edge.memb_cost
			total += reserved[w, e] * edge.resv_trans_cost
			for s, scenario in enumerate(instance.scenarios):
				total += (
					scenario.probability
					* on_demand[w, e, s]
					* edge.ondem_trans_cost
				)
	return total


def brute_force_sip(
	instance: ProblemInstance,
	reserved_cap: int,
	on_demand_cap: int,
) -> Optional[float]:
	"""
	Exact optimum by enumerating every integer assignment.

	Only for instances with one MSP and a handful of variables. Returns
	None when nothing is feasible.
	"""
	assert instance.msps == 1
	edges = instance.num_edges
	scenarios = instance.num_scenarios
	demand = instance.demand_matrix()[0]
	similarity = instance.similarity_tensor()[0]
	best = None
	first_stage = itertools.product(
		itertools.product((0, 1), repeat=edges),
		itertools.product(range(reserved_cap + 1), repeat=edges),
	)
	for subscribe, reserved in first_stage:
		cap = instance.max_reserved
		if any(r > m * cap for m, r in zip(subscribe, reserved)):
			continue
		supplied = np.asarray(reserved) @ similarity
		for flat in itertools.product(
			range(on_demand_cap + 1), repeat=edges * scenarios
		):
			on_demand = np.asarray(flat).reshape(edges, scenarios)
			if np.any(supplied + on_demand.sum(axis=0) < demand - 1e-9):
				continue
			value = naive_sip_objective(
				instance,
				np.asarray([subscribe]),
				np.asarray([reserved]),
				on_demand[None],
			)
			if best is None or value < best:
				best = value
	return best


def infeasible_mask(
	instance: ProblemInstance, encoding: EncodingScheme, batch: np.ndarray
) -> np.ndarray:
	"""
	Rows of `batch` whose decoded decisions break C1 or C2.

	Decodes through the index helpers of the encoding, independently of
	the encoding service.
	"""
	batch = np.asarray(batch)

	def column(index: int) -> np.ndarray:
		return batch[:, index].astype(np.int64)

	demand = instance.demand_matrix()
	similarity = instance.similarity_tensor()
	broken = np.zeros(batch.shape[0], dtype=bool)
	for w in range(instance.msps):
		supply = np.zeros((batch.shape[0], instance.num_scenarios))
		for e in range(instance.num_edges):
			subscribe = column(encoding.subscribe_index(w, e))
			reserved = sum(
				column(encoding.reserved_index(w, e, k)) << k
				for k in range(encoding.k_bits)
			)
			broken |= reserved > subscribe * instance.max_reserved
			supply += reserved[:, None] * similarity[w, e][None, :]
			for s in range(instance.num_scenarios):
				supply[:, s] += sum(
					column(encoding.on_demand_index(w, e, s, bit)) << bit
					for bit in range(encoding.l_bits)
				)
		broken |= (supply < demand[w][None, :] - 1e-9).any(axis=1)
	return broken
