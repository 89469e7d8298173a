"""
Penalty-augmented QUBO construction, energy evaluation and the Ising
mapping
"""

import logging
import math
from typing import Optional

import numpy as np
from scipy import sparse

from app.exceptions.optimization_exceptions import (
	BitLengthError,
	DimensionMismatchError,
	EncodingCapError,
	PenaltyWeightError,
)
from app.models.instance import ProblemInstance
from app.models.qubo import (
	DEFAULT_ALPHA,
	DEFAULT_BETA,
	EncodingScheme,
	IsingProblem,
	PenaltyBreakdown,
	PenaltyMode,
	QuboProblem,
)
from app.models.solution import SipSolution
from app.services.encoding_service import EncodingService
from app.services.sip_service import SipService

logger = logging.getLogger(__name__)


class _TermCollector:
	"""Accumulates (i, j, value) triplets of an upper-triangular matrix"""

	def __init__(self, size: int):
		self.size = size
		self.rows: list[np.ndarray] = []
		self.cols: list[np.ndarray] = []
		self.values: list[np.ndarray] = []

	def linear(self, index: np.ndarray, value: np.ndarray) -> None:
		self.add(index, index, value)

	def add(
		self, rows: np.ndarray, cols: np.ndarray, value: np.ndarray
	) -> None:
		rows, cols = np.broadcast_arrays(
			np.asarray(rows, dtype=np.int64), np.asarray(cols, dtype=np.int64)
		)
		value = np.broadcast_to(np.asarray(value, dtype=float), rows.shape)
		self.rows.append(np.minimum(rows, cols).ravel())
		self.cols.append(np.maximum(rows, cols).ravel())
		self.values.append(value.ravel())

	def matrix(self) -> sparse.csr_array:
		if not self.rows:
			return sparse.csr_array((self.size, self.size), dtype=float)
		return sparse.csr_array(
			(
				np.concatenate(self.values),
				(np.concatenate(self.rows), np.concatenate(self.cols)),
			),
			shape=(self.size, self.size),
		)


class QuboService:
	"""
	Builds and evaluates QUBO Hamiltonians of SIP instances

	energy(x) = objective + alpha·Σ m̃(1 − m) + beta·Σ (F̄ − supply [+ z])²
	for every encoded solution x, with z the slack integer in slack mode.
	"""

	def __init__(
		self, sip_service: SipService, encoding_service: EncodingService
	):
		"""
		Initialize QUBO service with dependency injection

		Args:
			sip_service: SIP evaluation service
			encoding_service: Encoding service for bit decoding
		"""
		self._sip_service = sip_service
		self._encoding_service = encoding_service
		logger.info("QuboService initialized")

	def build_qubo(
		self,
		instance: ProblemInstance,
		encoding: EncodingScheme,
		alpha: float = DEFAULT_ALPHA,
		beta: float = DEFAULT_BETA,
		mode: PenaltyMode = PenaltyMode.PAPER,
	) -> QuboProblem:
		"""
		Build the penalty-augmented QUBO

		Args:
			instance: Problem instance
			encoding: Layout without slack bits; slack mode adds L of them
				per (MSP, scenario)
			alpha: Weight of the linking penalty
			beta: Weight of the demand penalty
			mode: PAPER squares the demand residual, SLACK adds a slack
				integer so over-supply is free

		Returns:
			QUBO problem carrying its encoding and weights

		Raises:
			PenaltyWeightError: If a weight is not positive and finite
			EncodingCapError: If the encoding can reserve more than X
			DimensionMismatchError: If the encoding does not fit the instance
		"""
		for name, weight in (("alpha", alpha), ("beta", beta)):
			if not (math.isfinite(weight) and weight > 0):
				raise PenaltyWeightError(
					f"Penalty weight {name} must be positive, got {weight}"
				)
		if encoding.reserved_max > instance.max_reserved:
			raise EncodingCapError(
				f"{encoding.k_bits} reserved bits encode up to "
				f"{encoding.reserved_max} bundles but X = "
				f"{instance.max_reserved}; choose X = 2^K − 1"
			)
		if encoding.reserved_max < instance.max_reserved:
			logger.warning(
				f"{encoding.k_bits} reserved bits encode at most "
				f"{encoding.reserved_max} bundles, below X = "
				f"{instance.max_reserved}; larger reservations are unreachable"
			)
		shape =(instance.msps, instance.num_edges, instance.num_scenarios)
		if (encoding.msps, encoding.edges, encoding.scenarios) != shape:
			raise DimensionMismatchError(
				f"Encoding is for {encoding.msps}x{encoding.edges}x"
				f"{encoding.scenarios}, instance is {shape}"
			)
		mode = PenaltyMode(mode)
		if mode is PenaltyMode.SLACK:
			encoding = encoding.with_slack(encoding.l_bits)
		else:
			encoding = encoding.with_slack(0)

		logger.info(
			f"Building QUBO (num_vars: {encoding.num_vars}, alpha: {alpha}, "
			f"beta: {beta}, mode: {mode})"
		)
		terms = _TermCollector(encoding.num_vars)
		grids = self._index_grids(encoding)
		subscribe_idx, reserved_idx, on_demand_idx = grids
		k_weights = 2.0 ** np.arange(encoding.k_bits)
		l_weights = 2.0 ** np.arange(encoding.l_bits)

		# objective
		terms.linear(
			subscribe_idx,
			np.broadcast_to(instance.membership_costs(), subscribe_idx.shape),
		)
		terms.linear(
			reserved_idx,
			instance.reserved_costs()[None, :, None] * k_weights,
		)
		terms.linear(
			on_demand_idx,
			instance.on_demand_costs()[None, :, None, None]
			* instance.probabilities()[None, None, :, None]
			* l_weights,
		)

		# linking penalty: m̃·(1 − m)
		terms.linear(reserved_idx, alpha * k_weights)
		terms.add(
			np.broadcast_to(subscribe_idx[..., None], reserved_idx.shape),
			reserved_idx,
			-alpha * k_weights,
		)

		# demand penalty: (F̄ + Σ c_i b_i)² per (MSP, scenario)
		demand = instance.demand_matrix()
		similarity = instance.similarity_tensor()
		offset = 0.0
		for w in range(instance.msps):
			for s in range(instance.num_scenarios):
				index, coeff = self._residual_terms(
					encoding,
					w,
					s,
					reserved_idx,
					on_demand_idx,
					similarity[w, :, s][:, None] * k_weights,
					l_weights,
				)
				f = demand[w, s]
				offset += beta * f * f
				terms.linear(index, beta * (2.0 * f * coeff + coeff * coeff))
				upper_i, upper_j = np.triu_indices(index.shape[0], k=1)
				terms.add(
					index[upper_i],
					index[upper_j],
					2.0 * beta * coeff[upper_i] * coeff[upper_j],
				)

		problem = QuboProblem(
			coefficients=terms.matrix(),
			offset=offset,
			encoding=encoding,
			alpha=alpha,
			beta=beta,
			mode=mode,
		)
		logger.info(
			f"QUBO built with {problem.coefficients.nnz} nonzero coefficients"
		)
		return problem

	def qubo_energy(self, problem: QuboProblem, bits: np.ndarray) -> float:
		"""
		offset + Σ_{i≤j} Q_ij x_i x_j

		Raises:
			BitLengthError: If the bitstring length differs from num_vars
		"""
		x = self._encoding_service.as_bits(bits, problem.num_vars).astype(
			float
		)
		return float(problem.offset + x @ (problem.coefficients @ x))

	def qubo_energies(
		self, problem: QuboProblem, batch: np.ndarray
	) -> np.ndarray:
		"""
		Energies of a batch of bitstrings, one per row

		Raises:
			BitLengthError: If the row length differs from num_vars
		"""
		batch = np.atleast_2d(np.asarray(batch, dtype=float))
		if batch.shape[1] != problem.num_vars:
			raise BitLengthError(
				f"Expected rows of {problem.num_vars} bits, "
				f"got {batch.shape[1]}"
			)
		products = (problem.coefficients @ batch.T).T
		return problem.offset + np.einsum("ri,ri->r", batch, products)

	def constraint_penalties(
		self,
		instance: ProblemInstance,
		solution: SipSolution,
		slack: Optional[np.ndarray] = None,
	) -> PenaltyBreakdown:
		"""
		Unweighted linking and demand penalties of a solution

		Args:
			instance: Problem instance
			solution: Decisions shaped like the instance
			slack: Slack integers per (MSP, scenario) for slack mode

		Returns:
			Penalty breakdown
		"""
		subscribe, reserved, _ = solution.arrays()
		residual = instance.demand_matrix() - self._sip_service.supplied(
			instance, solution
		)
		if slack is not None:
			residual = residual + np.asarray(slack, dtype=float)
		return PenaltyBreakdown(
			linking=float((reserved * (1 - subscribe)).sum()),
			demand=float((residual**2).sum()),
		)

	def slack_values(
		self, bits: np.ndarray, encoding: EncodingScheme
	) -> np.ndarray:
		"""Slack integers per (MSP, scenario) encoded in a bitstring"""
		bits = self._encoding_service.as_bits(bits, encoding.num_vars)
		if encoding.slack_bits == 0:
			shape = (encoding.msps, encoding.scenarios)
			return np.zeros(shape, dtype=np.int64)
		tail = bits[encoding.num_core_vars :].astype(np.int64).reshape(
			encoding.msps, encoding.scenarios, encoding.slack_bits
		)
		return tail @ (1 << np.arange(encoding.slack_bits))

	def fill_slack(
		self, bits: np.ndarray, instance: ProblemInstance, problem: QuboProblem
	) -> np.ndarray:
		"""
		Set slack bits to the over-supply that minimizes each squared
		residual

		Returns:
			A new bitstring; unchanged when the problem has no slack bits
		"""
		encoding = self._require_encoding(problem)
		bits = self._encoding_service.as_bits(bits, encoding.num_vars).copy()
		if encoding.slack_bits == 0:
			return bits

		solution = self._encoding_service.decode_bits(bits, encoding)
		surplus = self._sip_service.supplied(
			instance, solution
		) - instance.demand_matrix()
		limit = 2**encoding.slack_bits - 1
		slack = np.clip(np.rint(surplus), 0, limit).astype(np.int64)

		slack_bits = (slack[..., None] >> np.arange(encoding.slack_bits)) & 1
		bits[encoding.num_core_vars :] = slack_bits.ravel()
		return bits

	def to_ising(self, problem: QuboProblem) -> IsingProblem:
		"""
		Substitute x = (1 + σ)/2

		h_i = Q_ii/2 + Σ_{j≠i} Q_ij/4, J_ij = Q_ij/4 and the constant
		collects offset + Σ Q_ii/2 + Σ_{i<j} Q_ij/4.
		"""
		matrix = problem.coefficients
		diagonal = matrix.diagonal()
		upper = sparse.csr_array(sparse.triu(matrix, k=1))
		row_sums = np.asarray(upper.sum(axis=1)).ravel()
		col_sums = np.asarray(upper.sum(axis=0)).ravel()

		ising = IsingProblem(
			h=diagonal / 2.0 + (row_sums + col_sums) / 4.0,
			couplings=upper / 4.0,
			constant=float(
				problem.offset + diagonal.sum() / 2.0 + upper.sum() / 4.0
			),
		)
		logger.debug(f"Mapped {problem.num_vars}-variable QUBO to Ising form")
		return ising

	def ising_energy(self, problem: IsingProblem, spins: np.ndarray) -> float:
		"""
		constant + Σ h_i σ_i + Σ_{i<j} J_ij σ_i σ_j

		Raises:
			BitLengthError: If the spin vector length differs from num_spins
		"""
		sigma = np.asarray(spins, dtype=float)
		if sigma.ndim != 1 or sigma.shape[0] != problem.num_spins:
			raise BitLengthError(
				f"Expected {problem.num_spins} spins, got shape {sigma.shape}"
			)
		return float(
			problem.constant
			+ problem.h @ sigma
			+ sigma @ (problem.couplings @ sigma)
		)

	def _require_encoding(self, problem: QuboProblem) -> EncodingScheme:
		if problem.encoding is None:
			raise DimensionMismatchError("QUBO problem carries no encoding")
		return problem.encoding

	def _index_grids(
		self, encoding: EncodingScheme
	) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
		"""Variable indices shaped (W,E), (W,E,K) and (W,E,Ω,L)"""
		blocks = np.arange(encoding.num_core_vars).reshape(
			encoding.msps, encoding.edges, encoding.block_size
		)
		subscribe = blocks[:, :, 0]
		reserved = blocks[:, :, 1 : 1 + encoding.k_bits]
		on_demand = blocks[:, :, 1 + encoding.k_bits :].reshape(
			encoding.msps, encoding.edges, encoding.scenarios, encoding.l_bits
		)
		return subscribe, reserved, on_demand

	def _residual_terms(
		self,
		encoding: EncodingScheme,
		msp: int,
		scenario: int,
		reserved_idx: np.ndarray,
		on_demand_idx: np.ndarray,
		reserved_weights: np.ndarray,
		l_weights: np.ndarray,
	) -> tuple[np.ndarray, np.ndarray]:
		"""Bits and coefficients c_i of F̄ + Σ c_i b_i for one (MSP, scenario)"""
		index = [
			reserved_idx[msp].ravel(),
			on_demand_idx[msp, :, scenario].ravel(),
		]
		coeff = [
			-reserved_weights.ravel(),
			-np.broadcast_to(
				l_weights, (encoding.edges, encoding.l_bits)
			).ravel(),
		]
		if encoding.slack_bits:
			index.append(
				np.array(
					[
						encoding.slack_index(msp, scenario, bit)
						for bit in range(encoding.slack_bits)
					]
				)
			)
			coeff.append(2.0 ** np.arange(encoding.slack_bits))
		return np.concatenate(index), np.concatenate(coeff)
