"""
Binary expansion of integer decisions and feasibility repair of decoded
bitstrings
"""

import logging
from typing import Optional

import numpy as np

from app.exceptions.optimization_exceptions import (
	BitLengthError,
	DimensionMismatchError,
	EncodingRangeError,
)
from app.models.instance import ProblemInstance
from app.models.qubo import MAX_BITS, EncodingScheme
from app.models.solution import RepairResult, SipSolution
from app.services.sip_service import SipService, shortfall_bundles

logger = logging.getLogger(__name__)


def bit_width(value: int) -> int:
	"""min(⌈log₂(value + 1)⌉, MAX_BITS), never below one bit"""
	return max(1, min(int(value).bit_length(), MAX_BITS))


class EncodingService:
	"""
	Maps SIP decisions to QUBO bits and back

	Bit k of a binary-expanded integer carries weight 2^k.
	"""

	def __init__(self, sip_service: SipService):
		"""
		Initialize encoding service with dependency injection

		Args:
			sip_service: SIP evaluation service used by repair
		"""
		self._sip_service = sip_service
		logger.info("EncodingService initialized")

	def build_encoding(
		self, instance: ProblemInstance, on_demand_cap: Optional[int] = None
	) -> EncodingScheme:
		"""
		Bit widths and layout for an instance

		Args:
			instance: Problem instance
			on_demand_cap: On-demand cap U, the instance default when None

		Returns:
			Encoding with K bits per reserved and L bits per on-demand value
		"""
		cap = (
			self._sip_service.on_demand_cap(instance)
			if on_demand_cap is None
			else on_demand_cap
		)
		encoding = EncodingScheme(
			msps=instance.msps,
			edges=instance.num_edges,
			scenarios=instance.num_scenarios,
			k_bits=bit_width(instance.max_reserved),
			l_bits=bit_width(cap),
		)
		logger.info(
			f"Encoding built (K={encoding.k_bits}, L={encoding.l_bits}, "
			f"num_vars={encoding.num_vars})"
		)
		return encoding

	def encode_solution(
		self, solution: SipSolution, encoding: EncodingScheme
	) -> np.ndarray:
		"""
		Bitstring of a solution; slack bits, if any, are left at zero

		Raises:
			DimensionMismatchError: If the solution does not fit the layout
			EncodingRangeError: If a value exceeds its bit width
		"""
		expected = (encoding.msps, encoding.edges, encoding.scenarios)
		if tuple(solution.shape) != expected:
			raise DimensionMismatchError(
				f"Solution has shape {tuple(solution.shape)}, encoding "
				f"expects {expected}"
			)
		subscribe, reserved, on_demand = solution.arrays()
		self._check_range("reserved", reserved, encoding.reserved_max)
		self._check_range("on_demand", on_demand, encoding.on_demand_max)

		k_bits = (reserved[..., None] >> np.arange(encoding.k_bits)) & 1
		l_bits = (on_demand[..., None] >> np.arange(encoding.l_bits)) & 1
		blocks = np.concatenate(
			[
				subscribe[..., None],
				k_bits,
				l_bits.reshape(encoding.msps, encoding.edges, -1),
			],
			axis=2,
		)
		bits = np.zeros(encoding.num_vars, dtype=np.int8)
		bits[: encoding.num_core_vars] = blocks.ravel()
		return bits

	def decode_bits(
		self, bits: np.ndarray, encoding: EncodingScheme
	) -> SipSolution:
		"""
		Solution encoded by a bitstring; slack bits are ignored

		Raises:
			BitLengthError: If the length or the values do not fit
		"""
		bits = self.as_bits(bits, encoding.num_vars)
		blocks = bits[: encoding.num_core_vars].astype(np.int64).reshape(
			encoding.msps, encoding.edges, encoding.block_size
		)
		subscribe = blocks[:, :, 0]
		reserved = blocks[:, :, 1 : 1 + encoding.k_bits] @ (
			1 << np.arange(encoding.k_bits)
		)
		on_demand = blocks[:, :, 1 + encoding.k_bits :].reshape(
			encoding.msps, encoding.edges, encoding.scenarios, encoding.l_bits
		) @ (1 << np.arange(encoding.l_bits))
		return SipSolution.from_arrays(subscribe, reserved, on_demand)

	def decode_and_repair(
		self,
		bits: np.ndarray,
		instance: ProblemInstance,
		encoding: EncodingScheme,
		on_demand_cap: Optional[int] = None,
	) -> RepairResult:
		"""
		Decode a solver bitstring and restore feasibility

		Missing memberships are paid where bundles are reserved, reserved
		counts are clamped to X, and each remaining shortfall is bought on
		demand at the cheapest edge (lowest index among equal prices)
		without taking any edge above the cap U.

		Args:
			bits: Solver output
			instance: Problem instance
			encoding: Layout the bits follow
			on_demand_cap: Cap U, the instance default when None

		Returns:
			Decoded and repaired solutions with both feasibility reports
		"""
		decoded = self.decode_bits(bits, encoding)
		before = self._sip_service.check_feasibility(instance, decoded)
		if before.feasible:
			return RepairResult(
				decoded=decoded, solution=decoded, before=before, after=before
			)

		cap = (
			self._sip_service.on_demand_cap(instance)
			if on_demand_cap is None
			else on_demand_cap
		)
		subscribe, reserved, on_demand = decoded.arrays()
		subscribe = np.maximum(subscribe, reserved > 0).astype(np.int64)
		reserved = np.minimum(reserved, instance.max_reserved)

		costs = instance.on_demand_costs()
		order = np.argsort(costs, kind="stable")
		partial = SipSolution.from_arrays(subscribe, reserved, on_demand)
		missing = shortfall_bundles(
			instance.demand_matrix()
			- self._sip_service.supplied(instance, partial)
		).astype(np.int64)
		for w, s in np.argwhere(missing > 0):
			remaining = int(missing[w, s])
			for e in order:
				room = max(cap - int(on_demand[w, e, s]), 0)
				take = min(room, remaining)
				on_demand[w, e, s] += take
				remaining -= take
				if remaining == 0:
					break

		solution = SipSolution.from_arrays(subscribe, reserved, on_demand)
		after = self._sip_service.check_feasibility(instance, solution)
		logger.warning(
			f"Repaired decoded solution ({len(before.c1_violations)} C1 and "
			f"{len(before.c2_violations)} C2 violations, feasible after "
			f"repair: {after.feasible})"
		)
		return RepairResult(
			decoded=decoded, solution=solution, before=before, after=after
		)

	def as_bits(self, bits: np.ndarray, num_vars: int) -> np.ndarray:
		"""
		Validate a 0/1 vector of the expected length

		Raises:
			BitLengthError: If the length or the values do not fit
		"""
		array = np.asarray(bits)
		if array.ndim != 1 or array.shape[0] != num_vars:
			raise BitLengthError(
				f"Expected {num_vars} bits, got shape {array.shape}"
			)
		if not np.isin(array, (0, 1)).all():
			raise BitLengthError("Bitstring entries must be 0 or 1")
		return array.astype(np.int8)

	def _check_range(self, name: str, values: np.ndarray, limit: int) -> None:
		offending = np.argwhere(values > limit)
		if offending.size:
			index = tuple(int(i) for i in offending[0])
			position = "".join(f"[{i}]" for i in index)
			raise EncodingRangeError(
				f"{name}{position} = {int(values[index])} exceeds the "
				f"encodable maximum {limit}"
			)
