"""
Two-stage SIP evaluation and the exact ground-truth oracle
"""

import logging
import math
from typing import Optional

import numpy as np

from app.exceptions.optimization_exceptions import (
	DimensionMismatchError,
	InfeasibleWithinBoundsError,
	SearchBudgetExceededError,
)
from app.models.instance import ProblemInstance
from app.models.solution import (
	C1Violation,
	C2Violation,
	ExactBounds,
	ExactResult,
	FeasibilityReport,
	ObjectiveBreakdown,
	SipSolution,
)

logger = logging.getLogger(__name__)

SUPPLY_TOLERANCE = 1e-9
TIE_TOLERANCE = 1e-9


def shortfall_bundles(residual: np.ndarray) -> np.ndarray:
	"""Whole bundles needed to close a real-valued residual demand"""
	residual = np.asarray(residual, dtype=float)
	return np.where(
		residual > SUPPLY_TOLERANCE,
		np.ceil(residual - SUPPLY_TOLERANCE),
		0.0,
	)


def recourse_cost(
	residual: np.ndarray, sorted_costs: np.ndarray, cap: int
) -> np.ndarray:
	"""
	Cheapest on-demand cost of covering each residual

	Bundles are bought at the cheapest edge first, at most `cap` per
	edge. Residuals that cannot be covered cost infinity.

	Args:
		residual: Residual demand, any shape
		sorted_costs: On-demand prices in ascending order
		cap: Per-edge on-demand cap

	Returns:
		Cost array shaped like `residual`
	"""
	bundles = shortfall_bundles(residual)
	if cap == 0:
		return np.where(bundles > 0, np.inf, 0.0)
	starts = np.arange(sorted_costs.shape[0]) * cap
	filled = np.clip(bundles[..., None] - starts, 0, cap)
	cost = filled @ sorted_costs
	return np.where(bundles > cap * sorted_costs.shape[0], np.inf, cost)


class SipService:
	"""
	Objective, constraint checks and exact solving of the two-stage model

	All methods are pure functions of their arguments.
	"""

	def __init__(self):
		logger.info("SipService initialized")

	def evaluate_objective(
		self, instance: ProblemInstance, solution: SipSolution
	) -> ObjectiveBreakdown:
		"""
		First-stage cost plus expected on-demand cost

		Args:
			instance: Problem instance
			solution: Decisions shaped like the instance

		Returns:
			Objective breakdown

		Raises:
			DimensionMismatchError: If the shapes differ
		"""
		self._check_dimensions(instance, solution)
		subscribe, reserved, on_demand = solution.arrays()

		membership = float(subscribe.sum(axis=0) @ instance.membership_costs())
		reserved_cost = float(reserved.sum(axis=0) @ instance.reserved_costs())
		expected = float(
			np.einsum(
				"wes,e,s->",
				on_demand,
				instance.on_demand_costs(),
				instance.probabilities(),
			)
		)
		return ObjectiveBreakdown(
			membership_cost=membership,
			reserved_cost=reserved_cost,
			expected_ondemand_cost=expected,
		)

	def supplied(
		self, instance: ProblemInstance, solution: SipSolution
	) -> np.ndarray:
		"""Effective supply per (MSP, scenario), shape (|W|, |Ω|)"""
		self._check_dimensions(instance, solution)
		_, reserved, on_demand = solution.arrays()
		return np.einsum(
			"we,wes->ws", reserved, instance.similarity_tensor()
		) + on_demand.sum(axis=1)

	def check_feasibility(
		self, instance: ProblemInstance, solution: SipSolution
	) -> FeasibilityReport:
		"""
		Check the linking (C1) and demand (C2) constraints

		Args:
			instance: Problem instance
			solution: Decisions shaped like the instance

		Returns:
			Report listing every violation

		Raises:
			DimensionMismatchError: If the shapes differ
		"""
		subscribe, reserved, _ = solution.arrays()
		supplied = self.supplied(instance, solution)
		shortfall = instance.demand_matrix() - supplied

		over_cap = reserved > subscribe * instance.max_reserved
		c1 = [
			C1Violation(
				msp=int(w),
				edge=int(e),
				reserved=int(reserved[w, e]),
				cap=int(subscribe[w, e] * instance.max_reserved),
			)
			for w, e in np.argwhere(over_cap)
		]
		c2 = [
			C2Violation(
				msp=int(w), scenario=int(s), shortfall=float(shortfall[w, s])
			)
			for w, s in np.argwhere(shortfall > SUPPLY_TOLERANCE)
		]
		return FeasibilityReport(c1_violations=c1, c2_violations=c2)

	def on_demand_cap(self, instance: ProblemInstance) -> int:
		"""Largest rounded-up demand: one edge can cover any shortfall"""
		return int(np.ceil(instance.demand_matrix().max()))

	def optimal_recourse(
		self,
		instance: ProblemInstance,
		subscribe: np.ndarray,
		reserved: np.ndarray,
		cap: Optional[int] = None,
	) -> np.ndarray:
		"""
		Cheapest on-demand purchases for fixed first-stage decisions

		Each shortfall is filled greedily from the cheapest edge; among
		equally priced edges the highest index is filled first, which gives
		the lexicographically smallest of the cheapest purchase plans.

		Args:
			instance: Problem instance
			subscribe: Subscription bits, shape (|W|, |E|)
			reserved: Reserved bundles, shape (|W|, |E|)
			cap: Per-edge on-demand cap, the instance default when None

		Returns:
			On-demand bundles, shape (|W|, |E|, |Ω|)

		Raises:
			InfeasibleWithinBoundsError: If a shortfall exceeds the caps
		"""
		cap = self.on_demand_cap(instance) if cap is None else cap
		costs = instance.on_demand_costs()
		order = sorted(range(instance.num_edges), key=lambda e: (costs[e], -e))

		residual = instance.demand_matrix() - np.einsum(
			"we,wes->ws",
			np.asarray(reserved, dtype=float),
			instance.similarity_tensor(),
		)
		bundles = shortfall_bundles(residual).astype(np.int64)
		on_demand = np.zeros(
			(instance.msps, instance.num_edges, instance.num_scenarios),
			dtype=np.int64,
		)
		for w, s in np.argwhere(bundles > 0):
			remaining = int(bundles[w, s])
			for e in order:
				take = min(cap, remaining)
				on_demand[w, e, s] = take
				remaining -= take
				if remaining == 0:
					break
			if remaining:
				raise InfeasibleWithinBoundsError(
					f"MSP {w} scenario {s}: {remaining} bundles short with an "
					f"on-demand cap of {cap} per edge"
				)
		return on_demand

	def search_space_size(
		self, instance: ProblemInstance, bounds: ExactBounds
	) -> int:
		"""
		First-stage candidates the oracle may visit, summed over MSPs

		Each MSP is searched separately, so the count is W per-MSP searches
		of (cap + 2)^E candidates each: per edge the unsubscribed option
		plus every reserved count up to the cap. The exact budget is
		compared against this sum, not against the joint product.
		"""
		reserved_cap = self._reserved_cap(instance, bounds)
		return instance.msps * (reserved_cap + 2) ** instance.num_edges

	def solve_exact(
		self, instance: ProblemInstance, bounds: Optional[ExactBounds] = None
	) -> ExactResult:
		"""
		Exact minimum by depth-first branch and bound

		The recourse for fixed first-stage decisions is solved in closed
		form, and the problem separates by MSP, so the search runs over
		(subscribe, reserved) per MSP. Ties within 1e-9 go to the
		lexicographically smallest decision vector.

		Args:
			instance: Problem instance
			bounds: Reserved and on-demand caps plus the candidate budget

		Returns:
			Optimal solution with its objective

		Raises:
			SearchBudgetExceededError: If the search space exceeds the budget
			InfeasibleWithinBoundsError: If no candidate meets demand
		"""
		bounds = bounds or ExactBounds()
		size = self.search_space_size(instance, bounds)
		if size > bounds.budget:
			raise SearchBudgetExceededError(size, bounds.budget)

		reserved_cap = self._reserved_cap(instance, bounds)
		on_demand_cap = (
			self.on_demand_cap(instance)
			if bounds.on_demand_cap is None
			else bounds.on_demand_cap
		)
		logger.info(
			f"Solving exactly (search space: {size}, reserved cap: "
			f"{reserved_cap}, on-demand cap: {on_demand_cap})"
		)

		shape = (instance.msps, instance.num_edges)
		subscribe = np.zeros(shape, dtype=np.int64)
		reserved = np.zeros_like(subscribe)
		nodes = 0
		for w in range(instance.msps):
			search = _MspSearch(instance, w, reserved_cap, on_demand_cap)
			best_sub, best_res, best_obj = search.run()
			if not math.isfinite(best_obj):
				raise InfeasibleWithinBoundsError(
					f"MSP {w}: no candidate meets demand with reserved cap "
					f"{reserved_cap} and on-demand cap {on_demand_cap}"
				)
			subscribe[w] = best_sub
			reserved[w] = best_res
			nodes += search.nodes

		on_demand = self.optimal_recourse(
			instance, subscribe, reserved, on_demand_cap
		)
		solution = SipSolution.from_arrays(subscribe, reserved, on_demand)
		objective = self.evaluate_objective(instance, solution)

		logger.info(
			f"Exact optimum {objective.total:.6f} after {nodes} nodes"
		)
		return ExactResult(
			solution=solution,
			objective=objective,
			search_space_size=size,
			nodes_explored=nodes,
		)

	def _reserved_cap(
		self, instance: ProblemInstance, bounds: ExactBounds
	) -> int:
		if bounds.reserved_cap is None:
			return instance.max_reserved
		return min(bounds.reserved_cap, instance.max_reserved)

	def _check_dimensions(
		self, instance: ProblemInstance, solution: SipSolution
	) -> None:
		expected = (instance.msps, instance.num_edges, instance.num_scenarios)
		if tuple(solution.shape) != expected:
			raise DimensionMismatchError(
				f"Solution has shape {tuple(solution.shape)}, instance "
				f"expects {expected}"
			)


class _MspSearch:
	"""
	Branch and bound over one MSP's (subscribe, reserved) choices

	Edges are fixed one at a time; at each level every option of the edge
	(unsubscribed, or subscribed with 0..cap reserved bundles) is bounded
	at once and children are visited in order of increasing bound.
	"""

	def __init__(
		self,
		instance: ProblemInstance,
		msp: int,
		reserved_cap: int,
		on_demand_cap: int,
	):
		self.num_edges = instance.num_edges
		self.probabilities = instance.probabilities()
		self.demand = instance.demand_matrix()[msp]
		similarity = instance.similarity_tensor()[msp]
		self.similarity = similarity
		membership = instance.membership_costs()
		reserved = instance.reserved_costs()
		self.sorted_costs = np.sort(instance.on_demand_costs())
		self.on_demand_cap = on_demand_cap
		self.nodes = 0

		values = np.arange(reserved_cap + 1)
		self.option_subscribe = (0,) + (1,) * (reserved_cap + 1)
		self.option_reserved = (0,) + tuple(values.tolist())
		self.option_cost = [
			np.concatenate([[0.0], membership[e] + reserved[e] * values])
			for e in range(self.num_edges)
		]
		self.option_supply = [
			np.concatenate([[0], values])[:, None] * similarity[e][None, :]
			for e in range(self.num_edges)
		]

		full_supply = reserved_cap * similarity
		self.suffix_supply = np.vstack(
			[
				np.cumsum(full_supply[::-1], axis=0)[::-1],
				np.zeros(len(self.demand)),
			]
		)
		self.marginal = self._largest_marginal_cost()
		gain = np.maximum(
			0.0,
			reserved_cap
			* (self.marginal * (similarity @ self.probabilities) - reserved)
			- membership,
		)
		self.suffix_gain = np.append(np.cumsum(gain[::-1])[::-1], 0.0)

		self.best_objective = math.inf
		self.best_key: tuple[tuple[int, ...], tuple[int, ...]] = (
			(1,) * self.num_edges,
			(reserved_cap + 1,) * self.num_edges,
		)
		self._seed(
			(0,) * self.num_edges,
			(0,) * self.num_edges,
		)
		self._seed(
			(1,) * self.num_edges,
			(reserved_cap,) * self.num_edges,
		)

	def run(self) -> tuple[tuple[int, ...], tuple[int, ...], float]:
		self._branch(0, 0.0, self.demand, (), ())
		subscribe, reserved = self.best_key
		return subscribe, reserved, self.best_objective

	def _expected_recourse(self, residual: np.ndarray) -> np.ndarray:
		return (
			recourse_cost(residual, self.sorted_costs, self.on_demand_cap)
			@ self.probabilities
		)

	def _largest_marginal_cost(self) -> float:
		"""Highest on-demand price the greedy fill can reach"""
		bundles = int(shortfall_bundles(self.demand).max())
		if bundles == 0 or self.on_demand_cap == 0:
			return 0.0
		slot = min((bundles - 1) // self.on_demand_cap, self.num_edges - 1)
		return float(self.sorted_costs[slot])

	def _seed(
		self, subscribe: tuple[int, ...], reserved: tuple[int, ...]
	) -> None:
		residual = self.demand - np.asarray(reserved) @ self.similarity
		cost = sum(
			self.option_cost[e][1 + reserved[e]] if subscribe[e] else 0.0
			for e in range(self.num_edges)
		)
		objective = float(cost + self._expected_recourse(residual))
		self._offer(objective, (subscribe, reserved))

	def _offer(
		self,
		objective: float,
		key: tuple[tuple[int, ...], tuple[int, ...]],
	) -> None:
		if objective < self.best_objective - TIE_TOLERANCE or (
			objective <= self.best_objective + TIE_TOLERANCE
			and key < self.best_key
		):
			self.best_objective = objective
			self.best_key = key

	def _bounds(
		self, level: int, fixed: np.ndarray, residual: np.ndarray
	) -> np.ndarray:
		"""Lower bounds after fixing edges 0..level, exact at the leaves"""
		remaining = level + 1
		if remaining == self.num_edges:
			return fixed + self._expected_recourse(residual)

		# remaining edges supply at full cap for free
		optimistic = fixed + self._expected_recourse(
			residual - self.suffix_supply[remaining]
		)
		# every remaining bundle saves at most the largest marginal price
		current = self._expected_recourse(residual)
		linear = np.where(
			np.isfinite(current),
			fixed + current - self.marginal - self.suffix_gain[remaining],
			-np.inf,
		)
		return np.maximum(optimistic, linear)

	def _may_precede(
		self, subscribe: tuple[int, ...], reserved: tuple[int, ...]
	) -> bool:
		"""Whether a completion of the prefix is lexicographically smaller"""
		padding = (0,) * (self.num_edges - len(subscribe))
		return (subscribe + padding, reserved + padding) < self.best_key

	def _branch(
		self,
		level: int,
		fixed_cost: float,
		residual: np.ndarray,
		subscribe: tuple[int, ...],
		reserved: tuple[int, ...],
	) -> None:
		fixed = fixed_cost + self.option_cost[level]
		residuals = residual - self.option_supply[level]
		bounds = self._bounds(level, fixed, residuals)
		self.nodes += bounds.shape[0]

		for option in np.argsort(bounds, kind="stable"):
			bound = float(bounds[option])
			if not math.isfinite(bound) or (
				bound > self.best_objective + TIE_TOLERANCE
			):
				break
			child_subscribe = subscribe + (self.option_subscribe[option],)
			child_reserved = reserved + (self.option_reserved[option],)
			if bound >= self.best_objective - TIE_TOLERANCE and not (
				self._may_precede(child_subscribe, child_reserved)
			):
				continue
			if level + 1 == self.num_edges:
				self._offer(bound, (child_subscribe, child_reserved))
			else:
				self._branch(
					level + 1,
					float(fixed[option]),
					residuals[option],
					child_subscribe,
					child_reserved,
				)
