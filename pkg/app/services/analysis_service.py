"""
Measurements of the encoding's quantization gap and of how often the
QUBO ground state agrees with the exact SIP optimum
"""

import itertools
import logging
from typing import Optional, Sequence

import numpy as np

from app.exceptions.optimization_exceptions import InfeasibleWithinBoundsError
from app.models.bench import (
	OracleAgreementReport,
	OracleAgreementRow,
	QuantizationReport,
	QuantizationRow,
)
from app.models.instance import (
	DEFAULT_COST_RATIO,
	EdgeDevice,
	ProblemInstance,
	Scenario,
)
from app.models.qubo import (
	DEFAULT_ALPHA,
	DEFAULT_BETA,
	EncodingScheme,
	PenaltyMode,
)
from app.models.solution import DEFAULT_EXACT_BUDGET, ExactBounds
from app.services.encoding_service import EncodingService, bit_width
from app.services.instance_service import InstanceService
from app.services.qubo_service import QuboService
from app.services.sip_service import SipService, recourse_cost
from app.services.solvers.exhaustive import ExhaustiveSolver

logger = logging.getLogger(__name__)

AGREEMENT_TOLERANCE = 1e-6
DEFAULT_K_VALUES = (3, 4, 5)
TINY_MAX_DEMAND = 3
TINY_MAX_EDGES = 3
TINY_MAX_SCENARIOS = 2
TINY_RESERVED_CAPS = (1, 3)


def relative_gap(value: float, reference: float) -> Optional[float]:
	"""100·(value − reference)/reference; 0 when both are 0"""
	if reference > 0:
		return 100.0 * (value - reference) / reference
	return 0.0 if value == reference else None


class AnalysisService:
	"""
	Runs the quantization sweep and the QUBO-versus-oracle audit
	"""

	def __init__(
		self,
		instance_service: InstanceService,
		sip_service: SipService,
		encoding_service: EncodingService,
		qubo_service: QuboService,
		exhaustive_solver: ExhaustiveSolver,
	):
		"""
		Initialize analysis service with dependency injection

		Args:
			instance_service: Instance generation
			sip_service: Exact oracle and objective evaluation
			encoding_service: Encoding and repair
			qubo_service: QUBO construction
			exhaustive_solver: Ground-state solver for small QUBOs
		"""
		self._instance_service = instance_service
		self._sip_service = sip_service
		self._encoding_service = encoding_service
		self._qubo_service = qubo_service
		self._exhaustive_solver = exhaustive_solver
		logger.info("AnalysisService initialized")

	def measure_quantization(
		self,
		preset: str = "S",
		seeds: Sequence[int] = tuple(range(20)),
		k_values: Sequence[int] = DEFAULT_K_VALUES,
		budget: int = DEFAULT_EXACT_BUDGET,
	) -> QuantizationReport:
		"""
		Gap between the exact optimum and the best encodable solution

		Args:
			preset: Scale preset instances are drawn from
			seeds: Generation seeds
			k_values: Reserved bit widths to compare
			budget: Oracle budget per solve

		Returns:
			Per-seed gaps with their median and maximum per K, and the
			number of seeds per K where no encodable solution meets demand
		"""
		config = self._instance_service.resolve_scale(preset)
		logger.info(
			f"Measuring quantization on {config.name} over {len(seeds)} seeds "
			f"for K in {list(k_values)}"
		)
		rows: list[QuantizationRow] = []
		for seed in seeds:
			instance = self._instance_service.generate_instance(config, seed)
			rows.extend(
				self.quantize_instance(instance, k_values, seed, budget)
			)

		median_gap: dict[int, Optional[float]] = {}
		max_gap: dict[int, Optional[float]] = {}
		infeasible: dict[int, int] = {}
		for k_bits in k_values:
			selected = [row for row in rows if row.k_bits == k_bits]
			gaps = [
				row.gap_percent
				for row in selected
				if row.gap_percent is not None
			]
			median_gap[k_bits] = float(np.median(gaps)) if gaps else None
			max_gap[k_bits] = float(np.max(gaps)) if gaps else None
			infeasible[k_bits] = sum(
				row.capped_objective is None for row in selected
			)

		logger.info(
			f"Median quantization gap per K: {median_gap}, seeds without "
			f"an encodable feasible solution: {infeasible}"
		)
		return QuantizationReport(
			preset=config.name or "custom",
			max_reserved=config.max_reserved,
			rows=rows,
			median_gap_percent=median_gap,
			max_gap_percent=max_gap,
			infeasible_count=infeasible,
		)

	def quantize_instance(
		self,
		instance: ProblemInstance,
		k_values: Sequence[int] = DEFAULT_K_VALUES,
		seed: int = 0,
		budget: int = DEFAULT_EXACT_BUDGET,
	) -> list[QuantizationRow]:
		"""
		Exact optimum against the best solution each K-bit encoding holds

		Reserved bundles are capped at min(2^K − 1, X) and on-demand
		bundles at 2^L − 1 per edge, with L the width the encoding gives
		the on-demand cap U.

		Args:
			instance: Problem instance
			k_values: Reserved bit widths to compare
			seed: Seed recorded on the rows
			budget: Oracle budget per solve

		Returns:
			One row per K
		"""
		exact = self._sip_service.solve_exact(
			instance, ExactBounds(budget=budget)
		).objective.total
		l_bits = bit_width(self._sip_service.on_demand_cap(instance))
		on_demand_cap = 2**l_bits - 1

		rows = []
		for k_bits in k_values:
			reserved_cap = min(2**k_bits - 1, instance.max_reserved)
			bounds = ExactBounds(
				reserved_cap=reserved_cap,
				on_demand_cap=on_demand_cap,
				budget=budget,
			)
			try:
				capped = self._sip_service.solve_exact(
					instance, bounds
				).objective.total
			except InfeasibleWithinBoundsError as e:
				logger.warning(f"Seed {seed}, K={k_bits}: {e.message}")
				rows.append(
					QuantizationRow(
						seed=seed,
						k_bits=k_bits,
						reserved_cap=reserved_cap,
						on_demand_cap=on_demand_cap,
						exact_objective=exact,
						infeasible_reason=e.message,
					)
				)
				continue
			rows.append(
				QuantizationRow(
					seed=seed,
					k_bits=k_bits,
					reserved_cap=reserved_cap,
					on_demand_cap=on_demand_cap,
					exact_objective=exact,
					capped_objective=capped,
					gap_percent=relative_gap(capped, exact),
				)
			)
		return rows

	def tiny_instance(self, rng: np.random.Generator) -> ProblemInstance:
		"""
		Random single-MSP instance small enough for exhaustive QUBO search

		Similarity is 1 everywhere and demands are at most 3, so X = 2^K − 1
		for X in {1, 3} and exact demand matching is always expressible.
		"""
		edges = int(rng.integers(1, TINY_MAX_EDGES + 1))
		scenarios = int(rng.integers(1, TINY_MAX_SCENARIOS + 1))
		max_reserved = int(rng.choice(TINY_RESERVED_CAPS))
		factors = rng.uniform(0.5, 1.5, size=edges)
		weights = rng.uniform(size=scenarios)
		demand = rng.integers(0, TINY_MAX_DEMAND + 1, size=scenarios)

		membership, reserved, on_demand = DEFAULT_COST_RATIO
		return ProblemInstance(
			msps=1,
			max_reserved=max_reserved,
			edges=[
				EdgeDevice(
					id=e,
					memb_cost=float(membership * factors[e]),
					resv_trans_cost=float(reserved * factors[e]),
					ondem_trans_cost=float(on_demand * factors[e]),
				)
				for e in range(edges)
			],
			scenarios=[
				Scenario(
					id=s,
					probability=float(weights[s] / weights.sum()),
					demand=[int(demand[s])],
					similarity=[[1.0] * edges],
				)
				for s in range(scenarios)
			],
		)

	def measure_oracle_agreement(
		self,
		count: int = 50,
		seed: int = 0,
		alpha: float = DEFAULT_ALPHA,
		beta: float = DEFAULT_BETA,
	) -> OracleAgreementReport:
		"""
		Compare the repaired QUBO ground state with the exact optimum

		Instances are split by whether an optimum with supply exactly equal
		to demand exists; only then can the squared demand penalty reach
		the SIP optimum.

		Args:
			count: Number of tiny instances
			seed: Seed of the instance stream
			alpha: Linking penalty weight
			beta: Demand penalty weight

		Returns:
			Per-instance outcomes and agreement counts per class
		"""
		logger.info(f"Auditing QUBO ground states on {count} tiny instances")
		rng = np.random.default_rng(seed)
		rows: list[OracleAgreementRow] = []
		for index in range(count):
			instance = self.tiny_instance(rng)
			encoding = self._encoding_service.build_encoding(instance)
			problem = self._qubo_service.build_qubo(
				instance,
				encoding,
				alpha=alpha,
				beta=beta,
				mode=PenaltyMode.PAPER,
			)
			report = self._exhaustive_solver.solve(problem, seed=index)
			repaired = self._encoding_service.decode_and_repair(
				report.best_bits, instance, encoding
			)
			qubo_objective = self._sip_service.evaluate_objective(
				instance, repaired.solution
			).total
			exact = self._sip_service.solve_exact(instance).objective.total
			matching = self._best_matching_objective(instance, encoding)
			rows.append(
				OracleAgreementRow(
					index=index,
					num_vars=problem.num_vars,
					exact_objective=exact,
					qubo_objective=qubo_objective,
					matching_admitted=matching <= exact + AGREEMENT_TOLERANCE,
					agrees=abs(qubo_objective - exact) <= AGREEMENT_TOLERANCE,
				)
			)

		admitted = [row for row in rows if row.matching_admitted]
		forced = [row for row in rows if not row.matching_admitted]
		result = OracleAgreementReport(
			rows=rows,
			admitted=len(admitted),
			admitted_agreeing=sum(row.agrees for row in admitted),
			oversupply_forced=len(forced),
			oversupply_agreeing=sum(row.agrees for row in forced),
		)
		logger.info(
			f"Agreement: {result.admitted_agreeing}/{result.admitted} with "
			f"exact matching, {result.oversupply_agreeing}/"
			f"{result.oversupply_forced} with forced over-supply"
		)
		return result

	def _best_matching_objective(
		self, instance: ProblemInstance, encoding: EncodingScheme
	) -> float:
		"""
		Cheapest objective whose supply equals demand in every scenario

		Reserved bundles are limited by X and the encoding; on-demand
		bundles by the encoding's per-edge maximum. Unit similarity is
		assumed for the matching test. Returns infinity when none exists.
		"""
		cap = min(instance.max_reserved, encoding.reserved_max)
		membership = instance.membership_costs()
		reserved_costs = instance.reserved_costs()
		sorted_costs = np.sort(instance.on_demand_costs())
		probabilities = instance.probabilities()
		best = 0.0
		for w in range(instance.msps):
			demand = instance.demand_matrix()[w]
			msp_best = np.inf
			options = [(0, 0)] + [(1, v) for v in range(cap + 1)]
			choices = itertools.product(options, repeat=instance.num_edges)
			for choice in choices:
				subscribe = np.array([m for m, _ in choice])
				reserved = np.array([v for _, v in choice])
				residual = demand - reserved.sum()
				if (residual < 0).any():
					continue
				recourse = recourse_cost(
					residual, sorted_costs, encoding.on_demand_max
				)
				cost = (
					subscribe @ membership
					+ reserved @ reserved_costs
					+ recourse @ probabilities
				)
				msp_best = min(msp_best, float(cost))
			best += msp_best
		return float(best)
