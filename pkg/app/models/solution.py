"""
Two-stage decision models: solutions, objective breakdowns, feasibility
reports and the oracle's bounds
"""

from typing import Annotated, Optional

import numpy as np
from pydantic import (
	BaseModel,
	ConfigDict,
	Field,
	computed_field,
	model_validator,
)

from app.models.instance import SCHEMA_VERSION

DEFAULT_EXACT_BUDGET = 10**8

Count = Annotated[int, Field(ge=0)]
Bit = Annotated[int, Field(ge=0, le=1)]


class SipSolution(BaseModel):
	"""
	Integer first- and second-stage decisions

	subscribe[w][e] is m (C3), reserved[w][e] is m̃ (C4) and
	on_demand[w][e][s] is m^(o)(λ_s) (C5).
	"""

	subscribe: list[list[Bit]]
	reserved: list[list[Count]]
	on_demand: list[list[list[Count]]]

	model_config = ConfigDict(frozen=True)

	@model_validator(mode="after")
	def _check_rectangular(self) -> "SipSolution":
		msps = len(self.subscribe)
		edges = len(self.subscribe[0]) if msps else 0
		scenarios = len(self.on_demand[0][0]) if msps and edges else 0
		if (
			np.shape(self.subscribe) != (msps, edges)
			or np.shape(self.reserved) != (msps, edges)
			or np.shape(self.on_demand) != (msps, edges, scenarios)
		):
			raise ValueError("solution arrays have inconsistent shapes")
		return self

	@classmethod
	def from_arrays(
		cls,
		subscribe: np.ndarray,
		reserved: np.ndarray,
		on_demand: np.ndarray,
	) -> "SipSolution":
		return cls(
			subscribe=np.asarray(subscribe, dtype=int).tolist(),
			reserved=np.asarray(reserved, dtype=int).tolist(),
			on_demand=np.asarray(on_demand, dtype=int).tolist(),
		)

	@classmethod
	def zeros(cls, msps: int, edges: int, scenarios: int) -> "SipSolution":
		return cls.from_arrays(
			np.zeros((msps, edges), dtype=int),
			np.zeros((msps, edges), dtype=int),
			np.zeros((msps, edges, scenarios), dtype=int),
		)

	@property
	def shape(self) -> tuple[int, int, int]:
		"""(|W|, |E|, |Ω|) of the decision arrays"""
		return np.shape(self.on_demand)

	def arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
		return (
			np.array(self.subscribe, dtype=np.int64),
			np.array(self.reserved, dtype=np.int64),
			np.array(self.on_demand, dtype=np.int64),
		)

	def decision_vector(self) -> tuple[int, ...]:
		"""Row-major (subscribe, reserved, on_demand) used for tie-breaking"""
		subscribe, reserved, on_demand = self.arrays()
		return tuple(
			np.concatenate(
				[subscribe.ravel(), reserved.ravel(), on_demand.ravel()]
			).tolist()
		)


class ObjectiveBreakdown(BaseModel):
	"""First-stage costs plus expected recourse cost"""

	membership_cost: float = Field(..., ge=0.0)
	reserved_cost: float = Field(..., ge=0.0)
	expected_ondemand_cost: float = Field(..., ge=0.0)

	model_config = ConfigDict(frozen=True)

	@computed_field
	@property
	def total(self) -> float:
		return (
			self.membership_cost
			+ self.reserved_cost
			+ self.expected_ondemand_cost
		)


class C1Violation(BaseModel):
	"""Reserved bundles above m·X at one (MSP, edge)"""

	msp: int
	edge: int
	reserved: int
	cap: int

	model_config = ConfigDict(frozen=True)


class C2Violation(BaseModel):
	"""Unmet effective demand of one MSP in one scenario"""

	msp: int
	scenario: int
	shortfall: float = Field(..., gt=0.0)

	model_config = ConfigDict(frozen=True)


class FeasibilityReport(BaseModel):
	"""Violations of the linking (C1) and demand (C2) constraints"""

	c1_violations: list[C1Violation] = Field(default_factory=list)
	c2_violations: list[C2Violation] = Field(default_factory=list)

	model_config = ConfigDict(frozen=True)

	@computed_field
	@property
	def feasible(self) -> bool:
		return not self.c1_violations and not self.c2_violations


class ExactBounds(BaseModel):
	"""
	Caps for exact enumeration

	None means the instance default: X for reserved bundles and the
	largest rounded-up demand for on-demand bundles per edge.
	"""

	reserved_cap: Optional[int] = Field(None, ge=0)
	on_demand_cap: Optional[int] = Field(None, ge=0)
	budget: int = Field(default=DEFAULT_EXACT_BUDGET, ge=1)

	model_config = ConfigDict(frozen=True)


class ExactResult(BaseModel):
	"""Optimal solution returned by the exact oracle"""

	solution: SipSolution
	objective: ObjectiveBreakdown
	search_space_size: int
	nodes_explored: int

	model_config = ConfigDict(frozen=True)


class RepairResult(BaseModel):
	"""Decoded solution before and after feasibility repair"""

	decoded: SipSolution
	solution: SipSolution
	before: FeasibilityReport
	after: FeasibilityReport

	model_config = ConfigDict(frozen=True)


class SolutionRecord(BaseModel):
	"""Solution file contents: decisions plus audit information"""

	schema_version: int = Field(default=SCHEMA_VERSION)
	instance_id: str
	solver: str
	seed: Optional[int] = None
	solution: SipSolution
	objective: ObjectiveBreakdown
	feasibility: FeasibilityReport
