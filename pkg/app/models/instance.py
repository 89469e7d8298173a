"""
Problem-instance models: edge devices, demand scenarios and the scale
presets instances are generated from
"""

from typing import Annotated, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

SCHEMA_VERSION = 1
DEFAULT_MAX_RESERVED = 31
DEFAULT_COST_RATIO = (10.0, 1.0, 5.0)
PROBABILITY_TOLERANCE = 1e-9

Similarity = Annotated[float, Field(ge=0.0, le=1.0)]


class EdgeDevice(BaseModel):
	"""Data source with membership and per-bundle transmission prices"""

	id: int = Field(..., ge=0, description="Edge device index")
	memb_cost: float = Field(..., ge=0.0, description="Membership fee")
	resv_trans_cost: float = Field(
		..., ge=0.0, description="Reserved transmission cost per bundle"
	)
	ondem_trans_cost: float = Field(
		..., ge=0.0, description="On-demand transmission cost per bundle"
	)

	model_config = ConfigDict(frozen=True)

	@model_validator(mode="after")
	def _on_demand_not_cheaper(self) -> "EdgeDevice":
		if self.ondem_trans_cost < self.resv_trans_cost:
			raise ValueError(
				f"edge {self.id}: on-demand cost {self.ondem_trans_cost} is "
				f"below reserved cost {self.resv_trans_cost}"
			)
		return self


class Scenario(BaseModel):
	"""
	A possible future state with its probability, per-MSP demand and
	per-(MSP, edge) similarity scores
	"""

	id: int = Field(..., ge=0, description="Scenario index")
	probability: float = Field(..., ge=0.0, le=1.0)
	demand: list[Annotated[int, Field(ge=0)]] = Field(
		..., min_length=1, description="Effective bundle demand per MSP"
	)
	similarity: list[list[Similarity]] = Field(
		..., min_length=1, description="Similarity score per MSP and edge"
	)

	model_config = ConfigDict(frozen=True)


class ProblemInstance(BaseModel):
	"""
	Complete description of MSPs, edge devices and scenarios

	Instances are immutable once validated and can be shared read-only
	between threads.
	"""

	schema_version: int = Field(default=SCHEMA_VERSION)
	msps: int = Field(..., ge=1, description="Number of MSPs |W|")
	max_reserved: int = Field(
		default=DEFAULT_MAX_RESERVED,
		ge=1,
		description="Reserved bundle cap X per subscription",
	)
	edges: list[EdgeDevice] = Field(..., min_length=1)
	scenarios: list[Scenario] = Field(..., min_length=1)
	seed: Optional[int] = Field(None, description="Generation seed")
	preset: Optional[str] = Field(None, description="Generating preset")

	model_config = ConfigDict(frozen=True)

	@model_validator(mode="after")
	def _check_shapes_and_probabilities(self) -> "ProblemInstance":
		for scenario in self.scenarios:
			if len(scenario.demand) != self.msps:
				raise ValueError(
					f"scenario {scenario.id}: expected {self.msps} demands, "
					f"got {len(scenario.demand)}"
				)
			if len(scenario.similarity) != self.msps or any(
				len(row) != len(self.edges) for row in scenario.similarity
			):
				raise ValueError(
					f"scenario {scenario.id}: similarity must be "
					f"{self.msps}x{len(self.edges)}"
				)
		total = sum(scenario.probability for scenario in self.scenarios)
		if abs(total - 1.0) > PROBABILITY_TOLERANCE:
			raise ValueError(
				f"scenario probabilities sum to {total!r}, expected 1"
			)
		return self

	@property
	def num_edges(self) -> int:
		return len(self.edges)

	@property
	def num_scenarios(self) -> int:
		return len(self.scenarios)

	def probabilities(self) -> np.ndarray:
		"""Scenario probabilities, shape (|Ω|,)"""
		return np.array([s.probability for s in self.scenarios], dtype=float)

	def demand_matrix(self) -> np.ndarray:
		"""Demand F̄_w(λ_s), shape (|W|, |Ω|)"""
		return np.array([s.demand for s in self.scenarios], dtype=float).T

	def similarity_tensor(self) -> np.ndarray:
		"""Similarity S_{w,e}(λ_s), shape (|W|, |E|, |Ω|)"""
		stacked = np.array([s.similarity for s in self.scenarios], dtype=float)
		return np.transpose(stacked, (1, 2, 0))

	def membership_costs(self) -> np.ndarray:
		return np.array([e.memb_cost for e in self.edges], dtype=float)

	def reserved_costs(self) -> np.ndarray:
		return np.array([e.resv_trans_cost for e in self.edges], dtype=float)

	def on_demand_costs(self) -> np.ndarray:
		return np.array([e.ondem_trans_cost for e in self.edges], dtype=float)


class ScaleConfig(BaseModel):
	"""
	Counts and pricing an instance is generated from

	The demand mean is the expected grand total over all MSPs and
	scenarios. Costs follow `cost_ratio` (membership : reserved : on-demand)
	times `base_price`, optionally jittered per edge.
	"""

	name: Optional[str] = Field(None, description="Preset label")
	msps: int = Field(..., ge=1)
	edges: int = Field(..., ge=1)
	scenarios: int = Field(..., ge=1)
	demand_mean: float = Field(..., ge=0.0)
	max_reserved: int = Field(default=DEFAULT_MAX_RESERVED, ge=1)
	base_price: float = Field(default=1.0, gt=0.0)
	cost_ratio: tuple[float, float, float] = Field(default=DEFAULT_COST_RATIO)
	similarity_low: float = Field(default=0.5, ge=0.0, le=1.0)
	similarity_high: float = Field(default=1.0, ge=0.0, le=1.0)
	cost_jitter: float = Field(
		default=0.0,
		ge=0.0,
		lt=1.0,
		description="Half-width of the per-edge multiplicative cost factor",
	)

	model_config = ConfigDict(frozen=True)

	@model_validator(mode="after")
	def _check_bounds(self) -> "ScaleConfig":
		if self.similarity_low > self.similarity_high:
			raise ValueError("similarity_low must not exceed similarity_high")
		membership, reserved, on_demand = self.cost_ratio
		if min(self.cost_ratio) < 0:
			raise ValueError("cost ratio entries must be nonnegative")
		if on_demand < reserved:
			raise ValueError(
				"on-demand ratio must not be below the reserved ratio"
			)
		return self


PRESETS: dict[str, ScaleConfig] = {
	"S": ScaleConfig(name="S", msps=1, edges=5, scenarios=2, demand_mean=2000),
	"M": ScaleConfig(
		name="M", msps=2, edges=10, scenarios=3, demand_mean=6000
	),
	# the scale table lists 25 edge devices for L; it is the canonical source
	"L": ScaleConfig(
		name="L", msps=5, edges=25, scenarios=5, demand_mean=15000
	),
}
