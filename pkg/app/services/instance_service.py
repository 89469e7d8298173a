"""
Instance generation and instance file access
"""

import logging
from pathlib import Path
from typing import Any, Mapping

import numpy as np
from pydantic import ValidationError

from app.exceptions.instance_exceptions import InvalidScaleError
from app.models.instance import (
	PRESETS,
	EdgeDevice,
	ProblemInstance,
	ScaleConfig,
	Scenario,
)
from app.repositories.base import BaseDocumentRepository

logger = logging.getLogger(__name__)

ScaleSpec = str | ScaleConfig | Mapping[str, Any]


class InstanceService:
	"""
	Builds problem instances from scale presets or custom configurations
	and moves them to and from instance files
	"""

	def __init__(
		self, instance_repository: BaseDocumentRepository[ProblemInstance]
	):
		"""
		Initialize instance service with dependency injection

		Args:
			instance_repository: Instance file repository implementation
		"""
		self._instance_repository = instance_repository
		logger.info("InstanceService initialized")

	def resolve_scale(self, scale: ScaleSpec) -> ScaleConfig:
		"""
		Turn a preset name or a custom configuration into a ScaleConfig

		Raises:
			InvalidScaleError: If the preset is unknown or the config invalid
		"""
		if isinstance(scale, ScaleConfig):
			return scale
		if isinstance(scale, str):
			try:
				return PRESETS[scale.upper()]
			except KeyError:
				raise InvalidScaleError(
					f"Unknown preset {scale!r}, expected one of "
					f"{', '.join(PRESETS)}"
				) from None
		try:
			return ScaleConfig.model_validate(dict(scale))
		except ValidationError as e:
			details = "; ".join(
				f"{'.'.join(str(p) for p in err['loc'])}: {err['msg']}"
				for err in e.errors()
			)
			raise InvalidScaleError(f"Invalid scale config: {details}") from e

	def generate_instance(
		self, scale: ScaleSpec, seed: int
	) -> ProblemInstance:
		"""
		Draw a random instance

		All randomness comes from one generator seeded with `seed`, consumed
		in a fixed order, so equal (scale, seed) pairs give equal instances.

		Args:
			scale: Preset name (S, M, L), ScaleConfig or mapping of its fields
			seed: Generation seed

		Returns:
			Validated problem instance

		Raises:
			InvalidScaleError: If the scale cannot be resolved or the seed
				is negative
		"""
		if seed < 0:
			raise InvalidScaleError(
				f"Generation seed must be nonnegative, got {seed}"
			)
		config = self.resolve_scale(scale)
		logger.info(
			f"Generating instance (preset: {config.name}, seed: {seed}, "
			f"|W|={config.msps}, |E|={config.edges}, |Ω|={config.scenarios})"
		)
		rng = np.random.default_rng(seed)

		weights = rng.uniform(size=config.scenarios)
		probabilities = weights / weights.sum()
		demand = rng.poisson(
			config.demand_mean / (config.msps * config.scenarios),
			size=(config.msps, config.scenarios),
		)
		similarity = rng.uniform(
			config.similarity_low,
			config.similarity_high,
			size=(config.scenarios, config.msps, config.edges),
		)
		if config.cost_jitter > 0:
			factors = rng.uniform(
				1.0 - config.cost_jitter,
				1.0 + config.cost_jitter,
				size=config.edges,
			)
		else:
			factors = np.ones(config.edges)

		membership, reserved, on_demand = (
			config.base_price * ratio for ratio in config.cost_ratio
		)
		edges = [
			EdgeDevice(
				id=e,
				memb_cost=float(membership * factors[e]),
				resv_trans_cost=float(reserved * factors[e]),
				ondem_trans_cost=float(on_demand * factors[e]),
			)
			for e in range(config.edges)
		]
		scenarios = [
			Scenario(
				id=s,
				probability=float(probabilities[s]),
				demand=demand[:, s].tolist(),
				similarity=similarity[s].tolist(),
			)
			for s in range(config.scenarios)
		]
		instance = ProblemInstance(
			msps=config.msps,
			max_reserved=config.max_reserved,
			edges=edges,
			scenarios=scenarios,
			seed=seed,
			preset=config.name,
		)

		logger.info(
			f"Instance generated with total demand {int(demand.sum())}"
		)
		return instance

	def load_instance(self, path: Path) -> ProblemInstance:
		return self._instance_repository.load(path)

	def save_instance(self, instance: ProblemInstance, path: Path) -> Path:
		return self._instance_repository.save(instance, path)
