"""
Unit tests for AnalysisService
Following AAA (Arrange-Act-Assert) pattern
"""

import numpy as np
import pytest

from app.models.instance import ScaleConfig
from app.services.analysis_service import relative_gap
from tests.factories import create_instance


@pytest.mark.unit
class TestRelativeGap:
	"""Test the relative gap helper."""

	@pytest.mark.parametrize(
		("value", "reference", "expected"),
		[(110.0, 100.0, 10.0), (100.0, 100.0, 0.0), (0.0, 0.0, 0.0)],
	)
	def test_relative_gap(self, value, reference, expected):
		"""
		GIVEN a value and a reference
		WHEN computing the gap
		THEN it is the percentage above the reference
		"""
		# Act & Assert
		assert relative_gap(value, reference) == pytest.approx(expected)

	def test_undefined_for_zero_reference(self):
		"""
		GIVEN a positive value against a zero reference
		WHEN computing the gap
		THEN there is no gap
		"""
		# Act & Assert
		assert relative_gap(5.0, 0.0) is None


@pytest.mark.unit
class TestTinyInstances:
	"""Test the audit instance stream."""

	def test_tiny_instances_fit_exhaustive_search(
		self, analysis_service, encoding_service
	):
		"""
		GIVEN the audit instance generator
		WHEN drawing instances
		THEN each has one MSP, X in {1, 3} and at most 24 QUBO variables
		"""
		# Arrange
		rng = np.random.default_rng(0)

		for _ in range(30):
			# Act
			instance = analysis_service.tiny_instance(rng)

			# Assert
			assert instance.msps == 1
			assert instance.max_reserved in (1, 3)
			assert instance.demand_matrix().max() <= 3
			assert encoding_service.build_encoding(instance).num_vars <= 24


@pytest.mark.unit
class TestMeasureQuantization:
	"""Test the quantization sweep."""

	def test_gaps_on_small_scale(self, analysis_service):
		"""
		GIVEN a three-edge scale with X = 31
		WHEN comparing encodings with K = 2 and 5
		THEN every seed has an encodable solution and gaps are nonnegative
		"""
		# Arrange
		scale = ScaleConfig(
			name="tiny", msps=1, edges=3, scenarios=2, demand_mean=60
		)

		# Act
		report = analysis_service.measure_quantization(
			scale, seeds=[0, 1, 2], k_values=[2, 5]
		)

		# Assert
		assert report.preset == "tiny"
		assert report.max_reserved == 31
		assert len(report.rows) == 6
		assert report.infeasible_count == {2: 0, 5: 0}
		assert all(row.gap_percent >= -1e-9 for row in report.rows)
		assert report.median_gap_percent[2] >= 0.0
		assert {row.reserved_cap for row in report.rows} == {3, 31}
		assert {row.on_demand_cap for row in report.rows} == {31}

	def test_on_demand_bits_bound_the_capped_solve(self, analysis_service):
		"""
		GIVEN demand 40 that the cheapest edge covers alone when uncapped
		WHEN five on-demand bits limit each edge to 31 bundles
		THEN the rest is bought at the dearer edge and the gap is 22.5 %
		"""
		# Arrange
		instance = create_instance(
			[[40]],
			costs=[(1000.0, 1.0, 10.0), (1000.0, 1.0, 20.0)],
			max_reserved=1,
		)

		# Act
		(row,) = analysis_service.quantize_instance(instance, [1])

		# Assert
		assert row.reserved_cap == 1
		assert row.on_demand_cap == 31
		assert row.exact_objective == pytest.approx(400.0)
		assert row.capped_objective == pytest.approx(490.0)
		assert row.gap_percent == pytest.approx(22.5)
		assert row.infeasible_reason is None

	def test_reports_demand_beyond_encodable_supply(self, analysis_service):
		"""
		GIVEN one edge, X = 1 and demand 40
		WHEN at most 1 reserved and 31 on-demand bundles are encodable
		THEN the row has no capped objective and names the reason
		"""
		# Arrange
		instance = create_instance([[40]], max_reserved=1)

		# Act
		rows = analysis_service.quantize_instance(instance, [1, 5], seed=7)

		# Assert
		assert [row.k_bits for row in rows] == [1, 5]
		for row in rows:
			assert row.seed == 7
			assert row.capped_objective is None
			assert row.gap_percent is None
			assert "no candidate meets demand" in row.infeasible_reason
			assert row.exact_objective > 0.0


@pytest.mark.unit
class TestMeasureOracleAgreement:
	"""Test the QUBO ground-state audit."""

	def test_counts_are_consistent(self, analysis_service):
		"""
		GIVEN a few audit instances
		WHEN comparing ground states with the oracle
		THEN the classes partition the rows and admitted ones agree
		"""
		# Act
		report = analysis_service.measure_oracle_agreement(count=4, seed=1)

		# Assert
		assert len(report.rows) == 4
		assert report.admitted + report.oversupply_forced == 4
		assert report.admitted_agreeing == report.admitted
		for row in report.rows:
			assert row.qubo_objective >= row.exact_objective - 1e-6
