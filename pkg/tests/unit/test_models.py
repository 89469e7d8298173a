"""
Unit tests for domain models
Following AAA (Arrange-Act-Assert) pattern
"""

import numpy as np
import pytest
from pydantic import ValidationError
from scipy import sparse

from app.models.bench import BenchConfig, SolveSettings
from app.models.instance import PRESETS, EdgeDevice, ScaleConfig
from app.models.qubo import EncodingScheme, IsingProblem, QuboProblem
from app.models.solution import (
	ExactBounds,
	FeasibilityReport,
	ObjectiveBreakdown,
	SipSolution,
)
from app.models.solver import AnnealSchedule, CimSchedule
from tests.factories import (
	EdgeDeviceFactory,
	ProblemInstanceFactory,
	ScenarioFactory,
	create_instance,
)


@pytest.mark.unit
class TestProblemInstance:
	"""Test ProblemInstance validation."""

	def test_factory_instance_is_valid(self):
		"""
		GIVEN the instance factory
		WHEN building an instance
		THEN counts and arrays have the expected shapes
		"""
		# Act
		instance = ProblemInstanceFactory()

		# Assert
		assert instance.num_edges == 1
		assert instance.num_scenarios == 1
		assert instance.demand_matrix().shape == (1, 1)
		assert instance.similarity_tensor().shape == (1, 1, 1)

	def test_probabilities_must_sum_to_one(self):
		"""
		GIVEN scenario probabilities summing to 0.8
		WHEN building the instance
		THEN validation fails
		"""
		# Act & Assert
		with pytest.raises(ValidationError, match="sum to"):
			ProblemInstanceFactory(
				scenarios=[
					ScenarioFactory(id=0, probability=0.5),
					ScenarioFactory(id=1, probability=0.3),
				]
			)

	def test_demand_count_must_match_msps(self):
		"""
		GIVEN two MSPs but scenarios carrying a single demand
		WHEN building the instance
		THEN validation fails
		"""
		# Act & Assert
		with pytest.raises(ValidationError, match="expected 2 demands"):
			ProblemInstanceFactory(msps=2)

	def test_similarity_shape_must_match(self):
		"""
		GIVEN a scenario whose similarity has the wrong number of edges
		WHEN building the instance
		THEN validation fails
		"""
		# Act & Assert
		with pytest.raises(ValidationError, match="similarity must be"):
			ProblemInstanceFactory(
				scenarios=[ScenarioFactory(similarity=[[1.0, 0.5]])]
			)

	def test_similarity_bounds(self):
		"""
		GIVEN a similarity above 1
		WHEN building a scenario
		THEN validation fails
		"""
		# Act & Assert
		with pytest.raises(ValidationError):
			ScenarioFactory(similarity=[[1.5]])

	def test_on_demand_must_not_be_cheaper(self):
		"""
		GIVEN an edge whose on-demand price is below its reserved price
		WHEN building the edge
		THEN validation fails
		"""
		# Act & Assert
		with pytest.raises(ValidationError, match="below reserved cost"):
			EdgeDevice(
				id=0, memb_cost=10.0, resv_trans_cost=2.0, ondem_trans_cost=1.0
			)

	def test_edge_factory_keeps_cost_ratio(self):
		"""
		GIVEN the edge factory
		WHEN building an edge
		THEN membership and on-demand prices follow the 10:1:5 ratio
		"""
		# Act
		edge = EdgeDeviceFactory()

		# Assert
		assert edge.memb_cost == pytest.approx(10.0 * edge.resv_trans_cost)
		assert edge.ondem_trans_cost == pytest.approx(
			5.0 * edge.resv_trans_cost
		)

	def test_all_zero_costs_are_valid(self):
		"""
		GIVEN the degenerate minimal instance with zero costs
		WHEN building it
		THEN it validates
		"""
		# Act
		instance = create_instance(
			demand=[[0]], costs=[(0.0, 0.0, 0.0)], max_reserved=1
		)

		# Assert
		assert instance.membership_costs().tolist() == [0.0]
		assert instance.max_reserved == 1

	def test_instance_is_immutable(self):
		"""
		GIVEN a validated instance
		WHEN assigning a field
		THEN the assignment is rejected
		"""
		# Arrange
		instance = ProblemInstanceFactory()

		# Act & Assert
		with pytest.raises(ValidationError):
			instance.msps = 2


@pytest.mark.unit
class TestScaleConfig:
	"""Test ScaleConfig validation and presets."""

	@pytest.mark.parametrize(
		("name", "msps", "edges", "scenarios", "demand_mean"),
		[
			("S", 1, 5, 2, 2000),
			("M", 2, 10, 3, 6000),
			("L", 5, 25, 5, 15000),
		],
	)
	def test_presets(self, name, msps, edges, scenarios, demand_mean):
		"""
		GIVEN the scale presets
		WHEN reading their counts
		THEN they match the experimental configurations
		"""
		# Act
		config = PRESETS[name]

		# Assert
		assert (config.msps, config.edges, config.scenarios) == (
			msps,
			edges,
			scenarios,
		)
		assert config.demand_mean == demand_mean
		assert config.max_reserved == 31

	def test_zero_counts_rejected(self):
		"""
		GIVEN a custom scale with zero edges
		WHEN validating it
		THEN validation fails
		"""
		# Act & Assert
		with pytest.raises(ValidationError):
			ScaleConfig(msps=1, edges=0, scenarios=1, demand_mean=10)

	def test_nonpositive_base_price_rejected(self):
		"""
		GIVEN a custom scale with base price 0
		WHEN validating it
		THEN validation fails
		"""
		# Act & Assert
		with pytest.raises(ValidationError):
			ScaleConfig(
				msps=1, edges=1, scenarios=1, demand_mean=10, base_price=0.0
			)

	def test_similarity_bounds_ordered(self):
		"""
		GIVEN similarity_low above similarity_high
		WHEN validating the scale
		THEN validation fails
		"""
		# Act & Assert
		with pytest.raises(ValidationError, match="similarity_low"):
			ScaleConfig(
				msps=1,
				edges=1,
				scenarios=1,
				demand_mean=10,
				similarity_low=0.9,
				similarity_high=0.6,
			)


@pytest.mark.unit
class TestSolutionModels:
	"""Test solution, objective and feasibility models."""

	def test_zeros_has_requested_shape(self):
		"""
		GIVEN counts for a solution
		WHEN building the all-zero solution
		THEN its shape matches
		"""
		# Act
		solution = SipSolution.zeros(2, 3, 4)

		# Assert
		assert solution.shape == (2, 3, 4)
		assert sum(solution.decision_vector()) == 0

	def test_subscribe_must_be_binary(self):
		"""
		GIVEN a subscribe value of 2
		WHEN building the solution
		THEN validation fails
		"""
		# Act & Assert
		with pytest.raises(ValidationError):
			SipSolution(subscribe=[[2]], reserved=[[0]], on_demand=[[[0]]])

	def test_negative_counts_rejected(self):
		"""
		GIVEN a negative on-demand count
		WHEN building the solution
		THEN validation fails
		"""
		# Act & Assert
		with pytest.raises(ValidationError):
			SipSolution(subscribe=[[0]], reserved=[[0]], on_demand=[[[-1]]])

	def test_inconsistent_shapes_rejected(self):
		"""
		GIVEN reserved with more edges than subscribe
		WHEN building the solution
		THEN validation fails
		"""
		# Act & Assert
		with pytest.raises(ValidationError, match="inconsistent"):
			SipSolution(
				subscribe=[[0]], reserved=[[0, 1]], on_demand=[[[0]]]
			)

	def test_objective_total_is_sum_of_parts(self):
		"""
		GIVEN an objective breakdown
		WHEN reading the total
		THEN it is the sum of its parts
		"""
		# Act
		objective = ObjectiveBreakdown(
			membership_cost=10.0,
			reserved_cost=3.0,
			expected_ondemand_cost=10.0,
		)

		# Assert
		assert objective.total == pytest.approx(23.0)
		assert objective.model_dump()["total"] == pytest.approx(23.0)

	def test_feasible_iff_no_violations(self):
		"""
		GIVEN an empty feasibility report
		WHEN reading feasible
		THEN it is true
		"""
		# Assert
		assert FeasibilityReport().feasible

	def test_exact_bounds_defaults(self):
		"""
		GIVEN default exact bounds
		WHEN reading them
		THEN caps follow the instance and the budget is 10^8
		"""
		# Act
		bounds = ExactBounds()

		# Assert
		assert bounds.reserved_cap is None
		assert bounds.on_demand_cap is None
		assert bounds.budget == 10**8


@pytest.mark.unit
class TestEncodingScheme:
	"""Test the bit layout."""

	def test_num_vars_formula(self):
		"""
		GIVEN |W|=1, |E|=5, |Ω|=2, K=5, L=5
		WHEN counting variables
		THEN num_vars = 1·5·(1+5+2·5) = 80
		"""
		# Act
		encoding = EncodingScheme(
			msps=1, edges=5, scenarios=2, k_bits=5, l_bits=5
		)

		# Assert
		assert encoding.num_vars == 80

	def test_layout_is_bijection(self):
		"""
		GIVEN an encoding with slack bits
		WHEN listing the layout
		THEN indices cover 0..num_vars-1 exactly once, in order
		"""
		# Arrange
		encoding = EncodingScheme(
			msps=2, edges=3, scenarios=2, k_bits=2, l_bits=3, slack_bits=3
		)

		# Act
		layout = encoding.layout()

		# Assert
		assert [role.index for role in layout] == list(
			range(encoding.num_vars)
		)
		assert sum(role.role == "slack" for role in layout) == 2 * 2 * 3

	def test_block_order(self):
		"""
		GIVEN an encoding
		WHEN reading the roles of the first block
		THEN the subscribe bit comes first, then K reserved bits, then
			L on-demand bits per scenario
		"""
		# Arrange
		encoding = EncodingScheme(
			msps=1, edges=1, scenarios=2, k_bits=2, l_bits=1
		)

		# Act
		roles = [(r.role, r.scenario, r.bit) for r in encoding.layout()]

		# Assert
		assert roles == [
			("subscribe", None, 0),
			("reserved", None, 0),
			("reserved", None, 1),
			("on_demand", 0, 0),
			("on_demand", 1, 0),
		]

	def test_bit_width_cap(self):
		"""
		GIVEN K above 5
		WHEN building an encoding
		THEN validation fails
		"""
		# Act & Assert
		with pytest.raises(ValidationError):
			EncodingScheme(msps=1, edges=1, scenarios=1, k_bits=6, l_bits=1)


@pytest.mark.unit
class TestQuboModels:
	"""Test QUBO and Ising model validation."""

	def test_lower_triangle_rejected(self):
		"""
		GIVEN a matrix with an entry below the diagonal
		WHEN building a QUBO
		THEN validation fails
		"""
		# Act & Assert
		with pytest.raises(ValidationError, match="upper-triangular"):
			QuboProblem(coefficients=np.array([[1.0, 0.0], [2.0, 1.0]]))

	def test_non_finite_rejected(self):
		"""
		GIVEN a matrix with an infinite entry
		WHEN building a QUBO
		THEN validation fails
		"""
		# Act & Assert
		with pytest.raises(ValidationError, match="finite"):
			QuboProblem(coefficients=np.array([[np.inf]]))

	def test_explicit_zeros_dropped(self):
		"""
		GIVEN a sparse matrix with stored zeros
		WHEN building a QUBO
		THEN only nonzeros remain
		"""
		# Arrange
		matrix = sparse.csr_array(
			(np.array([0.0, 2.0]), (np.array([0, 1]), np.array([0, 1]))),
			shape=(2, 2),
		)

		# Act
		problem = QuboProblem(coefficients=matrix)

		# Assert
		assert problem.coefficients.nnz == 1
		assert problem.num_vars == 2

	def test_encoding_size_must_match(self):
		"""
		GIVEN an encoding with more variables than the matrix
		WHEN building a QUBO
		THEN validation fails
		"""
		# Arrange
		encoding = EncodingScheme(
			msps=1, edges=1, scenarios=1, k_bits=1, l_bits=1
		)

		# Act & Assert
		with pytest.raises(ValidationError, match="encoding has 3"):
			QuboProblem(coefficients=np.eye(2), encoding=encoding)

	def test_ising_couplings_strictly_upper(self):
		"""
		GIVEN couplings with a diagonal entry
		WHEN building an Ising problem
		THEN validation fails
		"""
		# Act & Assert
		with pytest.raises(ValidationError, match="strictly"):
			IsingProblem(h=[0.0, 0.0], couplings=np.eye(2))


@pytest.mark.unit
class TestScheduleModels:
	"""Test solver schedule validation."""

	def test_anneal_cooling_order(self):
		"""
		GIVEN t_initial below t_final
		WHEN building a schedule
		THEN validation fails
		"""
		# Act & Assert
		with pytest.raises(ValidationError, match="t_initial"):
			AnnealSchedule(t_initial=0.1, t_final=1.0, sweeps=10)

	def test_cim_defaults(self):
		"""
		GIVEN only the coupling strength
		WHEN building a CIM schedule
		THEN documented defaults fill the rest
		"""
		# Act
		schedule = CimSchedule(coupling_strength=0.1)

		# Assert
		assert schedule.steps == 2000
		assert schedule.dt == 0.01
		assert (schedule.pump_start, schedule.pump_end) == (0.0, 1.2)
		assert schedule.noise_amplitude == 0.05
		assert schedule.restarts == 32

	def test_cim_negative_noise_rejected(self):
		"""
		GIVEN a negative noise amplitude
		WHEN building a CIM schedule
		THEN validation fails
		"""
		# Act & Assert
		with pytest.raises(ValidationError):
			CimSchedule(coupling_strength=0.1, noise_amplitude=-0.1)


@pytest.mark.unit
class TestBenchConfig:
	"""Test benchmark configuration invariants."""

	def test_needs_instance_source(self):
		"""
		GIVEN no presets and no instance files
		WHEN validating a config
		THEN validation fails
		"""
		# Act & Assert
		with pytest.raises(ValidationError, match="preset or instance"):
			BenchConfig(solvers=["sa"], seeds=[0])

	def test_needs_seeds_and_solvers(self):
		"""
		GIVEN empty seeds or solvers
		WHEN validating a config
		THEN validation fails
		"""
		# Act & Assert
		with pytest.raises(ValidationError):
			BenchConfig(presets=["S"], solvers=["sa"], seeds=[])
		with pytest.raises(ValidationError):
			BenchConfig(presets=["S"], solvers=[], seeds=[0])

	def test_negative_seeds_rejected(self):
		"""
		GIVEN a negative solver or instance seed
		WHEN validating a config
		THEN validation fails
		"""
		# Act & Assert
		with pytest.raises(ValidationError):
			BenchConfig(presets=["S"], solvers=["sa"], seeds=[0, -1])
		with pytest.raises(ValidationError):
			BenchConfig(
				presets=["S"], solvers=["sa"], seeds=[0], instance_seed=-1
			)

	def test_unknown_solver_rejected(self):
		"""
		GIVEN an unknown solver name
		WHEN validating a config
		THEN validation fails
		"""
		# Act & Assert
		with pytest.raises(ValidationError):
			BenchConfig(presets=["S"], solvers=["tabu"], seeds=[0])

	def test_defaults(self):
		"""
		GIVEN a minimal config
		WHEN reading defaults
		THEN penalty weights are 10000 and 100 with repair on
		"""
		# Act
		config = BenchConfig(presets=["S"], solvers=["sa"], seeds=[1])

		# Assert
		assert config.alpha == 10000.0
		assert config.beta == 100.0
		assert config.repair is True
		assert config.penalty_mode == "paper"
		assert isinstance(config, SolveSettings)
