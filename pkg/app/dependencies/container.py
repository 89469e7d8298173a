"""
Dependency injection container wiring repositories, services and solvers
"""

import logging

from app.models.solver import SolverName
from app.repositories.instance_repository import (
	InstanceRepository,
	SolutionRepository,
)
from app.repositories.qubo_repository import QuboFileRepository
from app.services.analysis_service import AnalysisService
from app.services.bench_service import BenchService
from app.services.encoding_service import EncodingService
from app.services.instance_service import InstanceService
from app.services.qubo_service import QuboService
from app.services.sip_service import SipService
from app.services.solvers import (
	BaseSolver,
	CimSolver,
	ExhaustiveSolver,
	SimulatedAnnealingSolver,
)

logger = logging.getLogger(__name__)


class Container:
	"""
	Builds every collaborator the CLI needs

	Services only see the abstractions they are constructed with; this is
	the one place that picks concrete implementations.
	"""

	def instance_repository(self) -> InstanceRepository:
		logger.info("Creating InstanceRepository instance")
		return InstanceRepository()

	def solution_repository(self) -> SolutionRepository:
		logger.info("Creating SolutionRepository instance")
		return SolutionRepository()

	def qubo_repository(self) -> QuboFileRepository:
		logger.info("Creating QuboFileRepository instance")
		return QuboFileRepository()

	def sip_service(self) -> SipService:
		logger.info("Creating SipService instance")
		return SipService()

	def instance_service(self) -> InstanceService:
		"""
		Get instance service instance

		Returns:
			InstanceService backed by the JSON instance repository
		"""
		instance_repository = self.instance_repository()
		logger.info("Creating InstanceService instance with dependencies")
		return InstanceService(instance_repository)

	def encoding_service(
		self, sip_service: SipService | None = None
	) -> EncodingService:
		logger.info("Creating EncodingService instance with dependencies")
		return EncodingService(sip_service or self.sip_service())

	def qubo_service(
		self,
		sip_service: SipService | None = None,
		encoding_service: EncodingService | None = None,
	) -> QuboService:
		"""
		Get QUBO service instance

		Args:
			sip_service: Shared SIP service; a new one when None
			encoding_service: Shared encoding service; a new one when None

		Returns:
			QuboService with injected dependencies
		"""
		sip_service = sip_service or self.sip_service()
		encoding_service = encoding_service or self.encoding_service(
			sip_service
		)
		logger.info("Creating QuboService instance with dependencies")
		return QuboService(sip_service, encoding_service)

	def solvers(
		self, qubo_service: QuboService | None = None
	) -> dict[str, BaseSolver]:
		"""
		Get the QUBO solvers keyed by their CLI name

		Args:
			qubo_service: Energy evaluator shared by all solvers

		Returns:
			Exhaustive, simulated annealing and CIM-sim solvers
		"""
		qubo_service = qubo_service or self.qubo_service()
		logger.info("Creating QUBO solver instances")
		return {
			SolverName.EXHAUSTIVE.value: ExhaustiveSolver(qubo_service),
			SolverName.SA.value: SimulatedAnnealingSolver(qubo_service),
			SolverName.CIM.value: CimSolver(qubo_service),
		}

	def bench_service(self) -> BenchService:
		"""
		Get bench service instance

		Returns:
			BenchService with injected services, solvers and solution writer
		"""
		sip_service = self.sip_service()
		encoding_service = self.encoding_service(sip_service)
		qubo_service = self.qubo_service(sip_service, encoding_service)
		logger.info("Creating BenchService instance with dependencies")
		return BenchService(
			instance_service=self.instance_service(),
			sip_service=sip_service,
			encoding_service=encoding_service,
			qubo_service=qubo_service,
			solvers=self.solvers(qubo_service),
			solution_repository=self.solution_repository(),
		)

	def analysis_service(self) -> AnalysisService:
		sip_service = self.sip_service()
		encoding_service = self.encoding_service(sip_service)
		qubo_service = self.qubo_service(sip_service, encoding_service)
		logger.info("Creating AnalysisService instance with dependencies")
		return AnalysisService(
			instance_service=self.instance_service(),
			sip_service=sip_service,
			encoding_service=encoding_service,
			qubo_service=qubo_service,
			exhaustive_solver=ExhaustiveSolver(qubo_service),
		)
