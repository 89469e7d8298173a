from pathlib import Path

import pytest

from app.database import (
	create_results_engine,
	reset_results_db,
	results_session,
)
from app.dependencies.container import Container
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
	CimSolver,
	ExhaustiveSolver,
	SimulatedAnnealingSolver,
)
from tests.factories import create_instance


# Container fixtures
@pytest.fixture
def container():
	"""Create dependency injection container."""
	return Container()


# Repository fixtures
@pytest.fixture
def instance_repository():
	return InstanceRepository()


@pytest.fixture
def solution_repository():
	return SolutionRepository()


@pytest.fixture
def qubo_repository():
	return QuboFileRepository()


# Results-store fixtures
@pytest.fixture
def results_db_session(tmp_path):
	"""Session on an empty results store in a temporary directory."""
	engine = create_results_engine(tmp_path)
	reset_results_db(engine)
	try:
		with results_session(engine) as session:
			yield session
	finally:
		engine.dispose()


# Service fixtures
@pytest.fixture
def sip_service():
	return SipService()


@pytest.fixture
def encoding_service(sip_service):
	return EncodingService(sip_service)


@pytest.fixture
def qubo_service(sip_service, encoding_service):
	return QuboService(sip_service, encoding_service)


@pytest.fixture
def instance_service(instance_repository):
	return InstanceService(instance_repository)


@pytest.fixture
def exhaustive_solver(qubo_service):
	return ExhaustiveSolver(qubo_service)


@pytest.fixture
def sa_solver(qubo_service):
	return SimulatedAnnealingSolver(qubo_service)


@pytest.fixture
def cim_solver(qubo_service):
	return CimSolver(qubo_service)


@pytest.fixture
def bench_service(
	instance_service,
	sip_service,
	encoding_service,
	qubo_service,
	exhaustive_solver,
	sa_solver,
	cim_solver,
	solution_repository,
):
	"""Bench service wired with real collaborators."""
	return BenchService(
		instance_service=instance_service,
		sip_service=sip_service,
		encoding_service=encoding_service,
		qubo_service=qubo_service,
		solvers={
			"exhaustive": exhaustive_solver,
			"sa": sa_solver,
			"cim": cim_solver,
		},
		solution_repository=solution_repository,
	)


@pytest.fixture
def analysis_service(
	instance_service,
	sip_service,
	encoding_service,
	qubo_service,
	exhaustive_solver,
):
	return AnalysisService(
		instance_service=instance_service,
		sip_service=sip_service,
		encoding_service=encoding_service,
		qubo_service=qubo_service,
		exhaustive_solver=exhaustive_solver,
	)


# Instance fixtures
@pytest.fixture
def single_edge_instance():
	"""1 MSP, 1 edge, 1 scenario, costs (10, 1, 5), demand 2, X = 3."""
	return create_instance(demand=[[2]], max_reserved=3)


@pytest.fixture
def tiny_instance():
	"""1 MSP, 2 edges, 2 scenarios small enough for exhaustive search."""
	return create_instance(
		demand=[[2, 3]],
		similarity=[[[1.0, 1.0], [1.0, 1.0]]],
		probabilities=[0.4, 0.6],
		costs=[(10.0, 1.0, 5.0), (8.0, 1.5, 6.0)],
		max_reserved=1,
	)


@pytest.fixture
def tiny_instance_file(tmp_path, instance_repository, tiny_instance) -> Path:
	"""Tiny instance written to disk."""
	return instance_repository.save(tiny_instance, tmp_path / "tiny.json")
