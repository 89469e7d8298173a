from .base import BaseDocumentRepository, BaseResultRepository
from .bench_repository import BenchResultRepository
from .instance_repository import (
	InstanceRepository,
	JsonDocumentRepository,
	SolutionRepository,
)
from .qubo_repository import QuboFileRepository

__all__ = [
	"BaseDocumentRepository",
	"BaseResultRepository",
	"BenchResultRepository",
	"InstanceRepository",
	"JsonDocumentRepository",
	"QuboFileRepository",
	"SolutionRepository",
]
