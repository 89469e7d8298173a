"""
Repository abstractions for documents on disk and persisted result rows
"""

from abc import ABC, abstractmethod
from pathlib import Path
from typing import Generic, List, Sequence, TypeVar

T = TypeVar("T")


class BaseDocumentRepository(Generic[T], ABC):
	"""
	Abstract repository for self-describing documents stored one per file
	"""

	@abstractmethod
	def save(self, entity: T, path: Path) -> Path:
		"""Write an entity and return the path written"""
		pass

	@abstractmethod
	def load(self, path: Path) -> T:
		"""Read and validate an entity"""
		pass


class BaseResultRepository(Generic[T], ABC):
	"""
	Abstract repository for an append-only, ordered collection of rows
	"""

	@abstractmethod
	def add_all(self, rows: Sequence[T]) -> int:
		"""Append rows in order, returning how many were written"""
		pass

	@abstractmethod
	def get_all(self) -> List[T]:
		"""All rows in insertion order"""
		pass

	@abstractmethod
	def count(self) -> int:
		"""Number of stored rows"""
		pass
