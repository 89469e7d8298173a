"""
JSON file repositories for problem instances and solution records
"""

import logging
from pathlib import Path
from typing import Generic, Type, TypeVar

from pydantic import BaseModel, ValidationError
from pydantic_core import from_json

from app.exceptions.bench_exceptions import OutputNotWritableError
from app.exceptions.instance_exceptions import (
	InstanceInvariantError,
	InstanceParseError,
	InstanceSchemaError,
	SchemaVersionError,
)
from app.models.instance import SCHEMA_VERSION, ProblemInstance
from app.models.solution import SolutionRecord
from app.repositories.base import BaseDocumentRepository

logger = logging.getLogger(__name__)

ModelT = TypeVar("ModelT", bound=BaseModel)


class JsonDocumentRepository(BaseDocumentRepository[ModelT], Generic[ModelT]):
	"""
	Pydantic-backed JSON documents with an explicit schema version

	Parse failures, schema violations and invariant violations are
	reported as distinct exceptions with line or field diagnostics.
	"""

	model_type: Type[ModelT]

	def save(self, entity: ModelT, path: Path) -> Path:
		"""
		Write a document

		Args:
			entity: Model to serialize
			path: Target file

		Returns:
			The path written

		Raises:
			OutputNotWritableError: If the file cannot be written
		"""
		path = Path(path)
		try:
			path.parent.mkdir(parents=True, exist_ok=True)
			path.write_text(entity.model_dump_json(indent=2), encoding="utf-8")
		except OSError as e:
			raise OutputNotWritableError(f"Cannot write {path}: {e}") from e

		logger.info(f"{self.model_type.__name__} written to {path}")
		return path

	def load(self, path: Path) -> ModelT:
		"""
		Read and validate a document

		Args:
			path: Source file

		Returns:
			Validated model

		Raises:
			InstanceParseError: If the file is missing or not valid JSON
			SchemaVersionError: If the schema version is not supported
			InstanceSchemaError: If fields are missing or ill-typed
			InstanceInvariantError: If a cross-field invariant fails
		"""
		path = Path(path)
		try:
			raw = path.read_bytes()
		except OSError as e:
			raise InstanceParseError(f"Cannot read {path}: {e}") from e

		try:
			data = from_json(raw)
		except ValueError as e:
			raise InstanceParseError(f"{path}: {e}") from e

		if not isinstance(data, dict):
			raise InstanceSchemaError(f"{path}: top level must be an object")
		if "schema_version" not in data:
			raise InstanceSchemaError(f"{path}: schema_version: missing")
		if data["schema_version"] != SCHEMA_VERSION:
			raise SchemaVersionError(
				f"{path}: schema_version {data['schema_version']!r} is not "
				f"supported (expected {SCHEMA_VERSION})"
			)

		try:
			entity = self.model_type.model_validate(data)
		except ValidationError as e:
			raise self._translate(path, e) from e

		logger.info(f"{self.model_type.__name__} loaded from {path}")
		return entity

	def _translate(self, path: Path, error: ValidationError) -> Exception:
		"""Map a pydantic error onto schema or invariant diagnostics"""
		details = "; ".join(
			f"{'.'.join(str(part) for part in err['loc']) or '<root>'}: "
			f"{err['msg']}"
			for err in error.errors()
		)
		if all(err["type"] == "value_error" for err in error.errors()):
			return InstanceInvariantError(f"{path}: {details}")
		return InstanceSchemaError(f"{path}: {details}")


class InstanceRepository(JsonDocumentRepository[ProblemInstance]):
	"""Instance files"""

	model_type = ProblemInstance


class SolutionRepository(JsonDocumentRepository[SolutionRecord]):
	"""Solution files written for audit"""

	model_type = SolutionRecord
