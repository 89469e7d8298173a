"""
SQLAlchemy repository for benchmark rows
"""

import logging
from typing import List, Sequence

from sqlalchemy import func, select
from sqlalchemy.orm import Session

from app.models.bench import BenchRow
from app.models.db_models import BenchRowDB
from app.repositories.base import BaseResultRepository

logger = logging.getLogger(__name__)


class BenchResultRepository(BaseResultRepository[BenchRow]):
	"""
	Persists BenchRow models in the run's SQLite results store
	"""

	def __init__(self, session: Session):
		"""
		Initialize repository with a results-store session

		Args:
			session: SQLAlchemy session
		"""
		self.session = session
		logger.debug("BenchResultRepository initialized")

	def add_all(self, rows: Sequence[BenchRow]) -> int:
		"""
		Append rows after the ones already stored, keeping their order

		Args:
			rows: Rows in run order

		Returns:
			Number of rows written
		"""
		start = self.count()
		self.session.add_all(
			BenchRowDB(position=start + offset, **row.model_dump())
			for offset, row in enumerate(rows)
		)
		self.session.flush()

		logger.info(f"Stored {len(rows)} benchmark rows")
		return len(rows)

	def get_all(self) -> List[BenchRow]:
		"""
		Get all rows in run order

		Returns:
			List of rows
		"""
		stmt = select(BenchRowDB).order_by(BenchRowDB.position)
		db_rows = self.session.execute(stmt).scalars().all()

		logger.info(f"Retrieved {len(db_rows)} benchmark rows")
		return [self._to_pydantic(db_row) for db_row in db_rows]

	def count(self) -> int:
		stmt = select(func.count()).select_from(BenchRowDB)
		return self.session.execute(stmt).scalar_one()

	def _to_pydantic(self, db_row: BenchRowDB) -> BenchRow:
		return BenchRow.model_validate(db_row)
