"""
SQLAlchemy ORM model for persisted benchmark rows
"""

from typing import Optional

from sqlalchemy import Boolean, Float, Integer, String
from sqlalchemy.orm import Mapped, mapped_column

from app.database import Base


class BenchRowDB(Base):
	"""
	One (instance, solver, seed) measurement

	`position` preserves the run's row order so exports are reproducible.
	"""

	__tablename__ = "bench_rows"

	id: Mapped[int] = mapped_column(
		Integer, primary_key=True, autoincrement=True
	)
	position: Mapped[int] = mapped_column(
		Integer, nullable=False, index=True, doc="Row order within the run"
	)
	instance_id: Mapped[str] = mapped_column(String(255), nullable=False)
	solver: Mapped[str] = mapped_column(String(32), nullable=False)
	seed: Mapped[int] = mapped_column(Integer, nullable=False)
	num_vars: Mapped[Optional[int]] = mapped_column(Integer)
	objective: Mapped[Optional[float]] = mapped_column(Float)
	log10_objective: Mapped[Optional[float]] = mapped_column(Float)
	raw_energy: Mapped[Optional[float]] = mapped_column(Float)
	feasible_pre: Mapped[Optional[bool]] = mapped_column(Boolean)
	feasible_post: Mapped[Optional[bool]] = mapped_column(Boolean)
	wall_time: Mapped[float] = mapped_column(Float, nullable=False)
	oracle_objective: Mapped[Optional[float]] = mapped_column(Float)
	gap_percent: Mapped[Optional[float]] = mapped_column(Float)
	solution_file: Mapped[Optional[str]] = mapped_column(String(512))
	error: Mapped[Optional[str]] = mapped_column(String(1024))

	def __repr__(self) -> str:
		return (
			f"<BenchRow(instance={self.instance_id}, solver={self.solver}, "
			f"seed={self.seed})>"
		)
