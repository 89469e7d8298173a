"""
Results-store configuration and session management

Benchmark rows are kept in a SQLite file inside the run's output
directory; every run opens its own engine.
"""

import logging
from contextlib import contextmanager
from pathlib import Path
from typing import Iterator

from sqlalchemy import Engine, create_engine
from sqlalchemy.orm import Session, declarative_base, sessionmaker

logger = logging.getLogger(__name__)

RESULTS_DB_NAME = "results.db"

# Base class for ORM models
Base = declarative_base()


def results_path(directory: Path) -> Path:
	return Path(directory) / RESULTS_DB_NAME


def create_results_engine(directory: Path) -> Engine:
	"""
	Create an engine for the results store of one output directory

	Args:
		directory: Run output directory

	Returns:
		SQLAlchemy engine bound to <directory>/results.db
	"""
	url = f"sqlite:///{results_path(directory).resolve()}"
	return create_engine(url, echo=False, future=True)


@contextmanager
def results_session(engine: Engine) -> Iterator[Session]:
	"""
	Transactional session scope for the results store

	Yields:
		Session: committed on success, rolled back on error
	"""
	factory = sessionmaker(
		engine, expire_on_commit=False, autocommit=False, autoflush=False
	)
	session = factory()
	try:
		logger.debug("Results session created")
		yield session
		session.commit()
		logger.debug("Results session committed")
	except Exception as e:
		session.rollback()
		logger.error(f"Results session rolled back due to error: {e}")
		raise
	finally:
		session.close()
		logger.debug("Results session closed")


def reset_results_db(engine: Engine) -> None:
	"""Drop and recreate the results tables so a run starts empty"""
	Base.metadata.drop_all(engine)
	Base.metadata.create_all(engine)
	logger.info("Results tables reset")
