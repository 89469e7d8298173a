"""
Command-line entry point for the edge-data subscription planner
"""

import logging
import sys
from typing import Optional, Sequence

from app.controllers.cli_controller import CliController
from app.dependencies.container import Container

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"


def main(argv: Optional[Sequence[str]] = None) -> int:
	"""
	Application entry point following Dependency Inversion Principle

	Args:
		argv: Command-line arguments without the program name

	Returns:
		Process exit code
	"""
	logging.basicConfig(level=logging.INFO, format=LOG_FORMAT)

	# Initialize dependency container
	container = Container()

	controller = CliController(container)
	return controller.run(argv)


if __name__ == "__main__":
	sys.exit(main())
