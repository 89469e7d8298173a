"""
Exceptions raised by the benchmark harness and the report step
"""


class InvalidBenchConfigError(Exception):
	"""
	Exception raised when a benchmark configuration is incomplete
	"""

	def __init__(self, message: str = "Invalid benchmark configuration"):
		self.message = message
		super().__init__(self.message)


class OutputNotWritableError(Exception):
	"""
	Exception raised when the output directory cannot be written
	"""

	def __init__(self, message: str = "Output directory is not writable"):
		self.message = message
		super().__init__(self.message)


class ResultsNotFoundError(Exception):
	"""
	Exception raised when a results directory holds no results
	"""

	def __init__(self, message: str = "No results"):
		self.message = message
		super().__init__(self.message)


class CorruptResultsError(Exception):
	"""
	Exception raised when a results store cannot be read
	"""

	def __init__(self, message: str = "Results store is corrupt"):
		self.message = message
		super().__init__(self.message)
