"""
Exceptions raised by the SIP oracle, the QUBO transform and the solvers
"""


class DimensionMismatchError(Exception):
	"""
	Exception raised when a solution does not match its instance's shape
	"""

	def __init__(
		self, message: str = "Solution dimensions do not match the instance"
	):
		self.message = message
		super().__init__(self.message)


class SearchBudgetExceededError(Exception):
	"""
	Exception raised when exact enumeration would exceed its budget
	"""

	def __init__(
		self,
		search_space_size: int,
		budget: int,
		message: str | None = None,
	):
		self.search_space_size = search_space_size
		self.budget = budget
		self.message = message or (
			f"Search space of {search_space_size} first-stage candidates "
			f"(summed over the per-MSP searches) exceeds the budget of "
			f"{budget}"
		)
		super().__init__(self.message)


class InfeasibleWithinBoundsError(Exception):
	"""
	Exception raised when no assignment within the bounds meets demand
	"""

	def __init__(
		self, message: str = "No feasible solution within the given bounds"
	):
		self.message = message
		super().__init__(self.message)


class EncodingRangeError(Exception):
	"""
	Exception raised when an integer decision does not fit its bit width
	"""

	def __init__(self, message: str = "Decision value out of encoding range"):
		self.message = message
		super().__init__(self.message)


class EncodingCapError(Exception):
	"""
	Exception raised when the encoding can represent more than X bundles
	"""

	def __init__(
		self, message: str = "Encoding cap exceeds the reservation cap"
	):
		self.message = message
		super().__init__(self.message)


class PenaltyWeightError(Exception):
	"""
	Exception raised for nonpositive penalty weights
	"""

	def __init__(self, message: str = "Penalty weights must be positive"):
		self.message = message
		super().__init__(self.message)


class BitLengthError(Exception):
	"""
	Exception raised when a bitstring has the wrong number of variables
	"""

	def __init__(self, message: str = "Bitstring length mismatch"):
		self.message = message
		super().__init__(self.message)


class ProblemTooLargeError(Exception):
	"""
	Exception raised when a problem exceeds a solver's size cap
	"""

	def __init__(self, message: str = "Problem too large for this solver"):
		self.message = message
		super().__init__(self.message)


class InvalidScheduleError(Exception):
	"""
	Exception raised for schedules that break their invariants
	"""

	def __init__(self, message: str = "Invalid solver schedule"):
		self.message = message
		super().__init__(self.message)


class SolverDivergenceError(Exception):
	"""
	Exception raised when every restart of a dynamics solver diverged
	"""

	def __init__(self, message: str = "All solver restarts diverged"):
		self.message = message
		super().__init__(self.message)
