from .bench_exceptions import (
	CorruptResultsError,
	InvalidBenchConfigError,
	OutputNotWritableError,
	ResultsNotFoundError,
)
from .instance_exceptions import (
	InstanceFileError,
	InstanceInvariantError,
	InstanceParseError,
	InstanceSchemaError,
	InvalidScaleError,
	SchemaVersionError,
)
from .optimization_exceptions import (
	BitLengthError,
	DimensionMismatchError,
	EncodingCapError,
	EncodingRangeError,
	InfeasibleWithinBoundsError,
	InvalidScheduleError,
	PenaltyWeightError,
	ProblemTooLargeError,
	SearchBudgetExceededError,
	SolverDivergenceError,
)

__all__ = [
	"BitLengthError",
	"CorruptResultsError",
	"DimensionMismatchError",
	"EncodingCapError",
	"EncodingRangeError",
	"InfeasibleWithinBoundsError",
	"InstanceFileError",
	"InstanceInvariantError",
	"InstanceParseError",
	"InstanceSchemaError",
	"InvalidBenchConfigError",
	"InvalidScaleError",
	"InvalidScheduleError",
	"OutputNotWritableError",
	"PenaltyWeightError",
	"ProblemTooLargeError",
	"ResultsNotFoundError",
	"SchemaVersionError",
	"SearchBudgetExceededError",
	"SolverDivergenceError",
]
