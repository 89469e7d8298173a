from .bench import (
	BenchConfig,
	BenchOutcome,
	BenchRow,
	BenchSummaryRow,
	OracleAgreementReport,
	QuantizationReport,
	ReportOutcome,
	SolveSettings,
)
from .instance import (
	PRESETS,
	EdgeDevice,
	ProblemInstance,
	ScaleConfig,
	Scenario,
)
from .qubo import (
	EncodingScheme,
	IsingProblem,
	PenaltyBreakdown,
	PenaltyMode,
	QuboProblem,
)
from .solution import (
	ExactBounds,
	ExactResult,
	FeasibilityReport,
	ObjectiveBreakdown,
	RepairResult,
	SipSolution,
	SolutionRecord,
)
from .solver import AnnealSchedule, CimSchedule, SolverName, SolveReport

__all__ = [
	"PRESETS",
	"AnnealSchedule",
	"BenchConfig",
	"BenchOutcome",
	"BenchRow",
	"BenchSummaryRow",
	"CimSchedule",
	"EdgeDevice",
	"EncodingScheme",
	"ExactBounds",
	"ExactResult",
	"FeasibilityReport",
	"IsingProblem",
	"ObjectiveBreakdown",
	"OracleAgreementReport",
	"PenaltyBreakdown",
	"PenaltyMode",
	"ProblemInstance",
	"QuantizationReport",
	"QuboProblem",
	"RepairResult",
	"ReportOutcome",
	"ScaleConfig",
	"Scenario",
	"SipSolution",
	"SolutionRecord",
	"SolveReport",
	"SolveSettings",
	"SolverName",
]
