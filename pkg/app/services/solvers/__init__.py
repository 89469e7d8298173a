from .annealing import SimulatedAnnealingSolver
from .base import BaseSolver, merge_schedule
from .cim import CimSolver
from .exhaustive import MAX_EXHAUSTIVE_VARS, ExhaustiveSolver

__all__ = [
	"MAX_EXHAUSTIVE_VARS",
	"BaseSolver",
	"CimSolver",
	"ExhaustiveSolver",
	"SimulatedAnnealingSolver",
	"merge_schedule",
]
