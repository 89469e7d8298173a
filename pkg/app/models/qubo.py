"""
Binary encoding, QUBO and Ising models
"""

from enum import StrEnum
from typing import Literal, Optional

import numpy as np
from pydantic import (
	BaseModel,
	ConfigDict,
	Field,
	field_validator,
	model_validator,
)
from scipy import sparse

DEFAULT_ALPHA = 10000.0
DEFAULT_BETA = 100.0
MAX_BITS = 5


class PenaltyMode(StrEnum):
	"""How the demand constraint enters the Hamiltonian"""

	PAPER = "paper"
	SLACK = "slack"


class BitRole(BaseModel):
	"""Provenance of one QUBO variable"""

	index: int
	role: Literal["subscribe", "reserved", "on_demand", "slack"]
	msp: int
	edge: Optional[int] = None
	scenario: Optional[int] = None
	bit: int = Field(0, description="Exponent of the bit's weight 2^bit")

	model_config = ConfigDict(frozen=True)


class EncodingScheme(BaseModel):
	"""
	Fixed layout of binary variables

	Variables are grouped per (w, e) in row-major order; each block holds
	the subscribe bit, then the K bits of m̃, then L bits of m^(o) for each
	scenario. Slack bits, when present, follow all blocks per (w, s).
	"""

	msps: int = Field(..., ge=1)
	edges: int = Field(..., ge=1)
	scenarios: int = Field(..., ge=1)
	k_bits: int = Field(..., ge=1, le=MAX_BITS)
	l_bits: int = Field(..., ge=1, le=MAX_BITS)
	slack_bits: int = Field(default=0, ge=0, le=MAX_BITS)

	model_config = ConfigDict(frozen=True)

	@property
	def block_size(self) -> int:
		return 1 + self.k_bits + self.scenarios * self.l_bits

	@property
	def num_core_vars(self) -> int:
		return self.msps * self.edges * self.block_size

	@property
	def num_vars(self) -> int:
		return (
			self.num_core_vars
			+ self.msps * self.scenarios * self.slack_bits
		)

	@property
	def reserved_max(self) -> int:
		return 2**self.k_bits - 1

	@property
	def on_demand_max(self) -> int:
		return 2**self.l_bits - 1

	def subscribe_index(self, msp: int, edge: int) -> int:
		return (msp * self.edges + edge) * self.block_size

	def reserved_index(self, msp: int, edge: int, bit: int) -> int:
		return self.subscribe_index(msp, edge) + 1 + bit

	def on_demand_index(
		self, msp: int, edge: int, scenario: int, bit: int
	) -> int:
		return (
			self.subscribe_index(msp, edge)
			+ 1
			+ self.k_bits
			+ scenario * self.l_bits
			+ bit
		)

	def slack_index(self, msp: int, scenario: int, bit: int) -> int:
		return (
			self.num_core_vars
			+ (msp * self.scenarios + scenario) * self.slack_bits
			+ bit
		)

	def with_slack(self, slack_bits: int) -> "EncodingScheme":
		return self.model_copy(update={"slack_bits": slack_bits})

	def layout(self) -> list[BitRole]:
		"""Role of every variable, ordered by global index"""
		roles: list[BitRole] = []
		for w in range(self.msps):
			for e in range(self.edges):
				roles.append(
					BitRole(
						index=self.subscribe_index(w, e),
						role="subscribe",
						msp=w,
						edge=e,
					)
				)
				for k in range(self.k_bits):
					roles.append(
						BitRole(
							index=self.reserved_index(w, e, k),
							role="reserved",
							msp=w,
							edge=e,
							bit=k,
						)
					)
				for s in range(self.scenarios):
					for bit in range(self.l_bits):
						roles.append(
							BitRole(
								index=self.on_demand_index(w, e, s, bit),
								role="on_demand",
								msp=w,
								edge=e,
								scenario=s,
								bit=bit,
							)
						)
		for w in range(self.msps):
			for s in range(self.scenarios):
				for bit in range(self.slack_bits):
					roles.append(
						BitRole(
							index=self.slack_index(w, s, bit),
							role="slack",
							msp=w,
							scenario=s,
							bit=bit,
						)
					)
		return roles


class QuboProblem(BaseModel):
	"""
	energy(x) = offset + Σ_{i≤j} Q_ij x_i x_j over x ∈ {0,1}^n

	`coefficients` is upper-triangular with the linear terms on the
	diagonal. Matrices read back from a file carry no encoding.
	"""

	coefficients: sparse.csr_array
	offset: float = 0.0
	encoding: Optional[EncodingScheme] = None
	alpha: float = DEFAULT_ALPHA
	beta: float = DEFAULT_BETA
	mode: PenaltyMode = PenaltyMode.PAPER

	model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

	@field_validator("coefficients", mode="before")
	@classmethod
	def _to_csr(cls, value):
		matrix = sparse.csr_array(value, dtype=float)
		matrix.sum_duplicates()
		matrix.eliminate_zeros()
		return matrix

	@model_validator(mode="after")
	def _check_matrix(self) -> "QuboProblem":
		rows, cols = self.coefficients.shape
		if rows != cols:
			raise ValueError(f"QUBO matrix must be square, got {rows}x{cols}")
		if sparse.tril(self.coefficients, k=-1).nnz:
			raise ValueError("QUBO matrix must be upper-triangular")
		if not np.all(np.isfinite(self.coefficients.data)):
			raise ValueError("QUBO coefficients must be finite")
		if not np.isfinite(self.offset):
			raise ValueError("QUBO offset must be finite")
		if self.encoding is not None and self.encoding.num_vars != rows:
			raise ValueError(
				f"encoding has {self.encoding.num_vars} variables, "
				f"matrix has {rows}"
			)
		return self

	@property
	def num_vars(self) -> int:
		return self.coefficients.shape[0]

	def dense(self) -> np.ndarray:
		return self.coefficients.toarray()


class IsingProblem(BaseModel):
	"""
	energy(σ) = constant + Σ_i h_i σ_i + Σ_{i<j} J_ij σ_i σ_j over
	σ ∈ {−1,+1}^n
	"""

	h: np.ndarray
	couplings: sparse.csr_array
	constant: float = 0.0

	model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

	@field_validator("h", mode="before")
	@classmethod
	def _to_vector(cls, value):
		return np.asarray(value, dtype=float).ravel()

	@field_validator("couplings", mode="before")
	@classmethod
	def _to_csr(cls, value):
		matrix = sparse.csr_array(value, dtype=float)
		matrix.sum_duplicates()
		matrix.eliminate_zeros()
		return matrix

	@model_validator(mode="after")
	def _check_shapes(self) -> "IsingProblem":
		n = self.h.shape[0]
		if self.couplings.shape != (n, n):
			raise ValueError("couplings must be n x n for n field terms")
		if sparse.tril(self.couplings).nnz:
			raise ValueError("couplings must be strictly upper-triangular")
		return self

	@property
	def num_spins(self) -> int:
		return self.h.shape[0]


class PenaltyBreakdown(BaseModel):
	"""
	Unweighted constraint penalties of one solution

	A QUBO energy decomposes as objective + alpha·linking + beta·demand.
	"""

	linking: float = Field(..., ge=0.0, description="Σ m̃·(1 − m)")
	demand: float = Field(
		..., ge=0.0, description="Σ squared demand residual per (MSP, scenario)"
	)

	model_config = ConfigDict(frozen=True)
