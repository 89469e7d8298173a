"""
Sparse coordinate text files for QUBO and Ising problems

QUBO: header `num_vars offset alpha beta`, then one `i j value` line per
nonzero with i <= j. Ising: header `num_spins constant`, an `h` section
of `i value` lines and a `J` section of `i j value` lines.
"""

import logging
from pathlib import Path

import numpy as np
from scipy import sparse

from app.exceptions.bench_exceptions import OutputNotWritableError
from app.exceptions.instance_exceptions import InstanceParseError
from app.models.qubo import IsingProblem, QuboProblem

logger = logging.getLogger(__name__)


class QuboFileRepository:
	"""Reads and writes the sparse text formats"""

	def save_qubo(self, problem: QuboProblem, path: Path) -> Path:
		coo = problem.coefficients.tocoo()
		order = np.lexsort((coo.col, coo.row))
		lines = [
			f"{problem.num_vars} {float(problem.offset)!r} "
			f"{float(problem.alpha)!r} {float(problem.beta)!r}"
		]
		lines.extend(
			f"{coo.row[k]} {coo.col[k]} {float(coo.data[k])!r}"
			for k in order
		)
		return self._write(path, lines)

	def load_qubo(self, path: Path) -> QuboProblem:
		"""
		Read a QUBO file

		Raises:
			InstanceParseError: With the offending line number
		"""
		lines = self._read(path)
		header = self._fields(path, lines, 0, 4)
		num_vars = self._int(path, 1, header[0])
		rows, cols, values = [], [], []
		for number, line in enumerate(lines[1:], start=2):
			i, j, value = self._fields(path, lines, number - 1, 3)
			rows.append(self._int(path, number, i))
			cols.append(self._int(path, number, j))
			values.append(self._float(path, number, value))
		matrix = self._matrix(path, num_vars, rows, cols, values)
		try:
			problem = QuboProblem(
				coefficients=matrix,
				offset=self._float(path, 1, header[1]),
				alpha=self._float(path, 1, header[2]),
				beta=self._float(path, 1, header[3]),
			)
		except ValueError as e:
			raise InstanceParseError(f"{path}: {e}") from e
		logger.info(f"QUBO with {num_vars} variables loaded from {path}")
		return problem

	def save_ising(self, problem: IsingProblem, path: Path) -> Path:
		coo = problem.couplings.tocoo()
		order = np.lexsort((coo.col, coo.row))
		lines = [f"{problem.num_spins} {float(problem.constant)!r}", "h"]
		lines.extend(
			f"{i} {float(value)!r}"
			for i, value in enumerate(problem.h)
			if value != 0.0
		)
		lines.append("J")
		lines.extend(
			f"{coo.row[k]} {coo.col[k]} {float(coo.data[k])!r}"
			for k in order
		)
		return self._write(path, lines)

	def load_ising(self, path: Path) -> IsingProblem:
		lines = self._read(path)
		header = self._fields(path, lines, 0, 2)
		num_spins = self._int(path, 1, header[0])
		if len(lines) < 3 or lines[1].strip() != "h" or "J" not in lines:
			raise InstanceParseError(f"{path}: missing 'h' or 'J' section")
		split = lines.index("J")
		h = np.zeros(num_spins)
		for number in range(3, split + 1):
			i, value = self._fields(path, lines, number - 1, 2)
			index = self._int(path, number, i)
			if not 0 <= index < num_spins:
				raise InstanceParseError(
					f"{path}:{number}: spin {index} out of range"
				)
			h[index] = self._float(path, number, value)
		rows, cols, values = [], [], []
		for number in range(split + 2, len(lines) + 1):
			i, j, value = self._fields(path, lines, number - 1, 3)
			rows.append(self._int(path, number, i))
			cols.append(self._int(path, number, j))
			values.append(self._float(path, number, value))
		matrix = self._matrix(path, num_spins, rows, cols, values)
		try:
			problem = IsingProblem(
				h=h,
				couplings=matrix,
				constant=self._float(path, 1, header[1]),
			)
		except ValueError as e:
			raise InstanceParseError(f"{path}: {e}") from e
		logger.info(f"Ising problem with {num_spins} spins loaded from {path}")
		return problem

	def _write(self, path: Path, lines: list[str]) -> Path:
		path = Path(path)
		try:
			path.parent.mkdir(parents=True, exist_ok=True)
			path.write_text("\n".join(lines) + "\n", encoding="utf-8")
		except OSError as e:
			raise OutputNotWritableError(f"Cannot write {path}: {e}") from e
		logger.info(f"Wrote {len(lines)} lines to {path}")
		return path

	def _read(self, path: Path) -> list[str]:
		try:
			text = Path(path).read_text(encoding="utf-8")
		except OSError as e:
			raise InstanceParseError(f"Cannot read {path}: {e}") from e
		lines = [line.strip() for line in text.splitlines() if line.strip()]
		if not lines:
			raise InstanceParseError(f"{path}: empty file")
		return lines

	def _fields(
		self, path: Path, lines: list[str], index: int, expected: int
	) -> list[str]:
		fields = lines[index].split()
		if len(fields) != expected:
			raise InstanceParseError(
				f"{path}:{index + 1}: expected {expected} fields, "
				f"got {len(fields)}"
			)
		return fields

	def _int(self, path: Path, number: int, token: str) -> int:
		try:
			return int(token)
		except ValueError as e:
			raise InstanceParseError(
				f"{path}:{number}: {token!r} is not an integer"
			) from e

	def _float(self, path: Path, number: int, token: str) -> float:
		try:
			return float(token)
		except ValueError as e:
			raise InstanceParseError(
				f"{path}:{number}: {token!r} is not a number"
			) from e

	def _matrix(
		self,
		path: Path,
		size: int,
		rows: list[int],
		cols: list[int],
		values: list[float],
	) -> sparse.csr_array:
		if rows and (
			min(rows + cols) < 0 or max(rows + cols) >= size
		):
			raise InstanceParseError(f"{path}: index outside 0..{size - 1}")
		return sparse.csr_array(
			(values, (rows, cols)), shape=(size, size), dtype=float
		)
