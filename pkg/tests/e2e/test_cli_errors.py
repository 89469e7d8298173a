"""
End-to-End tests for command-line error handling
Domain errors exit with 2, argument errors through argparse
"""

import json

import pytest

from main import main


@pytest.mark.e2e
class TestCliErrorHandling:
	"""Test error handling across verbs."""

	def test_missing_instance_file(self, tmp_path, capsys):
		"""
		GIVEN an instance path that does not exist
		WHEN solving it
		THEN the exit code is 2 and the error is printed
		"""
		# Act
		code = main(["solve", "--instance", str(tmp_path / "absent.json")])

		# Assert
		assert code == 2
		assert capsys.readouterr().err.startswith("error:")

	def test_report_without_results(self, tmp_path):
		"""
		GIVEN an empty directory
		WHEN running report
		THEN the exit code is 2
		"""
		# Act & Assert
		assert main(["report", "--out", str(tmp_path)]) == 2

	def test_invalid_scale_config(self, tmp_path, capsys):
		"""
		GIVEN a custom scale with zero edges
		WHEN running gen
		THEN the exit code is 2 and no instance is written
		"""
		# Arrange
		config = tmp_path / "scale.json"
		config.write_text(
			json.dumps(
				{"msps": 1, "edges": 0, "scenarios": 1, "demand_mean": 4}
			)
		)
		out = tmp_path / "x.json"

		# Act
		code = main(["gen", "--scale-config", str(config), "--out", str(out)])

		# Assert
		assert code == 2
		assert "edges" in capsys.readouterr().err
		assert not out.exists()

	def test_exhaustive_on_large_problem(self, tmp_path, capsys):
		"""
		GIVEN the 80-variable S preset
		WHEN solving exhaustively
		THEN the row records the size error and the exit code is 2
		"""
		# Act
		code = main(
			[
				"solve",
				"--preset",
				"S",
				"--solver",
				"exhaustive",
				"--out",
				str(tmp_path),
			]
		)

		# Assert
		assert code == 2
		row = json.loads(capsys.readouterr().out)
		assert row["error"].startswith("ProblemTooLargeError")

	def test_corrupt_instance_file(self, tmp_path):
		"""
		GIVEN an instance file that is not JSON
		WHEN benchmarking it
		THEN the exit code is 2
		"""
		# Arrange
		path = tmp_path / "broken.json"
		path.write_text("{oops")

		# Act
		code = main(
			[
				"bench",
				"--instance",
				str(path),
				"--solver",
				"exact",
				"--seeds",
				"0",
				"--out",
				str(tmp_path / "run"),
			]
		)

		# Assert
		assert code == 2

	@pytest.mark.parametrize(
		"argv",
		[
			["frobnicate"],
			["gen"],
			["bench", "--solver", "annealer"],
			["solve", "--preset", "S", "--seed", "-1"],
			["bench", "--preset", "S", "--seeds", "0", "-3"],
		],
		ids=[
			"unknown-verb",
			"missing-out",
			"unknown-solver",
			"negative-seed",
			"negative-bench-seed",
		],
	)
	def test_bad_arguments(self, argv):
		"""
		GIVEN invalid arguments
		WHEN parsing them
		THEN argparse exits with status 2
		"""
		# Act & Assert
		with pytest.raises(SystemExit) as exc_info:
			main(argv)

		assert exc_info.value.code == 2
