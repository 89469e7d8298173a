"""
Exceptions raised while building, loading or validating problem instances
"""


class InvalidScaleError(Exception):
	"""
	Exception raised for an unknown preset or an invalid custom scale
	"""

	def __init__(self, message: str = "Invalid problem scale"):
		self.message = message
		super().__init__(self.message)


class InstanceFileError(Exception):
	"""
	Base exception for unreadable or invalid instance and solution files
	"""

	def __init__(self, message: str = "Invalid instance file"):
		self.message = message
		super().__init__(self.message)


class InstanceParseError(InstanceFileError):
	"""
	Exception raised when a file is not well-formed JSON
	"""

	def __init__(self, message: str = "Instance file could not be parsed"):
		super().__init__(message)


class InstanceSchemaError(InstanceFileError):
	"""
	Exception raised when required fields are missing or ill-typed
	"""

	def __init__(self, message: str = "Instance file violates the schema"):
		super().__init__(message)


class InstanceInvariantError(InstanceFileError):
	"""
	Exception raised when a well-formed document breaks a model invariant
	"""

	def __init__(
		self, message: str = "Instance file violates a model invariant"
	):
		super().__init__(message)


class SchemaVersionError(InstanceFileError):
	"""
	Exception raised when a file was written with another schema version
	"""

	def __init__(self, message: str = "Unsupported schema version"):
		super().__init__(message)
