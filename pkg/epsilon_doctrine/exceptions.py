class EpsilonDoctrineError(Exception):
	pass


class ValidationError(EpsilonDoctrineError):
	pass


class ParseError(ValidationError):
	def __init__(self, message: str, line: int | None = None, column: int | None = None):
		self.line = line
		self.column = column
		if line is not None:
			message = f"line {line}, column {column}: {message}"
		super().__init__(message)


class UnknownSymbolError(ValidationError):
	pass


class ArityMismatchError(ValidationError):
	pass


class UnboundVariableError(ValidationError):
	pass


class TypeMismatchError(ValidationError):
	pass


class DuplicateVariableError(ValidationError):
	pass


class MorphismError(ValidationError):
	pass


class NotAProjectionError(MorphismError):
	pass


class NotSurjectiveError(MorphismError):
	pass


class UnpointedObjectError(MorphismError):
	pass


class EmptyTypeViolation(ValidationError):
	pass


class KernelRejection(ValidationError):
	"""Raised when a derivation is required to check (e.g. before an audit) and does not."""

	def __init__(self, message: str, verdicts=None):
		self.verdicts = verdicts or []
		super().__init__(message)
