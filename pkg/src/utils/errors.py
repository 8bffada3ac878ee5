"""
src/utils/errors.py
Exception hierarchy shared by every stage.
"""


class PolymedialError(RuntimeError):
    """Base class; the CLI turns these into exit code 1."""


class PresentationSyntaxError(PolymedialError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class EnumerationLimitError(PolymedialError):
    def __init__(self, limit: int, defined: int):
        super().__init__(
            f"coset enumeration exceeded the limit of {limit} cosets "
            f"({defined} defined); raise --limit or enumeration.coset_limit"
        )
        self.limit = limit
        self.defined = defined


class BudgetExceededError(PolymedialError):
    def __init__(self, what: str, budget):
        super().__init__(f"{what} exceeded its budget of {budget}")
        self.what = what
        self.budget = budget


class NotGeneratingError(PolymedialError):
    pass


class NonSmoothError(PolymedialError):
    pass


class IntersectionConditionError(PolymedialError):
    pass


class DualityError(PolymedialError):
    pass


class InvariantError(PolymedialError):
    pass


class GraphFormatError(PolymedialError):
    pass


class StageError(PolymedialError):
    """A preset stage failed; carries the stage id and the original error."""

    def __init__(self, stage: str, cause: Exception):
        super().__init__(f"stage '{stage}' failed: {cause}")
        self.stage = stage
        self.cause = cause


class CatalogFormatError(PolymedialError):
    def __init__(self, path, line: int, message: str):
        super().__init__(f"{path}:{line}: {message}")
        self.path = path
        self.line = line
