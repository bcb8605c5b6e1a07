"""Exception hierarchy. The CLI maps these onto exit codes 2, 3 and 4."""


class LadderLabError(Exception):
    pass


class DomainError(LadderLabError, ValueError):
    """An argument lies outside the domain of the operation."""


class ParameterError(LadderLabError, ValueError):
    """Malformed or inconsistent parameters."""


class PrecisionUnreachable(LadderLabError, ArithmeticError):
    """A tolerance could not be met within the evaluation budget."""


class BracketError(PrecisionUnreachable):
    """A root bracket could not be established."""


class CheckpointError(LadderLabError):
    """Checkpoint table failed validation.

    ``row`` is the 0-based index of the first offending data row, if known.
    """

    def __init__(self, message, row=None):
        super().__init__(message)
        self.row = row
