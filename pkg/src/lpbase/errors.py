"""Exception hierarchy shared by all modules."""


class LpError(Exception):
    """Base class for errors raised by lpbase."""


class ParseError(LpError):
    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = f"line {line}, column {column}: " if line is not None else ""
        super().__init__(where + message)


class ValidationError(LpError):
    """A syntactically valid object breaks a structural invariant."""


class InvalidPath(ValidationError):
    pass


class DepthBoundExceeded(LpError):
    """A literal over terms deeper than the grounding bound had to be looked up."""


class BudgetExceeded(LpError):
    """An exhaustive search would exceed its configured budget."""


class InconsistentProgram(LpError):
    pass


class PreconditionError(LpError):
    pass


class BridgeViolation(LpError):
    """Two independent characterizations of the same object disagree."""
