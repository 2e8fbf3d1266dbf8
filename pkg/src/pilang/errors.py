"""Exception hierarchy shared by every module.

Each error has a ``kind`` used by the command line front end to print the
machine-readable ``ERROR <kind>: <message>`` line.
"""


class PiError(Exception):
    """Base class for all domain errors."""

    kind = "PiError"

    def __init__(self, message: str):
        super().__init__(message)
        self.message = message


class ParseError(PiError):
    kind = "ParseError"

    def __init__(self, position: int, expected: str, text: str = ""):
        self.position = position
        self.expected = expected
        where = _line_col(text, position) if text else f"offset {position}"
        super().__init__(f"{where}: expected {expected}")


def _line_col(text: str, pos: int) -> str:
    line = text.count("\n", 0, pos) + 1
    col = pos - (text.rfind("\n", 0, pos) + 1) + 1
    return f"line {line}, column {col}"


class TypeCheckError(PiError):
    """A combinator does not fit the type it is applied at."""

    kind = "TypeError"

    def __init__(self, path: str, expected: str, actual: str, detail: str = ""):
        self.path = path
        self.expected = expected
        self.actual = actual
        msg = f"at {path or 'top'}: expected {expected}, got {actual}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


class IllTypedValue(PiError):
    kind = "IllTypedValue"


class ImpossibleValue(PiError):
    """Evaluation needed an inhabitant of the empty type.

    Only reachable through a type checker bug or by bypassing checks.
    """

    kind = "ImpossibleValue"


class IndexOutOfRange(PiError, IndexError):
    kind = "IndexOutOfRange"


class ArityMismatch(PiError):
    kind = "ArityMismatch"


class RefusedTooLarge(PiError):
    kind = "RefusedTooLarge"


class RewriteError(PiError):
    kind = "RewriteError"


class RewriteMismatch(RewriteError):
    kind = "RewriteMismatch"

    def __init__(self, path: str, rule: str, found: str):
        self.path = path
        self.rule = rule
        self.found = found
        super().__init__(f"{rule} does not match at {path or 'top'}: found {found}")


class NonLinearMismatch(RewriteError):
    kind = "NonLinearMismatch"

    def __init__(self, metavariable: str, paths: tuple):
        self.metavariable = metavariable
        self.paths = paths
        where = ", ".join(p or "top" for p in paths)
        super().__init__(f"occurrences of {metavariable} differ (at {where})")


class UnboundMetavariable(RewriteError):
    kind = "UnboundMetavariable"


class RewriteTypeError(RewriteError):
    kind = "RewriteTypeError"
