"""Exception types shared across the package."""


class InputError(ValueError):
    """Invalid argument or malformed input (CLI exit code 1)."""


class ParseError(InputError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


class Undecided(RuntimeError):
    """An exact solver ran out of its node budget (CLI exit code 2)."""

    def __init__(self, message: str, nodes: int = 0):
        super().__init__(message)
        self.nodes = nodes


class SessionStateError(RuntimeError):
    """A reveal-session step was called out of order."""


class InvariantViolation(AssertionError):
    """A hard guarantee failed (CLI exit code 3)."""

    def __init__(self, message: str, transcript: dict | None = None):
        super().__init__(message)
        self.transcript = transcript
