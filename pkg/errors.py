# errors.py
"""
Exception hierarchy for the completion engine.

Every exception carries the exit code the command-line driver returns
when it reaches the top level:

    0  success
    1  configuration error
    2  parse error (atoms, declarations, stream files, snapshots)
    3  numerical failure (harmonic solve)
"""

from typing import Optional


class SpliceError(Exception):
    """Base class for all engine errors"""

    exit_code = 1


# ─────────────────────────────────────────────
# Configuration
# ─────────────────────────────────────────────

class ConfigError(SpliceError):
    exit_code = 1


# ─────────────────────────────────────────────
# Parsing
# ─────────────────────────────────────────────

class ParseError(SpliceError):
    exit_code = 2


class AtomSyntaxError(ParseError):
    """Malformed atom text; `offset` is the 0-based character position"""

    def __init__(self, message: str, offset: int, text: str = ""):
        self.offset = offset
        self.text = text
        super().__init__(f"{message} at offset {offset}")


class UnknownSymbolError(ParseError):
    pass


class ArityError(ParseError):
    pass


class DeclarationError(ParseError):
    pass


class StreamFormatError(ParseError):
    """Stream file problem, located by file and 1-based line number"""

    def __init__(self, message: str, path: str = "<memory>", line: int = 0):
        self.path = path
        self.line = line
        super().__init__(f"{path}:{line}: {message}")


# ─────────────────────────────────────────────
# Engine
# ─────────────────────────────────────────────

class NumericalError(SpliceError):
    exit_code = 3

    def __init__(self, message: str, condition: Optional[float] = None):
        self.condition = condition
        if condition is not None:
            message = f"{message} (condition estimate {condition:.3e})"
        super().__init__(message)


class MissingModeError(SpliceError):
    exit_code = 2


class EvaluationError(SpliceError):
    exit_code = 1


class BatchError(SpliceError):
    """Wraps an error raised while processing one micro-batch"""

    def __init__(self, batch_index: int, cause: Exception):
        self.batch_index = batch_index
        self.cause = cause
        self.exit_code = getattr(cause, "exit_code", 1)
        super().__init__(f"batch {batch_index}: {cause}")
