"""Exception hierarchy shared by every layer of the compiler."""


class CompilerError(Exception):
    """Base class for all errors raised by ioncc."""


class InvalidRegisterError(CompilerError):
    pass


class MalformedGateError(CompilerError):
    pass


class WireError(CompilerError):
    pass


class SpliceError(CompilerError):
    pass


class QasmError(CompilerError):
    """Lexical or syntax error in an OpenQASM source, with position."""

    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.line = line
        self.column = column
        where = f"line {line}, column {column}: " if line else ""
        super().__init__(f"{where}{message}")


class UnsupportedFeatureError(QasmError):
    pass


class UnsupportedGateError(CompilerError):
    pass


class CapacityError(CompilerError):
    pass


class DimensionError(CompilerError, ValueError):
    pass


class PassOrderError(CompilerError):
    """A pass met a gate that an earlier stage should have removed."""


class VerificationError(CompilerError):
    pass


class StageError(CompilerError):
    """Wraps an error raised inside a pipeline stage with the stage name."""

    def __init__(self, stage: str, cause: Exception):
        self.stage = stage
        self.cause = cause
        super().__init__(f"stage {stage!r} failed: {cause}")
