"""Exception hierarchy shared across the package.

Every error the library raises deliberately derives from BrokenEyesError
so the CLI can map it to exit code 1; ConfigError additionally marks user
misuse (exit code 2).
"""


class BrokenEyesError(Exception):
    """Base class for all errors raised by this package."""


class InvalidParameterError(BrokenEyesError):
    """A filter or RNG parameter violates its documented range."""


class ConfigError(BrokenEyesError):
    """The JSON config file is malformed or contains unknown keys."""


class NotFoundError(BrokenEyesError):
    """A required input path does not exist."""


class EmptyClassError(BrokenEyesError):
    """A class has no records where at least one is required."""


class ManifestParseError(BrokenEyesError):
    """A manifest line failed to parse; carries the 1-based line number."""

    def __init__(self, line_number: int, message: str):
        super().__init__(f"line {line_number}: {message}")
        self.line_number = line_number


class TensorFormatError(BrokenEyesError):
    """Tensor file has a wrong magic, version, dtype code or dimension count."""


class TensorTruncationError(BrokenEyesError):
    """Tensor file payload does not match the dimensions in its header."""


class TensorDataError(BrokenEyesError):
    """Tensor payload contains non-finite values."""


class ShapeMismatchError(BrokenEyesError):
    """Two tensors that must share a shape do not."""


class DegenerateInputError(BrokenEyesError):
    """An all-zero vector was passed where an angle is undefined."""
