# randpca/core/exceptions.py

from typing import Optional


class RandPCAError(Exception):
    """
    Base class for every error raised by the library.
    `detail` is the human-readable message the CLI prints.
    """

    exit_code = 1

    def __init__(self, detail: str):
        super().__init__(detail)
        self.detail = detail


class ShapeError(RandPCAError):
    """Operand dimensions do not agree."""


class DomainError(RandPCAError):
    """Input violates a numerical precondition (non-finite, not self-adjoint, ...)."""


class ConfigError(RandPCAError):
    """Invalid sketch, spectrum or sweep parameters."""

    exit_code = 2


class MatrixMarketError(RandPCAError):
    """
    Malformed Matrix Market input. `line` is 1-based, or None when the
    problem is not tied to one line (e.g. a short file).
    """

    def __init__(self, detail: str, line: Optional[int] = None):
        if line is not None:
            detail = f"line {line}: {detail}"
        super().__init__(detail)
        self.line = line


class FactorFileError(RandPCAError):
    """Factor files are missing or inconsistent with the matrix."""
