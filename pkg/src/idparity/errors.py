"""Exception hierarchy.

Every error carries a stable ``code`` word which the CLI prints on stderr.
"""

from __future__ import annotations


class IdParityError(Exception):
    code = "Error"


class IdSyntaxError(IdParityError, ValueError):
    """Base for grammar failures; ``position`` is the 0-based string index."""

    code = "SyntaxError"

    def __init__(self, message: str, position: int | None = None) -> None:
        super().__init__(message)
        self.position = position


class BadLength(IdSyntaxError):
    code = "BadLength"


class NotACapitalLetter(IdSyntaxError):
    code = "NotACapitalLetter"


class NonDigitCharacter(IdSyntaxError):
    code = "NonDigitCharacter"


class InvalidGenderDigit(IdSyntaxError):
    code = "InvalidGenderDigit"


class BiasOutOfRange(IdParityError, ValueError):
    code = "BiasOutOfRange"


class InvalidPmf(IdParityError, ValueError):
    code = "InvalidPmf"


class InvalidWeights(IdParityError, ValueError):
    code = "InvalidWeights"


class ConfigError(IdParityError, ValueError):
    code = "ConfigError"
