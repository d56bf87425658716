"""Check-digit computation for the last ID digit.

Two conventions are supported:

``Convention.PAPER``
    the check digit equals the weighted sum mod 10,
    ``tens + 9*alpha' + sum((9 - i) * a_i for i in 1..8)``.
``Convention.COMPLEMENT``
    the check digit is ``(10 - weighted_sum) % 10``, so the weighted sum
    including ``a9`` is a multiple of 10. This is the rule used on issued
    ID cards.

Both give the same parity, since ``-s`` and ``s`` agree mod 2.
All arithmetic is exact integer arithmetic.
"""

from __future__ import annotations

import enum
from typing import Iterable, Sequence

import numpy as np

from .errors import BadLength, ConfigError
from .id_model import AlphaCode, IdNumber, _coerce_code, digits_from

__all__ = [
    "Convention",
    "WEIGHTS",
    "weighted_sum",
    "weighted_sum_reduced",
    "check_digit",
    "check_digits",
    "validate",
    "complete",
]

# weight of a_i is 9 - i for i = 1..8
WEIGHTS: tuple[int, ...] = tuple(9 - i for i in range(1, 9))


class Convention(enum.Enum):
    PAPER = "paper"
    COMPLEMENT = "complement"

    @classmethod
    def parse(cls, value: "Convention | str") -> "Convention":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            choices = ", ".join(c.value for c in cls)
            raise ConfigError(f"unknown convention {value!r} (choose from {choices})") from None


def _prefix(digits: Iterable[int] | str) -> tuple[int, ...]:
    prefix = digits_from(digits)
    if len(prefix) != 8:
        raise BadLength(f"expected 8 prefix digits, got {len(prefix)}")
    return prefix


def weighted_sum(code: AlphaCode | str, digits: Iterable[int] | str) -> int:
    """``(tens + 9*alpha' + sum (9-i)*a_i) mod 10`` over the eight prefix digits."""
    code = _coerce_code(code)
    prefix = _prefix(digits)
    total = code.tens_term + 9 * code.alpha_prime + sum(w * d for w, d in zip(WEIGHTS, prefix))
    return total % 10


def weighted_sum_reduced(code: AlphaCode | str, digits: Iterable[int] | str) -> int:
    """Same residue as :func:`weighted_sum`, using the folded letter term
    ``(alpha - 11*alpha') / 10``, which may be negative."""
    code = _coerce_code(code)
    prefix = _prefix(digits)
    folded = (code.alpha - 11 * code.alpha_prime) // 10
    return (folded + sum(w * d for w, d in zip(WEIGHTS, prefix))) % 10


def check_digit(
    code: AlphaCode | str,
    digits: Iterable[int] | str,
    conv: Convention | str = Convention.PAPER,
) -> int:
    s = weighted_sum(code, digits)
    if Convention.parse(conv) is Convention.COMPLEMENT:
        return (10 - s) % 10
    return s


def check_digits(
    alpha_codes: Sequence[AlphaCode] | np.ndarray,
    prefixes: np.ndarray,
    conv: Convention | str = Convention.PAPER,
) -> np.ndarray:
    """Vectorised :func:`check_digit` for an ``(n, 8)`` integer array of prefixes.

    ``alpha_codes`` is either a sequence of :class:`AlphaCode` of length n or
    an integer array of the corresponding letter constants
    ``tens + 9*alpha'``.
    """
    prefixes = np.asarray(prefixes, dtype=np.int64)
    if prefixes.ndim != 2 or prefixes.shape[1] != 8:
        raise BadLength(f"expected an (n, 8) prefix array, got shape {prefixes.shape}")
    if isinstance(alpha_codes, np.ndarray):
        letter_terms = alpha_codes.astype(np.int64)
    else:
        letter_terms = np.array(
            [c.tens_term + 9 * c.alpha_prime for c in alpha_codes], dtype=np.int64
        )
    s = (letter_terms + prefixes @ np.array(WEIGHTS, dtype=np.int64)) % 10
    if Convention.parse(conv) is Convention.COMPLEMENT:
        s = (10 - s) % 10
    return s


def validate(id_number: IdNumber, conv: Convention | str = Convention.PAPER) -> bool:
    return id_number.last_digit == check_digit(id_number.code, id_number.prefix, conv)


def complete(
    code: AlphaCode | str,
    digits: Iterable[int] | str,
    conv: Convention | str = Convention.PAPER,
) -> IdNumber:
    """Append the check digit to an eight-digit prefix."""
    code = _coerce_code(code)
    prefix = _prefix(digits)
    return IdNumber(code, prefix + (check_digit(code, prefix, conv),))
