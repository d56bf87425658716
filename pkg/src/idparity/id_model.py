"""Letter table, digit vectors and the ID string grammar.

An ID is one capital letter followed by nine digits ``a1 .. a9``; the
letter maps to a two-digit integer code ``alpha`` through a fixed table.
Parsing checks syntax only. Checksum validity lives in
:mod:`idparity.checksum`.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable

from .errors import (
    BadLength,
    InvalidGenderDigit,
    NonDigitCharacter,
    NotACapitalLetter,
)

__all__ = [
    "ALPHA_TABLE",
    "AlphaCode",
    "IdNumber",
    "ParityVector",
    "ID_PATTERN",
    "letter_to_alpha",
    "all_codes",
    "parse_id",
    "format_id",
    "parity_vector",
]

# Note the irregular tail: I, O, W, Z do not follow alphabetical order.
ALPHA_TABLE: dict[str, int] = {
    "A": 10, "B": 11, "C": 12, "D": 13, "E": 14, "F": 15, "G": 16,
    "H": 17, "I": 34, "J": 18, "K": 19, "L": 20, "M": 21, "N": 22,
    "O": 35, "P": 23, "Q": 24, "R": 25, "S": 26, "T": 27, "U": 28,
    "V": 29, "W": 32, "X": 30, "Y": 31, "Z": 33,
}

ID_PATTERN = re.compile(r"^[A-Z][0-9]{9}$")

NUM_DIGITS = 9


@dataclass(frozen=True)
class AlphaCode:
    """A leading letter with its integer code and the constants derived from it.

    ``tens_term`` is ``(alpha - alpha_prime) / 10`` and ``parity_constant``
    is ``(alpha - 11 * alpha_prime) / 10`` reduced mod 2 (least
    non-negative residue).
    """

    letter: str
    alpha: int
    alpha_prime: int
    tens_term: int
    parity_constant: int

    @classmethod
    def from_alpha(cls, letter: str, alpha: int) -> "AlphaCode":
        alpha_prime = alpha % 10
        reduced, rem = divmod(alpha - 11 * alpha_prime, 10)
        assert rem == 0
        return cls(
            letter=letter,
            alpha=alpha,
            alpha_prime=alpha_prime,
            tens_term=(alpha - alpha_prime) // 10,
            parity_constant=reduced % 2,
        )


_CODES: dict[str, AlphaCode] = {
    letter: AlphaCode.from_alpha(letter, alpha) for letter, alpha in ALPHA_TABLE.items()
}


def letter_to_alpha(letter: str, *, casefold: bool = False) -> AlphaCode:
    """Look up the :class:`AlphaCode` for a single capital letter.

    Lowercase letters are rejected unless ``casefold`` is set.
    """
    if not isinstance(letter, str) or len(letter) != 1:
        raise NotACapitalLetter(f"expected a single character, got {letter!r}", 0)
    if casefold and "a" <= letter <= "z":
        letter = letter.upper()
    try:
        return _CODES[letter]
    except KeyError:
        raise NotACapitalLetter(f"{letter!r} is not a capital letter A-Z", 0) from None


def all_codes() -> list[AlphaCode]:
    return [_CODES[letter] for letter in sorted(_CODES)]


def _coerce_code(code: AlphaCode | str) -> AlphaCode:
    if isinstance(code, AlphaCode):
        return code
    return letter_to_alpha(code)


@dataclass(frozen=True)
class IdNumber:
    """A syntactically valid ID: letter code plus nine digits.

    The checksum is not enforced here; an ``IdNumber`` may fail validation.
    """

    code: AlphaCode
    digits: tuple[int, ...]

    def __post_init__(self) -> None:
        if not isinstance(self.code, AlphaCode):
            object.__setattr__(self, "code", _coerce_code(self.code))
        digits = tuple(self.digits)
        if len(digits) != NUM_DIGITS:
            raise BadLength(f"expected {NUM_DIGITS} digits, got {len(digits)}")
        for i, d in enumerate(digits):
            if not isinstance(d, int) or isinstance(d, bool) or not 0 <= d <= 9:
                raise NonDigitCharacter(f"digit a{i + 1} = {d!r} is not in 0-9", i + 1)
        object.__setattr__(self, "digits", digits)

    @property
    def letter(self) -> str:
        return self.code.letter

    @property
    def prefix(self) -> tuple[int, ...]:
        """The eight payload digits ``a1 .. a8``."""
        return self.digits[:8]

    @property
    def last_digit(self) -> int:
        return self.digits[8]

    def __str__(self) -> str:
        return format_id(self)


def parse_id(text: str, *, casefold: bool = False, strict_gender: bool = False) -> IdNumber:
    """Parse ``text`` as one capital letter followed by nine decimal digits.

    Errors report the 0-based index of the offending character. With
    ``strict_gender`` the first digit must be 1 or 2.
    """
    if len(text) != 1 + NUM_DIGITS:
        raise BadLength(f"expected {1 + NUM_DIGITS} characters, got {len(text)}")
    code = letter_to_alpha(text[0], casefold=casefold)
    digits = []
    for pos in range(1, len(text)):
        ch = text[pos]
        # str.isdigit accepts non-ASCII digits; the grammar is ASCII only
        if not "0" <= ch <= "9":
            raise NonDigitCharacter(f"character {ch!r} at position {pos} is not a digit", pos)
        digits.append(ord(ch) - ord("0"))
    if strict_gender and digits[0] not in (1, 2):
        raise InvalidGenderDigit(f"first digit must be 1 or 2, got {digits[0]}", 1)
    return IdNumber(code, tuple(digits))


def format_id(id_number: IdNumber) -> str:
    return id_number.code.letter + "".join(str(d) for d in id_number.digits)


@dataclass(frozen=True)
class ParityVector:
    bits: tuple[int, ...]

    def __getitem__(self, position: int) -> int:
        """1-based access, so ``pv[2]`` is ``b2``."""
        if not 1 <= position <= len(self.bits):
            raise IndexError(position)
        return self.bits[position - 1]

    @property
    def last(self) -> int:
        return self.bits[-1]


def parity_vector(id_number: IdNumber) -> ParityVector:
    return ParityVector(tuple(d % 2 for d in id_number.digits))


def digits_from(values: Iterable[int] | str) -> tuple[int, ...]:
    """Accept either a digit string such as ``"12345678"`` or an iterable of ints."""
    if isinstance(values, str):
        out = []
        for pos, ch in enumerate(values):
            if not "0" <= ch <= "9":
                raise NonDigitCharacter(f"character {ch!r} at position {pos} is not a digit", pos)
            out.append(ord(ch) - ord("0"))
        return tuple(out)
    out = tuple(int(v) for v in values)
    for pos, d in enumerate(out):
        if not 0 <= d <= 9:
            raise NonDigitCharacter(f"digit {d} at position {pos} is not in 0-9", pos)
    return out
