"""Reference implementations used only by the tests.

These avoid the package's own code paths: the check digit comes from the
issued-card rule (weighted total including the last digit is 0 mod 10),
and probabilities come from enumeration in exact rationals.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

# typed in from the published letter table, independently of the package
LETTER_CODES = dict(zip(
    "ABCDEFGHIJKLMNOPQRSTUVWXYZ",
    [10, 11, 12, 13, 14, 15, 16, 17, 34, 18, 19, 20, 21, 22, 35, 23, 24, 25, 26, 27, 28, 29, 32, 30, 31, 33],
))


def card_check_digit(letter, prefix):
    """Digit d with 1*tens + 9*units + 8*a1 + ... + 1*a8 + d == 0 (mod 10)."""
    tens, units = divmod(LETTER_CODES[letter], 10)
    weights = [1, 9, 8, 7, 6, 5, 4, 3, 2, 1]
    total = sum(w * v for w, v in zip(weights, [tens, units, *prefix]))
    for d in range(10):
        if (total + d) % 10 == 0:
            return d
    raise AssertionError("unreachable")


def paper_check_digit(letter, prefix):
    return (10 - card_check_digit(letter, prefix)) % 10


def brute_even_sum(bias):
    """P(XOR of independent bits is 0) by summing over all 2**f patterns."""
    total = Fraction(0) if all(isinstance(q, Fraction) for q in bias) else 0.0
    for bits in itertools.product((0, 1), repeat=len(bias)):
        if sum(bits) % 2:
            continue
        term = 1
        for q, b in zip(bias, bits):
            term *= (1 - q) if b else q
        total += term
    return total


def brute_letter_p(letter, pmfs4):
    """P(last digit even) enumerating a2, a4, a6, a8 over 0-9 with the card
    rule, other prefix digits held at 0."""
    total = 0
    for a2, a4, a6, a8 in itertools.product(range(10), repeat=4):
        w = pmfs4[0][a2] * pmfs4[1][a4] * pmfs4[2][a6] * pmfs4[3][a8]
        if not w:
            continue
        if card_check_digit(letter, [0, a2, 0, a4, 0, a6, 0, a8]) % 2 == 0:
            total += w
    return total


def uniform_over(support):
    n = len(support)
    return [Fraction(1, n) if d in support else Fraction(0) for d in range(10)]
