"""Parity of the last ID digit and the probability that it is even.

Reducing the check-digit rule mod 2 leaves only the letter constant and
the parities of ``a2, a4, a6, a8`` (odd weights 7, 5, 3, 1); the even
weights vanish. If those four parities are independent with
``P(even) = q_k``, the last digit's parity is an XOR of independent bits
and

    P(sum of f bits is 0) = 2**(f-1) * prod(q_k - 1/2) + 1/2.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Sequence

from .errors import BiasOutOfRange
from .id_model import AlphaCode, _coerce_code

__all__ = [
    "DEFAULT_EPSILON",
    "HALF_TOLERANCE",
    "METHODS",
    "FairnessReport",
    "check_bias",
    "letter_parity_constant",
    "predict_last_parity",
    "even_sum_probability",
    "gallager_even_ones",
    "problem2_expansion",
    "make_report",
    "region_fairness",
    "corollary_holds",
]

DEFAULT_EPSILON = 1e-3
# how close a q_k must be to 1/2 to count as unbiased in a report
HALF_TOLERANCE = 1e-12

METHODS = ("closed_form", "expansion", "enumeration", "monte_carlo")


def check_bias(bias: Sequence[float]) -> list[float]:
    """Return ``bias`` as a list of floats, rejecting empty input or entries outside [0, 1]."""
    values = [float(q) for q in bias]
    if not values:
        raise BiasOutOfRange("bias vector must have at least one entry")
    for k, q in enumerate(values, start=1):
        if not 0.0 <= q <= 1.0:  # also rejects NaN
            raise BiasOutOfRange(f"q{k} = {q!r} is outside [0, 1]")
    return values


def letter_parity_constant(code: AlphaCode | str) -> int:
    return _coerce_code(code).parity_constant


def predict_last_parity(code: AlphaCode | str, b2: int, b4: int, b6: int, b8: int) -> int:
    """Parity of ``a9`` from the letter and the parities of ``a2, a4, a6, a8``."""
    for name, b in (("b2", b2), ("b4", b4), ("b6", b6), ("b8", b8)):
        if b not in (0, 1):
            raise ValueError(f"{name} must be 0 or 1, got {b!r}")
    return (letter_parity_constant(code) + b2 + b4 + b6 + b8) % 2


def even_sum_probability(bias: Sequence[float]) -> float:
    """Probability that the mod-2 sum of independent bits is 0, where
    ``bias[k]`` is the probability that bit k is 0.

    A single-entry vector returns that entry.
    """
    q = check_bias(bias)
    deviation = 2.0 ** (len(q) - 1) * math.prod(qk - 0.5 for qk in q)
    p = deviation + 0.5
    assert -1e-12 <= p <= 1.0 + 1e-12, p
    return min(1.0, max(0.0, p))


def gallager_even_ones(m: int, q: float) -> float:
    """Probability that ``m`` independent bits, each 1 with probability ``q``,
    contain an even number of ones: ``(1 + (1 - 2q)**m) / 2``."""
    if isinstance(m, bool) or int(m) != m or m < 1:
        raise ValueError(f"m must be a positive integer, got {m!r}")
    (q,) = check_bias([q])
    return (1.0 + (1.0 - 2.0 * q) ** int(m)) / 2.0


def problem2_expansion(p2: float, p4: float, p6: float, p8: float) -> float:
    """Even-parity probability for four independent digits, summed term by term
    over the eight assignments with an even number of odd positions."""
    probs = check_bias([p2, p4, p6, p8])
    total = 0.0
    for odd in itertools.product((0, 1), repeat=4):
        if sum(odd) % 2:
            continue
        term = 1.0
        for p, is_odd in zip(probs, odd):
            term *= (1.0 - p) if is_odd else p
        total += term
    return total


@dataclass(frozen=True)
class FairnessReport:
    """Probability ``p`` that the last digit is even, and whether it is close to 1/2.

    ``corollary_flag`` is set when some input bias is within
    :data:`HALF_TOLERANCE` of 1/2, which forces ``p = 1/2``. It is ``None``
    when the report was not built from a bias vector.
    """

    p: float
    method: str
    epsilon: float
    verdict: str
    corollary_flag: bool | None = None
    letter: str | None = None
    convention: str = "paper"

    def __post_init__(self) -> None:
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}")
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"p = {self.p!r} is outside [0, 1]")

    @property
    def deviation(self) -> float:
        return self.p - 0.5

    @property
    def fair(self) -> bool:
        return self.verdict == "fair"

    def to_dict(self) -> dict:
        d = asdict(self)
        d["deviation"] = self.deviation
        return d


def make_report(
    p: float,
    method: str,
    epsilon: float = DEFAULT_EPSILON,
    *,
    bias: Sequence[float] | None = None,
    letter: str | None = None,
    convention: str = "paper",
) -> FairnessReport:
    if not epsilon > 0:
        raise ValueError(f"epsilon must be positive, got {epsilon!r}")
    flag = None
    if bias is not None:
        flag = any(abs(q - 0.5) <= HALF_TOLERANCE for q in bias)
    verdict = "fair" if abs(p - 0.5) < epsilon else "biased"
    return FairnessReport(
        p=p,
        method=method,
        epsilon=epsilon,
        verdict=verdict,
        corollary_flag=flag,
        letter=letter,
        convention=convention,
    )


def region_fairness(
    code: AlphaCode | str,
    bias: Sequence[float],
    epsilon: float = DEFAULT_EPSILON,
    *,
    convention: str = "paper",
) -> FairnessReport:
    """Closed-form fairness for a region dominated by one letter.

    ``bias`` holds ``P(a_j even)`` for ``j = 2, 4, 6, 8``. An odd letter
    constant swaps the parity, so ``p`` becomes ``1 - P(even sum)``.
    """
    code = _coerce_code(code)
    q = check_bias(bias)
    if len(q) != 4:
        raise BiasOutOfRange(f"expected 4 biases for positions 2, 4, 6, 8, got {len(q)}")
    p_even_sum = even_sum_probability(q)
    p = p_even_sum if code.parity_constant == 0 else 1.0 - p_even_sum
    return make_report(p, "closed_form", epsilon, bias=q, letter=code.letter, convention=convention)


def corollary_holds(bias: Sequence[float]) -> bool:
    """Check that ``P(even sum) != 1/2`` exactly when no ``q_k`` equals 1/2.

    The left side is decided by an exact rational product of
    ``(q_k - 1/2)``, so rounding cannot turn a non-zero deviation into zero.
    """
    q = check_bias(bias)
    half = Fraction(1, 2)
    product = math.prod((Fraction(qk) - half for qk in q), start=Fraction(1))
    p_is_half = product == 0
    none_half = all(qk != 0.5 for qk in q)
    return (not p_is_half) == none_half
