"""Independent checks on the closed form: exact enumeration over digit
PMFs, seeded Monte-Carlo populations, and the weekday purchase schedule."""

from __future__ import annotations

import enum
import functools
import itertools
import json
import math
from collections.abc import Iterator, Mapping, Sequence
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .checksum import WEIGHTS, Convention, check_digit, check_digits
from .errors import ConfigError, InvalidPmf, InvalidWeights
from .id_model import ALPHA_TABLE, AlphaCode, IdNumber, _coerce_code, letter_to_alpha
from .parity import predict_last_parity

__all__ = [
    "RNG_ALGORITHM",
    "DigitDistribution",
    "PopulationSpec",
    "PopulationSummary",
    "MonteCarloEstimate",
    "Weekday",
    "ScheduleDay",
    "SCHEDULE",
    "digit_even_prob",
    "exact_p",
    "exact_p_full",
    "mixture_p",
    "population_exact_p",
    "iter_batches",
    "iter_ids",
    "sample_population",
    "monte_carlo_p",
    "purchase_days",
    "weekday_load",
]

RNG_ALGORITHM = "numpy.random.PCG64"
PMF_TOLERANCE = 1e-9
Z_95 = 1.96
# IDs drawn per RNG batch; part of the reproducibility contract
BATCH_SIZE = 1 << 16


@dataclass(frozen=True)
class DigitDistribution:
    """Probability mass function over the digits 0-9."""

    pmf: tuple[float, ...]

    def __post_init__(self) -> None:
        try:
            pmf = tuple(float(x) for x in self.pmf)
        except (TypeError, ValueError):
            raise InvalidPmf(f"pmf entries must be numbers: {self.pmf!r}") from None
        if len(pmf) != 10:
            raise InvalidPmf(f"pmf needs 10 entries, got {len(pmf)}")
        if any(not (x >= 0.0) or math.isinf(x) for x in pmf):
            raise InvalidPmf(f"pmf entries must be finite and non-negative: {pmf}")
        if abs(math.fsum(pmf) - 1.0) > PMF_TOLERANCE:
            raise InvalidPmf(f"pmf sums to {math.fsum(pmf)!r}, not 1")
        object.__setattr__(self, "pmf", pmf)

    @classmethod
    def from_weights(cls, weights: Sequence[float]) -> "DigitDistribution":
        """Renormalise non-negative weights into a PMF."""
        w = [float(x) for x in weights]
        if len(w) != 10 or any(not (x >= 0.0) for x in w):
            raise InvalidPmf(f"need 10 non-negative weights, got {weights!r}")
        total = math.fsum(w)
        if not total > 0.0 or math.isinf(total):
            raise InvalidPmf("weights must have a positive finite sum")
        return cls(tuple(x / total for x in w))

    @classmethod
    def uniform(cls) -> "DigitDistribution":
        return cls((0.1,) * 10)

    @classmethod
    def uniform_over(cls, digits: Sequence[int]) -> "DigitDistribution":
        support = set(digits)
        if not support or not support <= set(range(10)):
            raise InvalidPmf(f"support must be a non-empty subset of 0-9, got {digits!r}")
        return cls.from_weights([1.0 if d in support else 0.0 for d in range(10)])

    @classmethod
    def point_mass(cls, digit: int) -> "DigitDistribution":
        return cls.uniform_over([digit])

    def as_array(self) -> np.ndarray:
        return np.array(self.pmf, dtype=np.float64)


def _as_dist(d: DigitDistribution | Sequence[float]) -> DigitDistribution:
    return d if isinstance(d, DigitDistribution) else DigitDistribution(tuple(d))


def digit_even_prob(dist: DigitDistribution | Sequence[float]) -> float:
    pmf = _as_dist(dist).pmf
    return math.fsum(pmf[d] for d in range(0, 10, 2))


@functools.lru_cache(maxsize=None)
def _even_mask(letter: str) -> np.ndarray:
    """Boolean (10, 10, 10, 10) array over (a2, a4, a6, a8): last digit predicted even."""
    code = letter_to_alpha(letter)
    mask = np.zeros((10,) * 4, dtype=bool)
    for a2, a4, a6, a8 in itertools.product(range(10), repeat=4):
        mask[a2, a4, a6, a8] = predict_last_parity(code, a2 % 2, a4 % 2, a6 % 2, a8 % 2) == 0
    mask.setflags(write=False)
    return mask


def exact_p(
    code: AlphaCode | str,
    dists: Sequence[DigitDistribution | Sequence[float]],
) -> float:
    """Probability that the last digit is even, by summing over all 10**4
    values of ``(a2, a4, a6, a8)`` weighted by their PMFs."""
    code = _coerce_code(code)
    if len(dists) != 4:
        raise InvalidPmf(f"expected 4 distributions for positions 2, 4, 6, 8, got {len(dists)}")
    d2, d4, d6, d8 = (_as_dist(d).as_array() for d in dists)
    weights = np.einsum("i,j,k,l->ijkl", d2, d4, d6, d8)
    return float(weights[_even_mask(code.letter)].sum())


def exact_p_full(
    code: AlphaCode | str,
    dists: Sequence[DigitDistribution | Sequence[float]],
    conv: Convention | str = Convention.PAPER,
) -> float:
    """Sweep all 10**8 prefixes ``a1 .. a8`` and weigh those whose actual
    check digit is even. Slow; meant for cross-checking :func:`exact_p`."""
    code = _coerce_code(code)
    conv = Convention.parse(conv)
    if len(dists) != 8:
        raise InvalidPmf(f"expected 8 distributions for positions 1-8, got {len(dists)}")
    pmfs = [_as_dist(d).as_array() for d in dists]
    letter_term = code.tens_term + 9 * code.alpha_prime

    inner = np.array(list(itertools.product(range(10), repeat=4)), dtype=np.int64)
    inner_sum = inner @ np.array(WEIGHTS[4:], dtype=np.int64)
    inner_w = pmfs[4][inner[:, 0]] * pmfs[5][inner[:, 1]] * pmfs[6][inner[:, 2]] * pmfs[7][inner[:, 3]]

    total = 0.0
    for outer in itertools.product(range(10), repeat=4):
        w = pmfs[0][outer[0]] * pmfs[1][outer[1]] * pmfs[2][outer[2]] * pmfs[3][outer[3]]
        if w == 0.0:
            continue
        s = (letter_term + sum(a * b for a, b in zip(WEIGHTS[:4], outer)) + inner_sum) % 10
        if conv is Convention.COMPLEMENT:
            s = (10 - s) % 10
        total += w * inner_w[s % 2 == 0].sum()
    return float(total)


def _check_letter_weights(weights: Mapping[str, float]) -> dict[str, float]:
    if not weights:
        raise InvalidWeights("letter_weights is empty")
    out = {}
    for letter, w in weights.items():
        letter_to_alpha(letter)
        w = float(w)
        if not (w >= 0.0) or math.isinf(w):
            raise InvalidWeights(f"weight for {letter!r} must be non-negative, got {w!r}")
        out[letter] = w
    if abs(math.fsum(out.values()) - 1.0) > PMF_TOLERANCE:
        raise InvalidWeights(f"letter weights sum to {math.fsum(out.values())!r}, not 1")
    return dict(sorted(out.items()))


def mixture_p(
    letter_weights: Mapping[str, float],
    dists: Sequence[DigitDistribution | Sequence[float]],
) -> float:
    """Letter-weighted mixture of :func:`exact_p` for mixed-letter populations."""
    weights = _check_letter_weights(letter_weights)
    return math.fsum(w * exact_p(letter, dists) for letter, w in weights.items() if w > 0)


@dataclass(frozen=True)
class PopulationSpec:
    """Inputs for a simulated population.

    JSON form::

        {"letter_weights": {"O": 1.0},
         "position_dists": [[...10 numbers...], ... 8 lists for a1..a8],
         "convention": "paper",
         "seed": 42,
         "size": 100000}
    """

    letter_weights: Mapping[str, float]
    position_dists: tuple[DigitDistribution, ...]
    convention: Convention = Convention.PAPER
    seed: int = 0
    size: int = 1

    def __post_init__(self) -> None:
        object.__setattr__(self, "letter_weights", _check_letter_weights(self.letter_weights))
        dists = tuple(_as_dist(d) for d in self.position_dists)
        if len(dists) != 8:
            raise InvalidPmf(f"position_dists needs 8 entries for a1..a8, got {len(dists)}")
        object.__setattr__(self, "position_dists", dists)
        object.__setattr__(self, "convention", Convention.parse(self.convention))
        if isinstance(self.seed, bool) or not isinstance(self.seed, int) or not 0 <= self.seed < 2**64:
            raise ConfigError(f"seed must be an unsigned 64-bit integer, got {self.seed!r}")
        if isinstance(self.size, bool) or not isinstance(self.size, int) or self.size < 1:
            raise ConfigError(f"size must be a positive integer, got {self.size!r}")

    @property
    def parity_dists(self) -> tuple[DigitDistribution, ...]:
        """Distributions of ``a2, a4, a6, a8``."""
        return self.position_dists[1::2]

    def with_seed(self, seed: int) -> "PopulationSpec":
        return PopulationSpec(self.letter_weights, self.position_dists, self.convention, seed, self.size)

    @classmethod
    def from_dict(cls, data: Mapping) -> "PopulationSpec":
        if not isinstance(data, Mapping):
            raise ConfigError("population spec must be a JSON object")
        unknown = set(data) - {"letter_weights", "position_dists", "convention", "seed", "size"}
        if unknown:
            raise ConfigError(f"unknown keys in population spec: {sorted(unknown)}")
        try:
            weights = data["letter_weights"]
            dists = data["position_dists"]
        except KeyError as exc:
            raise ConfigError(f"population spec is missing {exc.args[0]!r}") from None
        if not isinstance(weights, Mapping):
            raise InvalidWeights("letter_weights must be an object")
        if not isinstance(dists, list):
            raise InvalidPmf("position_dists must be an array")
        return cls(
            letter_weights=weights,
            position_dists=tuple(DigitDistribution(tuple(d)) for d in dists),
            convention=data.get("convention", "paper"),
            seed=data.get("seed", 0),
            size=data.get("size", 1),
        )

    @classmethod
    def from_json(cls, path: str | Path) -> "PopulationSpec":
        try:
            data = json.loads(Path(path).read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: malformed JSON: {exc}") from None
        except OSError as exc:
            raise ConfigError(f"{path}: {exc.strerror}") from None
        return cls.from_dict(data)

    def to_dict(self) -> dict:
        return {
            "letter_weights": dict(self.letter_weights),
            "position_dists": [list(d.pmf) for d in self.position_dists],
            "convention": self.convention.value,
            "seed": self.seed,
            "size": self.size,
        }


def population_exact_p(spec: PopulationSpec) -> float:
    return mixture_p(spec.letter_weights, spec.parity_dists)


def iter_batches(spec: PopulationSpec) -> Iterator[tuple[np.ndarray, np.ndarray]]:
    """Yield ``(letter_index, digits)`` batches; ``digits`` has shape (n, 9)
    with the check digit in the last column. ``letter_index`` points into
    ``sorted(spec.letter_weights)``."""
    letters = list(spec.letter_weights)
    probs = np.array([spec.letter_weights[c] for c in letters])
    probs = probs / probs.sum()
    codes = [letter_to_alpha(c) for c in letters]
    letter_terms = np.array([c.tens_term + 9 * c.alpha_prime for c in codes], dtype=np.int64)
    pmfs = [d.as_array() for d in spec.position_dists]

    rng = np.random.Generator(np.random.PCG64(spec.seed))
    remaining = spec.size
    while remaining:
        n = min(BATCH_SIZE, remaining)
        idx = rng.choice(len(letters), size=n, p=probs)
        prefix = np.empty((n, 8), dtype=np.int64)
        for j, pmf in enumerate(pmfs):
            prefix[:, j] = rng.choice(10, size=n, p=pmf)
        last = check_digits(letter_terms[idx], prefix, spec.convention)
        yield idx, np.column_stack([prefix, last])
        remaining -= n


def iter_ids(spec: PopulationSpec) -> Iterator[IdNumber]:
    codes = [letter_to_alpha(c) for c in spec.letter_weights]
    for idx, digits in iter_batches(spec):
        for i, row in zip(idx.tolist(), digits.tolist()):
            yield IdNumber(codes[i], tuple(row))


@dataclass(frozen=True)
class PopulationSummary:
    size: int
    even_count: int
    odd_count: int
    per_letter: dict[str, tuple[int, int]] = field(default_factory=dict)
    seed: int = 0
    convention: str = "paper"
    rng: str = RNG_ALGORITHM

    @property
    def p_hat(self) -> float:
        return self.even_count / self.size

    def to_dict(self) -> dict:
        return {
            "rng": self.rng,
            "seed": self.seed,
            "convention": self.convention,
            "size": self.size,
            "even_count": self.even_count,
            "odd_count": self.odd_count,
            "per_letter": {
                c: {"even_count": e, "odd_count": o} for c, (e, o) in self.per_letter.items()
            },
        }


def sample_population(spec: PopulationSpec) -> PopulationSummary:
    """Draw ``spec.size`` IDs and count even and odd last digits, per letter.

    Deterministic for a fixed spec: the same seed yields the same summary.
    """
    letters = list(spec.letter_weights)
    even = np.zeros(len(letters), dtype=np.int64)
    total = np.zeros(len(letters), dtype=np.int64)
    for idx, digits in iter_batches(spec):
        is_even = digits[:, 8] % 2 == 0
        total += np.bincount(idx, minlength=len(letters))
        even += np.bincount(idx[is_even], minlength=len(letters))
    per_letter = {c: (int(e), int(t - e)) for c, e, t in zip(letters, even, total)}
    even_count = int(even.sum())
    return PopulationSummary(
        size=spec.size,
        even_count=even_count,
        odd_count=spec.size - even_count,
        per_letter=per_letter,
        seed=spec.seed,
        convention=spec.convention.value,
    )


@dataclass(frozen=True)
class MonteCarloEstimate:
    p_hat: float
    ci_low: float
    ci_high: float
    size: int
    even_count: int

    def contains(self, p: float) -> bool:
        return self.ci_low <= p <= self.ci_high

    def to_dict(self) -> dict:
        return {
            "p_hat": self.p_hat,
            "ci_low": self.ci_low,
            "ci_high": self.ci_high,
            "confidence": 0.95,
            "size": self.size,
            "even_count": self.even_count,
        }


def estimate_from_counts(even_count: int, size: int) -> MonteCarloEstimate:
    """Normal-approximation 95% interval ``p_hat +/- 1.96 * sqrt(p_hat(1-p_hat)/n)``."""
    p_hat = even_count / size
    half = Z_95 * math.sqrt(p_hat * (1.0 - p_hat) / size)
    return MonteCarloEstimate(p_hat, p_hat - half, p_hat + half, size, even_count)


def monte_carlo_p(
    spec: PopulationSpec, summary: PopulationSummary | None = None
) -> MonteCarloEstimate:
    if spec.size < 100:
        raise ConfigError(f"Monte-Carlo estimate needs size >= 100, got {spec.size}")
    if summary is None:
        summary = sample_population(spec)
    return estimate_from_counts(summary.even_count, summary.size)


class Weekday(enum.IntEnum):
    MON = 0
    TUE = 1
    WED = 2
    THU = 3
    FRI = 4
    SAT = 5
    SUN = 6

    @property
    def label(self) -> str:
        return self.name.capitalize()


@dataclass(frozen=True)
class ScheduleDay:
    weekday: Weekday
    eligible_parities: frozenset[str]


SCHEDULE: tuple[ScheduleDay, ...] = tuple(
    ScheduleDay(
        day,
        frozenset({"even", "odd"})
        if day is Weekday.SUN
        else frozenset({"odd"})
        if day in (Weekday.MON, Weekday.WED, Weekday.FRI)
        else frozenset({"even"}),
    )
    for day in Weekday
)


def purchase_days(id_number: IdNumber) -> frozenset[Weekday]:
    parity = "even" if id_number.last_digit % 2 == 0 else "odd"
    return frozenset(s.weekday for s in SCHEDULE if parity in s.eligible_parities)


def weekday_load(p: float) -> dict[Weekday, float]:
    """Fraction of the population allowed to buy on each weekday, given
    the probability ``p`` that a last digit is even."""
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must be in [0, 1], got {p!r}")
    share = {"even": p, "odd": 1.0 - p}
    return {
        s.weekday: 1.0 if len(s.eligible_parities) == 2 else share[next(iter(s.eligible_parities))]
        for s in SCHEDULE
    }
