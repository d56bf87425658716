"""Check digits for letter-plus-nine-digit IDs and the fairness of
odd/even last-digit rationing."""

from .checksum import Convention, check_digit, complete, validate, weighted_sum
from .errors import (
    BadLength,
    BiasOutOfRange,
    ConfigError,
    IdParityError,
    InvalidPmf,
    InvalidWeights,
    NonDigitCharacter,
    NotACapitalLetter,
)
from .id_model import AlphaCode, IdNumber, format_id, letter_to_alpha, parity_vector, parse_id
from .oracle_sim import (
    DigitDistribution,
    PopulationSpec,
    digit_even_prob,
    exact_p,
    monte_carlo_p,
    purchase_days,
    sample_population,
    weekday_load,
)
from .parity import (
    FairnessReport,
    corollary_holds,
    even_sum_probability,
    gallager_even_ones,
    letter_parity_constant,
    predict_last_parity,
    problem2_expansion,
    region_fairness,
)

__version__ = "0.1.0"
