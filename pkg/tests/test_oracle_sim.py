import math
from fractions import Fraction

import numpy as np
import pytest

from idparity.checksum import Convention, validate
from idparity.errors import ConfigError, InvalidPmf, InvalidWeights
from idparity.id_model import all_codes, parse_id
from idparity.oracle_sim import (
    RNG_ALGORITHM,
    SCHEDULE,
    DigitDistribution,
    PopulationSpec,
    Weekday,
    digit_even_prob,
    estimate_from_counts,
    exact_p,
    exact_p_full,
    iter_ids,
    mixture_p,
    monte_carlo_p,
    population_exact_p,
    purchase_days,
    sample_population,
    weekday_load,
)
from idparity.parity import region_fairness

from oracles import brute_letter_p, uniform_over

D = DigitDistribution
UNIFORM = D.uniform()
LOW = D.uniform_over([0, 1, 2])
NO_FOUR = D.uniform_over([0, 1, 2, 3, 5, 6, 7, 8, 9])
SKEWED = [LOW, NO_FOUR, NO_FOUR, NO_FOUR]


def spec(parity_dists=(UNIFORM,) * 4, letters=None, size=1000, seed=0, conv="paper"):
    dists = []
    for d in parity_dists:
        dists += [UNIFORM, d]
    return PopulationSpec(letters or {"O": 1.0}, tuple(dists), conv, seed, size)


@pytest.mark.parametrize("dist,expected", [(UNIFORM, 0.5), (LOW, 2 / 3), (NO_FOUR, 4 / 9)])
def test_digit_even_prob(dist, expected):
    assert digit_even_prob(dist) == pytest.approx(expected, abs=1e-15)


@pytest.mark.parametrize(
    "pmf", [[0.1] * 9, [0.2] * 10, [-0.1, 0.2] + [0.1] * 8, [float("nan")] + [0.1] * 9, ["x"] * 10]
)
def test_invalid_pmf(pmf):
    with pytest.raises(InvalidPmf):
        D(tuple(pmf))


def test_from_weights_renormalises():
    d = D.from_weights([1, 1, 0, 0, 0, 0, 0, 0, 0, 2])
    assert d.pmf[9] == pytest.approx(0.5)
    with pytest.raises(InvalidPmf):
        D.from_weights([0] * 10)


def test_exact_p_examples():
    assert exact_p("O", [UNIFORM] * 4) == pytest.approx(0.5, abs=1e-12)
    assert exact_p("O", SKEWED) == pytest.approx(0.5 - 1 / 4374, abs=1e-12)
    assert exact_p("A", [D.point_mass(0)] * 4) == 0.0


def test_skewed_value_from_independent_oracle():
    low, no4 = uniform_over([0, 1, 2]), uniform_over([0, 1, 2, 3, 5, 6, 7, 8, 9])
    assert brute_letter_p("O", [low, no4, no4, no4]) == Fraction(1, 2) - Fraction(1, 4374)


@pytest.mark.parametrize("letter", ["A", "B", "I", "O", "W", "Z"])
def test_exact_p_matches_card_rule_enumeration(letter):
    rng = np.random.default_rng(ord(letter))
    pmfs = [rng.dirichlet(np.ones(10)) for _ in range(4)]
    assert exact_p(letter, pmfs) == pytest.approx(brute_letter_p(letter, pmfs), abs=1e-12)


def test_exact_p_agrees_with_closed_form_all_letters():
    rng = np.random.default_rng(2020)
    for _ in range(20):
        # some digits made rare to get visibly skewed q values
        pmfs = [D.from_weights(rng.dirichlet(np.ones(10)) * np.where(rng.random(10) < 0.5, 1.0, 0.01)) for _ in range(4)]
        q = [digit_even_prob(d) for d in pmfs]
        for code in all_codes():
            assert abs(exact_p(code, pmfs) - region_fairness(code, q).p) <= 1e-9


@pytest.mark.parametrize("conv", list(Convention))
def test_full_sweep_agrees(conv):
    rng = np.random.default_rng(11)
    dists = [D.from_weights(rng.dirichlet(np.ones(10))) for _ in range(8)]
    full = exact_p_full("F", dists, conv)
    assert full == pytest.approx(exact_p("F", dists[1::2]), abs=1e-12)


def test_mixture():
    p = mixture_p({"A": 0.25, "B": 0.75}, SKEWED)
    assert p == pytest.approx(0.25 * exact_p("A", SKEWED) + 0.75 * exact_p("B", SKEWED), abs=1e-15)
    with pytest.raises(InvalidWeights):
        mixture_p({"A": 0.5}, SKEWED)
    with pytest.raises(InvalidWeights):
        mixture_p({"A": 1.5, "B": -0.5}, SKEWED)


def test_spec_validation():
    with pytest.raises(InvalidPmf):
        PopulationSpec({"O": 1.0}, (UNIFORM,) * 7)
    with pytest.raises(ConfigError):
        spec(size=0)
    with pytest.raises(ConfigError):
        spec(seed=-1)
    with pytest.raises(ConfigError):
        spec(seed=2**64)
    with pytest.raises(ConfigError):
        spec(conv="luhn")
    with pytest.raises(ConfigError):
        PopulationSpec.from_dict({"letter_weights": {"O": 1}, "position_dists": [[0.1] * 10] * 8, "sized": 3})
    with pytest.raises(ConfigError):
        PopulationSpec.from_dict({"position_dists": []})


def test_spec_json_round_trip(tmp_path):
    s = spec(SKEWED, {"O": 0.5, "A": 0.5}, size=123, seed=9, conv="complement")
    path = tmp_path / "spec.json"
    import json

    path.write_text(json.dumps(s.to_dict()))
    assert PopulationSpec.from_json(path) == s


def test_size_one():
    s = spec(size=1, seed=777)
    summary = sample_population(s)
    assert summary.size == summary.even_count + summary.odd_count == 1
    (only,) = list(iter_ids(s))
    assert validate(only, s.convention)


def test_determinism():
    s = spec(SKEWED, {"A": 0.3, "O": 0.7}, size=50_000, seed=3)
    assert sample_population(s) == sample_population(s)
    assert sample_population(s) != sample_population(s.with_seed(4))
    assert sample_population(s).rng == RNG_ALGORITHM


@pytest.mark.parametrize("conv", ["paper", "complement"])
def test_generated_ids_validate(conv):
    s = spec(SKEWED, {"A": 0.2, "I": 0.3, "Z": 0.5}, size=5000, seed=8, conv=conv)
    ids = list(iter_ids(s))
    assert len(ids) == 5000
    assert all(validate(x, conv) for x in ids)
    summary = sample_population(s)
    assert summary.even_count == sum(x.last_digit % 2 == 0 for x in ids)


def test_letter_frequencies():
    weights = {"A": 0.1, "B": 0.2, "O": 0.3, "Z": 0.4}
    s = spec(letters=weights, size=100_000, seed=12)
    summary = sample_population(s)
    for letter, w in weights.items():
        count = sum(summary.per_letter[letter])
        sigma = math.sqrt(s.size * w * (1 - w))
        assert abs(count - s.size * w) <= 4 * sigma


def test_uniform_even_fraction():
    summary = sample_population(spec(size=100_000, seed=42))
    sigma = math.sqrt(0.25 / 100_000)
    assert abs(summary.p_hat - 0.5) <= 3 * sigma


def test_point_masses_give_degenerate_ci():
    est = monte_carlo_p(spec([D.point_mass(0)] * 4, {"A": 1.0}, size=500))
    assert est.p_hat == 0.0 and est.ci_low == est.ci_high == 0.0
    est = monte_carlo_p(spec([D.point_mass(0)] * 4, {"O": 1.0}, size=500))
    assert est.p_hat == 1.0 and est.ci_low == est.ci_high == 1.0


def test_monte_carlo_needs_100():
    with pytest.raises(ConfigError):
        monte_carlo_p(spec(size=99))


def test_ci_formula():
    est = estimate_from_counts(600, 1000)
    half = 1.96 * math.sqrt(0.6 * 0.4 / 1000)
    assert (est.ci_low, est.ci_high) == pytest.approx((0.6 - half, 0.6 + half))


def test_ci_coverage_uniform():
    hits = sum(monte_carlo_p(spec(size=100_000, seed=seed)).contains(0.5) for seed in range(100))
    assert hits >= 90


@pytest.mark.parametrize("seed", [1, 2, 3])
def test_monte_carlo_consistency(seed):
    s = spec(SKEWED, {"A": 0.4, "O": 0.6}, size=100_000, seed=seed)
    est = monte_carlo_p(s)
    exact = population_exact_p(s)
    assert abs(est.p_hat - exact) <= 4 * math.sqrt(est.p_hat * (1 - est.p_hat) / s.size)


def test_schedule_table():
    by_day = {s.weekday: s.eligible_parities for s in SCHEDULE}
    assert by_day[Weekday.SUN] == {"even", "odd"}
    for day in (Weekday.MON, Weekday.WED, Weekday.FRI):
        assert by_day[day] == {"odd"}
    for day in (Weekday.TUE, Weekday.THU, Weekday.SAT):
        assert by_day[day] == {"even"}


def test_purchase_days():
    T, S = Weekday, Weekday.SUN
    assert purchase_days(parse_id("A123456784")) == {T.TUE, T.THU, T.SAT, S}
    assert purchase_days(parse_id("A123456787")) == {T.MON, T.WED, T.FRI, S}
    for last in range(10):
        assert S in purchase_days(parse_id(f"B00000000{last}"))


@pytest.mark.parametrize("p", [0.0, 0.5, 0.9, 1.0, 0.123])
def test_weekday_load(p):
    load = weekday_load(p)
    assert load[Weekday.SUN] == 1.0
    assert load[Weekday.TUE] == load[Weekday.THU] == load[Weekday.SAT] == p
    assert load[Weekday.MON] == load[Weekday.WED] == load[Weekday.FRI] == pytest.approx(1 - p)
    assert load[Weekday.MON] + load[Weekday.TUE] == pytest.approx(1.0)
    assert all(0.0 <= v <= 1.0 for v in load.values())


def test_weekday_load_hypothetical():
    load = weekday_load(0.9)
    assert load[Weekday.MON] == pytest.approx(0.1)
    assert load[Weekday.TUE] == 0.9
    with pytest.raises(ValueError):
        weekday_load(1.1)
