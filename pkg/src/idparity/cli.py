"""Command-line interface.

Exit status: 0 on success, 1 for invalid input or configuration, 2 when
``validate`` is given a well-formed ID whose check digit is wrong. Errors
go to stderr as ``idparity: error[<Code>]: <message>``.
"""

from __future__ import annotations

import argparse
import csv
import functools
import io
import json
import os
import sys
from fractions import Fraction
from pathlib import Path
from typing import Any, Sequence, TextIO

from . import checksum, oracle_sim, parity
from .checksum import Convention
from .errors import ConfigError, IdParityError
from .id_model import format_id, letter_to_alpha, parse_id
from .oracle_sim import DigitDistribution, PopulationSpec

SEED_ENV = "IDPARITY_SEED"

EXIT_OK = 0
EXIT_INVALID_INPUT = 1
EXIT_CHECKSUM = 2


class UsageError(IdParityError):
    code = "UsageError"


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on bad usage; 2 is reserved for checksum failures
    def error(self, message: str):
        raise UsageError(message)


def parse_probability(text: str) -> float:
    """Parse ``0.25`` or ``1/3``; fractions are reduced exactly before conversion."""
    try:
        value = Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise ConfigError(f"not a probability: {text!r}") from None
    return float(value)


def parse_probability_list(text: str) -> list[float]:
    return [parse_probability(part) for part in text.split(",")]


def _parse_bit(text: str) -> int:
    if text not in ("0", "1"):
        raise ConfigError(f"parity bit must be 0 or 1, got {text!r}")
    return int(text)


def _load_dists(path: str) -> list[DigitDistribution]:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: malformed JSON: {exc}") from None
    except OSError as exc:
        raise ConfigError(f"{path}: {exc.strerror}") from None
    if isinstance(data, dict):
        data = data.get("position_dists", data.get("dists"))
    if not isinstance(data, list) or len(data) not in (4, 8):
        raise ConfigError(f"{path}: expected a list of 4 (a2, a4, a6, a8) or 8 (a1..a8) PMFs")
    return [DigitDistribution(tuple(d)) for d in data]


def _resolve_seed(flag: int | None, file_seed: int) -> int:
    if flag is not None:
        return flag
    env = os.environ.get(SEED_ENV)
    if env is not None and env.strip():
        try:
            return int(env.strip(), 0)
        except ValueError:
            raise ConfigError(f"{SEED_ENV}={env!r} is not an integer") from None
    return file_seed


def _fmt(value: Any, places: int) -> str:
    if isinstance(value, float):
        return f"{value:.{places}f}"
    if value is None:
        return "-"
    return str(value)


def _emit(record: dict, fmt: str, out: TextIO, places: int = 6) -> None:
    if fmt == "json":
        out.write(json.dumps(record, indent=2) + "\n")
    elif fmt == "csv":
        _write_csv(out, list(record), [list(record.values())])
    else:
        for key, value in record.items():
            if isinstance(value, dict):
                out.write(f"{key}:\n")
                for k, v in value.items():
                    out.write(f"  {k}: {_fmt(v, places)}\n")
            else:
                out.write(f"{key}: {_fmt(value, places)}\n")


def _write_csv(out: TextIO, header: list[str], rows: list[list]) -> None:
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)


def cmd_validate(args: argparse.Namespace, out: TextIO) -> int:
    conv = Convention.parse(args.convention)
    id_number = parse_id(args.id, casefold=args.casefold, strict_gender=args.strict_gender)
    valid = checksum.validate(id_number, conv)
    record = {
        "convention": conv.value,
        "id": format_id(id_number),
        "valid": valid,
        "expected_check_digit": checksum.check_digit(id_number.code, id_number.prefix, conv),
    }
    _emit(record, args.format, out)
    return EXIT_OK if valid else EXIT_CHECKSUM


def cmd_complete(args: argparse.Namespace, out: TextIO) -> int:
    conv = Convention.parse(args.convention)
    text = args.prefix
    if len(text) != 9:
        raise ConfigError(f"expected a letter followed by 8 digits, got {text!r}")
    code = letter_to_alpha(text[0], casefold=args.casefold)
    id_number = checksum.complete(code, text[1:], conv)
    if args.format == "human":
        out.write(format_id(id_number) + "\n")
    else:
        _emit({"convention": conv.value, "id": format_id(id_number)}, args.format, out)
    return EXIT_OK


def cmd_predict(args: argparse.Namespace, out: TextIO) -> int:
    code = letter_to_alpha(args.letter, casefold=args.casefold)
    bits = [_parse_bit(b) for b in (args.b2, args.b4, args.b6, args.b8)]
    bit = parity.predict_last_parity(code, *bits)
    if args.format == "human":
        out.write(f"{bit} ({'even' if bit == 0 else 'odd'})\n")
    else:
        record = {
            "letter": code.letter,
            "parity_constant": code.parity_constant,
            "bits": {"b2": bits[0], "b4": bits[1], "b6": bits[2], "b8": bits[3]},
            "last_digit_parity": bit,
        }
        _emit(record, args.format, out)
    return EXIT_OK


def _report_record(report: parity.FairnessReport) -> dict:
    # convention first so every report header names it
    record = {"convention": report.convention}
    record.update((k, v) for k, v in report.to_dict().items() if k != "convention")
    return record


def cmd_analyze(args: argparse.Namespace, out: TextIO) -> int:
    code = letter_to_alpha(args.letter, casefold=args.casefold)
    q = parse_probability_list(args.q)
    report = parity.region_fairness(code, q, args.epsilon, convention=args.convention)
    _emit(_report_record(report), args.format, out, args.places)
    return EXIT_OK


def cmd_oracle(args: argparse.Namespace, out: TextIO) -> int:
    code = letter_to_alpha(args.letter, casefold=args.casefold)
    conv = Convention.parse(args.convention)
    dists = _load_dists(args.dists)
    parity_dists = dists[1::2] if len(dists) == 8 else dists
    if args.full:
        if len(dists) != 8:
            raise ConfigError("--full needs all 8 position PMFs (a1..a8)")
        p = oracle_sim.exact_p_full(code, dists, conv)
    else:
        p = oracle_sim.exact_p(code, parity_dists)
    q = [oracle_sim.digit_even_prob(d) for d in parity_dists]
    closed = parity.region_fairness(code, q, args.epsilon).p
    report = parity.make_report(
        p, "enumeration", args.epsilon, bias=q, letter=code.letter, convention=conv.value
    )
    record = _report_record(report)
    record["q"] = q
    record["closed_form_p"] = closed
    record["closed_form_delta"] = p - closed
    if args.format == "human":
        record["q"] = ",".join(_fmt(x, args.places) for x in q)
        record["closed_form_delta"] = f"{p - closed:.3e}"
    _emit(record, args.format, out, args.places)
    return EXIT_OK


def _loads_record(p: float) -> dict:
    return {day.label: load for day, load in oracle_sim.weekday_load(p).items()}


def cmd_simulate(args: argparse.Namespace, out: TextIO) -> int:
    spec = PopulationSpec.from_json(args.spec)
    seed = _resolve_seed(args.seed, spec.seed)
    if seed != spec.seed:
        spec = spec.with_seed(seed)
    summary = oracle_sim.sample_population(spec)
    exact = oracle_sim.population_exact_p(spec)
    estimate = oracle_sim.monte_carlo_p(spec, summary) if spec.size >= 100 else None

    if args.format == "csv":
        if args.table == "letters":
            rows = [[c, e, o] for c, (e, o) in summary.per_letter.items()]
            _write_csv(out, ["letter", "even_count", "odd_count"], rows)
        else:
            rows = [[day, load] for day, load in _loads_record(summary.p_hat).items()]
            _write_csv(out, ["weekday", "eligible_fraction"], rows)
        return EXIT_OK

    record = summary.to_dict()
    record["p_hat"] = summary.p_hat
    if estimate is not None:
        record["ci_low"] = estimate.ci_low
        record["ci_high"] = estimate.ci_high
    record["exact_p"] = exact
    record["weekday_load"] = _loads_record(summary.p_hat)
    if args.format == "human":
        record["per_letter"] = {c: f"{e} even, {o} odd" for c, (e, o) in summary.per_letter.items()}
    _emit(record, args.format, out, args.places)
    return EXIT_OK


def cmd_schedule(args: argparse.Namespace, out: TextIO) -> int:
    id_number = parse_id(args.id, casefold=args.casefold)
    days = sorted(oracle_sim.purchase_days(id_number))
    labels = [d.label for d in days]
    if args.format == "human":
        out.write(" ".join(labels) + "\n")
    else:
        _emit({"id": format_id(id_number), "days": labels}, args.format, out)
    return EXIT_OK


def cmd_gallager(args: argparse.Namespace, out: TextIO) -> int:
    q = parse_probability(args.q)
    p = parity.gallager_even_ones(args.m, q)
    if args.format == "human":
        out.write(f"{p:.{args.places}f}\n")
    else:
        _emit({"m": args.m, "q": q, "p": p}, args.format, out)
    return EXIT_OK


@functools.lru_cache(maxsize=None)
def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="idparity",
        description="Check digits and last-digit parity fairness for letter-plus-nine-digit IDs.",
    )
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("human", "json", "csv"), default="human")
    common.add_argument("--casefold", action="store_true", help="accept lowercase letters")

    conv = _Parser(add_help=False)
    conv.add_argument(
        "--convention", choices=[c.value for c in Convention], default=Convention.PAPER.value
    )

    def add(name, func, help, parents=(common,), places=6):
        p = sub.add_parser(name, help=help, parents=list(parents))
        p.add_argument("--places", type=int, default=places, help="decimal places in human output")
        p.set_defaults(func=func)
        return p

    p = add("validate", cmd_validate, "check an ID's last digit", (common, conv))
    p.add_argument("id")
    p.add_argument("--strict-gender", action="store_true", help="require the first digit to be 1 or 2")

    p = add("complete", cmd_complete, "append the check digit to LETTER+8 digits", (common, conv))
    p.add_argument("prefix")

    p = add("predict", cmd_predict, "last-digit parity from the letter and b2 b4 b6 b8")
    p.add_argument("letter")
    for name in ("b2", "b4", "b6", "b8"):
        p.add_argument(name)

    p = add("analyze", cmd_analyze, "closed-form fairness for one letter", (common, conv))
    p.add_argument("--letter", required=True)
    p.add_argument("--q", required=True, help="P(even) for a2,a4,a6,a8, e.g. 2/3,0.5,0.5,0.5")
    p.add_argument("--epsilon", type=parse_probability, default=parity.DEFAULT_EPSILON)

    p = add("oracle", cmd_oracle, "fairness by exact enumeration over digit PMFs", (common, conv))
    p.add_argument("--letter", required=True)
    p.add_argument("--dists", required=True, help="JSON list of 4 or 8 PMFs")
    p.add_argument("--epsilon", type=parse_probability, default=parity.DEFAULT_EPSILON)
    p.add_argument("--full", action="store_true", help="sweep all 10^8 prefixes (needs 8 PMFs)")

    p = add("simulate", cmd_simulate, "Monte-Carlo population from a JSON spec")
    p.add_argument("--spec", required=True)
    p.add_argument("--seed", type=int, default=None, help=f"overrides ${SEED_ENV} and the file")
    p.add_argument(
        "--table",
        choices=("weekdays", "letters"),
        default="weekdays",
        help="which table --format csv writes",
    )

    p = add("schedule", cmd_schedule, "weekdays on which an ID may buy")
    p.add_argument("id")

    p = add("gallager", cmd_gallager, "P(even number of ones) for m biased bits", places=4)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--q", required=True, help="probability of a one, e.g. 1/3")

    return parser


def main(
    argv: Sequence[str] | None = None,
    stdout: TextIO | None = None,
    stderr: TextIO | None = None,
) -> int:
    out = stdout if stdout is not None else sys.stdout
    err = stderr if stderr is not None else sys.stderr
    try:
        args = build_parser().parse_args(argv)
        return args.func(args, out)
    except IdParityError as exc:
        err.write(f"idparity: error[{exc.code}]: {exc}\n")
        return EXIT_INVALID_INPUT
    except ValueError as exc:
        err.write(f"idparity: error[InvalidInput]: {exc}\n")
        return EXIT_INVALID_INPUT


def run(argv: Sequence[str]) -> tuple[int, str, str]:
    """Run the CLI in-process; returns ``(exit_code, stdout, stderr)``."""
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


if __name__ == "__main__":
    sys.exit(main())
