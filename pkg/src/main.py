"""
Command-line front end.

    python -m src.main construct --f f.json --delta 1/4 --stages 3
    python -m src.main verify --f f.json --cert cert.json

Exit status: 0 on success, 2 on a mathematical negative (refutation,
unbalanced verdict, non-member, failed audit), 1 on any error.
"""
import argparse
import logging
import sys
from fractions import Fraction

from .counterexamples import kwapien_generate, log2_table, not_a_moment_generate, power_table
from .diagnostics import schmidt_profile
from .errors import CoboundaryError, ParseError
from .exact import format_rational, parse_rational
from .generic_class import generic_gp_generate, gp_membership
from .growth import GrowthSequence
from .measure_core import StepFunction
from .reports import band_frame, gp_frame, schmidt_frame, stage_frame, write_csv
from .run_config import RunConfig
from .serialization import (
    dumps,
    interval_set_from_list,
    load_json,
    load_step_function,
    load_transformation,
    step_function_from_dict,
    to_jsonable,
    transformation_from_dict,
)
from .solver import (
    Refutation,
    Solvability,
    check_solvability,
    construct_bounded_solution,
    construct_lp_solution,
    one_sided_integrals,
    verify,
)
from .verbosity_options import configure_logging

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_NEGATIVE = 2


class _Parser(argparse.ArgumentParser):
    ### argparse exits with 2 on bad flags; 2 means a negative result here ###
    def error(self, message):
        raise ParseError(message)


def _rational(text):
    return parse_rational(text)


def _rational_list(text):
    return [parse_rational(part) for part in text.split(",") if part.strip()]


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="coboundary-lab", description="Exact constructions for f = g - g∘T")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-v", "--verbosity", type=int, choices=(1, 2, 3), default=1)
    common.add_argument("--out", default=None, help="write the artifact here instead of stdout")
    common.add_argument("--format", dest="fmt", choices=("json", "csv"), default="json")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    construct = sub.add_parser("construct", parents=[common])
    construct.add_argument("--f", required=True)
    construct.add_argument("--delta", type=_rational, default=Fraction(1, 4))
    construct.add_argument("--stages", type=int, default=1)
    construct.add_argument("--open-residual", action="store_true",
                           help="leave T the identity on the last leftover set")

    lp = sub.add_parser("construct-lp", parents=[common])
    lp.add_argument("--f", required=True)
    lp.add_argument("--p", type=_rational, required=True)
    lp.add_argument("--delta", type=_rational, default=Fraction(1, 2))
    lp.add_argument("--stages", type=int, default=1)
    lp.add_argument("--delta-schedule", type=_rational_list, default=None)

    check = sub.add_parser("verify", parents=[common])
    check.add_argument("--f", required=True)
    check.add_argument("--t")
    check.add_argument("--g")
    check.add_argument("--cert", help="certificate JSON; verify on its exact set")

    schmidt = sub.add_parser("schmidt", parents=[common])
    schmidt.add_argument("--f", required=True)
    schmidt.add_argument("--t", required=True)
    schmidt.add_argument("--thresholds", type=_rational_list, required=True)
    schmidt.add_argument("--n-max", type=int, default=50)

    audit = sub.add_parser("gp-audit", parents=[common])
    audit.add_argument("--f", required=True)
    audit.add_argument("--p", type=_rational, default=Fraction(1))
    audit.add_argument("--n", type=int, default=1)
    audit.add_argument("--i-max", type=int, default=8)

    gen_gp = sub.add_parser("gen-gp", parents=[common])
    gen_gp.add_argument("--f", default=None, help="defaults to f = 0")
    gen_gp.add_argument("--p", type=_rational, default=Fraction(1))
    gen_gp.add_argument("--n", type=int, default=1)
    gen_gp.add_argument("--epsilon", type=_rational, default=Fraction(1, 2))

    moment = sub.add_parser("gen-moment", parents=[common])
    moment.add_argument("--depth", type=int, default=4)
    moment.add_argument("--table", default=None, help="JSON list of [y, phi(y)] pairs")
    moment.add_argument("--log2-max", type=int, default=1024,
                        help="use phi = log2 tabulated on 2^0..2^log2-max")

    kwapien = sub.add_parser("gen-kwapien", parents=[common])
    kwapien.add_argument("--p", type=_rational, default=Fraction(2))
    kwapien.add_argument("--r", type=_rational, default=Fraction(2))
    kwapien.add_argument("--depth", type=int, default=4)
    kwapien.add_argument("--n-step", type=int, default=12, help="N_k = 2^(n_step * k)")
    kwapien.add_argument("--n-table", default=None, help="JSON list of N_k")

    solvable = sub.add_parser("solvable", parents=[common])
    solvable.add_argument("--f", required=True)
    return parser


def config_from_args(args) -> RunConfig:
    names = ("f", "t", "g", "cert", "table", "n_table")
    inputs = {name: getattr(args, name) for name in names if getattr(args, name, None)}
    skip = set(names) | {"command", "verbosity", "out", "fmt"}
    params = {key: value for key, value in vars(args).items() if key not in skip}
    return RunConfig(args.command, inputs, params, args.out, args.fmt, args.verbosity)


def _emit(config: RunConfig, text: str):
    if config.out:
        with open(config.out, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def _stage_rows(states):
    return [{"stage": s.stage_index, "height": s.tower.height,
             "residual_measure": format_rational(s.residual.measure),
             "beta": format_rational(s.residual_measure_bound)} for s in states]


### commands ###

def _construct(config):
    f = load_step_function(config.input("f"))
    certificate, states = construct_bounded_solution(
        f, config.param("delta"), config.param("stages"),
        close_residual=not config.param("open_residual", False))
    if config.fmt == "csv":
        return EXIT_OK, write_csv(stage_frame(states))
    payload = certificate.to_dict()
    payload["stages"] = _stage_rows(states)
    return EXIT_OK, dumps(payload)


def _construct_lp(config):
    f = load_step_function(config.input("f"))
    certificate, report = construct_lp_solution(
        f, config.param("p"), config.param("delta_schedule"),
        config.param("stages"), config.param("delta"))
    status = EXIT_OK if report.chain_holds else EXIT_NEGATIVE
    if config.fmt == "csv":
        return status, write_csv(band_frame(report.bands))
    payload = certificate.to_dict()
    payload["bands"] = to_jsonable(report.bands)
    payload["transfer_integral"] = to_jsonable(report.transfer_integral)
    payload["comparison_bound"] = to_jsonable(report.comparison_bound)
    payload["chain_holds"] = report.chain_holds
    return status, dumps(payload)


def _verify(config):
    f = load_step_function(config.input("f"))
    on = None
    if config.input("cert"):
        data = load_json(config.input("cert"))
        T = transformation_from_dict(data["transformation"])
        g = step_function_from_dict(data["transfer"])
        on = interval_set_from_list(data.get("exact_set", [["0/1", "1/1"]]))
    else:
        T = load_transformation(config.input("t"))
        g = load_step_function(config.input("g"))
    result = verify(f, T, g, on=on)
    status = EXIT_NEGATIVE if isinstance(result, Refutation) else EXIT_OK
    return status, dumps(result.to_dict())


def _schmidt(config):
    f = load_step_function(config.input("f"))
    T = load_transformation(config.input("t"))
    rows = schmidt_profile(f, T, config.param("thresholds"), config.param("n_max"))
    frame = schmidt_frame(rows)
    if config.fmt == "csv":
        return EXIT_OK, write_csv(frame)
    return EXIT_OK, dumps(frame.to_dict(orient="records"))


def _gp_audit(config):
    f = load_step_function(config.input("f"))
    verdict = gp_membership(f, config.param("p"), config.param("n"),
                            GrowthSequence.factorial_two_exp(), config.param("i_max"))
    status = EXIT_OK if verdict.member else EXIT_NEGATIVE
    if config.fmt == "csv":
        return status, write_csv(gp_frame(verdict.rows))
    payload = {"member": verdict.member, "witness": verdict.witness,
               "rows": gp_frame(verdict.rows).to_dict(orient="records")}
    return status, dumps(payload)


def _gen_gp(config):
    f = load_step_function(config.input("f")) if config.input("f") else StepFunction.zero()
    spec = generic_gp_generate(f, config.param("p"), config.param("n"), config.param("epsilon"),
                               GrowthSequence.factorial_two_exp())
    return (EXIT_OK if spec.passed else EXIT_NEGATIVE), dumps(spec)


def _gen_moment(config):
    if config.input("table"):
        table = [(parse_rational(y), parse_rational(v)) for y, v in load_json(config.input("table"))]
    else:
        table = log2_table(config.param("log2_max"))
    spec = not_a_moment_generate(table, config.param("depth"))
    return (EXIT_OK if spec.passed else EXIT_NEGATIVE), dumps(spec)


def _gen_kwapien(config):
    depth = config.param("depth")
    if config.input("n_table"):
        table = [int(v) for v in load_json(config.input("n_table"))]
    else:
        table = power_table(config.param("n_step"), depth)
    spec = kwapien_generate(config.param("p"), config.param("r"), table, depth)
    return (EXIT_OK if spec.passed else EXIT_NEGATIVE), dumps(spec)


def _solvable(config):
    f = load_step_function(config.input("f"))
    verdict = check_solvability(f)
    positive, negative = one_sided_integrals(f)
    payload = {"verdict": verdict.value, "positive_integral": positive, "negative_integral": negative}
    status = EXIT_OK if verdict is Solvability.BALANCED_FINITE else EXIT_NEGATIVE
    return status, dumps(payload)


HANDLERS = {
    "construct": _construct,
    "construct-lp": _construct_lp,
    "verify": _verify,
    "schmidt": _schmidt,
    "gp-audit": _gp_audit,
    "gen-gp": _gen_gp,
    "gen-moment": _gen_moment,
    "gen-kwapien": _gen_kwapien,
    "solvable": _solvable,
}


def run(config: RunConfig) -> int:
    """Validate, execute and write the artifact; returns the exit status."""
    config.validate()
    status, text = HANDLERS[config.command](config)
    _emit(config, text)
    logger.info("%s finished with status %s", config.command, status)
    return status


def main(argv=None) -> int:
    verbosity = 1
    try:
        args = build_parser().parse_args(argv)
        verbosity = args.verbosity
        configure_logging(verbosity)
        return run(config_from_args(args))
    except (CoboundaryError, OSError, KeyError) as e:
        if verbosity >= 3:
            logger.exception("failed")
        else:
            logger.error("%s: %s", type(e).__name__, e)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
