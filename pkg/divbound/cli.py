#  Copyright 2026 divbound contributors
#
#  Licensed under the Apache License, Version 2.0 (the "License");
#  you may not use this file except in compliance with the License.
#  You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
#  Unless required by applicable law or agreed to in writing, software
#  distributed under the License is distributed on an "AS IS" BASIS,
#  WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
#  See the License for the specific language governing permissions and
#  limitations under the License.
#

"""
The `divbound` command line.  Every subcommand writes JSON (the default) or
CSV to stdout; diagnostics go to stderr.  Output depends only on the
arguments and the seed.
"""

# -----------------------------------------------------------------------------
# System Imports
# -----------------------------------------------------------------------------

from typing import Optional, List, Union
from pathlib import Path
import argparse
import logging
import json
import math
import sys

# -----------------------------------------------------------------------------
# Public Imports
# -----------------------------------------------------------------------------

import numpy as np

# -----------------------------------------------------------------------------
# Private Imports
# -----------------------------------------------------------------------------

import divbound
from divbound.config import Settings
from divbound.consts import GeneratorName, LogBase, OutputFormat
from divbound.errors import DivboundError, ValidationError
from divbound.expr import custom_generator
from divbound.fgen import DiscreteDist, FGenerator, binary_pair, catalog, get_generator
from divbound.binary import make_binary, check_condition
from divbound.bounds import MomentSpec, theorem1_bound, theorem2_bound, tv_bound
from divbound.inequalities import INEQUALITIES, binary_sweep
from divbound.oracle import search_given_td, search_given_moments
from divbound.thermo import MarkovSystem, thermo_report, step_rates
from divbound.verify import VerificationSuite

# -----------------------------------------------------------------------------
# Exports
# -----------------------------------------------------------------------------

__all__ = ["main", "build_parser"]

# -----------------------------------------------------------------------------
#
#                                 CODE BEGINS
#
# -----------------------------------------------------------------------------

_LOG = logging.getLogger(divbound.__package__)

# divergences whose values carry a logarithm and so follow --log-base
LOG_VALUED = frozenset({GeneratorName.kl.value, GeneratorName.js.value})

EXIT_OK, EXIT_FAILED, EXIT_USAGE = 0, 1, 2

Payload = Union[dict, List[dict]]


# -----------------------------------------------------------------------------
#
#                                  OUTPUT
#
# -----------------------------------------------------------------------------


def _plain(value):
    """JSON-safe copy of value; non-finite floats become strings"""
    if isinstance(value, dict):
        return {key: _plain(item) for key, item in value.items()}

    if isinstance(value, (list, tuple)):
        return [_plain(item) for item in value]

    if isinstance(value, (np.bool_, bool)):
        return bool(value)

    if isinstance(value, (np.integer, int)):
        return int(value)

    if isinstance(value, (np.floating, float)):
        value = float(value)
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return value

    return value


def _flat(row: dict) -> dict:
    """drop nested values, which have no CSV column"""
    return {
        key: value for key, value in row.items() if not isinstance(value, (dict, list))
    }


def _emit(payload: Payload, fmt: OutputFormat, stream=None):
    stream = stream or sys.stdout
    payload = _plain(payload)

    if fmt is OutputFormat.csv:
        rows = payload if isinstance(payload, list) else [payload]
        VerificationSuite.to_csv([_flat(row) for row in rows], stream)
        return

    stream.write(json.dumps(payload, indent=2) + "\n")


def _format(args, default: OutputFormat = OutputFormat.json) -> OutputFormat:
    return OutputFormat(args.format) if args.format else default


def _in_base(value: float, generator: str, settings: Settings) -> float:
    if generator in LOG_VALUED:
        return value * settings.log_base.factor
    return value


# -----------------------------------------------------------------------------
#
#                                  INPUTS
#
# -----------------------------------------------------------------------------


def _generator(args) -> FGenerator:
    if args.generator != GeneratorName.custom.value:
        return get_generator(args.generator)

    if not args.expr:
        raise ValidationError("the custom generator needs --expr")

    return custom_generator(
        args.expr, f_at_0=args.f_at_0, slope_at_inf=args.slope_at_inf
    )


def _read_json(source: str, stdin_used: List[bool]):
    """JSON from an inline document, a file path, or stdin when source is '-'"""
    if source == "-":
        if stdin_used:
            raise ValidationError("only one input may be read from stdin")
        stdin_used.append(True)
        return json.load(sys.stdin)

    if source.lstrip().startswith("{"):
        return json.loads(source)

    return json.loads(Path(source).read_text())


# -----------------------------------------------------------------------------
#
#                               SUBCOMMANDS
#
# -----------------------------------------------------------------------------


def cmd_condition(args, settings: Settings) -> int:
    bd = make_binary(_generator(args))
    if args.grid:
        settings = settings.replace(grid_size=args.grid)
    cert = check_condition(bd, settings.grid_size, settings.tol_cond)
    body = dict(generator=bd.name, **cert.to_json(include_grid=args.include_grid))
    _emit(body, _format(args))
    return EXIT_OK


def _bound_body(result, settings: Settings) -> dict:
    body = result.to_json()
    body["bound"] = _in_base(result.bound_value, result.generator, settings)
    return body


def cmd_t1(args, settings: Settings) -> int:
    result = theorem1_bound(make_binary(_generator(args)), args.delta)
    _emit(_bound_body(result, settings), _format(args))
    return EXIT_OK


def cmd_t2(args, settings: Settings) -> int:
    spec = MomentSpec(m_P=args.mp, sigma_P=args.sp, m_Q=args.mq, sigma_Q=args.sq)
    result = theorem2_bound(make_binary(_generator(args)), spec)
    _emit(_bound_body(result, settings), _format(args))
    return EXIT_OK


def cmd_tv(args, settings: Settings) -> int:
    result = tv_bound(make_binary(_generator(args)), args.tv)
    _emit(_bound_body(result, settings), _format(args))
    return EXIT_OK


def cmd_ineq(args, settings: Settings) -> int:
    if args.name == "sweep":
        rows = binary_sweep(args.which, args.points)
        if args.which == GeneratorName.js.value:
            factor = settings.log_base.factor
            rows = [
                dict(
                    row,
                    lhs=row["lhs"] * factor,
                    rhs=row["rhs"] * factor,
                    prior_rhs=row["prior_rhs"] * factor,
                )
                for row in rows
            ]
        _emit(rows, _format(args, OutputFormat.csv))
        return EXIT_OK

    if not (args.dist_p and args.dist_q):
        raise ValidationError(f"ineq {args.name} needs --dist-p and --dist-q")

    stdin_used: List[bool] = []
    P = DiscreteDist.from_json(_read_json(args.dist_p, stdin_used))
    Q = DiscreteDist.from_json(_read_json(args.dist_q, stdin_used))

    body = INEQUALITIES[args.name](P, Q).to_json()
    if args.name == GeneratorName.js.value:
        for key in ("lhs", "rhs", "slack", "prior_rhs", "improvement", "alt_rhs"):
            body[key] *= settings.log_base.factor

    _emit(body, _format(args))
    return EXIT_OK


def cmd_oracle(args, settings: Settings) -> int:
    gen = _generator(args)
    bd = make_binary(gen)

    if args.constraint == "td":
        if args.delta is None:
            raise ValidationError("oracle td needs --delta")
        found = search_given_td(gen, args.delta, args.support_size, args.resolution)
        bound = bd(math.sqrt(args.delta))
    else:
        if None in (args.mp, args.sp, args.mq, args.sq):
            raise ValidationError("oracle moments needs --mp --sp --mq --sq")
        spec = MomentSpec(m_P=args.mp, sigma_P=args.sp, m_Q=args.mq, sigma_Q=args.sq)
        found = search_given_moments(gen, spec, args.support_size, args.resolution)
        bound = theorem2_bound(bd, spec).bound_value

    body = found.to_json()
    body.update(
        value=_in_base(found.value, gen.name, settings),
        bound=_in_base(bound, gen.name, settings),
        gap=_in_base(found.value - bound, gen.name, settings),
        generator=gen.name,
    )
    _emit(body, _format(args))
    return EXIT_OK


def cmd_thermo(args, settings: Settings) -> int:
    system = MarkovSystem.from_json(_read_json(args.system, []))
    report = thermo_report(system)

    if args.steps_csv:
        VerificationSuite.to_csv(step_rates(system), args.steps_csv)

    _emit(report.to_json(), _format(args))
    return EXIT_OK


def _sweep_rows(curve: str, points: int, settings: Settings) -> List[dict]:
    grid = np.linspace(0.0, 1.0, points)

    if curve == "inequalities":
        rows = []
        for d in grid:
            t = math.sqrt(d)
            pair = binary_pair(min(1.0, t))
            rhs = {name: INEQUALITIES[name](*pair).rhs for name in ("hellinger", "js")}
            rows.append(
                dict(
                    delta=float(d),
                    hellinger=rhs["hellinger"],
                    js=rhs["js"] * settings.log_base.factor,
                    bhattacharyya_sq_max=1.0 - float(d),
                    prior=float(d) / 2.0,
                )
            )
        return rows

    # binary: t vs g(t); td: d vs g(sqrt(d))
    column = "t" if curve == "binary" else "d"
    args = grid if curve == "binary" else np.sqrt(grid)
    values = {
        gen.name: _in_base(make_binary(gen).g(args), gen.name, settings)
        for gen in catalog()
    }
    return [
        {column: float(x), **{name: float(vals[i]) for name, vals in values.items()}}
        for i, x in enumerate(grid)
    ]


def cmd_sweep(args, settings: Settings) -> int:
    rows = _sweep_rows(args.curve, args.points, settings)
    _emit(rows, _format(args, OutputFormat.csv))
    return EXIT_OK


def cmd_verify(args, settings: Settings) -> int:
    suite = VerificationSuite(settings=settings)
    results = suite.run(only=args.only)
    rows = [result.to_json(timings=args.timings) for result in results]

    if args.report:
        VerificationSuite.to_csv(rows, args.report)

    _emit(rows, _format(args))

    if failed := [result.name for result in results if not result.passed]:
        _LOG.warning(f"verify: failed checks {failed}")
        return EXIT_FAILED
    return EXIT_OK


# -----------------------------------------------------------------------------
#
#                                  PARSER
#
# -----------------------------------------------------------------------------


def _add_generator(parser: argparse.ArgumentParser):
    parser.add_argument(
        "generator",
        choices=[name.value for name in GeneratorName],
        help="catalog generator, or 'custom' with --expr",
    )
    parser.add_argument("--expr", help="f(t) for the custom generator")
    parser.add_argument("--f-at-0", type=float, help="f(0+) of the custom generator")
    parser.add_argument(
        "--slope-at-inf", type=float, help="lim f(t)/t of the custom generator"
    )


def _add_moments(parser: argparse.ArgumentParser, required: bool):
    for flag, what in (
        ("--mp", "mean of P"),
        ("--sp", "standard deviation of P"),
        ("--mq", "mean of Q"),
        ("--sq", "standard deviation of Q"),
    ):
        parser.add_argument(flag, type=float, required=required, help=what)


def _global_options(suppress: bool) -> argparse.ArgumentParser:
    """
    The global flags, accepted before or after the subcommand.  The
    subcommand copy suppresses its defaults so it does not mask a flag given
    before the subcommand.
    """

    def default(value):
        return argparse.SUPPRESS if suppress else value

    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument(
        "--log-base",
        choices=[base.value for base in LogBase],
        default=default(None),
        help="display base of log-valued divergences (default e)",
    )
    parent.add_argument(
        "--seed", type=int, default=default(None), help="seed of the random sweeps"
    )
    parent.add_argument(
        "--tol", type=float, default=default(None), help="tolerance of verify"
    )
    parent.add_argument(
        "-v",
        "--verbose",
        action="store_true",
        default=default(False),
        help="debug logging to stderr",
    )

    fmt = parent.add_mutually_exclusive_group()
    for name in ("json", "csv"):
        fmt.add_argument(
            f"--{name}",
            dest="format",
            action="store_const",
            const=name,
            default=default(None),
        )
    return parent


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="divbound",
        description="Tight lower bounds of symmetrized f-divergences.",
        parents=[_global_options(suppress=False)],
    )
    common = _global_options(suppress=True)
    sub = parser.add_subparsers(dest="command", required=True)

    def command(name: str, handler, summary: str) -> argparse.ArgumentParser:
        cmd = sub.add_parser(name, parents=[common], help=summary)
        cmd.set_defaults(handler=handler)
        return cmd

    cmd = command("condition", cmd_condition, "certify that g'(t)/t is non-decreasing")
    _add_generator(cmd)
    cmd.add_argument("--grid", type=int, help="number of Chebyshev nodes")
    cmd.add_argument(
        "--include-grid", action="store_true", help="list the probed nodes"
    )

    cmd = command("t1", cmd_t1, "bound under a given triangular discrimination")
    _add_generator(cmd)
    cmd.add_argument("--delta", type=float, required=True)

    cmd = command("t2", cmd_t2, "bound under given means and variances")
    _add_generator(cmd)
    _add_moments(cmd, required=True)

    cmd = command("tv", cmd_tv, "bound under a given total variation distance")
    _add_generator(cmd)
    cmd.add_argument("--tv", type=float, required=True)

    cmd = command("ineq", cmd_ineq, "inequalities with triangular discrimination")
    cmd.add_argument("name", choices=[*INEQUALITIES, "sweep"])
    cmd.add_argument("--dist-p", help="JSON of P: inline, a path, or - for stdin")
    cmd.add_argument("--dist-q", help="JSON of Q: inline, a path, or - for stdin")
    cmd.add_argument("--which", choices=list(INEQUALITIES), default="hellinger")
    cmd.add_argument("--points", type=int, default=101)

    cmd = command("oracle", cmd_oracle, "brute-force search for the minimum")
    cmd.add_argument("constraint", choices=["td", "moments"])
    _add_generator(cmd)
    cmd.add_argument("--delta", type=float)
    _add_moments(cmd, required=False)
    cmd.add_argument("--support-size", type=int, default=2)
    cmd.add_argument("--resolution", type=int, default=200)

    cmd = command("thermo", cmd_thermo, "entropy production bound of a Markov system")
    cmd.add_argument(
        "--system", required=True, help="system JSON: a path, or - for stdin"
    )
    cmd.add_argument("--steps-csv", help="write per-step rates to this CSV file")

    cmd = command("sweep", cmd_sweep, "bound curves for plotting")
    cmd.add_argument(
        "--curve", choices=["binary", "td", "inequalities"], default="binary"
    )
    cmd.add_argument("--points", type=int, default=101)

    cmd = command("verify", cmd_verify, "run the acceptance checks")
    cmd.add_argument("--only", nargs="+", help="run only the named checks")
    cmd.add_argument("--report", help="also write the results to this CSV file")
    cmd.add_argument("--timings", action="store_true", help="include elapsed seconds")

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)

    logging.basicConfig(
        stream=sys.stderr,
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )

    try:
        settings = Settings.from_env(
            seed=args.seed, tol=args.tol, log_base=args.log_base
        )
        return args.handler(args, settings)

    # ValueError covers malformed JSON and unknown check names for verify --only
    except (DivboundError, ValueError, OSError) as exc:
        print(f"divbound {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
