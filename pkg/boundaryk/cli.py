import argparse
import logging
import sys
from pathlib import Path

from boundaryk.config import Settings
from boundaryk.crossed_product import CoefficientMode
from boundaryk.engine import STAGES, Pipeline, Status, classify_command
from boundaryk.fixtures import load_fixture
from boundaryk.report import render

logger = logging.getLogger(__name__)

LOG_FORMAT = "%(levelname)s %(name)s: %(message)s"


def _coefficients(text):
    try:
        return CoefficientMode.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="boundaryk",
        description="K-theory of boundary crossed products of hyperbolic 3-manifold groups.",
    )
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument(
        "--coefficients",
        type=_coefficients,
        default=CoefficientMode.integral(),
        help="z (integral, default), q, or f<p> for a prime p.",
    )
    shared.add_argument("--output", type=Path, default=None, help="Write the report here instead of stdout.")
    shared.add_argument("--keep-going", action="store_true", help="Report failures and continue.")
    shared.add_argument("-v", "--verbose", action="store_true", help="Log at DEBUG level.")

    commands = parser.add_subparsers(dest="command", required=True)
    helps = {
        "validate": "Check the homological manifold clauses of a fixture.",
        "homology": "Integral homology and cohomology tables.",
        "ktheory": "K-groups of the manifold with the degeneration certificate.",
        "crossed": "Pointed K-invariants of the boundary crossed product.",
    }
    for stage in STAGES:
        sub = commands.add_parser(stage, parents=[shared], help=helps[stage])
        sub.add_argument("path", type=Path, help="Fixture file.")
    sub = commands.add_parser("classify", parents=[shared], help="Partition a corpus directory by invariants.")
    sub.add_argument("path", type=Path, help="Corpus directory.")
    return parser


def configure_logging(verbose: bool, settings: Settings):
    level = logging.DEBUG if verbose else getattr(logging, settings.log_level)
    logging.basicConfig(stream=sys.stderr, level=level, format=LOG_FORMAT, force=True)


def _emit(report: dict, output):
    text = render(report)
    if output is None:
        sys.stdout.write(text)
    else:
        output.write_text(text, encoding="utf-8")


def _run_single(args) -> int:
    try:
        fixture = load_fixture(args.path)
    except OSError as exc:
        print(f"boundaryk: cannot read {args.path}: {exc}", file=sys.stderr)
        return Status.SCHEMA_ERROR
    except ValueError as exc:
        print(f"boundaryk: {args.path.name}: {exc}", file=sys.stderr)
        return Status.SCHEMA_ERROR
    result = Pipeline(args.coefficients).run(fixture, args.command)
    _emit(
        {"command": args.command, "coefficients": args.coefficients.label, "fixture": result.section},
        args.output,
    )
    if result.status is not Status.OK and args.keep_going:
        return Status.OK
    return result.status


def _run_classify(args, settings) -> int:
    try:
        report, status = classify_command(args.path, args.coefficients, args.keep_going, settings)
    except FileNotFoundError as exc:
        print(f"boundaryk: {exc}", file=sys.stderr)
        return Status.SCHEMA_ERROR
    except ValueError as exc:
        print(f"boundaryk: {exc}", file=sys.stderr)
        return Status.SCHEMA_ERROR
    for failure in report["failures"]:
        print(f"boundaryk: {failure['fixture']}: {failure['error']}: {failure['message']}", file=sys.stderr)
    _emit(report, args.output)
    return status


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        settings = Settings.from_env()
    except ValueError as exc:
        print(f"boundaryk: {exc}", file=sys.stderr)
        return Status.SCHEMA_ERROR
    configure_logging(args.verbose, settings)
    logger.debug("Running %s on %s with %s coefficients", args.command, args.path, args.coefficients)
    if args.command == "classify":
        return int(_run_classify(args, settings))
    return int(_run_single(args))
