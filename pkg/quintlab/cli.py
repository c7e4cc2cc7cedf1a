import argparse
import sys
from pathlib import Path
from typing import List, Optional, Sequence, TextIO

from quintlab.configuration import Configuration
from quintlab.exceptions import LabException, ValidationError
from quintlab.experiments import EXPERIMENTS
from quintlab.lab import Lab
from quintlab.logging.logger import LoggingLevel
from quintlab.version import __version__

DEFAULT_OUT = Path("quintlab-out")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="quintlab",
        description="Reproducible numerical experiments on the quintic mean-field hierarchy.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subparsers = parser.add_subparsers(dest="experiment", metavar="EXPERIMENT")
    for name, experiment in EXPERIMENTS.items():
        sub = subparsers.add_parser(name, help=experiment.DESCRIPTION)
        sub.add_argument("--config", type=Path, help="flat JSON configuration file")
        sub.add_argument(
            "--out", type=Path, help=f"output directory, defaults to {DEFAULT_OUT}/{name}"
        )
        sub.add_argument("--seed", type=int, help="unsigned 64-bit seed, overrides the config")
        sub.add_argument("--threads", type=int, help="worker threads, overrides the config")
        sub.add_argument(
            "--log-level",
            choices=[level.name.lower() for level in LoggingLevel],
            help="overrides the config",
        )
    return parser


def experiment_list() -> str:
    width = max(len(name) for name in EXPERIMENTS)
    lines = ["experiments:"]
    lines += [f"  {name.ljust(width)}  {exp.DESCRIPTION}" for name, exp in EXPERIMENTS.items()]
    return "\n".join(lines)


def report_error(exc: LabException, stream: TextIO) -> None:
    print(f"error: {exc}", file=stream)
    if isinstance(exc, ValidationError) and len(exc.violations) > 1:
        for violation in exc.violations:
            print(f"  - {violation}", file=stream)


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Runs one experiment and returns the exit status: 0 on success, 2 on invalid input,
    3 when a resource cap is hit and 4 on numerical failure."""
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.experiment is None:
        parser.print_usage()
        print(experiment_list())
        return 0

    overrides = {"seed": args.seed, "threads": args.threads, "logging_level": args.log_level}
    try:
        if args.config is not None:
            config = Configuration.from_file(args.config, **overrides)
        else:
            config = Configuration.from_dict({}, **overrides)
        out_dir = args.out if args.out is not None else DEFAULT_OUT / args.experiment
        result = Lab(config).run(args.experiment, out_dir)
    except LabException as exc:
        report_error(exc, sys.stderr)
        return exc.exit_code

    artifacts: List[str] = [str(path) for path in result.artifacts]
    print(f"{result.experiment}: wrote {len(artifacts)} artifacts to {out_dir}")
    for path in artifacts:
        print(f"  {path}")
    return 0
