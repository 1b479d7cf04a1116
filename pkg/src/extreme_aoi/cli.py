"""
Command-line front end.

Subcommands ``analyze``, ``simulate``, ``validate``, ``sweep`` and ``tail``.
Exit codes: 0 success or pass, 1 validation failure, 2 usage or config error.
"""
import argparse
import os
import sys
import tempfile

from . import experiment
from .experiment import ConfigError
from .risk import InsufficientSamplesError
from .sim import SimulationError, peaks_csv, trajectory_csv
from .specfun import DomainError

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _common(p):
    p.add_argument("--config", help="INI config file")
    p.add_argument("--preset", choices=sorted(experiment.PRESETS))
    p.add_argument("--out", help="output path (default: stdout)")
    p.add_argument("--format", choices=("csv", "json"))
    p.add_argument("--seed", type=int)
    p.add_argument("--cycles", type=int)
    p.add_argument("--replications", type=int)
    p.add_argument("--workers", type=int, help="processes for replications")
    p.add_argument("--alphas", help="comma-separated confidence levels")
    p.add_argument("--block-size", type=int, dest="block_size")
    p.add_argument("--mode", choices=("physical", "analytic"))
    p.add_argument("--tolerance", action="append", default=[], metavar="METRIC=REL",
                   help="relative tolerance for one metric (repeatable)")


def build_parser():
    parser = _Parser(prog="extreme-aoi", description=__doc__.strip().splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sub_analyze = sub.add_parser("analyze", help="closed-form statistics and risk metrics")
    sub_sim = sub.add_parser("simulate", help="Monte Carlo run with empirical statistics")
    sub_sim.add_argument("--trajectory", help="write the AoI sawtooth CSV here")
    sub_sim.add_argument("--trajectory-slots", type=int, default=1000)
    sub_sim.add_argument("--peaks", help="write per-cycle peak AoI CSV here")
    sub_val = sub.add_parser("validate", help="simulation vs. closed forms, pass/fail")
    sub_sweep = sub.add_parser("sweep", help="closed-form parameter sweep to CSV")
    sub_sweep.add_argument("--param", choices=experiment.SWEEPABLE)
    sub_sweep.add_argument("--from", dest="start", type=float)
    sub_sweep.add_argument("--to", dest="stop", type=float)
    sub_sweep.add_argument("--steps", type=int)
    sub_sweep.add_argument("--scale", choices=("linear", "log", "dbm"))
    sub_tail = sub.add_parser("tail", help="empirical vs. Gumbel tail curves to CSV")
    sub_tail.add_argument("--self-test", action="store_true", default=None,
                          help="sample from the fitted Gumbel instead of the AoI process")
    sub_tail.add_argument("--tail-depth", type=float)
    sub_tail.add_argument("--bins", type=int)
    for p in (sub_analyze, sub_sim, sub_val, sub_sweep, sub_tail):
        _common(p)
    return parser


def flags_layer(args):
    """Translate parsed flags into a config layer (only flags actually given)."""
    layer = {}
    mapping = {
        "seed": "run.seed", "cycles": "run.cycles", "replications": "run.replications",
        "workers": "run.workers", "block_size": "run.block_B", "mode": "run.mode",
        "alphas": "risk.alphas", "out": "output.path", "format": "output.format",
        "param": "sweep.param", "start": "sweep.from", "stop": "sweep.to",
        "steps": "sweep.steps", "scale": "sweep.scale",
        "self_test": "tail.self_test", "tail_depth": "tail.depth", "bins": "tail.bins",
    }
    for attr, key in mapping.items():
        value = getattr(args, attr, None)
        if value is not None:
            layer[key] = value
    for item in args.tolerance:
        name, sep, value = item.partition("=")
        if not sep or not name:
            raise ConfigError("tolerance", f"expected METRIC=REL, got {item!r}")
        layer[f"tolerances.{name}"] = value
    return layer


def write_output(text, path):
    """Write `text` atomically to `path`, or to stdout when `path` is None."""
    if path is None:
        sys.stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _execute(args, config):
    command = args.command
    if command == "analyze":
        write_output(experiment.render(experiment.analyze(config), config.format), config.out)
        return EXIT_OK
    if command == "simulate":
        report, stats = experiment.simulate(config)
        write_output(experiment.render(report, config.format), config.out)
        if args.trajectory:
            write_output(trajectory_csv(stats, args.trajectory_slots), args.trajectory)
        if args.peaks:
            write_output(peaks_csv(stats), args.peaks)
        return EXIT_OK
    if command == "validate":
        report = experiment.validate(config)
        write_output(experiment.render(report, config.format), config.out)
        if not report["passed"]:
            print("validation failed: " + ", ".join(report["failed"]), file=sys.stderr)
            return EXIT_FAIL
        return EXIT_OK
    if command == "sweep":
        write_output(experiment.sweep(config), config.out)
        return EXIT_OK
    if command == "tail":
        write_output(experiment.tail(config), config.out)
        return EXIT_OK
    raise AssertionError(command)


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = experiment.load_config(args.preset, args.config, flags_layer(args))
        return _execute(args, config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DomainError, InsufficientSamplesError, SimulationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
