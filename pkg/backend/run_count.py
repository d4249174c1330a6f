import argparse
import logging
import sys
from pathlib import Path

from backend.core.config import load_settings
from backend.core.enums import ComponentFilter, CountingEngine, OutputFormat, Subcommand
from backend.core.errors import OrigamiError, ResourceLimitExceeded, UnclassifiedComponent, UsageError
from backend.core.models import CountQuery, Stratum
from backend.core.parsers import parse_enum
from backend.core.paths import get_default_cache_dir, get_run_base_path
from backend.origami.census_cache import CensusStore
from backend.origami.runner import CountRunner, RunOutput

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2
EXIT_UNCLASSIFIED = 3
EXIT_RESOURCE = 4


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="origami-census",
        description="Census and counting of square-tiled surfaces by multicurve type.",
    )
    subparsers = parser.add_subparsers(dest="subcommand", required=True)

    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--stratum", help='Stratum as "sigma=[...];eps=0|1", or H(...) / Q(...)')
    shared.add_argument("--component", default=ComponentFilter.ANY.value, help="any, hyp, nonhyp, even or odd")
    shared.add_argument("--gamma1", help="Vertical multicurve type token, '*' for any")
    shared.add_argument("--gamma2", help="Horizontal multicurve type token, '*' for any")
    shared.add_argument("--Lmax", dest="lmax", type=int, default=1, help="Largest area (number of squares)")
    shared.add_argument(
        "--cache", nargs="?", type=Path, const=get_default_cache_dir(), default=None,
        help="Census cache folder (the package data folder when given without a path)",
    )
    shared.add_argument("--labeled-singularities", dest="labeled", action="store_true")
    shared.add_argument("--format", dest="output_format", default=OutputFormat.CSV.value, help="csv or json")
    shared.add_argument("--jobs", type=int, default=None, help="Worker processes (ORIGAMI_JOBS)")
    shared.add_argument("--seed", type=int, default=0, help="Seed for sampled property checks")
    shared.add_argument("--max-surfaces", dest="max_surfaces", type=int, default=None, help="Census resource limit")
    shared.add_argument(
        "--out", nargs="?", type=Path, const=get_run_base_path(), default=None,
        help="Export artifacts to a timestamped folder under this path",
    )
    shared.add_argument("-v", "--verbose", action="store_true", help="Log at INFO")
    shared.add_argument("--quiet", action="store_true", help="No progress bars")

    for subcommand in Subcommand:
        sub = subparsers.add_parser(subcommand.value, parents=[shared])
        if subcommand is Subcommand.DIAGRAMS:
            sub.add_argument("--surface", help="Surface text to decompose instead of enumerating a type")
        if subcommand is Subcommand.FIT:
            sub.add_argument("--input", type=Path, required=True, help="Count series CSV")
            sub.add_argument("--h", type=int, default=None, help="Exponent, the stratum dimension by default")
    return parser


def configure_logging(level_name: str, verbose: bool) -> None:
    level = logging.INFO if verbose else getattr(logging, level_name)
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("%(asctime)s %(levelname)s %(name)s: %(message)s"))
    root = logging.getLogger()
    root.handlers = [handler]
    root.setLevel(level)


def build_query(args: argparse.Namespace, jobs: int, max_surfaces: int) -> CountQuery:
    """
    Raises:
        ValueError: If a flag value is invalid.
    """
    stratum = Stratum.from_text(args.stratum) if args.stratum else None
    return CountQuery(
        stratum=stratum,
        component=parse_enum(ComponentFilter, args.component),
        gamma1=args.gamma1,
        gamma2=args.gamma2,
        lmax=args.lmax,
        labeled=args.labeled,
        jobs=jobs,
        seed=args.seed,
        max_surfaces=max_surfaces,
    )


def dispatch(runner: CountRunner, subcommand: Subcommand, args: argparse.Namespace) -> RunOutput:
    match subcommand:
        case Subcommand.CENSUS:
            return runner.census()
        case Subcommand.COUNT_DIRECT:
            return runner.count(CountingEngine.DIRECT)
        case Subcommand.COUNT_LATTICE:
            # sq(gamma1, gamma2) needs the charts of gamma2; sq(gamma1, *) is plain lattice counting
            engine = CountingEngine.TRAIN_TRACK if runner.query.gamma2 else CountingEngine.LATTICE
            return runner.count(engine)
        case Subcommand.VOLUME:
            return runner.volume()
        case Subcommand.DIAGRAMS:
            return runner.diagrams(args.surface)
        case Subcommand.VERIFY:
            return runner.verify()
        case Subcommand.FIT:
            return runner.fit(args.input, args.h)
        case _:
            raise ValueError(f"No handler defined for subcommand: {subcommand}")


def run(argv: list[str] | None = None) -> int:
    """
    Command line entry point.

    Returns:
        int: 0 on success, 1 when verification fails, 2 on usage errors, 3 for unclassified
            components and 4 when a resource limit cut the run short.
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK

    try:
        settings = load_settings()
        configure_logging(settings.log_level, args.verbose)
        subcommand = parse_enum(Subcommand, args.subcommand)
        output_format = parse_enum(OutputFormat, args.output_format)
        jobs = args.jobs if args.jobs is not None else settings.jobs
        max_surfaces = args.max_surfaces if args.max_surfaces is not None else settings.max_surfaces
        query = build_query(args, jobs, max_surfaces)
        cache_dir = args.cache if args.cache is not None else settings.cache_dir
        store = CensusStore(cache_dir, jobs, max_surfaces, quiet=args.quiet)
        runner = CountRunner(query, output_format, store, args.out)
        output = dispatch(runner, subcommand, args)
    except UnclassifiedComponent as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_UNCLASSIFIED
    except ResourceLimitExceeded as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_RESOURCE
    except (UsageError, ValueError, OrigamiError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except RuntimeError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_FAILED

    sys.stdout.write(output.text)
    try:
        folder = runner.export(output, subcommand.value)
    except (RuntimeError, FileExistsError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_FAILED
    if folder is not None:
        logger.info("Artifacts exported to %s", folder)
    if output.partial:
        print(f"error: partial results, a resource limit of {query.max_surfaces} surfaces was reached", file=sys.stderr)
        return EXIT_RESOURCE
    if output.failed:
        return EXIT_FAILED
    return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
