import argparse
import logging
import shutil
import sys
from pathlib import Path
from typing import Optional

try:
    from typing import assert_never
except ImportError:  # Python < 3.11
    from typing_extensions import assert_never

import yaml
from pydantic import ValidationError

from inpart.config import InpartConfig
from inpart.graph.core import (
    DemandFunctions,
    DemandMismatchError,
    Graph,
    GraphFormatError,
    VertexRangeError,
)

DEFAULT_CONFIG_FILE = Path("inpart.yaml")
INPART_FACTORY_SETTINGS = Path(__file__).with_name("config.yaml")

# Exit statuses; "negative" covers a missing or invalid partition and non-4-sparse input
EXIT_OK = 0
EXIT_ERROR = 1
EXIT_NEGATIVE = 2

# Set up the logger
logger = logging.getLogger("inpart")
logger.setLevel(logging.DEBUG)
formatter = logging.Formatter("%(asctime)s\t%(levelname)s\t%(message)s")

stream_handler = logging.StreamHandler(sys.stderr)
stream_handler.setLevel(logging.INFO)
stream_handler.setFormatter(formatter)
logger.addHandler(stream_handler)


class ConfigurationError(Exception):
    pass


def create_config_file(config_file: Path | None) -> Path:
    """Create a new config file at the specified path (by copying the default config file)."""
    config_file = config_file or DEFAULT_CONFIG_FILE
    if not INPART_FACTORY_SETTINGS.exists():
        raise ConfigurationError(
            f"Default inpart config file not found at {INPART_FACTORY_SETTINGS}"
        )
    if not config_file.exists():
        shutil.copy(INPART_FACTORY_SETTINGS, config_file)
        logger.info(f"Created new config file at {config_file.absolute()}")
    else:
        logger.info(
            f"Refusing to overwrite existing config file at {config_file.absolute()}"
        )

    return config_file


def resolve_config_file_path(config_file: Optional[Path]) -> Path:
    """Resolve the path to the config file, falling back to the default config file if not specified."""
    if config_file is None:
        if DEFAULT_CONFIG_FILE.exists():
            config_file = DEFAULT_CONFIG_FILE
        else:
            config_file = INPART_FACTORY_SETTINGS
            logger.debug(
                f"Falling back to default inpart config file because {DEFAULT_CONFIG_FILE.absolute()} does not exist"
            )
            if not config_file.exists():
                raise ConfigurationError(
                    f"Default inpart config file not found at {config_file}"
                )
    if not config_file.exists():
        raise ConfigurationError(
            f"Config file {Path(config_file).absolute()} not found (run `inpart init` to create the config file or use the `--config` flag to specify a different config file)"
        )
    return config_file


def _load_yaml(path: Path) -> dict:
    if not path.exists():
        raise ConfigurationError(f"{path.absolute()} not found")
    with open(path, "r") as yaml_file:
        return yaml.safe_load(yaml_file) or {}


def _demands_from_args(
    args: argparse.Namespace, g: Graph, *, default: DemandFunctions
) -> DemandFunctions:
    from inpart.graph.io import read_demands

    if args.demands is not None:
        if args.a is not None or args.b is not None:
            raise ConfigurationError("--demands cannot be combined with --a/--b")
        return read_demands(args.demands, g.n)
    if args.a is None and args.b is None:
        return default
    if args.a is None or args.b is None:
        raise ConfigurationError("--a and --b have to be given together")
    return DemandFunctions.constant(g.n, args.a, args.b)


def run_cli(args: argparse.Namespace) -> int:
    # Handle init command
    if args.command == "init":
        create_config_file(args.config)
        return EXIT_OK

    # Load YAML configuration
    config_file_path = resolve_config_file_path(args.config)
    with open(config_file_path, "r") as config_yaml:
        config = InpartConfig.model_validate(yaml.safe_load(config_yaml) or {})

    match args.command:
        case "init":
            assert_never(
                "this case should be handled above"  # pyright: ignore[reportArgumentType]
            )
        case "config":
            print(yaml.dump(config.model_dump(mode="json")))
            return EXIT_OK
        case "generate":
            return _generate(args, config)
        case "check":
            return _check(args, config)
        case "solve":
            return _solve(args, config)
        case "verify":
            return _verify(args)
        case "sweep":
            return _sweep(args, config)
        case "sparsity":
            return _sparsity(args, config)
        case _:
            assert_never(
                "the argparser should only allow valid commands"  # pyright: ignore[reportArgumentType]
            )


def _generate(args: argparse.Namespace, config: InpartConfig) -> int:
    from inpart.graph.config import GenSpec
    from inpart.graph.generation import (
        GenerationExhaustedError,
        ParityError,
        named_graph,
        random_regular,
    )
    from inpart.graph.io import format_edge_list, write_edge_list

    if args.named is not None:
        name, *params = args.named
        try:
            g = named_graph(name, [int(p) for p in params])
        except ValueError as e:
            raise ConfigurationError(str(e)) from e
    else:
        overrides = {
            key: value
            for key, value in {
                "n": args.n,
                "d": args.d,
                "seed": args.seed,
                "method": args.method,
                "max_attempts": args.max_attempts,
            }.items()
            if value is not None
        }
        base = config.generation.model_dump() if config.generation is not None else {}
        spec = GenSpec.model_validate({**base, **overrides})
        try:
            g = random_regular(spec)
        except (ParityError, GenerationExhaustedError) as e:
            raise ConfigurationError(str(e)) from e

    if args.out is not None:
        write_edge_list(g, args.out)
        logger.info(f"Wrote graph with {g.n} vertices and {g.m} edges to {args.out}")
    else:
        print(format_edge_list(g), end="")
    return EXIT_OK


def _check(args: argparse.Namespace, config: InpartConfig) -> int:
    from inpart.graph.core import is_four_sparse
    from inpart.graph.io import read_edge_list
    from inpart.solvers.oracle import OracleSizeError, brute_force_four_sparse

    g = read_edge_list(args.input)
    degrees = g.degrees
    print(
        f"n={g.n} m={g.m} "
        f"min_degree={int(degrees.min()) if g.n else 0} "
        f"max_degree={int(degrees.max()) if g.n else 0}"
    )
    if not args.sparse:
        return EXIT_OK

    sparse, witness = is_four_sparse(g)
    if args.brute:
        try:
            brute = brute_force_four_sparse(g, config.oracle)
        except OracleSizeError as e:
            raise ConfigurationError(str(e)) from e
        if brute != sparse:
            logger.error(
                f"edge scan says {'' if sparse else 'not '}4-sparse, "
                f"exhaustive check says {'' if brute else 'not '}4-sparse"
            )
            return EXIT_ERROR
    if sparse:
        print("4-sparse: yes")
        return EXIT_OK
    assert witness is not None
    print(f"4-sparse: no (witness {' '.join(map(str, sorted(witness)))})")
    return EXIT_NEGATIVE


def _solve(args: argparse.Namespace, config: InpartConfig) -> int:
    from inpart.graph.io import format_partition, read_edge_list, write_partition, write_trace

    g = read_edge_list(args.input)
    partition = None

    match args.algorithm:
        case "constructive":
            from inpart.solvers.constructive import (
                DichotomyFailure,
                NotFourSparseError,
                SearchInvariantError,
                run_constructive,
                step_record,
            )

            dem = _demands_from_args(args, g, default=DemandFunctions.split(g))
            try:
                result = run_constructive(g, dem, force=args.force)
            except NotFourSparseError as e:
                logger.error(f"{e} (use --force to run anyway)")
                return EXIT_NEGATIVE
            except (DichotomyFailure, SearchInvariantError) as e:
                logger.error(str(e))
                return EXIT_NEGATIVE
            partition = result.partition
            if args.trace is not None:
                write_trace(map(step_record, result.state.trace), args.trace)
        case "heuristic":
            from inpart.solvers.config import HeuristicConfig
            from inpart.solvers.heuristic import local_search

            dem = _demands_from_args(args, g, default=DemandFunctions.internal(g))
            overrides = {
                key: value
                for key, value in {
                    "seed": args.seed,
                    "max_iters": args.max_iters,
                    "balance_slack": args.slack,
                }.items()
                if value is not None
            }
            cfg = HeuristicConfig.model_validate(
                {**config.heuristic.model_dump(), **overrides}
            )
            outcome = local_search(g, dem, cfg)
            logger.info(
                f"{'Converged' if outcome.converged else 'Did not converge'} "
                f"after {outcome.iterations} iterations "
                f"(objective {outcome.final_objective})"
            )
            partition = outcome.partition
            if args.trace is not None:
                write_trace((move._asdict() for move in outcome.trace), args.trace)
        case "brute":
            from inpart.solvers.oracle import OracleSizeError, brute_force_partition

            dem = _demands_from_args(args, g, default=DemandFunctions.internal(g))
            try:
                partition = brute_force_partition(g, dem, config.oracle)
            except OracleSizeError as e:
                raise ConfigurationError(str(e)) from e
        case _:
            assert_never(args.algorithm)

    if partition is None:
        logger.info("No internal partition found")
        return EXIT_NEGATIVE
    if args.out is not None:
        write_partition(partition, args.out)
    else:
        print(format_partition(partition), end="")
    return EXIT_OK


def _verify(args: argparse.Namespace) -> int:
    from inpart.graph.core import verify_internal
    from inpart.graph.io import read_edge_list, read_partition

    g = read_edge_list(args.input)
    partition = read_partition(args.partition, g.n)
    dem = _demands_from_args(args, g, default=DemandFunctions.internal(g))
    report = verify_internal(g, partition, dem)
    if report.ok:
        print("valid")
        return EXIT_OK
    for violation in report.violations:
        if violation.vertex is None:
            print(f"side {violation.side} is empty")
        else:
            print(
                f"vertex {violation.vertex} in {violation.side}: "
                f"{violation.actual} neighbors on its side, needs {violation.required}"
            )
    return EXIT_NEGATIVE


def _sweep(args: argparse.Namespace, config: InpartConfig) -> int:
    from inpart.experiments.config import SweepSpec
    from inpart.experiments.sweep import run_sweep, write_records_csv

    if args.spec is not None:
        spec = SweepSpec.model_validate(_load_yaml(args.spec))
    elif config.sweep is not None:
        spec = config.sweep
    else:
        raise ConfigurationError("no sweep configuration supplied")
    overrides = {
        key: value
        for key, value in {"out": args.out, "base_seed": args.seed}.items()
        if value is not None
    }
    spec = SweepSpec.model_validate({**spec.model_dump(), **overrides})

    add_file_handle(logger, output_dir=spec.out.absolute().parent)
    write_records_csv(run_sweep(spec), spec.out)
    return EXIT_OK


def _sparsity(args: argparse.Namespace, config: InpartConfig) -> int:
    from inpart.experiments.config import SparsitySpec
    from inpart.experiments.sweep import sparsity_frequency, write_sparsity_csv

    if args.spec is not None:
        spec = SparsitySpec.model_validate(_load_yaml(args.spec))
    elif config.sparsity is not None:
        spec = config.sparsity
    else:
        raise ConfigurationError("no sparsity configuration supplied")
    overrides = {
        key: value
        for key, value in {"out": args.out, "base_seed": args.seed}.items()
        if value is not None
    }
    spec = SparsitySpec.model_validate({**spec.model_dump(), **overrides})

    add_file_handle(logger, output_dir=spec.out.absolute().parent)
    fractions = sparsity_frequency(
        spec.n_values,
        spec.d,
        spec.runs,
        spec.base_seed,
        max_attempts=spec.max_attempts,
        max_workers=spec.max_workers,
    )
    write_sparsity_csv(fractions, spec.out, d=spec.d, runs=spec.runs)
    return EXIT_OK


def add_file_handle(logger: logging.Logger, *, output_dir: Path) -> None:
    output_dir.mkdir(exist_ok=True, parents=True)

    file_handler = logging.FileHandler(output_dir / "logfile.log")
    file_handler.setLevel(logging.DEBUG)
    file_handler.setFormatter(formatter)

    logger.addHandler(file_handler)


def _add_demand_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--a", type=int, default=None, help="Constant demand on side A")
    parser.add_argument("--b", type=int, default=None, help="Constant demand on side B")
    parser.add_argument(
        "--demands",
        type=Path,
        default=None,
        help="File with one line `a b` per vertex",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="inpart", description="inpart: internal partitions of graphs"
    )
    parser.add_argument(
        "--config",
        "-c",
        type=Path,
        default=None,
        help=f"Path to config file (if unspecified, defaults to {DEFAULT_CONFIG_FILE.absolute()} or the default inpart config file shipped with the package if {DEFAULT_CONFIG_FILE.absolute()} does not exist)",
    )

    commands = parser.add_subparsers(dest="command")
    commands.add_parser(
        "init",
        help="Create a new inpart configuration file at the path specified by --config",
    )
    commands.add_parser("config", help="Print the loaded configuration")

    generate = commands.add_parser(
        "generate", help="Draw a random regular graph or build a named one"
    )
    generate.add_argument("--n", type=int, default=None)
    generate.add_argument("--d", type=int, default=None)
    generate.add_argument("--seed", type=int, default=None)
    generate.add_argument(
        "--method", choices=["configuration", "pairing"], default=None
    )
    generate.add_argument("--max-attempts", type=int, default=None)
    generate.add_argument(
        "--named",
        nargs="+",
        metavar=("NAME", "PARAM"),
        default=None,
        help="A named graph, e.g. `--named circulant 9 1 3`",
    )
    generate.add_argument("--out", type=Path, default=None)

    check = commands.add_parser("check", help="Print graph statistics")
    check.add_argument("--in", dest="input", type=Path, required=True)
    check.add_argument(
        "--sparse", action="store_true", help="Check whether the graph is 4-sparse"
    )
    check.add_argument(
        "--brute",
        action="store_true",
        help="Cross-check 4-sparsity by enumerating all 4-sets",
    )

    solve = commands.add_parser("solve", help="Search for an internal partition")
    solve.add_argument(
        "--algorithm",
        choices=["constructive", "heuristic", "brute"],
        required=True,
        help="The constructive algorithm defaults to a = ceil(d/2), b = floor(d/2), "
        "the others to a = b = ceil(d/2)",
    )
    solve.add_argument("--in", dest="input", type=Path, required=True)
    _add_demand_args(solve)
    solve.add_argument(
        "--force",
        action="store_true",
        help="Run the constructive algorithm on graphs which are not 4-sparse",
    )
    solve.add_argument(
        "--trace", type=Path, default=None, help="Write one JSON line per step"
    )
    solve.add_argument("--seed", type=int, default=None)
    solve.add_argument("--max-iters", type=int, default=None)
    solve.add_argument("--slack", type=int, default=None)
    solve.add_argument("--out", type=Path, default=None)

    verify = commands.add_parser("verify", help="Check a partition")
    verify.add_argument("--in", dest="input", type=Path, required=True)
    verify.add_argument("--partition", type=Path, required=True)
    _add_demand_args(verify)

    for name, help in (
        ("sweep", "Run solvers on random regular graphs and write a CSV"),
        ("sparsity", "Estimate how often random regular graphs are 4-sparse"),
    ):
        experiment = commands.add_parser(name, help=help)
        experiment.add_argument(
            "--spec",
            type=Path,
            default=None,
            help=f"YAML file with the {name} settings (defaults to the `{name}` section of the config)",
        )
        experiment.add_argument("--out", type=Path, default=None)
        experiment.add_argument("--seed", type=int, default=None)

    return parser


def main() -> None:
    parser = build_parser()
    args = parser.parse_args()

    # If no command is given, print help and exit
    if args.command is None:
        parser.print_help()
        sys.exit(EXIT_ERROR)

    # Run the CLI
    try:
        status = run_cli(args)
    except (
        ConfigurationError,
        GraphFormatError,
        DemandMismatchError,
        VertexRangeError,
        ValidationError,
        UnicodeDecodeError,
        OSError,
    ) as e:
        print(e)
        sys.exit(EXIT_ERROR)
    sys.exit(status)


if __name__ == "__main__":
    main()
