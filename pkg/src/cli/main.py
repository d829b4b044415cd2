"""eulersolve command-line entry point."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from pydantic import ValidationError
from rich.console import Console

from ..benchmarks import FAMILIES, SUITES
from ..chain import ChainConfig
from ..config import DEFAULT_ALPHA, DEFAULT_DELTA, DEFAULT_EPS, DEFAULT_LEAF_SIZE, load_settings
from ..errors import EulerSolveError, NotEulerian, NotLaplacian, Stagnated
from ..solver import SolveConfig
from ..sparsify import SparsifierConfig
from .commands import RunConfig, cmd_bench, cmd_build, cmd_gen, cmd_solve, cmd_validate

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_NOT_EULERIAN = 2
EXIT_STAGNATED = 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="eulersolve",
        description="Solve Eulerian directed Laplacian systems with Schur complement chains",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  # Generate a 3-cycle and solve L x = b against it
  eulersolve gen --family cycle --n 3 --output cycle3.mtx
  eulersolve build --input cycle3.mtx --output chain3
  eulersolve solve --input cycle3.mtx --chain chain3 --rhs b.txt --output x.txt

  # Re-check a saved chain
  eulersolve validate --input cycle3.mtx --chain chain3

  # Smoke benchmark, CSV under results/
  eulersolve bench --suite smoke
        """,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="Random seed (default: settings)")
    common.add_argument("--quiet", action="store_true", help="Suppress console output")

    p_gen = sub.add_parser("gen", parents=[common], help="Generate an Eulerian test graph")
    p_gen.add_argument("--family", choices=FAMILIES, default="cycle")
    p_gen.add_argument("--n", type=int, required=True, help="Vertex count")
    p_gen.add_argument("--m", type=int, default=None, help="Target edges (random_eulerian)")
    p_gen.add_argument("--output", type=Path, default=None)

    chain_parent = argparse.ArgumentParser(add_help=False)
    chain_parent.add_argument("--alpha", type=float, default=DEFAULT_ALPHA)
    chain_parent.add_argument("--delta", type=float, default=DEFAULT_DELTA)
    chain_parent.add_argument("--leaf-size", type=int, default=DEFAULT_LEAF_SIZE)
    chain_parent.add_argument(
        "--backend", choices=["passthrough", "sample_patch"], default=None, help="Sparsifier backend"
    )
    chain_parent.add_argument("--oracle-cap", type=int, default=None)

    solve_parent = argparse.ArgumentParser(add_help=False)
    solve_parent.add_argument("--eps", type=float, default=DEFAULT_EPS)
    solve_parent.add_argument("--inner-n", type=int, default=None, help="Inner Richardson sweeps")
    solve_parent.add_argument("--max-iter", type=int, default=None)

    p_build = sub.add_parser("build", parents=[common, chain_parent], help="Build and save a chain")
    p_build.add_argument("--input", type=Path, required=True)
    p_build.add_argument("--output", type=Path, default=None, help="Chain directory")

    p_solve = sub.add_parser("solve", parents=[common, chain_parent, solve_parent], help="Solve L x = b")
    p_solve.add_argument("--input", type=Path, required=True)
    p_solve.add_argument("--chain", type=Path, default=None, help="Saved chain directory")
    p_solve.add_argument("--rhs", type=Path, required=True, help="b as Matrix Market or lines")
    p_solve.add_argument("--output", type=Path, default=None)
    p_solve.add_argument("--report", type=Path, default=None, help="SolveReport JSON path")

    p_val = sub.add_parser("validate", parents=[common, chain_parent], help="Validate a saved chain")
    p_val.add_argument("--input", type=Path, required=True)
    p_val.add_argument("--chain", type=Path, required=True)
    p_val.add_argument("--report", type=Path, default=None, help="ChainReport JSON path")

    p_bench = sub.add_parser("bench", parents=[common, chain_parent, solve_parent], help="Run a bench suite")
    p_bench.add_argument("--suite", choices=sorted(SUITES), default="smoke")
    p_bench.add_argument("--output", type=Path, default=None, help="Results directory")

    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    """Merge parsed flags over environment settings."""
    settings = load_settings()
    fields: dict[str, object] = {
        "command": args.command,
        "seed": settings.seed if args.seed is None else args.seed,
        "output": getattr(args, "output", None),
    }
    if args.command == "gen":
        fields.update(family=args.family, n=args.n, m=args.m)
        return RunConfig.model_validate(fields)

    fields["oracle_cap"] = args.oracle_cap or settings.oracle_cap
    fields["chain"] = ChainConfig(
        alpha=args.alpha,
        delta=args.delta,
        leaf_size=args.leaf_size,
        sparsifier=SparsifierConfig(backend=args.backend or settings.backend),
    )
    if hasattr(args, "eps"):
        fields["solve"] = SolveConfig(eps=args.eps, inner_n=args.inner_n, max_iter=args.max_iter)
    if hasattr(args, "input"):
        fields["input"] = args.input
    if hasattr(args, "chain"):
        fields["chain_dir"] = args.chain
    for name in ("rhs", "report", "suite"):
        if hasattr(args, name):
            fields[name] = getattr(args, name)
    return RunConfig.model_validate(fields)


def run(config: RunConfig, console: Console) -> int:
    if config.command == "gen":
        cmd_gen(config, console)
    elif config.command == "build":
        cmd_build(config, console)
    elif config.command == "solve":
        cmd_solve(config, console)
    elif config.command == "validate":
        return EXIT_OK if cmd_validate(config, console) else EXIT_ERROR
    else:
        cmd_bench(config, console)
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    """
    Parse arguments, run one subcommand and map failures to exit codes.

    Exit codes: 0 success, 2 input is not an Eulerian Laplacian,
    3 solver stagnation, 1 any other error.
    """
    args = build_parser().parse_args(argv)
    console = Console(stderr=True, quiet=args.quiet)
    try:
        config = config_from_args(args)
        return run(config, console)
    except (NotEulerian, NotLaplacian) as exc:
        console.print(f"[red]Error:[/red] {exc}")
        return EXIT_NOT_EULERIAN
    except Stagnated as exc:
        console.print(f"[red]Stagnated:[/red] {exc}")
        return EXIT_STAGNATED
    except (EulerSolveError, ValidationError) as exc:
        console.print(f"[red]Error:[/red] {exc}")
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
