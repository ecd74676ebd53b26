"""
Energy Game Solver - command-line entry point
solve, gen, check and sweep over the engine package
"""
import argparse
import logging
import sys
from pathlib import Path
from typing import Optional, Sequence

sys.path.insert(0, str(Path(__file__).parent))

from components.commands import FORMATS, VARIANTS, RunConfig, run_command
from engine.arena import MAX_SEED
from engine.scenarios import SIMPLICITY_METHODS
from engine.settings import load_settings


def _seed(text: str) -> int:
    value = int(text)
    if not 0 <= value < MAX_SEED:
        raise argparse.ArgumentTypeError(f"seed must be in [0, {MAX_SEED})")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="app.py",
        description="Exact energy values and mean-payoff thresholds of two-player games.",
    )
    parser.add_argument("--verbose", "-v", action="store_true", help="Log at DEBUG level on stderr")
    commands = parser.add_subparsers(dest="command", required=True)

    solve = commands.add_parser("solve", help="Solve an arena file")
    solve.add_argument("input", type=Path, help="Arena file")
    solve.add_argument("--variant", choices=VARIANTS, default="esl")
    solve.add_argument("--trace", action="store_true", help="Print one potential block per iteration")
    solve.add_argument("--auto-lift", action="store_true",
                       help="Lift a non-simple arena and report thresholds only")
    solve.add_argument("--oracle-check", action="store_true",
                       help="Compare with value iteration and brute force")
    solve.add_argument("--format", dest="output_format", choices=FORMATS, default="text")
    solve.add_argument("--cap", type=int, default=None, help="Step cap for --variant alternating")
    solve.add_argument("--csv", type=Path, default=None, help="Write per-vertex results as CSV")

    gen = commands.add_parser("gen", help="Generate a random simple arena")
    gen.add_argument("--n", type=int, required=True)
    gen.add_argument("--m", type=int, required=True)
    gen.add_argument("--w", dest="W", type=int, required=True)
    gen.add_argument("--seed", type=_seed, required=True)
    gen.add_argument("--simple", choices=SIMPLICITY_METHODS, default="lift")
    gen.add_argument("--output", type=Path, default=None)

    check = commands.add_parser("check", help="Cross-check every solver variant against the oracles")
    check.add_argument("input", type=Path)
    check.add_argument("--format", dest="output_format", choices=FORMATS, default="text")
    check.add_argument("--cap-factor", type=int, default=10)

    sweep = commands.add_parser("sweep", help="Seeded agreement sweep, NDJSON on stdout")
    sweep.add_argument("--family", default="desk")
    sweep.add_argument("--count", type=int, default=1000)
    sweep.add_argument("--seed", type=_seed, required=True)
    sweep.add_argument("--cap-factor", type=int, default=10)
    sweep.add_argument("--timings", action="store_true", help="Add wall-clock timings to records")
    sweep.add_argument("--csv", type=Path, default=None)

    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    fields = {
        key: value for key, value in vars(args).items()
        if key in RunConfig.__dataclass_fields__
    }
    return RunConfig(**fields)


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    settings = load_settings()
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else settings.log_level,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
        force=True,
    )
    return run_command(config_from_args(args), settings)


if __name__ == "__main__":
    raise SystemExit(main(sys.argv[1:]))
