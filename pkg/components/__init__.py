"""
Components package for the energy game command line
"""
from .commands import (
    RunConfig,
    run_command,
    cmd_solve,
    cmd_gen,
    cmd_check,
    cmd_sweep,
    oracle_disagreements,
    EXIT_OK,
    EXIT_INVALID,
    EXIT_INTERNAL,
    EXIT_DISAGREE,
)

from .formatting import format_report, format_nontermination, format_check
