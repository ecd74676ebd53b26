"""
Exception hierarchy for the energy game solver
Input problems, arithmetic limits and internal inconsistencies are kept apart
so the command line can map them to distinct exit codes
"""
from typing import List, Optional, Sequence


class EnergyGameError(Exception):
    """Base class for every error raised by the engine"""


class ArenaError(EnergyGameError, ValueError):
    """The arena given to the engine is unusable"""


class ArenaParseError(ArenaError):
    """Malformed arena text"""

    def __init__(self, line: int, reason: str):
        self.line = line
        self.reason = reason
        super().__init__(f"line {line}: {reason}")


class ArenaValidationError(ArenaError):
    """Arena violates a structural invariant (sinks, dangling edges, ...)"""

    def __init__(self, violations: Sequence[str]):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


class NonSimpleArenaError(ArenaError):
    """A simple cycle with zero weight sum was found"""

    def __init__(self, cycle: Optional[List[int]] = None, message: str = "arena not simple"):
        self.cycle = list(cycle or [])
        if self.cycle:
            message = f"{message} (zero-sum cycle through edges {self.cycle})"
        super().__init__(message)


class WeightOverflowError(EnergyGameError, OverflowError):
    """A weight or potential left the signed 64-bit range"""


class InfeasibleParametersError(EnergyGameError, ValueError):
    """Generator or family parameters cannot be satisfied"""


class PotentialError(EnergyGameError, ValueError):
    """Invalid potential arithmetic or path evaluation"""


class BruteForceLimitError(EnergyGameError):
    """Strategy enumeration would exceed the configured limit"""

    def __init__(self, pairs: int, limit: int):
        self.pairs = pairs
        self.limit = limit
        super().__init__(f"{pairs} strategy pairs exceed the brute-force limit {limit}")


class InternalInconsistencyError(EnergyGameError):
    """The solver contradicted one of its own proven properties"""


class InvariantViolationError(InternalInconsistencyError):
    """A run-time invariant of the iteration failed"""


class IterationCapExceededError(InternalInconsistencyError):
    """The ESL loop ran past its proven iteration bound"""

    def __init__(self, cap: int, trace: list):
        self.cap = cap
        self.trace = trace
        super().__init__(f"iteration cap {cap} exceeded")


class StrategyVerificationError(InternalInconsistencyError):
    """An extracted strategy does not achieve the computed values"""

    def __init__(self, counterexamples: list):
        self.counterexamples = counterexamples
        super().__init__(f"strategy verification failed at {len(counterexamples)} vertices")
