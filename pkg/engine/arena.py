"""
Arena model for energy games
Owner partition, weighted edges, the line-based text format, simplicity lifting,
dualisation and seeded random generation
"""
import logging
import math
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from pathlib import Path
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from .errors import (
    ArenaError,
    ArenaParseError,
    ArenaValidationError,
    InfeasibleParametersError,
    PotentialError,
    WeightOverflowError,
)

logger = logging.getLogger(__name__)

INT64_MIN = -(2 ** 63)
INT64_MAX = 2 ** 63 - 1

INF = math.inf
NEG_INF = -math.inf

# A weight, potential or energy value: a Python int in the int64 range, or +/-inf
ExtInt = Union[int, float]

MAX_SEED = 2 ** 32


# =============================================================================
# CHECKED ARITHMETIC
# =============================================================================

def is_finite(value: ExtInt) -> bool:
    """True for ordinary integers, False for +inf / -inf"""
    return value != INF and value != NEG_INF


def check_range(value: int, what: str = "weight") -> int:
    """Reject integers outside the signed 64-bit range"""
    if value < INT64_MIN or value > INT64_MAX:
        raise WeightOverflowError(f"{what} {value} leaves the 64-bit range")
    return value


def checked_add(a: ExtInt, b: ExtInt) -> ExtInt:
    """Add two extended integers; infinities absorb, finite sums are range-checked"""
    if (a == INF and b == NEG_INF) or (a == NEG_INF and b == INF):
        raise PotentialError("-inf + inf is undefined")
    if a == INF or b == INF:
        return INF
    if a == NEG_INF or b == NEG_INF:
        return NEG_INF
    return check_range(a + b)


def checked_neg(a: ExtInt) -> ExtInt:
    if a == INF:
        return NEG_INF
    if a == NEG_INF:
        return INF
    return check_range(-a)


def checked_mul(a: int, factor: int) -> int:
    return check_range(a * factor)


def format_weight(value: ExtInt) -> str:
    if value == INF:
        return "inf"
    if value == NEG_INF:
        return "-inf"
    return str(int(value))


def parse_weight(token: str) -> ExtInt:
    """Parse a decimal integer, 'inf' or '-inf'"""
    lowered = token.lower()
    if lowered in ("inf", "+inf"):
        return INF
    if lowered == "-inf":
        return NEG_INF
    return check_range(int(token))


# =============================================================================
# DATA MODEL
# =============================================================================

class Owner(Enum):
    """The two players"""
    MIN = "MIN"
    MAX = "MAX"

    @property
    def opponent(self) -> "Owner":
        return Owner.MAX if self is Owner.MIN else Owner.MIN


@dataclass(frozen=True)
class Edge:
    """A weighted directed edge"""
    src: int
    dst: int
    weight: ExtInt


@dataclass(frozen=True)
class Arena:
    """
    A game (G, w, V_Min, V_Max)

    Vertex ids are dense 0..n-1; owners[v] is the owner of v. Edges keep their
    insertion order, which is the edge index used by strategies. n, m and W are
    derived on access, so they cannot go stale.
    """
    owners: Tuple[Owner, ...]
    edges: Tuple[Edge, ...]

    def __post_init__(self):
        object.__setattr__(self, "owners", tuple(self.owners))
        object.__setattr__(self, "edges", tuple(self.edges))

    @property
    def n(self) -> int:
        return len(self.owners)

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def W(self) -> int:
        """Max absolute finite weight (0 when there is none)"""
        finite = [abs(e.weight) for e in self.edges if is_finite(e.weight)]
        return int(max(finite)) if finite else 0

    @cached_property
    def out_edges(self) -> Tuple[Tuple[int, ...], ...]:
        """Edge indices leaving each vertex, in edge order"""
        lists: List[List[int]] = [[] for _ in range(self.n)]
        for index, edge in enumerate(self.edges):
            if 0 <= edge.src < self.n:
                lists[edge.src].append(index)
        return tuple(tuple(lst) for lst in lists)

    @cached_property
    def in_edges(self) -> Tuple[Tuple[int, ...], ...]:
        """Edge indices entering each vertex (reverse-edge index, built on demand)"""
        lists: List[List[int]] = [[] for _ in range(self.n)]
        for index, edge in enumerate(self.edges):
            if 0 <= edge.dst < self.n:
                lists[edge.dst].append(index)
        return tuple(tuple(lst) for lst in lists)

    @property
    def weights(self) -> List[ExtInt]:
        return [e.weight for e in self.edges]

    def vertices_of(self, owner: Owner) -> List[int]:
        return [v for v, o in enumerate(self.owners) if o is owner]

    def is_min(self, v: int) -> bool:
        return self.owners[v] is Owner.MIN

    def has_infinite_weights(self) -> bool:
        return any(not is_finite(e.weight) for e in self.edges)

    def with_weights(self, weights: Sequence[ExtInt]) -> "Arena":
        """Same graph and owners, new edge weights (same edge order)"""
        if len(weights) != self.m:
            raise ArenaError(f"expected {self.m} weights, got {len(weights)}")
        return Arena(
            self.owners,
            tuple(Edge(e.src, e.dst, w) for e, w in zip(self.edges, weights)),
        )

    def canonical(self) -> "Arena":
        """Edges sorted by (src, dst, weight)"""
        return Arena(
            self.owners,
            tuple(sorted(self.edges, key=lambda e: (e.src, e.dst, e.weight))),
        )

    def edge_label(self, index: int) -> str:
        edge = self.edges[index]
        return f"{edge.src}->{edge.dst}"


def build_arena(
    owners: Iterable[Union[Owner, str]],
    edges: Iterable[Tuple[int, int, ExtInt]],
) -> Arena:
    """Convenience constructor from owner tokens and (src, dst, weight) triples"""
    return Arena(
        tuple(o if isinstance(o, Owner) else Owner(o.upper()) for o in owners),
        tuple(Edge(int(s), int(d), w) for s, d, w in edges),
    )


@dataclass(frozen=True)
class Strategy:
    """A positional strategy: each vertex of `player` -> one outgoing edge index"""
    player: Owner
    choice: Mapping[int, int]

    def validate_for(self, arena: Arena) -> List[str]:
        """Violations of the Strategy invariants (empty when valid)"""
        violations = []
        expected = set(arena.vertices_of(self.player))
        for v in sorted(expected - set(self.choice)):
            violations.append(f"no choice at vertex {v}")
        for v in sorted(set(self.choice) - expected):
            violations.append(f"choice at vertex {v} not owned by {self.player.value}")
        for v, index in sorted(self.choice.items()):
            if not 0 <= index < arena.m:
                violations.append(f"vertex {v} chooses unknown edge {index}")
            elif arena.edges[index].src != v:
                violations.append(f"edge {index} chosen at vertex {v} does not leave it")
        return violations

    def successor(self, arena: Arena, v: int) -> int:
        return arena.edges[self.choice[v]].dst

    def describe(self, arena: Arena) -> Dict[int, str]:
        return {v: arena.edge_label(index) for v, index in sorted(self.choice.items())}


# =============================================================================
# VALIDATION
# =============================================================================

def validate(arena: Arena, allow_negative_infinity: bool = False) -> List[str]:
    """
    Check the Arena invariants

    Args:
        arena: Arena to check
        allow_negative_infinity: Accept -inf weights (dual/alternating arenas)

    Returns:
        List of violations; empty means the arena is valid
    """
    violations = []
    if arena.n == 0:
        violations.append("arena has no vertices")

    for index, edge in enumerate(arena.edges):
        if not 0 <= edge.src < arena.n:
            violations.append(f"dangling edge {index}: src={edge.src}")
        if not 0 <= edge.dst < arena.n:
            violations.append(f"dangling edge {index}: dst={edge.dst}")
        weight = edge.weight
        if weight == NEG_INF and not allow_negative_infinity:
            violations.append(f"negative infinite weight at edge {index}")
        elif isinstance(weight, bool) or not (isinstance(weight, int) or not is_finite(weight)):
            violations.append(f"invalid weight {weight!r} at edge {index}")
        elif is_finite(weight) and not INT64_MIN <= weight <= INT64_MAX:
            violations.append(f"weight overflow at edge {index}")

    for v, out in enumerate(arena.out_edges):
        if not out:
            violations.append(f"sink at vertex {v}")

    return violations


def ensure_valid(arena: Arena, allow_negative_infinity: bool = False) -> Arena:
    """Raise ArenaValidationError unless the arena is valid"""
    violations = validate(arena, allow_negative_infinity)
    if violations:
        raise ArenaValidationError(violations)
    return arena


# =============================================================================
# TEXT FORMAT
# =============================================================================

def _parse_int(token: str, line: int, what: str) -> int:
    try:
        return int(token)
    except ValueError:
        raise ArenaParseError(line, f"{what} {token!r} is not an integer") from None


def parse(text: str) -> Arena:
    """
    Parse the line-based arena format

    arena <n> <m>
    vertex <id> <MIN|MAX>          (exactly n lines)
    edge <src> <dst> <weight>      (exactly m lines; weight integer or inf)

    '#' starts a comment. Sinks and dangling edges are left to validate().
    """
    declared: Optional[Tuple[int, int]] = None
    owners: Dict[int, Owner] = {}
    edges: List[Edge] = []
    last_line = 0

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        last_line = lineno
        tokens = line.split()
        keyword = tokens[0]

        if keyword == "arena":
            if declared is not None:
                raise ArenaParseError(lineno, "duplicate arena header")
            if len(tokens) != 3:
                raise ArenaParseError(lineno, "expected 'arena <n> <m>'")
            n = _parse_int(tokens[1], lineno, "vertex count")
            m = _parse_int(tokens[2], lineno, "edge count")
            if n < 0 or m < 0:
                raise ArenaParseError(lineno, "counts must be non-negative")
            declared = (n, m)
        elif declared is None:
            raise ArenaParseError(lineno, "expected 'arena <n> <m>' header first")
        elif keyword == "vertex":
            if len(tokens) != 3:
                raise ArenaParseError(lineno, "expected 'vertex <id> <MIN|MAX>'")
            vid = _parse_int(tokens[1], lineno, "vertex id")
            if not 0 <= vid < declared[0]:
                raise ArenaParseError(lineno, f"vertex id {vid} out of range 0..{declared[0] - 1}")
            if vid in owners:
                raise ArenaParseError(lineno, f"duplicate vertex id {vid}")
            try:
                owners[vid] = Owner(tokens[2])
            except ValueError:
                raise ArenaParseError(lineno, f"unknown owner token {tokens[2]!r}") from None
        elif keyword == "edge":
            if len(tokens) != 4:
                raise ArenaParseError(lineno, "expected 'edge <src> <dst> <weight>'")
            src = _parse_int(tokens[1], lineno, "edge source")
            dst = _parse_int(tokens[2], lineno, "edge target")
            try:
                weight = parse_weight(tokens[3])
            except ValueError:
                raise ArenaParseError(lineno, f"bad weight {tokens[3]!r}") from None
            except WeightOverflowError as exc:
                raise ArenaParseError(lineno, str(exc)) from None
            edges.append(Edge(src, dst, weight))
        else:
            raise ArenaParseError(lineno, f"unknown directive {keyword!r}")

    if declared is None:
        raise ArenaParseError(last_line, "missing 'arena <n> <m>' header")
    n, m = declared
    if len(owners) != n:
        missing = [v for v in range(n) if v not in owners]
        raise ArenaParseError(last_line, f"expected {n} vertex lines, missing ids {missing}")
    if len(edges) != m:
        raise ArenaParseError(last_line, f"expected {m} edge lines, got {len(edges)}")

    return Arena(tuple(owners[v] for v in range(n)), tuple(edges))


def serialize(arena: Arena) -> str:
    """Canonical text: vertices by id, edges by (src, dst, weight)"""
    lines = [f"arena {arena.n} {arena.m}"]
    lines.extend(f"vertex {v} {owner.value}" for v, owner in enumerate(arena.owners))
    for edge in arena.canonical().edges:
        lines.append(f"edge {edge.src} {edge.dst} {format_weight(edge.weight)}")
    return "\n".join(lines) + "\n"


def load_arena(path: Union[str, Path], allow_negative_infinity: bool = False) -> Arena:
    """Read, parse and validate an arena file"""
    text = Path(path).read_text(encoding="utf-8")
    return ensure_valid(parse(text), allow_negative_infinity)


def save_arena(arena: Arena, path: Union[str, Path]):
    """Write the canonical text form"""
    Path(path).write_text(serialize(arena), encoding="utf-8")


# =============================================================================
# TRANSFORMS
# =============================================================================

def lift_simplicity(arena: Arena) -> Arena:
    """
    Replace every weight w by (n+1)w - 1

    The result has no zero-sum simple cycle (a cycle of length L sums to
    -L mod n+1) and the same vertices of positive mean payoff.
    """
    if arena.has_infinite_weights():
        raise ArenaError("lift_simplicity needs finite weights")
    factor = arena.n + 1
    if factor * arena.W + 1 > INT64_MAX:
        raise WeightOverflowError(
            f"lifting W={arena.W} by {factor} leaves the 64-bit range"
        )
    return arena.with_weights([
        checked_add(checked_mul(e.weight, factor), -1) for e in arena.edges
    ])


def dualize(arena: Arena) -> Arena:
    """Swap owners and negate every weight (inf <-> -inf)"""
    return Arena(
        tuple(o.opponent for o in arena.owners),
        tuple(Edge(e.src, e.dst, checked_neg(e.weight)) for e in arena.edges),
    )


def find_zero_cycle(arena: Arena) -> Optional[List[int]]:
    """
    Search for a simple cycle whose weights sum to zero

    Enumerates simple cycles rooted at their smallest vertex, so the cost is
    exponential in n; meant for small arenas only.

    Returns:
        Edge indices of a zero-sum simple cycle, or None when the arena is simple
    """
    out = arena.out_edges

    def extend(root: int, v: int, total: int, path: List[int], on_path: List[bool]) -> Optional[List[int]]:
        for index in out[v]:
            edge = arena.edges[index]
            if not is_finite(edge.weight):
                continue
            if edge.dst == root:
                if total + edge.weight == 0:
                    return path + [index]
                continue
            if edge.dst < root or on_path[edge.dst]:
                continue
            on_path[edge.dst] = True
            found = extend(root, edge.dst, total + edge.weight, path + [index], on_path)
            on_path[edge.dst] = False
            if found is not None:
                return found
        return None

    for root in range(arena.n):
        on_path = [False] * arena.n
        on_path[root] = True
        cycle = extend(root, root, 0, [], on_path)
        if cycle is not None:
            return cycle
    return None


def is_simple(arena: Arena) -> bool:
    return find_zero_cycle(arena) is None


# =============================================================================
# RANDOM GENERATION
# =============================================================================

def generate_random(n: int, m: int, W: int, seed: int) -> Arena:
    """
    Generate a sinkless random arena

    Each vertex gets one guaranteed outgoing edge, the remaining m - n edges are
    uniform; owners are uniform and weights uniform in [-W, W].

    Args:
        n: Number of vertices
        m: Number of edges (>= n)
        W: Weight bound (>= 1)
        seed: Seed in [0, 2**32)

    Returns:
        Arena, identical for identical arguments
    """
    if n < 1:
        raise InfeasibleParametersError("n must be >= 1")
    if m < n:
        raise InfeasibleParametersError(f"m={m} < n={n}: cannot make every vertex sinkless")
    if W < 1:
        raise InfeasibleParametersError("W must be >= 1")
    if not 0 <= seed < MAX_SEED:
        raise InfeasibleParametersError(f"seed must be in [0, {MAX_SEED})")
    if W >= INT64_MAX:
        raise InfeasibleParametersError("W leaves the 64-bit range")

    random_state = np.random.RandomState(seed)
    owner_bits = random_state.randint(0, 2, size=n)
    guaranteed = random_state.randint(0, n, size=n)
    extra_src = random_state.randint(0, n, size=m - n)
    extra_dst = random_state.randint(0, n, size=m - n)
    weights = random_state.randint(-W, W + 1, size=m, dtype=np.int64)

    sources = list(range(n)) + extra_src.tolist()
    targets = guaranteed.tolist() + extra_dst.tolist()
    return Arena(
        tuple(Owner.MIN if bit == 0 else Owner.MAX for bit in owner_bits.tolist()),
        tuple(Edge(s, d, int(w)) for s, d, w in zip(sources, targets, weights.tolist())),
    )


def generate_simple(
    n: int,
    m: int,
    W: int,
    seed: int,
    method: str = "lift",
    max_attempts: int = 50,
    exact_limit: int = 10,
) -> Arena:
    """
    Generate a random simple arena

    Args:
        method: "lift" applies lift_simplicity to generate_random's output;
            "reject" redraws until find_zero_cycle finds nothing, falling back
            to lifting after max_attempts or when n exceeds exact_limit;
            "none" returns generate_random's output unchanged
    """
    if method == "none":
        return generate_random(n, m, W, seed)
    if method == "reject":
        if n > exact_limit:
            logger.warning("n=%d above exact simplicity limit %d, lifting instead", n, exact_limit)
        else:
            for attempt in range(max_attempts):
                candidate = generate_random(n, m, W, (seed + attempt * 1_000_003) % MAX_SEED)
                if is_simple(candidate):
                    return candidate
            logger.warning("no simple arena after %d draws (seed %d), lifting", max_attempts, seed)
        return lift_simplicity(generate_random(n, m, W, seed))
    if method == "lift":
        return lift_simplicity(generate_random(n, m, W, seed))
    raise InfeasibleParametersError(f"unknown simplicity method {method!r}")
