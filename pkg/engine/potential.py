"""
Potentials and potential reductions
phi-modified weights w + phi(v') - phi(v), composition and path sums
"""
from dataclasses import dataclass
from enum import Enum
from typing import Dict, Iterable, Iterator, Optional, Sequence, Set, Tuple

from .arena import (
    INF,
    NEG_INF,
    Arena,
    ExtInt,
    checked_add,
    checked_neg,
    format_weight,
    is_finite,
)
from .errors import PotentialError


class PotentialMode(Enum):
    """Value domain of a potential"""
    ESL = "esl"  # N u {inf}
    ALTERNATING = "alternating"  # Z u {-inf, inf}


@dataclass(frozen=True)
class Potential:
    """
    A total map V -> extended integers

    `sound` is provenance, not a check: it is set by constructors that
    guarantee phi <= En (zero, En+ values, compositions of sound potentials).
    """
    values: Tuple[ExtInt, ...]
    mode: PotentialMode = PotentialMode.ESL
    sound: bool = False

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(self.values))
        if self.mode is PotentialMode.ESL:
            for v, value in enumerate(self.values):
                if value == NEG_INF or (is_finite(value) and value < 0):
                    raise PotentialError(f"ESL potential must be >= 0, got {value} at vertex {v}")

    @classmethod
    def zero(cls, n: int, mode: PotentialMode = PotentialMode.ESL) -> "Potential":
        return cls(tuple([0] * n), mode, sound=True)

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, v: int) -> ExtInt:
        return self.values[v]

    def __iter__(self) -> Iterator[ExtInt]:
        return iter(self.values)

    def infinite_vertices(self) -> Set[int]:
        return {v for v, value in enumerate(self.values) if value == INF}

    def negative_infinite_vertices(self) -> Set[int]:
        return {v for v, value in enumerate(self.values) if value == NEG_INF}

    def finite_vertices(self) -> Set[int]:
        return {v for v, value in enumerate(self.values) if is_finite(value)}

    def max_finite(self) -> int:
        finite = [value for value in self.values if is_finite(value)]
        return int(max(finite)) if finite else 0

    def is_zero_on(self, vertices: Iterable[int]) -> bool:
        return all(self.values[v] == 0 for v in vertices)

    def negated(self) -> "Potential":
        """Pointwise negation, always in alternating mode"""
        return Potential(tuple(checked_neg(x) for x in self.values), PotentialMode.ALTERNATING, self.sound)

    def as_mode(self, mode: PotentialMode) -> "Potential":
        return Potential(self.values, mode, self.sound)

    def summary(self) -> Dict[str, int]:
        finite = [value for value in self.values if is_finite(value)]
        return {
            "max": self.max_finite(),
            "min": int(min(finite)) if finite else 0,
            "nonzero": sum(1 for value in finite if value != 0),
            "infinite": len(self.infinite_vertices()),
            "negative_infinite": len(self.negative_infinite_vertices()),
        }


def modified_weight(
    w: ExtInt,
    phi_src: ExtInt,
    phi_dst: ExtInt,
    mode: PotentialMode = PotentialMode.ESL,
) -> ExtInt:
    """
    The phi-modified weight of an edge v -> v'

    ESL mode: inf if phi(v), phi(v') or w is inf, else w + phi(v') - phi(v).
    Alternating mode mirrors the inf rule for -inf: an infinite phi(v) decides
    the result, then an infinite phi(v'), then an infinite w.
    """
    if mode is PotentialMode.ESL:
        if phi_src == INF or phi_dst == INF or w == INF:
            return INF
        return checked_add(checked_add(w, phi_dst), -phi_src)

    for deciding in (phi_src, phi_dst, w):
        if not is_finite(deciding):
            return deciding
    return checked_add(checked_add(w, phi_dst), -phi_src)


def apply(arena: Arena, phi: Potential) -> Arena:
    """The phi-modified game: same graph, every weight modified"""
    if len(phi) != arena.n:
        raise PotentialError(f"potential covers {len(phi)} vertices, arena has {arena.n}")
    return arena.with_weights([
        modified_weight(e.weight, phi[e.src], phi[e.dst], phi.mode) for e in arena.edges
    ])


def compose(phi: Potential, phi2: Potential) -> Potential:
    """Pointwise sum with inf absorption; sound when both parts are"""
    if phi.mode is not phi2.mode:
        raise PotentialError(f"cannot compose {phi.mode.value} with {phi2.mode.value} potential")
    if len(phi) != len(phi2):
        raise PotentialError("potentials cover different vertex sets")
    return Potential(
        tuple(checked_add(a, b) for a, b in zip(phi, phi2)),
        phi.mode,
        sound=phi.sound and phi2.sound,
    )


def path_sum(
    arena: Arena,
    path: Sequence[int],
    phi: Potential,
    start: Optional[int] = None,
) -> ExtInt:
    """
    sum(pi) - phi(v_0) + phi(v_k) for a path given as edge indices

    Equals the sum of phi-modified weights along the path. An empty path needs
    `start` and sums to 0.
    """
    if not path:
        if start is None:
            raise PotentialError("empty path needs a start vertex")
        if not is_finite(phi[start]):
            raise PotentialError(f"infinite potential at vertex {start}")
        return 0

    edges = [arena.edges[i] for i in path]
    if start is not None and edges[0].src != start:
        raise PotentialError(f"path starts at {edges[0].src}, not {start}")
    for previous, following in zip(edges, edges[1:]):
        if previous.dst != following.src:
            raise PotentialError(
                f"endpoint mismatch: edge ends at {previous.dst}, next starts at {following.src}"
            )

    visited = [edges[0].src] + [e.dst for e in edges]
    for v in visited:
        if not is_finite(phi[v]):
            raise PotentialError(f"infinite potential at vertex {v} on the path")

    total: ExtInt = 0
    for edge in edges:
        total = checked_add(total, edge.weight)
    return checked_add(checked_add(total, -phi[visited[0]]), phi[visited[-1]])


def serialize_potential(phi: Potential) -> str:
    """One `potential <vertex> <value|inf|-inf>` line per vertex"""
    return "".join(f"potential {v} {format_weight(value)}\n" for v, value in enumerate(phi))
