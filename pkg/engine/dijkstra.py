"""
Two-player Dijkstra for positive-energy values
Computes En+ (weight sum up to the first negative edge) and witnessing
positional strategies on simple arenas
"""
import heapq
import logging
from collections import deque
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Optional, Sequence, Set

from .arena import INF, Arena, ExtInt, Owner, Strategy, checked_add, is_finite
from .errors import NonSimpleArenaError

logger = logging.getLogger(__name__)


@dataclass
class DijkstraStats:
    """Operation counts for one En+ computation"""
    closures: int = 0  # step 1: Max vertices settled once all good edges reach F
    extractions: int = 0  # step 2: Min vertices settled from the heap
    heap_pushes: int = 0
    heap_pops: int = 0
    stale_pops: int = 0
    frontier_size: int = 0  # |F| at termination

    @property
    def heap_operations(self) -> int:
        return self.heap_pushes + self.heap_pops

    def to_dict(self) -> Dict[str, int]:
        return {
            "closures": self.closures,
            "extractions": self.extractions,
            "heap_pushes": self.heap_pushes,
            "heap_pops": self.heap_pops,
            "stale_pops": self.stale_pops,
            "frontier_size": self.frontier_size,
        }


@dataclass
class EnPlusResult:
    """En+ values with the strategies that witness them"""
    values: List[ExtInt]
    min_strategy: Strategy
    max_strategy: Strategy
    seed: FrozenSet[int]  # N
    settled: FrozenSet[int]  # final F
    stats: DijkstraStats = field(default_factory=DijkstraStats)


def seed_N(arena: Arena) -> Set[int]:
    """
    Vertices from which Min forces an immediately negative edge

    Min vertices with a negative outgoing edge, plus Max vertices whose
    outgoing edges are all negative. O(m).
    """
    seed = set()
    for v, out in enumerate(arena.out_edges):
        negative = [arena.edges[i].weight < 0 for i in out]
        if arena.owners[v] is Owner.MIN:
            if any(negative):
                seed.add(v)
        elif negative and all(negative):
            seed.add(v)
    return seed


def _zero_cycle_among(arena: Arena, vertices: Set[int]) -> Optional[List[int]]:
    """Edge indices of a cycle of finite zero-weight edges inside `vertices`"""
    zero_in: Dict[int, List[int]] = {v: [] for v in vertices}
    zero_out: Dict[int, List[int]] = {v: [] for v in vertices}
    for index, edge in enumerate(arena.edges):
        if edge.weight == 0 and edge.src in vertices and edge.dst in vertices:
            zero_in[edge.dst].append(index)
            zero_out[edge.src].append(index)

    # Peel vertices without incoming zero edges; whatever survives lies on or
    # behind a zero cycle and has a surviving predecessor.
    indegree = {v: len(zero_in[v]) for v in vertices}
    queue = deque(v for v in vertices if indegree[v] == 0)
    alive = set(vertices)
    while queue:
        v = queue.popleft()
        alive.discard(v)
        for index in zero_out[v]:
            dst = arena.edges[index].dst
            indegree[dst] -= 1
            if indegree[dst] == 0:
                queue.append(dst)
    if not alive:
        return None

    # Walk backwards through surviving predecessors until a vertex repeats
    v = min(alive)
    seen: Dict[int, int] = {}
    walk: List[int] = []
    while v not in seen:
        seen[v] = len(walk)
        index = next(i for i in zero_in[v] if arena.edges[i].src in alive)
        walk.append(index)
        v = arena.edges[index].src
    cycle = walk[seen[v]:]
    cycle.reverse()
    return cycle


def compute_en_plus(arena: Arena, detect_non_simple: bool = True) -> EnPlusResult:
    """
    Two-player Dijkstra

    F starts as N (value 0). Step 1 settles any Max vertex outside F whose
    non-negative edges all lead into F, at the max of w + value; step 2 settles
    the Min vertex outside F with the cheapest edge into F. Step 1 is exhausted
    before every step 2. Vertices never settled have value inf, which is exact
    on simple arenas.

    Args:
        arena: Simple arena; +inf weights allowed
        detect_non_simple: Look for a zero-weight cycle among unsettled vertices

    Returns:
        EnPlusResult

    Raises:
        NonSimpleArenaError: a zero-weight cycle survives among unsettled vertices
    """
    n = arena.n
    edges = arena.edges
    stats = DijkstraStats()

    values: List[ExtInt] = [INF] * n
    settled = [False] * n
    choice: List[Optional[int]] = [None] * n

    seed = seed_N(arena)

    # Non-negative edges of each Max vertex not yet leading into F
    pending = [0] * n
    for v in range(n):
        if arena.owners[v] is Owner.MAX and v not in seed:
            pending[v] = sum(1 for i in arena.out_edges[v] if edges[i].weight >= 0)

    heap: list = []
    ready: deque = deque()

    def settle(v: int, value: ExtInt, edge_index: int):
        settled[v] = True
        values[v] = value
        choice[v] = edge_index
        for index in arena.in_edges[v]:
            edge = edges[index]
            u = edge.src
            if settled[u] or u in seed:
                continue
            w = edge.weight
            if w < 0 or w == INF:
                continue
            if arena.owners[u] is Owner.MIN:
                heapq.heappush(heap, (checked_add(w, value), index, u))
                stats.heap_pushes += 1
            else:
                pending[u] -= 1
                if pending[u] == 0:
                    ready.append(u)

    for v in sorted(seed):
        out = arena.out_edges[v]
        if arena.owners[v] is Owner.MIN:
            witness = next(i for i in out if edges[i].weight < 0)
        else:
            witness = out[0]
        settle(v, 0, witness)

    last_extracted: ExtInt = 0
    while True:
        if ready:
            v = ready.popleft()
            best_value: ExtInt = -1
            best_index = -1
            for index in arena.out_edges[v]:
                edge = edges[index]
                if edge.weight < 0:
                    continue
                candidate = checked_add(edge.weight, values[edge.dst])
                if candidate > best_value:
                    best_value, best_index = candidate, index
            settle(v, best_value, best_index)
            stats.closures += 1
            continue

        if not heap:
            break
        value, index, u = heapq.heappop(heap)
        stats.heap_pops += 1
        if settled[u]:
            stats.stale_pops += 1
            continue
        assert value >= last_extracted, "step-2 extractions must be non-decreasing"
        last_extracted = value
        settle(u, value, index)
        stats.extractions += 1

    unsettled = {v for v in range(n) if not settled[v]}
    if detect_non_simple and unsettled:
        cycle = _zero_cycle_among(arena, unsettled)
        if cycle is not None:
            raise NonSimpleArenaError(cycle)

    for v in unsettled:
        out = arena.out_edges[v]
        if arena.owners[v] is Owner.MIN:
            choice[v] = out[0]
        else:
            # the edge keeping Max on non-negative weights outside F
            choice[v] = next(
                i for i in out
                if edges[i].weight == INF or (edges[i].weight >= 0 and not settled[edges[i].dst])
            )

    stats.frontier_size = n - len(unsettled)
    logger.debug(
        "en+ on n=%d m=%d: |N|=%d |F|=%d closures=%d extractions=%d heap_ops=%d",
        n, arena.m, len(seed), stats.frontier_size, stats.closures,
        stats.extractions, stats.heap_operations,
    )

    return EnPlusResult(
        values=values,
        min_strategy=Strategy(Owner.MIN, {v: choice[v] for v in arena.vertices_of(Owner.MIN)}),
        max_strategy=Strategy(Owner.MAX, {v: choice[v] for v in arena.vertices_of(Owner.MAX)}),
        seed=frozenset(seed),
        settled=frozenset(v for v in range(n) if settled[v]),
        stats=stats,
    )


def check_fixed_point(arena: Arena, values: Sequence[ExtInt]) -> List[str]:
    """
    Verify the En+ fixed-point equations independently of compute_en_plus

    0 on N; elsewhere Min takes the min and Max the max over edges of
    w + value(v'), a negative edge contributing 0 (Max never prefers it).

    Returns:
        Violations; empty when the equations hold everywhere
    """
    if len(values) != arena.n:
        return [f"values cover {len(values)} vertices, arena has {arena.n}"]

    seed = seed_N(arena)
    violations = []
    for v in range(arena.n):
        value = values[v]
        if value < 0:
            violations.append(f"vertex {v}: negative value {value}")
            continue
        if v in seed:
            expected: ExtInt = 0
        else:
            candidates = []
            for index in arena.out_edges[v]:
                edge = arena.edges[index]
                if edge.weight < 0:
                    candidates.append(0)
                else:
                    candidates.append(checked_add(edge.weight, values[edge.dst]))
            expected = min(candidates) if arena.owners[v] is Owner.MIN else max(candidates)
        if value != expected:
            violations.append(f"vertex {v}: value {value} but fixed point gives {expected}")
    return violations


def plain_dijkstra_to_targets(arena: Arena, targets: Set[int]) -> List[ExtInt]:
    """
    Multi-target Dijkstra over finite non-negative edges, ignoring owners

    Distances are computed on the reverse graph from every target at once, with
    a binary heap and stale-entry skipping.
    """
    dist: List[ExtInt] = [INF] * arena.n
    heap = []
    for t in targets:
        dist[t] = 0
        heap.append((0, t))
    heapq.heapify(heap)
    done = [False] * arena.n

    while heap:
        d, v = heapq.heappop(heap)
        if done[v]:
            continue
        done[v] = True
        for index in arena.in_edges[v]:
            edge = arena.edges[index]
            if edge.weight < 0 or not is_finite(edge.weight):
                continue
            candidate = d + edge.weight
            if candidate < dist[edge.src]:
                dist[edge.src] = candidate
                heapq.heappush(heap, (candidate, edge.src))
    return dist
