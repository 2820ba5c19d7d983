"""Plus-edge path systems: exchange-move local search, fixed-point
certificates, Hamiltonian assembly and the discrepancy pipeline.

Every move is expressed as (edges removed, edges added) and goes through
one validator: added edges are plus and new, degrees stay at most 2 and
no cycle appears. A move is accepted only if (m(H), -k) strictly grows.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, Iterator, List, Optional, Sequence, Set, Tuple

from simple_logging import log_debug, log_move
from src.bounds import path_edge_ceiling, path_target
from src.config import Config
from src.core import Edge, InputError, SignedCompleteGraph, cycle_edges, edge_key, plus_subgraph
from src.matching import greedy_maximal_matching

Path = Tuple[int, ...]
Move = Tuple[str, Tuple[Edge, ...], Tuple[Edge, ...]]


@dataclass(frozen=True)
class PathSystem:
    """Vertex-disjoint paths with at least one edge each.

    Paths are stored with the smaller endpoint first and sorted by that endpoint.
    """

    paths: Tuple[Path, ...]
    host_n: int

    def __post_init__(self):
        normalized = []
        seen: Set[int] = set()
        for path in self.paths:
            path = tuple(int(v) for v in path)
            if len(path) < 2:
                raise InputError(f"path {list(path)} has no edge")
            for v in path:
                if not 1 <= v <= self.host_n:
                    raise InputError(f"path vertex {v} outside 1..{self.host_n}")
                if v in seen:
                    raise InputError(f"vertex {v} is used by two paths")
                seen.add(v)
            normalized.append(path if path[0] < path[-1] else path[::-1])
        object.__setattr__(self, "paths", tuple(sorted(normalized)))

    @classmethod
    def empty(cls, n: int) -> "PathSystem":
        return cls((), n)

    @property
    def k(self) -> int:
        return len(self.paths)

    @property
    def m_h(self) -> int:
        return sum(len(p) - 1 for p in self.paths)

    def edges(self) -> List[Edge]:
        return sorted(edge_key(p[i], p[i + 1]) for p in self.paths for i in range(len(p) - 1))

    def check_plus(self, host: SignedCompleteGraph) -> None:
        if host.n != self.host_n:
            raise InputError(f"path system on {self.host_n} vertices does not fit host n={host.n}")
        for u, v in self.edges():
            if not host.is_plus(u, v):
                raise InputError(f"path edge ({u}, {v}) is a minus-edge of the host")

    def as_lists(self) -> List[List[int]]:
        return [list(p) for p in self.paths]


@dataclass(frozen=True)
class PathSystemStats:
    k: int
    m_h: int
    n1: int
    n2: int
    n0: int
    ell: int


def stats(system: PathSystem) -> PathSystemStats:
    k, m_h = system.k, system.m_h
    return PathSystemStats(
        k=k,
        m_h=m_h,
        n1=2 * k,
        n2=m_h - k,
        n0=system.host_n - m_h - k,
        ell=sum(1 for p in system.paths if len(p) >= 3),
    )


# -- search state ---------------------------------------------------------------


class _PathState:
    """Adjacency of H plus the derived path list."""

    def __init__(self, host: SignedCompleteGraph, adjacency: List[Set[int]]):
        self.host = host
        self.adj = adjacency
        self.paths = _walk_paths(adjacency)

    @classmethod
    def from_system(cls, host: SignedCompleteGraph, system: PathSystem) -> "_PathState":
        adjacency: List[Set[int]] = [set() for _ in range(host.n + 1)]
        for u, v in system.edges():
            adjacency[u].add(v)
            adjacency[v].add(u)
        return cls(host, adjacency)

    @property
    def objective(self) -> Tuple[int, int]:
        return sum(len(p) - 1 for p in self.paths), -len(self.paths)

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def isolated(self) -> List[int]:
        return [v for v in range(1, self.host.n + 1) if not self.adj[v]]

    def path_edges(self) -> List[Edge]:
        return sorted(edge_key(p[i], p[i + 1]) for p in self.paths for i in range(len(p) - 1))

    def apply(self, removes: Sequence[Edge], adds: Sequence[Edge]) -> Optional["_PathState"]:
        """State after the exchange, or None if the result is not a plus path system."""
        host = self.host
        adjacency = [set(s) for s in self.adj]
        for u, v in removes:
            if v not in adjacency[u]:
                return None
            adjacency[u].discard(v)
            adjacency[v].discard(u)
        for u, v in adds:
            if u == v or v in adjacency[u] or not host.is_plus(u, v):
                return None
            adjacency[u].add(v)
            adjacency[v].add(u)
            if len(adjacency[u]) > 2 or len(adjacency[v]) > 2:
                return None
        paths = _walk_paths(adjacency)
        covered = sum(len(p) for p in paths)
        if covered != sum(1 for s in adjacency if s):
            return None
        state = _PathState.__new__(_PathState)
        state.host, state.adj, state.paths = host, adjacency, paths
        return state

    def system(self) -> PathSystem:
        return PathSystem(tuple(self.paths), self.host.n)


def _walk_paths(adjacency: List[Set[int]]) -> List[Path]:
    """Paths of a max-degree-2 graph, from their degree-1 ends; cycles are skipped."""
    seen: Set[int] = set()
    paths = []
    for start in range(1, len(adjacency)):
        if len(adjacency[start]) != 1 or start in seen:
            continue
        path = [start]
        seen.add(start)
        previous, current = 0, start
        while True:
            following = [w for w in adjacency[current] if w != previous]
            if not following:
                break
            previous, current = current, following[0]
            path.append(current)
            seen.add(current)
        paths.append(tuple(path) if path[0] < path[-1] else tuple(reversed(path)))
    return sorted(paths)


# -- moves --------------------------------------------------------------------------


def _join_moves(state: _PathState) -> Iterator[Move]:
    """Add a plus-edge between two vertices of degree at most 1."""
    host = state.host
    low = [v for v in range(1, host.n + 1) if state.degree(v) <= 1]
    for u, v in combinations(low, 2):
        if host.is_plus(u, v) and v not in state.adj[u]:
            yield "M1", (), ((u, v),)


def _merge_moves(state: _PathState) -> Iterator[Move]:
    """Isolated u joins the next-to-end vertices of two paths; k drops by one."""
    host = state.host
    ends = []
    for index, path in enumerate(state.paths):
        ends.append((index, path[0], path[1]))
        ends.append((index, path[-1], path[-2]))
    for u in state.isolated():
        neighbors = host.plus_neighbors(u)
        for (i, end_i, v), (j, end_j, w) in combinations(ends, 2):
            if i != j and v in neighbors and w in neighbors and v != w:
                yield "M3", ((end_i, v), (end_j, w)), ((v, u), (u, w))


def _insert_moves(state: _PathState) -> Iterator[Move]:
    """Isolated u adjacent to both ends of a path edge vw replaces it."""
    host = state.host
    edges = state.path_edges()
    for u in state.isolated():
        neighbors = host.plus_neighbors(u)
        for v, w in edges:
            if v in neighbors and w in neighbors:
                yield "M2", ((v, w),), ((v, u), (u, w))


def _rewire_moves(state: _PathState) -> Iterator[Move]:
    """Isolated u adjacent to v, w whose path neighbours v', w' are plus-adjacent."""
    host = state.host
    for u in state.isolated():
        on_paths = sorted(v for v in host.plus_neighbors(u) if state.adj[v])
        for v, w in combinations(on_paths, 2):
            for v_prev in sorted(state.adj[v]):
                for w_prev in sorted(state.adj[w]):
                    if len({v, w, v_prev, w_prev}) < 4:
                        continue
                    if host.is_plus(v_prev, w_prev) and w_prev not in state.adj[v_prev]:
                        yield "M4", ((v, v_prev), (w, w_prev)), ((v_prev, w_prev), (v, u), (u, w))


def _crossing_moves(state: _PathState) -> Iterator[Move]:
    """Endpoints a, b and a path edge st: drop st, add at and bs."""
    host = state.host
    ends = sorted(v for p in state.paths for v in (p[0], p[-1]))
    edges = state.path_edges()
    for a in ends:
        for b in ends:
            if a == b:
                continue
            for x, y in edges:
                for s, t in ((x, y), (y, x)):
                    if a in (s, t) or b in (s, t):
                        continue
                    if host.is_plus(a, t) and host.is_plus(b, s):
                        yield "M5", ((s, t),), ((a, t), (b, s))


MOVE_ORDER = (_join_moves, _merge_moves, _insert_moves, _rewire_moves, _crossing_moves)


def find_improving_move(state: _PathState) -> Optional[Tuple[Move, _PathState]]:
    before = state.objective
    for family in MOVE_ORDER:
        for move in family(state):
            _, removes, adds = move
            after = state.apply(removes, adds)
            if after is not None and after.objective > before:
                return move, after
    return None


def greedy_start(host: SignedCompleteGraph) -> PathSystem:
    """Lexicographic greedy plus-matching, each edge a path."""
    return PathSystem(tuple(greedy_maximal_matching(plus_subgraph(host))), host.n)


def path_local_search(
    host: SignedCompleteGraph, start: Optional[PathSystem] = None, start_mode: Optional[str] = None
) -> PathSystem:
    """Fixed point of the exchange moves under (max m(H), then min k)."""
    if start is None:
        mode = (start_mode or Config.PATH_START).lower()
        if mode == "greedy":
            start = greedy_start(host)
        elif mode == "empty":
            start = PathSystem.empty(host.n)
        else:
            raise InputError(f"unknown start mode {mode!r}; use 'greedy' or 'empty'")
    start.check_plus(host)
    state = _PathState.from_system(host, start)
    accepted = 0
    while True:
        found = find_improving_move(state)
        if found is None:
            break
        (name, _, _), state = found
        accepted += 1
        log_move("paths", name, state.objective)
    log_debug(f"path search settled after {accepted} moves at objective {state.objective}")
    return state.system()


# -- certificate ----------------------------------------------------------------------


@dataclass
class PathCertificate:
    passed: bool
    plus_inside_ends: bool
    isolated_neighbourhoods: bool
    endpoint_pairs: bool
    move_free: bool
    target_met: Optional[bool]
    target: float
    edge_ceiling: float
    failures: List[str] = field(default_factory=list)

    def as_dict(self) -> Dict[str, object]:
        return {
            "passed": self.passed,
            "plus_inside_ends": self.plus_inside_ends,
            "isolated_neighbourhoods": self.isolated_neighbourhoods,
            "endpoint_pairs": self.endpoint_pairs,
            "move_free": self.move_free,
            "target_met": self.target_met,
            "target": self.target,
            "edge_ceiling": self.edge_ceiling,
            "failures": list(self.failures),
        }


def certify_path_system(host: SignedCompleteGraph, system: PathSystem) -> PathCertificate:
    """Check the properties every fixed point of the moves must have."""
    system.check_plus(host)
    info = stats(system)
    failures: List[str] = []
    paths = system.paths
    interior = {v for p in paths for v in p[1:-1]}
    ends = {v for p in paths for v in (p[0], p[-1])}
    isolated = [v for v in range(1, host.n + 1) if v not in interior and v not in ends]
    end_pairs = {edge_key(p[0], p[-1]) for p in paths}

    # plus-edges inside V0 + V1 only join the two ends of one path
    low = sorted(set(isolated) | ends)
    inside = [(u, v) for u, v in combinations(low, 2) if host.is_plus(u, v)]
    stray = [e for e in inside if e not in end_pairs]
    plus_inside_ends = not stray and len(inside) <= info.k
    if not plus_inside_ends:
        failures.append(f"plus-edges among degree<=1 vertices outside end pairs: {stray[:3]}")

    # isolated vertices: few plus-neighbours inside, one Q_i end at most
    q_ends = [{p[1], p[-2]} for p in paths if len(p) >= 3]
    isolated_neighbourhoods = True
    for u in isolated:
        neighbors = host.plus_neighbors(u)
        if 2 * len(neighbors & interior) > info.n2 - info.ell + 2:
            failures.append(f"vertex {u} has {len(neighbors & interior)} plus-neighbours on path interiors")
            isolated_neighbourhoods = False
        touched = sum(1 for q in q_ends if neighbors & q)
        if touched > 1:
            failures.append(f"vertex {u} is adjacent to ends of {touched} interior paths")
            isolated_neighbourhoods = False

    # endpoint pairs {x_i, y_(i+1)} see at most p + 1 vertices of any Q_j of order p
    endpoint_pairs = True
    if info.k >= 2:
        for i in range(info.k):
            a, b = paths[i][0], paths[(i + 1) % info.k][-1]
            for path in paths:
                q = path[1:-1]
                if not q:
                    continue
                count = sum(host.is_plus(a, v) for v in q) + sum(host.is_plus(b, v) for v in q)
                if count > len(q) + 1:
                    failures.append(f"ends ({a}, {b}) have {count} plus-edges to a {len(q)}-vertex interior")
                    endpoint_pairs = False

    move_free = find_improving_move(_PathState.from_system(host, system)) is None
    if not move_free:
        failures.append("an improving exchange move still applies")

    target = path_target(host.n)
    target_met = None
    if host.balanced() and host.n >= 10:
        target_met = info.m_h >= target - Config.TOLERANCE
        if not target_met:
            failures.append(f"m(H)={info.m_h} below the target {target:.3f}")

    return PathCertificate(
        passed=plus_inside_ends and isolated_neighbourhoods and endpoint_pairs and move_free
        and target_met is not False,
        plus_inside_ends=plus_inside_ends,
        isolated_neighbourhoods=isolated_neighbourhoods,
        endpoint_pairs=endpoint_pairs,
        move_free=move_free,
        target_met=target_met,
        target=target,
        edge_ceiling=path_edge_ceiling(host.n, info.m_h, max(info.k, 1)),
        failures=failures,
    )


# -- Hamiltonian assembly -------------------------------------------------------------


def assemble_hamiltonian(host: SignedCompleteGraph, system: PathSystem) -> Tuple[int, ...]:
    """Hamiltonian cycle through every path; connectors prefer plus-edges."""
    if host.n < 3:
        raise InputError(f"Hamiltonian cycles need n >= 3, got n={host.n}")
    system.check_plus(host)
    covered = {v for p in system.paths for v in p}
    segments: List[Path] = list(system.paths) + [
        (v,) for v in range(1, host.n + 1) if v not in covered
    ]
    segments.sort(key=lambda s: min(s))
    cycle = list(segments.pop(0))
    while segments:
        tail = cycle[-1]
        choice = None
        for index, segment in enumerate(segments):
            if host.is_plus(tail, segment[0]):
                choice = (index, segment)
                break
            if host.is_plus(tail, segment[-1]):
                choice = (index, segment[::-1])
                break
        if choice is None:
            choice = (0, segments[0])
        index, segment = choice
        segments.pop(index)
        cycle.extend(segment)
    return tuple(cycle)


def cycle_signed_sum(host: SignedCompleteGraph, cycle: Sequence[int]) -> int:
    return sum(host.sign(u, v) for u, v in cycle_edges(cycle))


def cycle_plus(host: SignedCompleteGraph, cycle: Sequence[int]) -> int:
    return sum(host.is_plus(u, v) for u, v in cycle_edges(cycle))


# -- discrepancy ---------------------------------------------------------------------------


@dataclass
class DiscrepancyResult:
    cycle: Tuple[int, ...]
    signed_sum: int
    oriented_sum: int
    negated: bool
    flipped: int
    removed: Tuple[int, ...]
    m_h: int
    balanced_plus: int
    reduced_sum: int
    patch_loss: int

    @property
    def chain_holds(self) -> bool:
        """c0(C') >= 2 m+_{c1}(C') - n' on the reduced instance, and a patch costing at most 4."""
        reduced_n = len(self.cycle) - len(self.removed)
        return self.reduced_sum >= 2 * self.balanced_plus - reduced_n and self.patch_loss <= 4

    def as_dict(self) -> Dict[str, object]:
        return {
            "cycle": list(self.cycle),
            "signed_sum": self.signed_sum,
            "oriented_sum": self.oriented_sum,
            "negated": self.negated,
            "flipped": self.flipped,
            "removed": list(self.removed),
            "m_h": self.m_h,
            "balanced_plus": self.balanced_plus,
            "patch_loss": self.patch_loss,
            "chain_holds": self.chain_holds,
        }


def _patch(host: SignedCompleteGraph, cycle: Sequence[int], removed: Sequence[int]) -> Tuple[Tuple[int, ...], int]:
    """Replace the best cycle edge by a detour through the removed vertices."""
    orders = [tuple(removed)] if len(removed) < 2 else [tuple(removed), tuple(reversed(removed))]
    best = None
    k = len(cycle)
    for i in range(k):
        x, y = cycle[i], cycle[(i + 1) % k]
        for order in orders:
            detour = (x,) + order + (y,)
            gain = sum(host.sign(a, b) for a, b in zip(detour, detour[1:])) - host.sign(x, y)
            if best is None or gain > best[0]:
                best = (gain, i, order)
    gain, i, order = best
    patched = tuple(cycle[: i + 1]) + order + tuple(cycle[i + 1:])
    return patched, -gain


def discrepancy_hamiltonian(host: SignedCompleteGraph) -> DiscrepancyResult:
    """Hamiltonian cycle with a large signed sum in the majority sign."""
    n = host.n
    if n < 4:
        raise InputError(f"the discrepancy pipeline needs n >= 4, got n={n}")
    drop = {0: 0, 1: 0, 2: 1, 3: 2}[n % 4]
    keep = list(range(1, n - drop + 1))
    removed = tuple(range(n - drop + 1, n + 1))

    kept = host.induced(keep)
    negated = kept.minus_count > kept.plus_count
    work = host.negated() if negated else host
    reduced = work.induced(keep)
    surplus = reduced.plus_count - reduced.minus_count
    flips = reduced.sorted_plus_edges()[: surplus // 2]
    balanced = reduced.with_flipped(flips)
    log_debug(f"discrepancy: negated={negated}, removed={list(removed)}, flipped {len(flips)} labels")

    system = path_local_search(balanced)
    cycle = assemble_hamiltonian(balanced, system)
    balanced_plus = cycle_plus(balanced, cycle)
    reduced_sum = cycle_signed_sum(reduced, cycle)

    loss = 0
    if removed:
        cycle, loss = _patch(work, cycle, removed)
    oriented = cycle_signed_sum(work, cycle)
    return DiscrepancyResult(
        cycle=cycle,
        signed_sum=-oriented if negated else oriented,
        oriented_sum=oriented,
        negated=negated,
        flipped=len(flips),
        removed=removed,
        m_h=system.m_h,
        balanced_plus=balanced_plus,
        reduced_sum=reduced_sum,
        patch_loss=loss,
    )
