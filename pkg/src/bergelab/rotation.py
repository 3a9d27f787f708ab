"""Rotation moves on Berge paths, exact closures, and heuristic cycle search.

A rotation keeps the left endpoint and vertex set of a path fixed while
re-anchoring its right end:

* case I uses an edge not assigned to the path that contains the right
  endpoint and some path vertex v_j; the path edge at step j is dropped
  and the suffix reversed,
* case II re-anchors at the step whose own assigned edge also contains
  the right endpoint (the edge multiset is unchanged).

``rotation_closure`` explores the full (vertex order, edge assignment)
state space breadth-first, so the endpoint set R it reports is the exact
fixed point of the moves.  The heuristic engines below deduplicate states
by endpoint only, trading completeness for the speed needed at experiment
scale.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterator, Optional

from .errors import InvalidPath
from .hypergraph import BergeCertificate, Hypergraph, verify_certificate

PathArrays = tuple[tuple[int, ...], tuple[int, ...]]


@dataclass(frozen=True)
class RotationMove:
    case: str  # "I" | "II"
    edge_id: int
    anchor: int  # 0-based path position j; the new endpoint is position j+1


@dataclass(frozen=True)
class ExtensionReport:
    """An unused edge reaching off the path: the input was not a longest path."""

    vertices: tuple[int, ...]
    edges: tuple[int, ...]
    edge_id: int
    new_vertex: int


@dataclass
class RotationState:
    """Rotation closure of a base path with one witnessing derivation per endpoint.

    R collects every right endpoint reachable from the base path; R-pm is
    {v_i : a base-path neighbor of v_i lies in R}, indexed on the base
    path's own numbering (rotations do not renumber it).
    """

    base_path: BergeCertificate
    left_endpoint: int
    R: frozenset[int]
    r_pm: frozenset[int]
    endpoint_paths: dict[int, PathArrays]
    derivations: dict[int, tuple[RotationMove, ...]]
    extension: Optional[ExtensionReport]
    states_explored: int
    complete: bool


def _rotated(vertices, edges, j: int, eid: int) -> PathArrays:
    new_vertices = vertices[: j + 1] + tuple(reversed(vertices[j + 1 :]))
    new_edges = edges[:j] + (eid,) + tuple(reversed(edges[j + 1 :]))
    return new_vertices, new_edges


def path_rotations(
    h: Hypergraph, vertices: tuple[int, ...], edges: tuple[int, ...]
) -> Iterator[tuple[RotationMove, PathArrays]]:
    """All single rotations available at the right endpoint."""
    m = len(vertices)
    if m < 2:
        return
    z = vertices[-1]
    pos = {v: i for i, v in enumerate(vertices)}
    used = set(edges)
    for eid in h.incidence[z]:
        if eid in used:
            continue
        for w in sorted(h.edges[eid]):
            j = pos.get(w)
            if j is None or j >= m - 1:
                continue
            yield RotationMove("I", eid, j), _rotated(vertices, edges, j, eid)
    for i in range(m - 2):  # anchoring at the last step is a no-op
        eid = edges[i]
        if z in h.edges[eid]:
            yield RotationMove("II", eid, i), _rotated(vertices, edges, i, eid)


def path_extensions(
    h: Hypergraph, vertices: tuple[int, ...], edges: tuple[int, ...]
) -> Iterator[tuple[int, int]]:
    """(edge id, new vertex) options extending the path at its right endpoint."""
    z = vertices[-1]
    used = set(edges)
    on_path = set(vertices)
    for eid in h.incidence[z]:
        if eid in used:
            continue
        for w in sorted(set(h.edges[eid]) - on_path):
            yield eid, w


def apply_move(
    h: Hypergraph, vertices: tuple[int, ...], edges: tuple[int, ...], move: RotationMove
) -> PathArrays:
    return _rotated(vertices, edges, move.anchor, move.edge_id)


def rotation_closure(
    h: Hypergraph, path: BergeCertificate, node_limit: Optional[int] = None
) -> RotationState:
    """Exact rotation fixed point of ``path``; raises InvalidPath on bad input.

    States are memoized on the full (vertex order, edge assignment) pair so
    the reported R coincides with an exhaustive state search.  The first
    extension encountered in BFS order is reported; callers treat it as
    proof the base path was not longest.
    """
    if path.kind != "path":
        raise InvalidPath(f"rotation closure needs a path certificate, got {path.kind}")
    verdict = verify_certificate(h, path)
    if not verdict.valid:
        raise InvalidPath(f"invalid base path: {verdict.violation}")
    if len(set(path.edges)) != len(path.edges):
        raise InvalidPath("base path must use pairwise distinct edges")

    base: PathArrays = (tuple(path.vertices), tuple(path.edges))
    parent: dict[PathArrays, Optional[tuple[PathArrays, RotationMove]]] = {base: None}
    endpoint_first: dict[int, PathArrays] = {base[0][-1]: base}
    queue: deque[PathArrays] = deque([base])
    extension: Optional[ExtensionReport] = None
    explored = 0
    complete = True
    while queue:
        if node_limit is not None and explored >= node_limit:
            complete = False
            break
        vs, es = queue.popleft()
        explored += 1
        if extension is None:
            for eid, w in path_extensions(h, vs, es):
                extension = ExtensionReport(vs, es, eid, w)
                break
        for move, state in path_rotations(h, vs, es):
            if state not in parent:
                parent[state] = ((vs, es), move)
                z = state[0][-1]
                if z not in endpoint_first:
                    endpoint_first[z] = state
                queue.append(state)

    derivations: dict[int, tuple[RotationMove, ...]] = {}
    for z, state in endpoint_first.items():
        moves: list[RotationMove] = []
        cur = state
        while parent[cur] is not None:
            prev, move = parent[cur]
            moves.append(move)
            cur = prev
        derivations[z] = tuple(reversed(moves))

    r_set = frozenset(endpoint_first)
    base_vs = base[0]
    m = len(base_vs)
    r_pm = frozenset(
        base_vs[i]
        for i in range(m)
        if (i > 0 and base_vs[i - 1] in r_set) or (i < m - 1 and base_vs[i + 1] in r_set)
    )
    return RotationState(
        base_path=path,
        left_endpoint=base_vs[0],
        R=r_set,
        r_pm=r_pm,
        endpoint_paths=dict(endpoint_first),
        derivations=derivations,
        extension=extension,
        states_explored=explored,
        complete=complete,
    )


# ---------------------------------------------------------------------------
# heuristic engines


@dataclass
class EngineStats:
    nodes: int = 0
    rotations: int = 0
    node_limit: int = 200_000

    def spend(self, k: int = 1) -> bool:
        self.nodes += k
        return self.nodes <= self.node_limit

    @property
    def exhausted(self) -> bool:
        return self.nodes > self.node_limit


@dataclass
class BergeSearchOutcome:
    cycle: Optional[tuple[tuple[int, ...], tuple[int, ...]]]  # (vertices, step edges)
    best_path: PathArrays
    endpoint_pairs: list[tuple[int, int]]  # (left, right) of stuck sweep states
    stats: EngineStats


def _extend_once(h: Hypergraph, vs, es) -> Optional[PathArrays]:
    z = vs[-1]
    used = set(es)
    on_path = set(vs)
    for eid in h.incidence[z]:
        if eid in used:
            continue
        off = [w for w in h.edges[eid] if w not in on_path]
        if off:
            return vs + (min(off),), es + (eid,)
    return None


def _reverse(vs, es) -> PathArrays:
    return tuple(reversed(vs)), tuple(reversed(es))


def _closing_edge(h: Hypergraph, vs, es) -> Optional[int]:
    z = vs[-1]
    head = vs[0]
    used = set(es)
    for eid in h.incidence[z]:
        if eid not in used and head in h.edges[eid]:
            return eid
    return None


def _reopen(h: Hypergraph, vs, es, close_eid: int) -> Optional[PathArrays]:
    """Break the cycle (vs + closing edge) at a vertex with an exit edge."""
    used = set(es)
    used.add(close_eid)
    on_path = set(vs)
    for i, x in enumerate(vs):
        for eid in h.incidence[x]:
            if eid in used:
                continue
            off = [w for w in h.edges[eid] if w not in on_path]
            if not off:
                continue
            w = min(off)
            if i == 0:
                return (w,) + vs, (eid,) + es
            nvs = (w,) + vs[i:] + vs[:i]
            nes = (eid,) + es[i:] + (close_eid,) + es[: i - 1]
            return nvs, nes
    return None


def _berge_sweep(h: Hypergraph, vs, es, stats: EngineStats):
    """Rotation sweep deduplicated by endpoint.

    Returns ("cycle", (vertices, step edges incl. closing)), ("grow", path),
    or ("stuck", {endpoint: path}).
    """
    n = h.n
    seen: dict[int, PathArrays] = {vs[-1]: (vs, es)}
    queue: deque[PathArrays] = deque([(vs, es)])
    while queue:
        if not stats.spend():
            break
        cvs, ces = queue.popleft()
        ext = _extend_once(h, cvs, ces)
        if ext is not None:
            return "grow", ext
        close = _closing_edge(h, cvs, ces)
        if close is not None:
            if len(cvs) == n:
                return "cycle", (cvs, ces + (close,))
            reopened = _reopen(h, cvs, ces, close)
            if reopened is not None:
                return "grow", reopened
        for _move, state in path_rotations(h, cvs, ces):
            stats.rotations += 1
            z = state[0][-1]
            if z not in seen:
                seen[z] = state
                queue.append(state)
    return "stuck", seen


def berge_hamilton_search(
    h: Hypergraph, node_limit: int = 200_000, restarts: int = 12
) -> BergeSearchOutcome:
    """Rotation-extension search for an ordinary Hamiltonian Berge cycle.

    Deterministic: candidate scans run in ascending label/edge-id order and
    restarts walk a fixed start list.  On failure the longest path found and
    the (left, right) endpoint pairs of stuck sweeps are reported so callers
    can hunt for boosters.
    """
    n = h.n
    stats = EngineStats(node_limit=node_limit)
    best: PathArrays = ((1,), ())
    endpoint_pairs: list[tuple[int, int]] = []
    order = sorted(range(1, n + 1), key=lambda v: (h.degree(v), v))
    for start in order[: max(1, min(restarts, n))]:
        vs: tuple[int, ...] = (start,)
        es: tuple[int, ...] = ()
        flips = 0
        while not stats.exhausted:
            while True:
                ext = _extend_once(h, vs, es)
                if ext is None:
                    ext = _extend_once(h, *_reverse(vs, es))
                if ext is None:
                    break
                vs, es = ext
                if not stats.spend():
                    break
            if len(vs) > len(best[0]):
                best = (vs, es)
            kind, payload = _berge_sweep(h, vs, es, stats)
            if kind == "cycle":
                return BergeSearchOutcome(payload, best, endpoint_pairs, stats)
            if kind == "grow":
                vs, es = payload
                flips = 0
                continue
            for z in payload:
                endpoint_pairs.append((vs[0], z))
            vs, es = _reverse(vs, es)
            flips += 1
            if flips >= 2:
                break
    return BergeSearchOutcome(None, best, endpoint_pairs, stats)


# ---------------------------------------------------------------------------
# plain-graph engine (shadow graphs, derived k-out graphs)


def build_adjacency(n: int, pairs) -> tuple[tuple[int, ...], ...]:
    """Sorted adjacency rows indexed by vertex label; row 0 is padding."""
    rows: list[set[int]] = [set() for _ in range(n + 1)]
    for u, v in pairs:
        if u != v:
            rows[u].add(v)
            rows[v].add(u)
    return tuple(tuple(sorted(row)) for row in rows)


def _g_extend(adj, vs: tuple[int, ...]) -> Optional[int]:
    on_path = set(vs)
    for w in adj[vs[-1]]:
        if w not in on_path:
            return w
    return None


def _g_sweep(n, adj, adj_sets, vs: tuple[int, ...], stats: EngineStats):
    seen: dict[int, tuple[int, ...]] = {vs[-1]: vs}
    queue: deque[tuple[int, ...]] = deque([vs])
    while queue:
        if not stats.spend():
            break
        cur = queue.popleft()
        on_path = set(cur)
        for w in adj[cur[-1]]:
            if w not in on_path:
                return "grow", cur + (w,)
        z = cur[-1]
        if cur[0] in adj_sets[z]:
            if len(cur) == n:
                return "cycle", cur
            for i, x in enumerate(cur):
                for w in adj[x]:
                    if w not in on_path:
                        return "grow", (w,) + cur[i:] + cur[:i]
        m = len(cur)
        pos = {v: i for i, v in enumerate(cur)}
        for u in adj[z]:
            j = pos.get(u)
            if j is None or j >= m - 2:
                continue
            stats.rotations += 1
            nxt = cur[: j + 1] + tuple(reversed(cur[j + 1 :]))
            ep = nxt[-1]
            if ep not in seen:
                seen[ep] = nxt
                queue.append(nxt)
    return "stuck", seen


def graph_hamilton_search(
    n: int, adj, node_limit: int = 200_000, restarts: int = 12
) -> tuple[Optional[tuple[int, ...]], EngineStats]:
    """Rotation-extension Hamiltonian cycle search on a plain graph."""
    stats = EngineStats(node_limit=node_limit)
    if n < 3:
        return None, stats
    adj_sets = [set(row) for row in adj]
    degs = [len(adj[v]) for v in range(n + 1)]
    order = sorted(range(1, n + 1), key=lambda v: (degs[v], v))
    for start in order[: max(1, min(restarts, n))]:
        vs: tuple[int, ...] = (start,)
        flips = 0
        while not stats.exhausted:
            while True:
                w = _g_extend(adj, vs)
                if w is None:
                    rvs = tuple(reversed(vs))
                    w = _g_extend(adj, rvs)
                    if w is None:
                        break
                    vs = rvs
                vs = vs + (w,)
                if not stats.spend():
                    break
            kind, payload = _g_sweep(n, adj, adj_sets, vs, stats)
            if kind == "cycle":
                return payload, stats
            if kind == "grow":
                vs = payload
                flips = 0
                continue
            vs = tuple(reversed(vs))
            flips += 1
            if flips >= 2:
                break
    return None, stats
