"""Berge Hamiltonicity solvers: exact at small n, rotation-driven at scale.

The ordinary exact solver enumerates Hamiltonian cycles of the shadow
graph by backtracking and decides distinct-edge assignability with an
incremental bipartite matching between consecutive pairs and covering
edges; an infeasible augmentation is exactly a Hall violation, so partial
orders are pruned the moment no distinct assignment can exist.

``provedAbsent`` is reported either after exhaustive search within budget
or from sound deterministic obstructions (minimum degree, edge count,
shadow connectivity, and the degree-1 triple blocker for r = 3); the
negative controls in the experiment harness rely on the latter being
exact.  Budget exhaustion is always ``inconclusive``, never absence.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .errors import ParameterOutOfRange, WrongK, WrongR
from .hypergraph import BergeCertificate, Hypergraph, verify_certificate
from .matching import StepEdgeMatcher, distinct_assignment
from .randmodels import Digraph, KOutSample, orient_two_out
from .rotation import berge_hamilton_search, build_adjacency, graph_hamilton_search

FOUND = "found"
ABSENT = "provedAbsent"
INCONCLUSIVE = "inconclusive"

# exact fallback after a failed heuristic is capped so large instances
# fail fast instead of burning the whole time budget
_FALLBACK_NODE_CAP = 300_000
_HEURISTIC_NODE_CAP = 250_000


@dataclass
class SolveBudget:
    node_limit: int = 5_000_000
    time_limit_ms: int = 10_000
    mode: str = "heuristicFirst"  # or "exactOnly"

    def __post_init__(self):
        if self.node_limit <= 0 or self.time_limit_ms <= 0:
            raise ParameterOutOfRange("budget limits must be positive")
        if self.mode not in ("heuristicFirst", "exactOnly"):
            raise ParameterOutOfRange(f"unknown budget mode {self.mode!r}")


@dataclass
class SolveStats:
    nodes: int = 0
    rotations: int = 0
    time_ms: float = 0.0


@dataclass
class SolveResult:
    status: str
    certificate: Optional[BergeCertificate] = None
    stats: SolveStats = field(default_factory=SolveStats)
    optimal: Optional[bool] = None  # longest-path searches: proved maximal
    reason: Optional[str] = None
    info: dict = field(default_factory=dict)


class _NodeBudget:
    """Node counter with an optional wall-clock deadline."""

    def __init__(self, cap: int, deadline: Optional[float] = None):
        self.cap = cap
        self.deadline = deadline
        self.nodes = 0
        self.stopped = False

    def tick(self) -> bool:
        self.nodes += 1
        if self.nodes > self.cap:
            self.stopped = True
            return False
        if self.deadline is not None and self.nodes % 4096 == 0:
            if time.monotonic() > self.deadline:
                self.stopped = True
                return False
        return True


def _deadline(budget: SolveBudget) -> float:
    return time.monotonic() + budget.time_limit_ms / 1000.0


def _weak_absence_reason(h: Hypergraph) -> Optional[str]:
    for v in range(1, h.n + 1):
        if h.degree(v) == 0:
            return f"vertex {v} is isolated"
    shadow = h.shadow()
    for v in range(1, h.n + 1):
        if shadow.degree(v) < 2:
            return f"vertex {v} has fewer than 2 shadow neighbors"
    if not _shadow_connected(h):
        return "shadow graph is disconnected"
    if h.r == 3:
        witness = degree1_triple_obstruction(h)
        if witness is not None:
            return (
                f"degree-1 vertices {witness.vertices} share neighbor {witness.hub}"
            )
    return None


def _ordinary_absence_reason(h: Hypergraph) -> Optional[str]:
    if h.m < h.n:
        return f"only {h.m} edges but {h.n} distinct edges are needed"
    md = h.min_degree()
    if md < 2:
        return f"minimum degree {md} < 2"
    return _weak_absence_reason(h)


def _shadow_connected(h: Hypergraph) -> bool:
    if h.n == 1:
        return True
    seen = [False] * (h.n + 1)
    seen[1] = True
    stack = [1]
    count = 1
    while stack:
        v = stack.pop()
        for eid in h.incidence[v]:
            for w in h.edges[eid]:
                if not seen[w]:
                    seen[w] = True
                    count += 1
                    stack.append(w)
    return count == h.n


def _weak_cycle_certificate(h: Hypergraph, order: Sequence[int]) -> BergeCertificate:
    shadow = h.shadow()
    n = len(order)
    edges = tuple(
        shadow.multiplicity(order[i], order[(i + 1) % n])[0] for i in range(n)
    )
    return BergeCertificate("cycle", tuple(order), edges, weak=True)


# ---------------------------------------------------------------------------
# exact searches


def _exact_graph_hamilton(
    h: Hypergraph, budget: _NodeBudget
) -> tuple[Optional[tuple[int, ...]], bool]:
    """Exhaustive cycle search on the shadow graph from vertex 1.

    Returns (order or None, exhausted); exhausted=False means the budget
    stopped the scan before the state space was covered.
    """
    n = h.n
    shadow = h.shadow()
    path = [1]
    on_path = [False] * (n + 1)
    on_path[1] = True

    def dfs() -> Optional[tuple[int, ...]]:
        if not budget.tick():
            return None
        z = path[-1]
        if len(path) == n:
            if shadow.has_pair(z, 1):
                return tuple(path)
            return None
        for w in shadow.neighbors(z):
            if on_path[w]:
                continue
            path.append(w)
            on_path[w] = True
            hit = dfs()
            if hit is not None:
                return hit
            path.pop()
            on_path[w] = False
        return None

    hit = dfs()
    return hit, not budget.stopped


def _exact_berge_hamilton(
    h: Hypergraph, budget: _NodeBudget
) -> tuple[Optional[BergeCertificate], bool]:
    """Exhaustive ordinary search: shadow cycle orders x matching feasibility."""
    n = h.n
    shadow = h.shadow()
    matcher = StepEdgeMatcher()
    path = [1]
    on_path = [False] * (n + 1)
    on_path[1] = True

    def dfs() -> Optional[BergeCertificate]:
        if not budget.tick():
            return None
        z = path[-1]
        if len(path) == n:
            closing = shadow.multiplicity(z, 1)
            if closing and matcher.push(closing):
                cert = BergeCertificate(
                    "cycle", tuple(path), tuple(matcher.assignment()), weak=False
                )
                return cert
            return None
        for w in shadow.neighbors(z):
            if on_path[w]:
                continue
            if not matcher.push(shadow.multiplicity(z, w)):
                continue
            path.append(w)
            on_path[w] = True
            hit = dfs()
            if hit is not None:
                return hit
            path.pop()
            on_path[w] = False
            matcher.pop()
        return None

    hit = dfs()
    return hit, not budget.stopped


def _exact_longest_path(
    h: Hypergraph, weak: bool, budget: _NodeBudget
) -> tuple[tuple[int, ...], tuple[int, ...], bool]:
    """Longest Berge path by exhaustive sequence search (all start vertices)."""
    shadow = h.shadow()
    matcher = StepEdgeMatcher()
    best_vs: tuple[int, ...] = (1,)
    best_es: tuple[int, ...] = ()
    path: list[int] = []
    on_path = [False] * (h.n + 1)

    def record() -> None:
        nonlocal best_vs, best_es
        if len(path) > len(best_vs):
            best_vs = tuple(path)
            if weak:
                best_es = tuple(
                    shadow.multiplicity(path[i], path[i + 1])[0]
                    for i in range(len(path) - 1)
                )
            else:
                best_es = tuple(matcher.assignment())

    def dfs() -> None:
        if not budget.tick():
            return
        record()
        if len(path) == h.n:
            return
        z = path[-1]
        for w in shadow.neighbors(z):
            if on_path[w]:
                continue
            if not weak and not matcher.push(shadow.multiplicity(z, w)):
                continue
            path.append(w)
            on_path[w] = True
            dfs()
            path.pop()
            on_path[w] = False
            if not weak:
                matcher.pop()
            if budget.stopped:
                return

    for start in range(1, h.n + 1):
        path = [start]
        on_path = [False] * (h.n + 1)
        on_path[start] = True
        dfs()
        if budget.stopped:
            break
    return best_vs, best_es, not budget.stopped


# ---------------------------------------------------------------------------
# public solvers


def find_weak_hamiltonian(h: Hypergraph, budget: Optional[SolveBudget] = None) -> SolveResult:
    """Weak Hamiltonian Berge cycle via Hamiltonicity of the shadow graph."""
    if h.n < 3:
        raise ParameterOutOfRange("Hamiltonicity queries require n >= 3")
    budget = budget or SolveBudget()
    t0 = time.monotonic()
    stats = SolveStats()

    def done(result: SolveResult) -> SolveResult:
        result.stats.time_ms = (time.monotonic() - t0) * 1000.0
        return result

    reason = _weak_absence_reason(h)
    if reason is not None:
        return done(SolveResult(ABSENT, stats=stats, reason=reason))

    deadline = _deadline(budget)
    if budget.mode != "exactOnly":
        order, engine_stats = graph_hamilton_search(
            h.n, h.shadow().adj, node_limit=min(budget.node_limit, _HEURISTIC_NODE_CAP)
        )
        stats.nodes += engine_stats.nodes
        stats.rotations += engine_stats.rotations
        if order is not None:
            cert = _weak_cycle_certificate(h, order)
            assert verify_certificate(h, cert).valid
            return done(SolveResult(FOUND, certificate=cert, stats=stats))

    cap = budget.node_limit - stats.nodes
    if budget.mode != "exactOnly":
        cap = min(cap, _FALLBACK_NODE_CAP)
    nb = _NodeBudget(max(cap, 1), deadline)
    order, exhausted = _exact_graph_hamilton(h, nb)
    stats.nodes += nb.nodes
    if order is not None:
        cert = _weak_cycle_certificate(h, order)
        assert verify_certificate(h, cert).valid
        return done(SolveResult(FOUND, certificate=cert, stats=stats))
    if exhausted:
        return done(SolveResult(ABSENT, stats=stats, reason="exhaustive search"))
    return done(SolveResult(INCONCLUSIVE, stats=stats, reason="budget exhausted"))


def find_hamiltonian_berge(h: Hypergraph, budget: Optional[SolveBudget] = None) -> SolveResult:
    """Ordinary Hamiltonian Berge cycle (distinct edges required)."""
    if h.n < 3:
        raise ParameterOutOfRange("Hamiltonicity queries require n >= 3")
    budget = budget or SolveBudget()
    t0 = time.monotonic()
    stats = SolveStats()

    def done(result: SolveResult) -> SolveResult:
        result.stats.time_ms = (time.monotonic() - t0) * 1000.0
        return result

    reason = _ordinary_absence_reason(h)
    if reason is not None:
        return done(SolveResult(ABSENT, stats=stats, reason=reason))

    deadline = _deadline(budget)
    if budget.mode != "exactOnly":
        outcome = berge_hamilton_search(
            h, node_limit=min(budget.node_limit, _HEURISTIC_NODE_CAP)
        )
        stats.nodes += outcome.stats.nodes
        stats.rotations += outcome.stats.rotations
        if outcome.cycle is not None:
            vs, es = outcome.cycle
            cert = BergeCertificate("cycle", vs, es, weak=False)
            assert verify_certificate(h, cert).valid
            return done(SolveResult(FOUND, certificate=cert, stats=stats))

    cap = budget.node_limit - stats.nodes
    if budget.mode != "exactOnly":
        cap = min(cap, _FALLBACK_NODE_CAP)
    nb = _NodeBudget(max(cap, 1), deadline)
    cert, exhausted = _exact_berge_hamilton(h, nb)
    stats.nodes += nb.nodes
    if cert is not None:
        assert verify_certificate(h, cert).valid
        return done(SolveResult(FOUND, certificate=cert, stats=stats))
    if exhausted:
        return done(SolveResult(ABSENT, stats=stats, reason="exhaustive search"))
    return done(SolveResult(INCONCLUSIVE, stats=stats, reason="budget exhausted"))


def longest_berge_path(
    h: Hypergraph, budget: Optional[SolveBudget] = None, weak: bool = False
) -> SolveResult:
    """Maximum-vertex Berge path; ``optimal`` is True only on exhausted search."""
    budget = budget or SolveBudget()
    t0 = time.monotonic()
    stats = SolveStats()
    if h.m == 0 or h.n == 1:
        cert = BergeCertificate("path", (1,), (), weak=weak)
        stats.time_ms = (time.monotonic() - t0) * 1000.0
        return SolveResult(FOUND, certificate=cert, stats=stats, optimal=True)

    best_vs: tuple[int, ...] = (1,)
    best_es: tuple[int, ...] = ()
    if budget.mode != "exactOnly" and not weak:
        outcome = berge_hamilton_search(
            h, node_limit=min(budget.node_limit, _HEURISTIC_NODE_CAP)
        )
        stats.nodes += outcome.stats.nodes
        stats.rotations += outcome.stats.rotations
        if outcome.cycle is not None:
            vs, es = outcome.cycle
            best_vs, best_es = vs, es[:-1]
        else:
            best_vs, best_es = outcome.best_path

    cap = budget.node_limit - stats.nodes
    if budget.mode != "exactOnly" and len(best_vs) < h.n:
        cap = min(cap, _FALLBACK_NODE_CAP)
    exhausted = False
    if len(best_vs) < h.n and cap > 0:
        nb = _NodeBudget(cap, _deadline(budget))
        vs, es, exhausted = _exact_longest_path(h, weak, nb)
        stats.nodes += nb.nodes
        if len(vs) > len(best_vs):
            best_vs, best_es = vs, es
    elif len(best_vs) == h.n:
        exhausted = True  # spanning path is maximal by definition

    cert = BergeCertificate("path", best_vs, best_es, weak=weak)
    assert verify_certificate(h, cert).valid
    stats.time_ms = (time.monotonic() - t0) * 1000.0
    return SolveResult(FOUND, certificate=cert, stats=stats, optimal=exhausted)


# ---------------------------------------------------------------------------
# digraphs


def _successor_matching(d: Digraph, order: Sequence[int]) -> Optional[dict[int, int]]:
    match_src: dict[int, int] = {}  # target -> source

    def augment(u: int, banned: set[int]) -> bool:
        for v in d.out_adj[u]:
            if v in banned:
                continue
            banned.add(v)
            holder = match_src.get(v)
            if holder is None or augment(holder, banned):
                match_src[v] = u
                return True
        return False

    for u in order:
        if not augment(u, set()):
            return None
    return {u: v for v, u in match_src.items()}


def _cycles_of(succ: dict[int, int], n: int) -> list[int]:
    comp = [-1] * (n + 1)
    cid = 0
    for v in range(1, n + 1):
        if comp[v] != -1:
            continue
        u = v
        while comp[u] == -1:
            comp[u] = cid
            u = succ[u]
        cid += 1
    return comp


def _merge_to_hamilton(d: Digraph, succ: dict[int, int]) -> bool:
    """Greedy successor swaps joining cycles of the cover; True on success."""
    n = d.n
    out_sets = [set(row) for row in d.out_adj]
    while True:
        comp = _cycles_of(succ, n)
        if max(comp[1:]) == 0:
            return True
        pred = {v: u for u, v in succ.items()}
        swapped = False
        for u in range(1, n + 1):
            su = succ[u]
            for t in d.out_adj[u]:
                w = pred[t]
                if comp[w] == comp[u] or su not in out_sets[w]:
                    continue
                succ[u], succ[w] = t, su
                swapped = True
                break
            if swapped:
                break
        if not swapped:
            return False


def _exact_digraph_hamilton(d: Digraph, budget: _NodeBudget) -> Optional[list[int]]:
    n = d.n
    path = [1]
    on_path = [False] * (n + 1)
    on_path[1] = True

    def dfs() -> Optional[list[int]]:
        if not budget.tick():
            return None
        z = path[-1]
        if len(path) == n:
            return list(path) if (z, 1) in d.arcs else None
        for w in d.out_adj[z]:
            if on_path[w]:
                continue
            path.append(w)
            on_path[w] = True
            hit = dfs()
            if hit is not None:
                return hit
            path.pop()
            on_path[w] = False
        return None

    return dfs()


def digraph_hamilton(d: Digraph, budget: Optional[SolveBudget] = None) -> Optional[list[int]]:
    """Directed Hamiltonian cycle, or None if absent or not found in budget.

    Cycle-cover first: a perfect successor matching is split into cycles
    that are merged by successor swaps; several deterministic matching
    orders are tried.  No perfect matching means no cycle cover, which
    proves absence.  Small instances fall back to exhaustive backtracking.
    """
    if d.n < 3:
        raise ParameterOutOfRange("Hamiltonicity queries require n >= 3")
    budget = budget or SolveBudget()
    for v in range(1, d.n + 1):
        if not d.out_adj[v] or not d.in_adj[v]:
            return None

    orders = [
        list(range(1, d.n + 1)),
        list(range(d.n, 0, -1)),
        sorted(range(1, d.n + 1), key=lambda v: (len(d.out_adj[v]), v)),
        sorted(range(1, d.n + 1), key=lambda v: (-len(d.out_adj[v]), v)),
    ]
    shift = max(1, d.n // 3)
    base = list(range(1, d.n + 1))
    orders.append(base[shift:] + base[:shift])
    orders.append(base[2 * shift:] + base[: 2 * shift])

    matched_once = False
    for order in orders:
        succ = _successor_matching(d, order)
        if succ is None:
            if not matched_once:
                return None  # no cycle cover at all
            continue
        matched_once = True
        if _merge_to_hamilton(d, succ):
            cycle = [1]
            while True:
                nxt = succ[cycle[-1]]
                if nxt == 1:
                    break
                cycle.append(nxt)
            return cycle

    nb = _NodeBudget(
        min(budget.node_limit, _FALLBACK_NODE_CAP), _deadline(budget)
    )
    return _exact_digraph_hamilton(d, nb)


# ---------------------------------------------------------------------------
# k-out pipelines


def kout2_pipeline(
    sample: KOutSample, budget: Optional[SolveBudget] = None, seed=0
) -> SolveResult:
    """2-out construction: orient, solve the digraph, lift arcs to hyperedges.

    Every arc carries one or two provenance edges (the head's minus edge
    and/or the tail's plus edge); a distinct-representative matching over
    the cycle arcs picks alternates automatically, so a clash is reported
    inconclusive only when no assignment exists at all.
    """
    if sample.k != 2:
        raise WrongK(f"pipeline needs k=2, got k={sample.k}")
    if sample.r < 3:
        raise ParameterOutOfRange(f"pipeline needs r >= 3, got r={sample.r}")
    if sample.n < 3:
        raise ParameterOutOfRange("Hamiltonicity queries require n >= 3")
    budget = budget or SolveBudget()
    t0 = time.monotonic()
    h = sample.hypergraph
    d = orient_two_out(sample, seed)
    order = digraph_hamilton(d, budget)
    stats = SolveStats()
    if order is None:
        stats.time_ms = (time.monotonic() - t0) * 1000.0
        return SolveResult(
            INCONCLUSIVE, stats=stats, reason="no directed hamiltonian cycle found"
        )
    n = sample.n
    candidates = []
    for i in range(n):
        arc = (order[i], order[(i + 1) % n])
        candidates.append(sorted({eid for (_v, eid, _s) in d.provenance[arc]}))
    assignment = distinct_assignment(candidates)
    if assignment is None:
        stats.time_ms = (time.monotonic() - t0) * 1000.0
        return SolveResult(
            INCONCLUSIVE,
            stats=stats,
            reason="provenance lift clash: no distinct edge assignment",
        )
    cert = BergeCertificate("cycle", tuple(order), tuple(assignment), weak=False)
    verdict = verify_certificate(h, cert)
    assert verdict.valid and verdict.hamiltonian
    stats.time_ms = (time.monotonic() - t0) * 1000.0
    return SolveResult(FOUND, certificate=cert, stats=stats)


def one_out_weak_pipeline(
    sample: KOutSample, budget: Optional[SolveBudget] = None
) -> SolveResult:
    """1-out construction for r >= 4: solve the derived (r-1)-out graph.

    Each vertex x contributes plain edges {x, y} for y in its chosen
    hyperedge; a Hamiltonian cycle there lifts pairwise back to chosen
    hyperedges, giving a weak certificate (edge reuse allowed).  Failure
    to find a cycle in the derived graph proves nothing about the
    hypergraph, so it reports inconclusive.
    """
    if sample.k != 1:
        raise WrongK(f"pipeline needs k=1, got k={sample.k}")
    if sample.r < 4:
        raise WrongR(f"pipeline needs r >= 4, got r={sample.r}")
    if sample.n < 3:
        raise ParameterOutOfRange("Hamiltonicity queries require n >= 3")
    budget = budget or SolveBudget()
    t0 = time.monotonic()
    pairs = []
    for x in range(1, sample.n + 1):
        for y in sample.choices[x - 1][0]:
            if y != x:
                pairs.append((x, y))
    adj = build_adjacency(sample.n, pairs)
    order, engine_stats = graph_hamilton_search(
        sample.n, adj, node_limit=min(budget.node_limit, _HEURISTIC_NODE_CAP)
    )
    stats = SolveStats(nodes=engine_stats.nodes, rotations=engine_stats.rotations)
    if order is None and sample.n <= 24:
        derived = Hypergraph(
            sample.n, 2, sorted({tuple(sorted(p)) for p in pairs})
        )
        nb = _NodeBudget(min(budget.node_limit, _FALLBACK_NODE_CAP), _deadline(budget))
        order, _ = _exact_graph_hamilton(derived, nb)
        stats.nodes += nb.nodes
    if order is None:
        stats.time_ms = (time.monotonic() - t0) * 1000.0
        return SolveResult(
            INCONCLUSIVE, stats=stats, reason="no cycle found in derived graph"
        )
    n = sample.n
    edges = []
    for i in range(n):
        a, b = order[i], order[(i + 1) % n]
        options = []
        if b in sample.choices[a - 1][0]:
            options.append(sample.choice_ids[a - 1][0])
        if a in sample.choices[b - 1][0]:
            options.append(sample.choice_ids[b - 1][0])
        edges.append(min(options))
    cert = BergeCertificate("cycle", tuple(order), tuple(edges), weak=True)
    verdict = verify_certificate(sample.hypergraph, cert)
    assert verdict.valid and verdict.hamiltonian
    stats.time_ms = (time.monotonic() - t0) * 1000.0
    return SolveResult(FOUND, certificate=cert, stats=stats)


# ---------------------------------------------------------------------------
# obstruction witness


@dataclass(frozen=True)
class ObstructionWitness:
    """Three degree-1 vertices whose only edges share the hub vertex."""

    vertices: tuple[int, int, int]
    hub: int
    edge_ids: tuple[int, int, int]


def degree1_triple_obstruction(h: Hypergraph) -> Optional[ObstructionWitness]:
    """Find degree-1 vertices u, v, w whose unique edges share a vertex x.

    Valid blocker for r = 3 only: a cycle neighborhood of a degree-1
    vertex is exactly its edge's other two vertices, so the hub would
    need three cycle neighbors.
    """
    if h.r != 3:
        raise WrongR(f"obstruction defined for r = 3 only, got r={h.r}")
    hub_members: dict[int, list[tuple[int, int]]] = {}
    for u in range(1, h.n + 1):
        if h.degree(u) != 1:
            continue
        eid = h.incidence[u][0]
        for x in h.edges[eid]:
            if x != u:
                hub_members.setdefault(x, []).append((u, eid))
    for x in sorted(hub_members):
        members = sorted(hub_members[x])
        if len(members) >= 3:
            triple = members[:3]
            return ObstructionWitness(
                vertices=tuple(u for u, _ in triple),
                hub=x,
                edge_ids=tuple(eid for _, eid in triple),
            )
    return None
