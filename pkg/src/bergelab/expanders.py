"""Expander verification, booster enumeration, and booster absorption.

A (k, alpha)-expander demands, for every disjoint X, Y with |X| <= k and
|Y| < alpha |X|, an edge meeting X exactly once and avoiding Y.  The exact
check reduces, per X, to a minimum hitting set over the link sets
{e \\ X : |e cap X| = 1}: a blocking Y exists iff some hitting set is
smaller than alpha |X|.  The weak variant only compares |N(X) \\ X|
against alpha |X|.

A booster is a non-edge whose addition lengthens the longest (weak) Berge
path or creates a (weak) Hamiltonian Berge cycle; exact mode recomputes
both quantities per candidate with the exhaustive solvers.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Optional

from .errors import BudgetExceeded, Infeasible, ParameterOutOfRange
from .hypergraph import BergeCertificate, Hypergraph, verify_certificate
from .randmodels import make_rng, subset_unrank
from .rotation import berge_hamilton_search, rotation_closure  # re-exported surface
from .solvers import (
    ABSENT,
    FOUND,
    INCONCLUSIVE,
    SolveBudget,
    SolveResult,
    SolveStats,
    find_hamiltonian_berge,
    find_weak_hamiltonian,
    longest_berge_path,
)

__all__ = [
    "ExpanderReport",
    "boosters",
    "booster_absorption",
    "is_connected",
    "is_expander",
    "is_weak_expander",
    "rotation_closure",
]

EXACT_SET_GUARD = 10**6


@dataclass(frozen=True)
class ExpanderReport:
    verdict: str  # "expander" | "counterexample" | "sampledPass"
    k: int
    alpha: float
    witness: Optional[tuple[frozenset[int], frozenset[int]]] = None
    checked_sets: int = 0


def _strict_bound(x: float) -> int:
    """Largest integer strictly below x (sizes |Y| < x)."""
    c = math.ceil(x)
    return c - 1 if c == x else math.floor(x)


def _subset_count(n: int, k: int) -> int:
    return sum(math.comb(n, s) for s in range(1, k + 1))


def is_connected(h: Hypergraph) -> bool:
    """True iff the shadow graph is connected (n = 1 counts as connected)."""
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


def _link_sets(h: Hypergraph, xset: frozenset[int]) -> Optional[list[frozenset[int]]]:
    """Deduplicated sets e \\ X over edges meeting X exactly once."""
    out: set[frozenset[int]] = set()
    eids: set[int] = set()
    for v in xset:
        eids.update(h.incidence[v])
    for eid in eids:
        e = h.edges[eid]
        if len(e & xset) == 1:
            out.add(e - xset)
    return sorted(out, key=sorted)


def _min_hitting_set(sets: list[frozenset[int]], cap: int) -> Optional[set[int]]:
    """A hitting set of size <= cap, or None.  Branches on the first unhit
    set, largest-degree element first."""
    if cap < 0:
        return None

    def degree_order(remaining: list[frozenset[int]]) -> dict[int, int]:
        deg: dict[int, int] = {}
        for s in remaining:
            for v in s:
                deg[v] = deg.get(v, 0) + 1
        return deg

    def solve(remaining: list[frozenset[int]], chosen: set[int], cap: int):
        if not remaining:
            return set(chosen)
        if cap == 0:
            return None
        deg = degree_order(remaining)
        target = remaining[0]
        for v in sorted(target, key=lambda v: (-deg.get(v, 0), v)):
            nxt = [s for s in remaining if v not in s]
            chosen.add(v)
            hit = solve(nxt, chosen, cap - 1)
            if hit is not None:
                return hit
            chosen.remove(v)
        return None

    return solve(sets, set(), cap)


def is_expander(
    h: Hypergraph,
    k: int,
    alpha: float,
    mode: str = "exact",
    trials: int = 10_000,
    seed=0,
    set_guard: int = EXACT_SET_GUARD,
) -> ExpanderReport:
    """Check the (k, alpha)-expander condition.

    Exact mode enumerates every X with |X| <= k (guarded by ``set_guard``)
    and decides blocking-Y existence by branch and bound; sampled mode can
    only return sampledPass or a counterexample.
    """
    if not 1 <= k <= h.n:
        raise ParameterOutOfRange(f"need 1 <= k <= n, got k={k}")
    if alpha <= 0:
        raise ParameterOutOfRange(f"need alpha > 0, got {alpha}")
    vertices = range(1, h.n + 1)
    if mode == "exact":
        if _subset_count(h.n, k) > set_guard:
            raise Infeasible(
                f"{_subset_count(h.n, k)} candidate sets exceed guard {set_guard}"
            )
        checked = 0
        for s in range(1, k + 1):
            cap = _strict_bound(alpha * s)
            for xs in itertools.combinations(vertices, s):
                checked += 1
                xset = frozenset(xs)
                links = _link_sets(h, xset)
                hit = _min_hitting_set(links, cap)
                if hit is not None:
                    return ExpanderReport(
                        "counterexample", k, alpha,
                        witness=(xset, frozenset(hit)), checked_sets=checked,
                    )
        return ExpanderReport("expander", k, alpha, checked_sets=checked)
    if mode == "sampled":
        rng = make_rng(seed)
        for _ in range(trials):
            s = int(rng.integers(1, k + 1))
            xs = rng.choice(h.n, size=s, replace=False)
            xset = frozenset(int(v) + 1 for v in xs)
            cap = _strict_bound(alpha * s)
            if cap < 0:
                continue
            rest = sorted(set(vertices) - xset)
            ysize = int(rng.integers(0, min(cap, len(rest)) + 1))
            if ysize:
                ys = rng.choice(len(rest), size=ysize, replace=False)
                yset = frozenset(rest[int(i)] for i in ys)
            else:
                yset = frozenset()
            if _blocks(h, xset, yset):
                return ExpanderReport(
                    "counterexample", k, alpha, witness=(xset, yset),
                    checked_sets=trials,
                )
        return ExpanderReport("sampledPass", k, alpha, checked_sets=trials)
    raise ParameterOutOfRange(f"mode must be exact or sampled, got {mode!r}")


def _blocks(h: Hypergraph, xset: frozenset[int], yset: frozenset[int]) -> bool:
    """True iff no edge meets X exactly once while avoiding Y."""
    eids: set[int] = set()
    for v in xset:
        eids.update(h.incidence[v])
    for eid in eids:
        e = h.edges[eid]
        if len(e & xset) == 1 and not (e & yset):
            return False
    return True


def is_weak_expander(
    h: Hypergraph, k: int, alpha: float, set_guard: int = EXACT_SET_GUARD
) -> ExpanderReport:
    """Weak variant: every X with |X| <= k must have |N(X) \\ X| >= alpha |X|.

    The blocking Y of the set-pair formulation is forced to N(X) \\ X, so
    the check is exact per X without any hitting-set search.
    """
    if not 1 <= k <= h.n:
        raise ParameterOutOfRange(f"need 1 <= k <= n, got k={k}")
    if alpha <= 0:
        raise ParameterOutOfRange(f"need alpha > 0, got {alpha}")
    if _subset_count(h.n, k) > set_guard:
        raise Infeasible(
            f"{_subset_count(h.n, k)} candidate sets exceed guard {set_guard}"
        )
    shadow = h.shadow()
    checked = 0
    for s in range(1, k + 1):
        for xs in itertools.combinations(range(1, h.n + 1), s):
            checked += 1
            xset = frozenset(xs)
            nbhd: set[int] = set()
            for v in xs:
                nbhd.update(shadow.neighbors(v))
            boundary = frozenset(nbhd - xset)
            if len(boundary) < alpha * s:
                return ExpanderReport(
                    "counterexample", k, alpha,
                    witness=(xset, boundary), checked_sets=checked,
                )
    return ExpanderReport("expander", k, alpha, checked_sets=checked)


# ---------------------------------------------------------------------------
# boosters


def boosters(
    h: Hypergraph,
    budget: Optional[SolveBudget] = None,
    weak: bool = False,
    mode: str = "exact",
    trials: int = 200,
    seed=0,
) -> tuple[frozenset[int], ...]:
    """Booster set: non-edges improving the longest path or closing a cycle.

    Exact mode scans every non-edge and recomputes both quantities with the
    exhaustive solvers, raising BudgetExceeded when any subsearch fails to
    exhaust (a partial scan could both miss and misreport boosters).
    Sampled mode probes random non-edges and reports only those whose
    addition provably yields a Hamiltonian cycle, a sound subset of the
    booster set with no completeness claim.
    """
    total = math.comb(h.n, h.r)
    existing = h.edge_sets()
    if mode == "sampled":
        rng = make_rng(seed)
        picked: set[frozenset[int]] = set()
        out_s: set[frozenset[int]] = set()
        probe_budget = budget or SolveBudget()
        for _ in range(trials):
            cand = frozenset(subset_unrank(int(rng.integers(0, total)), h.r))
            if cand in existing or cand in picked:
                continue
            picked.add(cand)
            extended = h.with_edges([sorted(cand)])
            solver = find_weak_hamiltonian if weak else find_hamiltonian_berge
            if h.n >= 3 and solver(extended, probe_budget).status == FOUND:
                out_s.add(cand)
        return tuple(sorted(out_s, key=sorted))
    if mode != "exact":
        raise ParameterOutOfRange(f"mode must be exact or sampled, got {mode!r}")
    budget = budget or SolveBudget(mode="exactOnly")
    budget = SolveBudget(budget.node_limit, budget.time_limit_ms, "exactOnly")
    base_len = _exact_path_len(h, weak, budget)
    base_ham = _exact_ham(h, weak, budget) if h.n >= 3 else False
    out: list[frozenset[int]] = []
    for t in range(total):
        cand = frozenset(subset_unrank(t, h.r))
        if cand in existing:
            continue
        extended = h.with_edges([sorted(cand)])
        if base_ham:
            out.append(cand)  # any addition keeps the cycle
            continue
        if h.n >= 3 and _exact_ham(extended, weak, budget):
            out.append(cand)
            continue
        if _exact_path_len(extended, weak, budget) > base_len:
            out.append(cand)
    return tuple(out)


def _exact_path_len(h: Hypergraph, weak: bool, budget: SolveBudget) -> int:
    res = longest_berge_path(h, budget, weak=weak)
    if not res.optimal:
        raise BudgetExceeded("longest-path subsearch did not exhaust")
    return len(res.certificate.vertices)


def _exact_ham(h: Hypergraph, weak: bool, budget: SolveBudget) -> bool:
    solver = find_weak_hamiltonian if weak else find_hamiltonian_berge
    res = solver(h, budget)
    if res.status == INCONCLUSIVE:
        raise BudgetExceeded("hamiltonicity subsearch did not exhaust")
    return res.status == FOUND


# ---------------------------------------------------------------------------
# booster absorption


def booster_absorption(
    h_start: Hypergraph, supply: Hypergraph, budget: Optional[SolveBudget] = None
) -> SolveResult:
    """Iteratively add supply edges that extend the current structure.

    Starting from ``h_start`` (an edge-subset of ``supply``), tries to
    reach a Hamiltonian hypergraph, adding at most n candidate boosters:
    the longest path can only grow n times.  Each round runs one rotation
    search; on failure a candidate booster is taken from supply edges
    joining a stuck left endpoint to a reachable right endpoint, then from
    direct probes of the remaining supply edges.
    """
    budget = budget or SolveBudget()
    if h_start.n != supply.n or h_start.r != supply.r:
        raise ParameterOutOfRange("start and supply must share n and r")
    supply_sets = supply.edge_sets()
    if not h_start.edge_sets() <= supply_sets:
        raise ParameterOutOfRange("start hypergraph is not contained in supply")

    current = h_start
    absorbed: list[frozenset[int]] = []
    stats = SolveStats()
    per_round = min(budget.node_limit, 250_000)
    for _round in range(h_start.n + 1):
        outcome = berge_hamilton_search(current, node_limit=per_round)
        stats.nodes += outcome.stats.nodes
        stats.rotations += outcome.stats.rotations
        if outcome.cycle is not None:
            vs, es = outcome.cycle
            cert = BergeCertificate("cycle", vs, es, weak=False)
            assert verify_certificate(current, cert).valid
            return SolveResult(
                FOUND,
                certificate=cert,
                stats=stats,
                info={"absorbed": [sorted(e) for e in absorbed]},
            )
        pick = _pick_booster(current, supply_sets, outcome, stats)
        if pick is None:
            break
        absorbed.append(pick)
        current = current.with_edges([sorted(pick)])
    return SolveResult(
        INCONCLUSIVE,
        stats=stats,
        reason="no usable booster left in supply",
        info={"absorbed": [sorted(e) for e in absorbed]},
    )


def _pick_booster(
    current: Hypergraph,
    supply_sets: set[frozenset[int]],
    outcome,
    stats: SolveStats,
) -> Optional[frozenset[int]]:
    candidates = sorted(supply_sets - current.edge_sets(), key=sorted)
    if not candidates:
        return None
    pairs = set(outcome.endpoint_pairs)
    for cand in candidates:
        for (a, b) in pairs:
            if a in cand and b in cand:
                return cand
    # fall back: probe each candidate for a direct improvement
    base = len(outcome.best_path[0])
    for cand in candidates:
        probe = current.with_edges([sorted(cand)])
        probed = berge_hamilton_search(probe, node_limit=50_000)
        stats.nodes += probed.stats.nodes
        stats.rotations += probed.stats.rotations
        if probed.cycle is not None or len(probed.best_path[0]) > base:
            return cand
    return None
