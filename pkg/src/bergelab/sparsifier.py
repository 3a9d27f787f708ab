"""Low-degree vertex sets, random sparsification, and structural properties.

``small_set`` collects vertices of degree at most eps*log(n) (natural
log).  ``sparsify`` keeps, per vertex, a uniform sample of ceil(eps*log n)
incident edges (everything for low-degree vertices); the union of the
kept edges is the sparse subgraph.

The property checkers P1..P7 quantify over vertex sets:

  P1  max degree <= 10 log n                             (exact scan)
  P2  |SMALL| <= n^0.9                                   (exact scan)
  P3  no edge meets SMALL twice, and no vertex outside
      SMALL lies in two edges meeting N minus itself     (exact scan)
  P4  every U with |U| <= floor(n/sqrt(log n)) meets at
      most |U| log(n)^(3/4) edges more than once
  P5  disjoint U, W with |U| <= floor(n/sqrt(log n)),
      |W| <= floor(|U| log(n)^(1/4)): at most
      eps log(n)|U|/2 edges meet U once and touch W
  P6  disjoint U, W with |U| = ceil(n/sqrt(log n)),
      |W| = ceil(n/4): at least n log(n)^(1/3) edges
      meet U once and W exactly r-1 times
  P7  same sizes: at least one sparse-subgraph edge
      meets U once and W exactly r-1 times

Set-size thresholds round with floor for "at most" bounds and ceil for
exact/"at least" sizes; count bounds compare against the real value.
P4..P7 are enumerated exactly only while the number of candidate sets
stays within ``pair_budget``; beyond that, sampled mode draws uniform
pairs at the threshold sizes (plus deterministic greedy probes) and can
only report sampledPass, never the universal claim.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Optional

from .errors import Infeasible, MissingGamma0, ParameterOutOfRange
from .expanders import ExpanderReport, is_connected, is_expander, is_weak_expander
from .hypergraph import Hypergraph
from .randmodels import make_rng

ALL_PROPERTIES = ("P1", "P2", "P3", "P4", "P5", "P6", "P7")


def small_set(h: Hypergraph, epsilon: float) -> frozenset[int]:
    """Vertices with degree at most epsilon * log(n)."""
    if epsilon <= 0:
        raise ParameterOutOfRange(f"need epsilon > 0, got {epsilon}")
    if h.n < 2:
        raise ParameterOutOfRange("need n >= 2")
    threshold = epsilon * math.log(h.n)
    return frozenset(v for v in range(1, h.n + 1) if h.degree(v) <= threshold)


@dataclass(frozen=True)
class SparsifierOutput:
    epsilon: float
    small: frozenset[int]
    gamma0: Hypergraph
    per_vertex_choice: dict[int, tuple[int, ...]]  # vertex -> kept edge ids of h
    kept_edge_ids: tuple[int, ...]  # sorted union, ids of h


def sparsify(h: Hypergraph, epsilon: float, seed=0) -> SparsifierOutput:
    """Per-vertex uniform edge retention; low-degree vertices keep everything.

    Vertices outside SMALL keep ceil(epsilon*log n) incident edges chosen
    uniformly without replacement (capped at their degree); SMALL vertices
    keep all incident edges.  The sparse subgraph is the union of the kept
    edges, rebuilt in ascending id order of the source hypergraph.
    """
    small = small_set(h, epsilon)
    quota = math.ceil(epsilon * math.log(h.n))
    rng = make_rng(seed)
    choice: dict[int, tuple[int, ...]] = {}
    kept: set[int] = set()
    for v in range(1, h.n + 1):
        incident = h.incidence[v]
        if v in small or len(incident) <= quota:
            mine = tuple(incident)
        else:
            picked = rng.choice(len(incident), size=quota, replace=False)
            mine = tuple(incident[int(i)] for i in sorted(picked))
        choice[v] = mine
        kept.update(mine)
    kept_ids = tuple(sorted(kept))
    gamma0 = Hypergraph(h.n, h.r, [sorted(h.edges[eid]) for eid in kept_ids])
    return SparsifierOutput(
        epsilon=epsilon,
        small=small,
        gamma0=gamma0,
        per_vertex_choice=choice,
        kept_edge_ids=kept_ids,
    )


# ---------------------------------------------------------------------------
# property report plumbing


@dataclass(frozen=True)
class PropertyVerdict:
    status: str  # "pass" | "fail" | "sampledPass"
    witness: Optional[dict] = None
    checked: int = 0
    params: dict = field(default_factory=dict)


@dataclass(frozen=True)
class PropertyReport:
    epsilon: float
    n: int
    r: int
    verdicts: dict[str, PropertyVerdict]

    def status(self, name: str) -> str:
        return self.verdicts[name].status

    def holds(self, name: str) -> bool:
        return self.verdicts[name].status in ("pass", "sampledPass")


def _u_cap(n: int) -> int:
    return min(n, math.floor(n / math.sqrt(math.log(n))))


def _p4_bound(n: int, u: int) -> float:
    return u * math.log(n) ** 0.75


def _p5_w_cap(n: int, u: int) -> int:
    return math.floor(u * math.log(n) ** 0.25)


def _p5_bound(n: int, u: int, epsilon: float) -> float:
    return epsilon * math.log(n) * u / 2.0


def _p6_sizes(n: int) -> tuple[int, int]:
    return math.ceil(n / math.sqrt(math.log(n))), math.ceil(n / 4)


def _p6_bound(n: int) -> float:
    return n * math.log(n) ** (1.0 / 3.0)


def _count_multi(h: Hypergraph, uset: frozenset[int]) -> int:
    return sum(1 for e in h.edges if len(e & uset) >= 2)


def _count_once_touch(h: Hypergraph, uset: frozenset[int], wset: frozenset[int]) -> int:
    return sum(1 for e in h.edges if len(e & uset) == 1 and e & wset)


def _count_once_full(h: Hypergraph, uset: frozenset[int], wset: frozenset[int]) -> int:
    return sum(
        1 for e in h.edges if len(e & uset) == 1 and len(e & wset) == h.r - 1
    )


def check_properties(
    h: Hypergraph,
    gamma0: Optional[Hypergraph] = None,
    epsilon: float = 0.3,
    mode: str = "sampled",
    trials: int = 10_000,
    seed=0,
    pair_budget: int = 10**6,
    properties: Optional[tuple[str, ...]] = None,
) -> PropertyReport:
    """Evaluate the requested P1..P7 properties of ``h`` (and ``gamma0`` for P7).

    ``mode="exact"`` insists on full enumeration and raises Infeasible past
    ``pair_budget``; ``mode="sampled"`` enumerates set sizes exhaustively
    while the budget lasts and samples uniform threshold-size pairs after,
    reporting sampledPass for anything not fully enumerated.
    """
    if epsilon <= 0:
        raise ParameterOutOfRange(f"need epsilon > 0, got {epsilon}")
    if mode not in ("exact", "sampled"):
        raise ParameterOutOfRange(f"mode must be exact or sampled, got {mode!r}")
    if properties is None:
        properties = ALL_PROPERTIES if gamma0 is not None else ALL_PROPERTIES[:-1]
    if "P7" in properties and gamma0 is None:
        raise MissingGamma0("P7 requires the sparse subgraph")
    rng = make_rng(seed)
    small = small_set(h, epsilon)
    verdicts: dict[str, PropertyVerdict] = {}
    for name in properties:
        if name == "P1":
            verdicts[name] = _check_p1(h)
        elif name == "P2":
            verdicts[name] = _check_p2(h, small, epsilon)
        elif name == "P3":
            verdicts[name] = _check_p3(h, small)
        elif name == "P4":
            verdicts[name] = _check_p4(h, mode, trials, rng, pair_budget)
        elif name == "P5":
            verdicts[name] = _check_p5(h, epsilon, mode, trials, rng, pair_budget)
        elif name in ("P6", "P7"):
            target = h if name == "P6" else gamma0
            verdicts[name] = _check_p67(
                name, h, target, mode, trials, rng, pair_budget
            )
        else:
            raise ParameterOutOfRange(f"unknown property {name!r}")
    return PropertyReport(epsilon=epsilon, n=h.n, r=h.r, verdicts=verdicts)


def _check_p1(h: Hypergraph) -> PropertyVerdict:
    bound = 10 * math.log(h.n)
    worst = max(range(1, h.n + 1), key=lambda v: (h.degree(v), -v))
    if h.degree(worst) > bound:
        return PropertyVerdict(
            "fail",
            witness={"vertex": worst, "degree": h.degree(worst), "bound": bound},
            checked=h.n,
            params={"bound": bound},
        )
    return PropertyVerdict("pass", checked=h.n, params={"bound": bound})


def _check_p2(h: Hypergraph, small: frozenset[int], epsilon: float) -> PropertyVerdict:
    bound = h.n**0.9
    params = {"bound": bound, "epsilon": epsilon}
    if len(small) > bound:
        return PropertyVerdict(
            "fail",
            witness={"small": sorted(small), "size": len(small), "bound": bound},
            checked=h.n,
            params=params,
        )
    return PropertyVerdict("pass", checked=h.n, params=params)


def _check_p3(h: Hypergraph, small: frozenset[int]) -> PropertyVerdict:
    for eid, e in enumerate(h.edges):
        hits = e & small
        if len(hits) > 1:
            return PropertyVerdict(
                "fail",
                witness={
                    "clause": "edge-meets-small-twice",
                    "edge_id": eid,
                    "edge": sorted(e),
                    "small_hits": sorted(hits),
                },
                checked=eid + 1,
            )
    touching = frozenset(
        v for e in h.edges if e & small for v in e
    )  # N: vertices of edges meeting SMALL
    for u in range(1, h.n + 1):
        if u in small:
            continue
        meeting = [
            eid
            for eid in h.incidence[u]
            if h.edges[eid] & (touching - {u})
        ]
        if len(meeting) > 1:
            return PropertyVerdict(
                "fail",
                witness={
                    "clause": "outside-vertex-in-two-N-edges",
                    "vertex": u,
                    "edge_ids": meeting,
                },
                checked=h.m + u,
            )
    return PropertyVerdict("pass", checked=h.m + h.n)


def _check_p4(
    h: Hypergraph, mode: str, trials: int, rng, pair_budget: int
) -> PropertyVerdict:
    n = h.n
    u_cap = _u_cap(n)
    params = {"u_cap": u_cap, "bound_per_u": math.log(n) ** 0.75}
    checked = 0
    budget = pair_budget
    for s in range(1, u_cap + 1):
        if math.comb(n, s) > budget:
            if mode == "exact":
                raise Infeasible(
                    f"P4 enumeration at |U|={s} exceeds pair budget {pair_budget}"
                )
            return _sample_p4(h, u_cap, s, trials, rng, checked, params)
        budget -= math.comb(n, s)
        bound = _p4_bound(n, s)
        for us in itertools.combinations(range(1, n + 1), s):
            checked += 1
            uset = frozenset(us)
            count = _count_multi(h, uset)
            if count > bound:
                return PropertyVerdict(
                    "fail",
                    witness={"U": sorted(uset), "count": count, "bound": bound},
                    checked=checked,
                    params=params,
                )
    return PropertyVerdict("pass", checked=checked, params=params)


def _sample_p4(
    h: Hypergraph, u_cap: int, start_size: int, trials: int, rng, checked: int, params
) -> PropertyVerdict:
    n = h.n
    # deterministic greedy probe first: grow U by the vertex adding the most
    # doubly-met edges
    uset: set[int] = set()
    for _ in range(u_cap):
        best_v, best_c = None, -1
        for v in range(1, n + 1):
            if v in uset:
                continue
            c = _count_multi(h, frozenset(uset | {v}))
            if c > best_c:
                best_v, best_c = v, c
        uset.add(best_v)
        checked += 1
        if best_c > _p4_bound(n, len(uset)):
            return PropertyVerdict(
                "fail",
                witness={"U": sorted(uset), "count": best_c,
                         "bound": _p4_bound(n, len(uset))},
                checked=checked,
                params=params,
            )
    for _ in range(trials):
        s = int(rng.integers(start_size, u_cap + 1))
        us = rng.choice(n, size=s, replace=False)
        uset_r = frozenset(int(v) + 1 for v in us)
        checked += 1
        count = _count_multi(h, uset_r)
        if count > _p4_bound(n, s):
            return PropertyVerdict(
                "fail",
                witness={"U": sorted(uset_r), "count": count,
                         "bound": _p4_bound(n, s)},
                checked=checked,
                params=params,
            )
    return PropertyVerdict("sampledPass", checked=checked, params=params)


def _check_p5(
    h: Hypergraph, epsilon: float, mode: str, trials: int, rng, pair_budget: int
) -> PropertyVerdict:
    n = h.n
    u_cap = _u_cap(n)
    params = {"u_cap": u_cap, "epsilon": epsilon}
    checked = 0
    budget = pair_budget
    for s in range(1, u_cap + 1):
        w_cap = min(_p5_w_cap(n, s), n - s)
        pairs_here = math.comb(n, s) * sum(
            math.comb(n - s, w) for w in range(1, w_cap + 1)
        )
        if pairs_here > budget:
            if mode == "exact":
                raise Infeasible(
                    f"P5 enumeration at |U|={s} exceeds pair budget {pair_budget}"
                )
            return _sample_p5(h, epsilon, u_cap, trials, rng, checked, params)
        budget -= pairs_here
        bound = _p5_bound(n, s, epsilon)
        for us in itertools.combinations(range(1, n + 1), s):
            uset = frozenset(us)
            rest = [v for v in range(1, n + 1) if v not in uset]
            for w in range(1, w_cap + 1):
                for ws in itertools.combinations(rest, w):
                    checked += 1
                    count = _count_once_touch(h, uset, frozenset(ws))
                    if count > bound:
                        return PropertyVerdict(
                            "fail",
                            witness={
                                "U": sorted(uset),
                                "W": sorted(ws),
                                "count": count,
                                "bound": bound,
                            },
                            checked=checked,
                            params=params,
                        )
    return PropertyVerdict("pass", checked=checked, params=params)


def _sample_p5(
    h: Hypergraph, epsilon: float, u_cap: int, trials: int, rng, checked: int, params
) -> PropertyVerdict:
    n = h.n
    # greedy probe: degrees pick U, then W collects the vertices most often
    # seen in edges meeting U exactly once
    by_degree = sorted(range(1, n + 1), key=lambda v: (-h.degree(v), v))
    for s in range(1, u_cap + 1):
        uset = frozenset(by_degree[:s])
        w_cap = min(_p5_w_cap(n, s), n - s)
        if w_cap < 1:
            continue
        score: dict[int, int] = {}
        for e in h.edges:
            if len(e & uset) == 1:
                for v in e - uset:
                    score[v] = score.get(v, 0) + 1
        wset = frozenset(
            sorted(score, key=lambda v: (-score[v], v))[:w_cap]
        )
        checked += 1
        if wset:
            count = _count_once_touch(h, uset, wset)
            if count > _p5_bound(n, s, epsilon):
                return PropertyVerdict(
                    "fail",
                    witness={
                        "U": sorted(uset),
                        "W": sorted(wset),
                        "count": count,
                        "bound": _p5_bound(n, s, epsilon),
                    },
                    checked=checked,
                    params=params,
                )
    for _ in range(trials):
        s = int(rng.integers(1, u_cap + 1))
        w_cap = min(_p5_w_cap(n, s), n - s)
        if w_cap < 1:
            continue
        us = rng.choice(n, size=s, replace=False)
        uset = frozenset(int(v) + 1 for v in us)
        rest = sorted(set(range(1, n + 1)) - uset)
        w = int(rng.integers(1, w_cap + 1))
        ws = rng.choice(len(rest), size=w, replace=False)
        wset = frozenset(rest[int(i)] for i in ws)
        checked += 1
        count = _count_once_touch(h, uset, wset)
        if count > _p5_bound(n, s, epsilon):
            return PropertyVerdict(
                "fail",
                witness={
                    "U": sorted(uset),
                    "W": sorted(wset),
                    "count": count,
                    "bound": _p5_bound(n, s, epsilon),
                },
                checked=checked,
                params=params,
            )
    return PropertyVerdict("sampledPass", checked=checked, params=params)


def _check_p67(
    name: str,
    h: Hypergraph,
    target: Hypergraph,
    mode: str,
    trials: int,
    rng,
    pair_budget: int,
) -> PropertyVerdict:
    """P6 counts edges of h, P7 demands one edge of the sparse subgraph."""
    n = h.n
    u_size, w_size = _p6_sizes(n)
    bound = _p6_bound(n) if name == "P6" else 1.0
    params = {"u_size": u_size, "w_size": w_size, "bound": bound}
    if u_size + w_size > n:
        return PropertyVerdict("pass", checked=0, params=params)  # vacuous
    total_pairs = math.comb(n, u_size) * math.comb(n - u_size, w_size)
    checked = 0
    if total_pairs <= pair_budget:
        for us in itertools.combinations(range(1, n + 1), u_size):
            uset = frozenset(us)
            rest = [v for v in range(1, n + 1) if v not in uset]
            for ws in itertools.combinations(rest, w_size):
                checked += 1
                count = _count_once_full(target, uset, frozenset(ws))
                if count < bound:
                    return PropertyVerdict(
                        "fail",
                        witness={
                            "U": sorted(uset),
                            "W": sorted(ws),
                            "count": count,
                            "bound": bound,
                        },
                        checked=checked,
                        params=params,
                    )
        return PropertyVerdict("pass", checked=checked, params=params)
    if mode == "exact":
        raise Infeasible(
            f"{name} enumeration needs {total_pairs} pairs, budget {pair_budget}"
        )
    for _ in range(trials):
        us = rng.choice(n, size=u_size, replace=False)
        uset = frozenset(int(v) + 1 for v in us)
        rest = sorted(set(range(1, n + 1)) - uset)
        ws = rng.choice(len(rest), size=w_size, replace=False)
        wset = frozenset(rest[int(i)] for i in ws)
        checked += 1
        count = _count_once_full(target, uset, wset)
        if count < bound:
            return PropertyVerdict(
                "fail",
                witness={
                    "U": sorted(uset),
                    "W": sorted(wset),
                    "count": count,
                    "bound": bound,
                },
                checked=checked,
                params=params,
            )
    return PropertyVerdict("sampledPass", checked=checked, params=params)


def verify_property_witness(
    h: Hypergraph,
    name: str,
    witness: dict,
    epsilon: float = 0.3,
    gamma0: Optional[Hypergraph] = None,
) -> bool:
    """Re-check a fail witness against the raw predicate definition."""
    n = h.n
    if name == "P1":
        return h.degree(witness["vertex"]) > 10 * math.log(n)
    if name == "P2":
        return len(small_set(h, epsilon)) > n**0.9
    if name == "P3":
        small = small_set(h, epsilon)
        if witness["clause"] == "edge-meets-small-twice":
            return len(h.edges[witness["edge_id"]] & small) > 1
        u = witness["vertex"]
        touching = frozenset(v for e in h.edges if e & small for v in e)
        meeting = [
            eid for eid in h.incidence[u] if h.edges[eid] & (touching - {u})
        ]
        return u not in small and len(meeting) > 1
    uset = frozenset(witness["U"])
    if name == "P4":
        return (
            len(uset) <= _u_cap(n)
            and _count_multi(h, uset) > _p4_bound(n, len(uset))
        )
    wset = frozenset(witness["W"])
    if name == "P5":
        return (
            len(uset) <= _u_cap(n)
            and len(wset) <= _p5_w_cap(n, len(uset))
            and not (uset & wset)
            and _count_once_touch(h, uset, wset) > _p5_bound(n, len(uset), epsilon)
        )
    u_size, w_size = _p6_sizes(n)
    if name == "P6":
        return (
            (len(uset), len(wset)) == (u_size, w_size)
            and not (uset & wset)
            and _count_once_full(h, uset, wset) < _p6_bound(n)
        )
    if name == "P7":
        if gamma0 is None:
            raise MissingGamma0("P7 witness check requires the sparse subgraph")
        return (
            (len(uset), len(wset)) == (u_size, w_size)
            and not (uset & wset)
            and _count_once_full(gamma0, uset, wset) < 1
        )
    raise ParameterOutOfRange(f"unknown property {name!r}")


# ---------------------------------------------------------------------------
# deterministic implication audit


@dataclass(frozen=True)
class ImplicationReport:
    variant: str
    min_degree: int
    delta_ok: bool
    properties: PropertyReport
    hypotheses_pass: bool
    connected: Optional[bool]
    expander: Optional[ExpanderReport]
    conclusion_holds: Optional[bool]
    critical_failure: bool


def implication_check(
    gamma0: Hypergraph,
    epsilon: float,
    variant: str = "ordinary",
    trials: int = 10_000,
    seed=0,
    pair_budget: int = 10**6,
    expander_guard: int = 10**6,
) -> ImplicationReport:
    """Audit: minimum degree plus P3, P4, P5, P7 should force expansion.

    The hypothesis side is evaluated on the sparse subgraph standing alone
    (P7 treats it as its own sparsifier).  The conclusion side is
    connectivity plus the (floor(n/4), 2)-expander condition, or the weak
    (floor(n/4), r-1) variant.  A run with passing hypotheses and a
    refuted conclusion is flagged critical; sampled hypothesis passes are
    trusted for the audit but recorded as such in the report.
    """
    if variant not in ("ordinary", "weak"):
        raise ParameterOutOfRange(f"variant must be ordinary or weak, got {variant!r}")
    need_delta = 2 if variant == "ordinary" else 1
    md = gamma0.min_degree()
    delta_ok = md >= need_delta
    props = check_properties(
        gamma0,
        gamma0=gamma0,
        epsilon=epsilon,
        mode="sampled",
        trials=trials,
        seed=seed,
        pair_budget=pair_budget,
        properties=("P3", "P4", "P5", "P7"),
    )
    hypotheses_pass = delta_ok and all(
        props.holds(p) for p in ("P3", "P4", "P5", "P7")
    )
    connected: Optional[bool] = None
    expander: Optional[ExpanderReport] = None
    conclusion: Optional[bool] = None
    k = max(1, gamma0.n // 4)
    if variant == "ordinary":
        connected = is_connected(gamma0)
        try:
            expander = is_expander(gamma0, k, 2.0, mode="exact", set_guard=expander_guard)
        except Infeasible:
            expander = is_expander(
                gamma0, k, 2.0, mode="sampled", trials=trials, seed=seed
            )
        conclusion = connected and expander.verdict in ("expander", "sampledPass")
    else:
        expander = is_weak_expander(gamma0, k, float(gamma0.r - 1), set_guard=expander_guard)
        conclusion = expander.verdict == "expander"
    critical = bool(hypotheses_pass and expander.verdict == "counterexample")
    if variant == "ordinary" and hypotheses_pass and connected is False:
        critical = True
    return ImplicationReport(
        variant=variant,
        min_degree=md,
        delta_ok=delta_ok,
        properties=props,
        hypotheses_pass=hypotheses_pass,
        connected=connected,
        expander=expander,
        conclusion_holds=conclusion,
        critical_failure=critical,
    )
