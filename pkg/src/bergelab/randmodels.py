"""Random r-graph models and deterministic threshold formulas.

All sampling is driven by numpy's PCG64 generator.  Seeds may be plain
ints or ``numpy.random.SeedSequence`` objects; identical seeds reproduce
samples bit-exactly.  Derived per-trial seeds are built with
``SeedSequence(master, spawn_key=(index, ...))``, the documented splitting
mechanism, so concurrent trials never share generator state.

r-subsets of {1..n} are identified with their colexicographic rank: the
sorted set {a1 < ... < ar} has rank sum(C(ai - 1, i) for i = 1..r), a
bijection onto 0..C(n,r)-1.  The density sampler skips between included
ranks with geometric jumps instead of flipping one coin per subset.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import ParameterOutOfRange, Unreachable, WrongK
from .hypergraph import Hypergraph

SeedLike = "int | np.random.SeedSequence | np.random.Generator"


def make_rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    if isinstance(seed, np.random.SeedSequence):
        return np.random.Generator(np.random.PCG64(seed))
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(int(seed))))


def child_seed(master: int, *path: int) -> np.random.SeedSequence:
    """Deterministic per-trial seed: SeedSequence(master, spawn_key=path)."""
    return np.random.SeedSequence(int(master), spawn_key=tuple(int(p) for p in path))


# ---------------------------------------------------------------------------
# colexicographic subset ranking


def subset_rank(subset: Iterable[int], r: Optional[int] = None) -> int:
    vs = sorted(subset)
    if r is not None and len(vs) != r:
        raise ParameterOutOfRange(f"subset {vs} does not have {r} elements")
    return sum(math.comb(a - 1, i + 1) for i, a in enumerate(vs))


def subset_unrank(rank: int, r: int) -> tuple[int, ...]:
    """Inverse of :func:`subset_rank`; returns the sorted r-subset."""
    if rank < 0:
        raise ParameterOutOfRange(f"rank {rank} negative")
    out = []
    t = rank
    for i in range(r, 0, -1):
        # largest a with C(a-1, i) <= t
        a = i
        while math.comb(a, i) <= t:
            a += 1
        out.append(a)
        t -= math.comb(a - 1, i)
    if t != 0:
        raise ParameterOutOfRange(f"rank {rank} not representable")
    return tuple(reversed(out))


# ---------------------------------------------------------------------------
# G(n, r, p)


def gnrp_sample(n: int, r: int, p: float, seed) -> Hypergraph:
    """Each of the C(n,r) r-subsets appears independently with probability p."""
    if not 0.0 <= p <= 1.0:
        raise ParameterOutOfRange(f"p={p} outside [0, 1]")
    if not 2 <= r <= n:
        raise ParameterOutOfRange(f"need 2 <= r <= n, got r={r}, n={n}")
    total = math.comb(n, r)
    if p == 0.0:
        return Hypergraph(n, r, [])
    if p == 1.0:
        return Hypergraph(n, r, [subset_unrank(t, r) for t in range(total)])
    rng = make_rng(seed)
    ranks: list[int] = []
    w = -1
    while True:
        w += int(rng.geometric(p))
        if w >= total:
            break
        ranks.append(w)
    return Hypergraph(n, r, [subset_unrank(t, r) for t in ranks])


# ---------------------------------------------------------------------------
# the random edge process H(t) and its degree stopping times


@dataclass(frozen=True)
class ProcessTrace:
    """Uniformly random ordering (or prefix of one) of all r-subsets of [n]."""

    n: int
    r: int
    subsets: tuple[frozenset[int], ...]

    @property
    def length(self) -> int:
        return len(self.subsets)

    @property
    def complete(self) -> bool:
        return len(self.subsets) == math.comb(self.n, self.r)

    def prefix(self, t: int) -> Hypergraph:
        """The hypergraph H(t) spanned by the first t process edges."""
        if not 0 <= t <= len(self.subsets):
            raise ParameterOutOfRange(
                f"prefix length {t} outside 0..{len(self.subsets)}"
            )
        return Hypergraph(self.n, self.r, [sorted(e) for e in self.subsets[:t]])


def process_sample(
    n: int, r: int, seed, length: Optional[int] = None
) -> ProcessTrace:
    """Sample a uniform random permutation prefix of the r-subsets of [n].

    With ``length`` omitted the full permutation is produced.  A partial
    Fisher-Yates shuffle over subset ranks keeps memory proportional to the
    requested length rather than to C(n,r).
    """
    if not 2 <= r <= n:
        raise ParameterOutOfRange(f"need 2 <= r <= n, got r={r}, n={n}")
    total = math.comb(n, r)
    if length is None:
        length = total
    if not 0 <= length <= total:
        raise ParameterOutOfRange(f"length {length} outside 0..{total}")
    rng = make_rng(seed)
    overlay: dict[int, int] = {}
    picks: list[int] = []
    for i in range(length):
        j = int(rng.integers(i, total))
        vi = overlay.get(i, i)
        vj = overlay.get(j, j)
        overlay[j] = vi
        picks.append(vj)
    subsets = tuple(frozenset(subset_unrank(t, r)) for t in picks)
    return ProcessTrace(n=n, r=r, subsets=subsets)


def stopping_time(trace: ProcessTrace, k: int) -> int:
    """Least t such that every vertex of H(t) lies in at least k edges.

    Degrees are tracked incrementally along the trace; no per-t rescans.
    Raises :class:`Unreachable` if the (possibly truncated) trace never
    reaches minimum degree k.
    """
    if k < 0:
        raise ParameterOutOfRange(f"k={k} negative")
    if k == 0:
        return 0
    deg = [0] * (trace.n + 1)
    below = trace.n
    for t, e in enumerate(trace.subsets, start=1):
        for v in e:
            deg[v] += 1
            if deg[v] == k:
                below -= 1
        if below == 0:
            return t
    raise Unreachable(
        f"trace of length {trace.length} never reaches minimum degree {k}"
    )


# ---------------------------------------------------------------------------
# k-out model


@dataclass(frozen=True)
class KOutSample:
    """Per-vertex random edge choices E_v and their union hypergraph.

    ``choices[v-1]`` holds vertex v's k chosen r-sets in draw order;
    ``choice_ids[v-1]`` maps them to edge ids of the collapsed union
    ``hypergraph``; ``origins[eid]`` lists every (vertex, slot) that drew
    the edge, so duplicate draws remain attributable.
    """

    n: int
    r: int
    k: int
    mode: str  # "with" | "without" replacement
    choices: tuple[tuple[frozenset[int], ...], ...]
    choice_ids: tuple[tuple[int, ...], ...]
    hypergraph: Hypergraph
    origins: dict[int, tuple[tuple[int, int], ...]]


def _draw_edge_containing(rng: np.random.Generator, n: int, r: int, v: int) -> frozenset[int]:
    # uniform (r-1)-subset of [n] \ {v}, then add v
    idx = rng.choice(n - 1, size=r - 1, replace=False)
    members = [i + 1 if i + 1 < v else i + 2 for i in sorted(int(x) for x in idx)]
    return frozenset([v] + members)


def kout_sample(n: int, r: int, k: int, mode: str = "without", seed=0) -> KOutSample:
    """Every vertex independently draws k uniform r-sets containing it."""
    if not 2 <= r <= n:
        raise ParameterOutOfRange(f"need 2 <= r <= n, got r={r}, n={n}")
    if k < 1:
        raise ParameterOutOfRange(f"need k >= 1, got k={k}")
    if mode not in ("with", "without"):
        raise ParameterOutOfRange(f"mode must be 'with' or 'without', got {mode!r}")
    if mode == "without" and k > math.comb(n - 1, r - 1):
        raise ParameterOutOfRange(
            f"k={k} exceeds the {math.comb(n - 1, r - 1)} r-sets containing a vertex"
        )
    rng = make_rng(seed)
    choices: list[tuple[frozenset[int], ...]] = []
    for v in range(1, n + 1):
        mine: list[frozenset[int]] = []
        while len(mine) < k:
            e = _draw_edge_containing(rng, n, r, v)
            if mode == "without" and e in mine:
                continue
            mine.append(e)
        choices.append(tuple(mine))
    union: list[frozenset[int]] = []
    ids: dict[frozenset[int], int] = {}
    origins: dict[int, list[tuple[int, int]]] = {}
    choice_ids: list[tuple[int, ...]] = []
    for v in range(1, n + 1):
        row = []
        for slot, e in enumerate(choices[v - 1]):
            eid = ids.get(e)
            if eid is None:
                eid = len(union)
                ids[e] = eid
                union.append(e)
                origins[eid] = []
            origins[eid].append((v, slot))
            row.append(eid)
        choice_ids.append(tuple(row))
    return KOutSample(
        n=n,
        r=r,
        k=k,
        mode=mode,
        choices=tuple(choices),
        choice_ids=tuple(choice_ids),
        hypergraph=Hypergraph(n, r, [sorted(e) for e in union]),
        origins={eid: tuple(v) for eid, v in origins.items()},
    )


# ---------------------------------------------------------------------------
# 2-out orientation into a digraph


@dataclass(frozen=True)
class Digraph:
    """Arc set with provenance back to the originating (vertex, edge, sign).

    Duplicate arcs collapse to one; ``provenance[arc]`` keeps every origin
    so arcs can be lifted back to hyperedges.
    """

    n: int
    arcs: frozenset[tuple[int, int]]
    provenance: dict[tuple[int, int], tuple[tuple[int, int, str], ...]]
    out_adj: tuple[tuple[int, ...], ...]
    in_adj: tuple[tuple[int, ...], ...]

    @classmethod
    def from_arcs(cls, n, arc_provenance) -> "Digraph":
        out_adj: list[set[int]] = [set() for _ in range(n + 1)]
        in_adj: list[set[int]] = [set() for _ in range(n + 1)]
        for (u, v) in arc_provenance:
            out_adj[u].add(v)
            in_adj[v].add(u)
        return cls(
            n=n,
            arcs=frozenset(arc_provenance),
            provenance={a: tuple(ps) for a, ps in arc_provenance.items()},
            out_adj=tuple(tuple(sorted(s)) for s in out_adj),
            in_adj=tuple(tuple(sorted(s)) for s in in_adj),
        )


def orient_two_out(sample: KOutSample, seed) -> Digraph:
    """Label each vertex's two edges with a fair coin and orient them.

    The minus edge sends arcs into its choosing vertex, the plus edge sends
    arcs out of it, so every vertex gets at least r-1 arcs each way.
    """
    if sample.k != 2:
        raise WrongK(f"orientation needs k=2, got k={sample.k}")
    rng = make_rng(seed)
    arcs: dict[tuple[int, int], list[tuple[int, int, str]]] = {}

    def add(arc: tuple[int, int], origin: tuple[int, int, str]) -> None:
        arcs.setdefault(arc, []).append(origin)

    for v in range(1, sample.n + 1):
        flip = int(rng.integers(0, 2))
        minus_slot, plus_slot = (0, 1) if flip == 0 else (1, 0)
        e_minus = sample.choices[v - 1][minus_slot]
        e_plus = sample.choices[v - 1][plus_slot]
        id_minus = sample.choice_ids[v - 1][minus_slot]
        id_plus = sample.choice_ids[v - 1][plus_slot]
        for u in sorted(e_minus - {v}):
            add((u, v), (v, id_minus, "-"))
        for w in sorted(e_plus - {v}):
            add((v, w), (v, id_plus, "+"))
    return Digraph.from_arcs(sample.n, arcs)


# ---------------------------------------------------------------------------
# threshold formulas and the coupon cover probe


def threshold_p(n: int, r: int, c: float, variant: str = "ordinary") -> float:
    """Critical edge probability at offset c, clamped to [0, 1].

    weak:     (r-1)! (log n + c) / n^(r-1)
    ordinary: (r-1)! (log n + log log n + c) / n^(r-1)
    """
    if n < 3:
        raise ParameterOutOfRange(f"need n >= 3, got n={n}")
    if r < 2:
        raise ParameterOutOfRange(f"need r >= 2, got r={r}")
    if variant == "weak":
        num = math.log(n) + c
    elif variant == "ordinary":
        num = math.log(n) + math.log(math.log(n)) + c
    else:
        raise ParameterOutOfRange(f"variant must be weak or ordinary, got {variant!r}")
    p = math.factorial(r - 1) * num / float(n) ** (r - 1)
    return min(1.0, max(0.0, p))


def limit_probability(c: float) -> float:
    """Limiting hit probability exp(-exp(-c)) at threshold offset c."""
    return math.exp(-math.exp(-c))


def coupon_cover_estimate(n: int, r: int, trials: int, seed) -> float:
    """Empirical P(union of n uniform r-subsets of [n] covers all n vertices)."""
    if trials < 1:
        raise ParameterOutOfRange(f"need trials >= 1, got {trials}")
    if not 1 <= r <= n:
        raise ParameterOutOfRange(f"need 1 <= r <= n, got r={r}, n={n}")
    rng = make_rng(seed)
    hits = 0
    for _ in range(trials):
        covered = np.zeros(n, dtype=bool)
        for _ in range(n):
            covered[rng.choice(n, size=r, replace=False)] = True
            # early exit once everything is covered
            if covered.all():
                break
        if covered.all():
            hits += 1
    return hits / trials
