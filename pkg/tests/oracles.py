"""Brute-force oracles for the test suite.

Everything here is written from the raw definitions with plain
enumeration (cyclic orders, injective assignments, full state search)
and deliberately avoids the library's solver/matching/rotation code, so
tests compare two independent computations of the same quantity.
"""

from __future__ import annotations

import itertools
from collections import deque
from typing import Optional

import numpy as np

from bergelab import Hypergraph


def random_hypergraph(rng: np.random.Generator, n: int, r: int, m: int) -> Hypergraph:
    """m distinct uniform r-subsets of [n]."""
    all_subsets = list(itertools.combinations(range(1, n + 1), r))
    idx = rng.choice(len(all_subsets), size=min(m, len(all_subsets)), replace=False)
    return Hypergraph(n, r, [all_subsets[int(i)] for i in sorted(idx)])


def _covering_edges(h: Hypergraph, u: int, v: int) -> list[int]:
    return [eid for eid, e in enumerate(h.edges) if u in e and v in e]


def brute_weak_hamiltonian(h: Hypergraph) -> Optional[tuple[int, ...]]:
    """All cyclic orders; consecutive vertices must share some edge."""
    n = h.n
    if n < 3:
        return None
    for perm in itertools.permutations(range(2, n + 1)):
        order = (1,) + perm
        if all(
            _covering_edges(h, order[i], order[(i + 1) % n]) for i in range(n)
        ):
            return order
    return None


def brute_ordinary_hamiltonian(
    h: Hypergraph,
) -> Optional[tuple[tuple[int, ...], tuple[int, ...]]]:
    """All cyclic orders x all injective edge assignments."""
    n = h.n
    if n < 3 or h.m < n:
        return None

    def assign(order, step, used, acc):
        if step == n:
            return tuple(acc)
        u, v = order[step], order[(step + 1) % n]
        for eid in _covering_edges(h, u, v):
            if eid in used:
                continue
            used.add(eid)
            acc.append(eid)
            hit = assign(order, step + 1, used, acc)
            if hit is not None:
                return hit
            acc.pop()
            used.remove(eid)
        return None

    for perm in itertools.permutations(range(2, n + 1)):
        order = (1,) + perm
        hit = assign(order, 0, set(), [])
        if hit is not None:
            return order, hit
    return None


def brute_longest_path(h: Hypergraph, weak: bool) -> int:
    """Maximum vertex count over all Berge paths, by full sequence search."""
    best = 1 if h.n >= 1 else 0

    def extend(seq, used):
        nonlocal best
        best = max(best, len(seq))
        if len(seq) == h.n:
            return
        z = seq[-1]
        for w in range(1, h.n + 1):
            if w in seq:
                continue
            for eid in _covering_edges(h, z, w):
                if not weak and eid in used:
                    continue
                if not weak:
                    used.add(eid)
                extend(seq + [w], used)
                if not weak:
                    used.remove(eid)
                if weak:
                    break  # any covering edge behaves the same
        return

    for start in range(1, h.n + 1):
        extend([start], set())
    return best


def brute_hamiltonian_after(h: Hypergraph, weak: bool) -> bool:
    if weak:
        return brute_weak_hamiltonian(h) is not None
    return brute_ordinary_hamiltonian(h) is not None


def brute_boosters(h: Hypergraph, weak: bool = False) -> set[frozenset[int]]:
    """Definitional per-non-edge recomputation of path length / Hamiltonicity."""
    base_len = brute_longest_path(h, weak)
    existing = {frozenset(e) for e in h.edges}
    out: set[frozenset[int]] = set()
    for cand in itertools.combinations(range(1, h.n + 1), h.r):
        fs = frozenset(cand)
        if fs in existing:
            continue
        bigger = Hypergraph(h.n, h.r, [sorted(e) for e in h.edges] + [sorted(cand)])
        if h.n >= 3 and brute_hamiltonian_after(bigger, weak):
            out.add(fs)
        elif brute_longest_path(bigger, weak) > base_len:
            out.add(fs)
    return out


# ---------------------------------------------------------------------------
# rotation closure by exhaustive state search


def _oracle_rotations(h: Hypergraph, vs: tuple[int, ...], es: tuple[int, ...]):
    m = len(vs)
    if m < 2:
        return
    z = vs[-1]
    used = set(es)
    for eid, e in enumerate(h.edges):
        if eid in used or z not in e:
            continue
        for j in range(m - 1):
            if vs[j] in e:
                yield vs[: j + 1] + tuple(reversed(vs[j + 1 :])), es[:j] + (eid,) + tuple(
                    reversed(es[j + 1 :])
                )
    for i in range(m - 2):
        if z in h.edges[es[i]]:
            yield vs[: i + 1] + tuple(reversed(vs[i + 1 :])), es[:i] + (es[i],) + tuple(
                reversed(es[i + 1 :])
            )


def brute_rotation_closure(h: Hypergraph, vs: tuple[int, ...], es: tuple[int, ...]):
    """Exhaustive BFS over (ordered path, edge assignment) states.

    Returns (endpoint set R, R-pm on base numbering, all reachable states,
    extension-exists flag).
    """
    base = (tuple(vs), tuple(es))
    seen = {base}
    queue = deque([base])
    has_extension = False
    while queue:
        cvs, ces = queue.popleft()
        on_path = set(cvs)
        used = set(ces)
        for eid, e in enumerate(h.edges):
            if eid not in used and cvs[-1] in e and (set(e) - on_path):
                has_extension = True
        for state in _oracle_rotations(h, cvs, ces):
            if state not in seen:
                seen.add(state)
                queue.append(state)
    r_set = {state[0][-1] for state in seen}
    m = len(vs)
    r_pm = {
        vs[i]
        for i in range(m)
        if (i > 0 and vs[i - 1] in r_set) or (i < m - 1 and vs[i + 1] in r_set)
    }
    return r_set, r_pm, seen, has_extension


# ---------------------------------------------------------------------------
# weak expander by the set-pair definition (search over all Y)


def brute_weak_expander_counterexample(
    h: Hypergraph, k: int, alpha: float
) -> Optional[tuple[frozenset[int], frozenset[int]]]:
    """First (X, Y) with |X| <= k, |Y| < alpha |X|, every edge meeting X
    inside X u Y."""
    vertices = list(range(1, h.n + 1))
    for s in range(1, k + 1):
        for xs in itertools.combinations(vertices, s):
            xset = frozenset(xs)
            touching = [e for e in h.edges if e & xset]
            rest = [v for v in vertices if v not in xset]
            max_y = len(rest)
            for ysize in range(0, max_y + 1):
                if not ysize < alpha * s:
                    break
                for ys in itertools.combinations(rest, ysize):
                    yset = frozenset(ys)
                    if all(e <= xset | yset for e in touching):
                        return xset, yset
    return None


# ---------------------------------------------------------------------------
# coupon collector cover probability by inclusion-exclusion


def coupon_cover_exact(n: int, r: int) -> float:
    """P(n iid uniform r-subsets of [n] cover [n]), by inclusion-exclusion
    over the set of missed vertices."""
    import math

    total = 0.0
    for j in range(0, n - r + 1):
        total += (
            (-1) ** j
            * math.comb(n, j)
            * (math.comb(n - j, r) / math.comb(n, r)) ** n
        )
    return total
