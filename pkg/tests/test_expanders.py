import itertools

import numpy as np
import pytest

from bergelab import (
    Hypergraph,
    Infeasible,
    SolveBudget,
    booster_absorption,
    boosters,
    is_connected,
    is_expander,
    is_weak_expander,
    process_sample,
    sparsify,
    stopping_time,
    verify_certificate,
)
from oracles import (
    brute_boosters,
    brute_weak_expander_counterexample,
    random_hypergraph,
)

F1 = Hypergraph(4, 3, [[1, 2, 3], [1, 2, 4], [1, 3, 4], [2, 3, 4]])
F4 = Hypergraph(5, 3, [[1, 2, 3], [1, 4, 5]])


def _blocks(h, xset, yset):
    for e in h.edges:
        if len(e & xset) == 1 and not (e & yset):
            return False
    return True


def test_empty_hypergraph_counterexample():
    r = is_expander(Hypergraph(3, 3, []), 1, 2.0)
    assert r.verdict == "counterexample"
    assert r.witness == (frozenset({1}), frozenset())


def test_complete_3_graph_is_1_2_expander():
    assert is_expander(F1, 1, 2.0).verdict == "expander"


def test_expander_monotone_in_k():
    rng = np.random.default_rng(3)
    for _ in range(20):
        h = random_hypergraph(rng, 7, 3, int(rng.integers(4, 14)))
        for k in (3, 2, 1):
            if is_expander(h, 3, 2.0).verdict == "expander":
                assert is_expander(h, k, 2.0).verdict == "expander"


def test_counterexamples_reverify():
    rng = np.random.default_rng(9)
    hits = 0
    for _ in range(40):
        h = random_hypergraph(rng, 7, 3, int(rng.integers(1, 8)))
        rep = is_expander(h, 3, 2.0)
        if rep.verdict != "counterexample":
            continue
        hits += 1
        xset, yset = rep.witness
        assert len(xset) <= 3
        assert len(yset) < 2.0 * len(xset)
        assert not (xset & yset)
        assert _blocks(h, xset, yset)
    assert hits >= 10


def test_sampled_mode_counterexample_or_pass():
    h = Hypergraph(6, 3, [[1, 2, 3]])
    rep = is_expander(h, 2, 2.0, mode="sampled", trials=500, seed=4)
    assert rep.verdict == "counterexample"
    xset, yset = rep.witness
    assert _blocks(h, xset, yset)
    rep = is_expander(F1, 1, 2.0, mode="sampled", trials=200, seed=4)
    assert rep.verdict in ("sampledPass", "counterexample")


def test_exact_guard():
    h = Hypergraph(40, 3, [[1, 2, 3]])
    with pytest.raises(Infeasible):
        is_expander(h, 20, 2.0, set_guard=1000)


def test_weak_expander_hand_example():
    rep = is_weak_expander(F4, 2, 2.0)
    assert rep.verdict == "counterexample"
    xset, yset = rep.witness
    assert len(yset) < 2 * len(xset)
    # X={2,3} is one witness: its outside neighborhood is just {1}
    neigh = set()
    for e in F4.edges:
        if e & {2, 3}:
            neigh |= e
    assert len(neigh - {2, 3}) == 1


def test_weak_expander_matches_definitional_search():
    rng = np.random.default_rng(31)
    for _ in range(40):
        n = int(rng.integers(4, 9))
        h = random_hypergraph(rng, n, 3, int(rng.integers(0, 10)))
        k = int(rng.integers(1, 4))
        rep = is_weak_expander(h, k, 2.0)
        oracle = brute_weak_expander_counterexample(h, k, 2.0)
        assert (rep.verdict == "counterexample") == (oracle is not None)


def test_connectivity():
    assert is_connected(F1)
    assert is_connected(Hypergraph(4, 3, [[1, 2, 3], [1, 2, 4]]))
    assert not is_connected(Hypergraph(6, 3, [[1, 2, 3], [4, 5, 6]]))
    assert not is_connected(Hypergraph(4, 3, [[1, 2, 3]]))  # vertex 4 isolated


# ---------------------------------------------------------------------------
# boosters


def test_every_non_edge_boosts_a_hamiltonian_graph():
    # F1 has no non-edges; drop one edge and the removed edge must be a booster
    h = Hypergraph(4, 3, [[1, 2, 3], [1, 2, 4], [1, 3, 4]])
    got = boosters(h)
    assert frozenset({2, 3, 4}) in got


def test_boosters_two_edge_instance():
    h = Hypergraph(4, 3, [[1, 2, 3], [2, 3, 4]])
    got = set(boosters(h))
    assert got == brute_boosters(h)
    assert got == {frozenset({1, 2, 4}), frozenset({1, 3, 4})}


def test_boosters_match_oracle_fuzz():
    rng = np.random.default_rng(77)
    for _ in range(15):
        n = int(rng.integers(4, 7))
        h = random_hypergraph(rng, n, 3, int(rng.integers(1, 7)))
        assert set(boosters(h)) == brute_boosters(h)
        assert set(boosters(h, weak=True)) == brute_boosters(h, weak=True)


def test_sampled_boosters_are_sound():
    h = Hypergraph(5, 3, [[1, 2, 3], [2, 3, 4], [3, 4, 5]])
    exact = set(boosters(h))
    sampled = set(boosters(h, mode="sampled", trials=60, seed=2))
    assert sampled <= exact


def test_nonhamiltonian_connected_expanders_have_boosters():
    # such instances are rare; fish with a fixed stream and stop at two
    rng = np.random.default_rng(15)
    hits = 0
    from bergelab import find_hamiltonian_berge

    exact = SolveBudget(node_limit=2_000_000, mode="exactOnly")
    for _ in range(3000):
        n = int(rng.integers(5, 10))
        h = random_hypergraph(rng, n, 3, int(rng.integers(n - 1, 2 * n)))
        if not is_connected(h):
            continue
        if find_hamiltonian_berge(h, exact).status == "found":
            continue
        if is_expander(h, max(1, n // 4), 2.0).verdict != "expander":
            continue
        hits += 1
        assert len(boosters(h)) >= 1
        if hits == 2:
            break
    assert hits >= 2


# ---------------------------------------------------------------------------
# absorption


def test_absorption_trivial_cases():
    res = booster_absorption(F1, F1)
    assert res.status == "found"
    assert res.info["absorbed"] == []
    h = Hypergraph(4, 3, [[1, 2, 3], [1, 2, 4]])
    res = booster_absorption(h, h)
    assert res.status == "inconclusive"
    assert res.info["absorbed"] == []


def test_absorption_reaches_hamiltonicity_from_sparse_start():
    ok = 0
    for seed in range(12):
        tr = process_sample(18, 3, seed)
        t2 = stopping_time(tr, 2)
        supply = tr.prefix(t2)
        start = sparsify(supply, 0.3, seed=seed).gamma0
        res = booster_absorption(start, supply)
        if res.status == "found":
            ok += 1
            grown = start.with_edges(res.info["absorbed"])
            v = verify_certificate(grown, res.certificate)
            assert v.valid and v.hamiltonian
    assert ok >= 10
