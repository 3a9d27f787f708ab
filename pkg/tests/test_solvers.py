import numpy as np
import pytest

from bergelab import (
    Digraph,
    Hypergraph,
    ParameterOutOfRange,
    SolveBudget,
    WrongK,
    WrongR,
    degree1_triple_obstruction,
    digraph_hamilton,
    find_hamiltonian_berge,
    find_weak_hamiltonian,
    kout2_pipeline,
    kout_sample,
    longest_berge_path,
    one_out_weak_pipeline,
    verify_certificate,
)
from oracles import (
    brute_longest_path,
    brute_ordinary_hamiltonian,
    brute_weak_hamiltonian,
    random_hypergraph,
)

F1 = Hypergraph(4, 3, [[1, 2, 3], [1, 2, 4], [1, 3, 4], [2, 3, 4]])
F2 = Hypergraph(4, 3, [[1, 2, 3], [1, 2, 4]])
F3 = Hypergraph(3, 3, [[1, 2, 3]])

EXACT = SolveBudget(node_limit=2_000_000, mode="exactOnly")


def test_weak_single_edge_triangle():
    res = find_weak_hamiltonian(F3)
    assert res.status == "found"
    assert res.certificate.weak
    assert set(res.certificate.edges) == {0}
    assert verify_certificate(F3, res.certificate).hamiltonian


def test_weak_found_on_f2():
    res = find_weak_hamiltonian(F2)
    assert res.status == "found"
    assert verify_certificate(F2, res.certificate).hamiltonian


def test_weak_absent_on_disjoint_edges():
    h = Hypergraph(6, 3, [[1, 2, 3], [4, 5, 6]])
    res = find_weak_hamiltonian(h)
    assert res.status == "provedAbsent"


def test_ordinary_found_on_complete():
    res = find_hamiltonian_berge(F1)
    assert res.status == "found"
    v = verify_certificate(F1, res.certificate)
    assert v.valid and v.hamiltonian and not res.certificate.weak
    assert len(set(res.certificate.edges)) == 4


def test_ordinary_absent_on_min_degree_one():
    res = find_hamiltonian_berge(F2)
    assert res.status == "provedAbsent"
    assert "degree" in res.reason or "edges" in res.reason


def test_requires_three_vertices():
    h = Hypergraph(2, 2, [[1, 2]])
    with pytest.raises(ParameterOutOfRange):
        find_weak_hamiltonian(h)
    with pytest.raises(ParameterOutOfRange):
        find_hamiltonian_berge(h)


def test_longest_path_single_edge():
    strict = longest_berge_path(F3, EXACT, weak=False)
    assert len(strict.certificate.vertices) == 2
    assert strict.optimal
    loose = longest_berge_path(F3, EXACT, weak=True)
    assert len(loose.certificate.vertices) == 3
    assert loose.optimal


def test_longest_path_complete_and_empty():
    res = longest_berge_path(F1, EXACT, weak=False)
    assert len(res.certificate.vertices) == 4
    empty = Hypergraph(4, 3, [])
    res = longest_berge_path(empty, EXACT)
    assert res.certificate.vertices == (1,) and res.optimal


def test_longest_path_matches_oracle():
    rng = np.random.default_rng(23)
    for _ in range(25):
        n = int(rng.integers(4, 7))
        h = random_hypergraph(rng, n, 3, int(rng.integers(1, 7)))
        for weak in (False, True):
            res = longest_berge_path(h, EXACT, weak=weak)
            assert res.optimal
            assert len(res.certificate.vertices) == brute_longest_path(h, weak)
            assert verify_certificate(h, res.certificate).valid


def test_solvers_match_oracles_small_fuzz():
    rng = np.random.default_rng(5)
    for _ in range(60):
        n = int(rng.integers(4, 7))
        m = int(rng.integers(1, 9))
        h = random_hypergraph(rng, n, 3, m)
        res_w = find_weak_hamiltonian(h, EXACT)
        assert res_w.status in ("found", "provedAbsent")
        assert (res_w.status == "found") == (brute_weak_hamiltonian(h) is not None)
        res_o = find_hamiltonian_berge(h, EXACT)
        assert res_o.status in ("found", "provedAbsent")
        assert (res_o.status == "found") == (
            brute_ordinary_hamiltonian(h) is not None
        )
        for res in (res_w, res_o):
            if res.status == "found":
                v = verify_certificate(h, res.certificate)
                assert v.valid and v.hamiltonian


def test_heuristic_certificates_always_verify():
    rng = np.random.default_rng(37)
    for _ in range(25):
        n = int(rng.integers(8, 14))
        m = int(rng.integers(n, 3 * n))
        h = random_hypergraph(rng, n, 3, m)
        for solver in (find_weak_hamiltonian, find_hamiltonian_berge):
            res = solver(h)
            if res.status == "found":
                v = verify_certificate(h, res.certificate)
                assert v.valid and v.hamiltonian
                assert res.certificate.weak == (solver is find_weak_hamiltonian)


def test_weak_found_whenever_ordinary_found():
    rng = np.random.default_rng(41)
    for _ in range(30):
        h = random_hypergraph(rng, 6, 3, int(rng.integers(4, 10)))
        if find_hamiltonian_berge(h, EXACT).status == "found":
            assert find_weak_hamiltonian(h, EXACT).status == "found"


# ---------------------------------------------------------------------------
# digraphs


def _digraph(n, arcs):
    return Digraph.from_arcs(n, {a: [(0, 0, "+")] for a in arcs})


def test_digraph_three_cycle():
    d = _digraph(3, [(1, 2), (2, 3), (3, 1)])
    assert digraph_hamilton(d) == [1, 2, 3]


def test_digraph_complete():
    arcs = [(u, v) for u in range(1, 6) for v in range(1, 6) if u != v]
    order = digraph_hamilton(_digraph(5, arcs))
    assert order is not None and sorted(order) == [1, 2, 3, 4, 5]


def test_digraph_in_degree_zero_absent():
    d = _digraph(4, [(1, 2), (2, 3), (3, 1), (4, 1)])  # nothing enters 4
    assert digraph_hamilton(d) is None


def test_digraph_order_uses_real_arcs():
    rng = np.random.default_rng(3)
    for seed in range(10):
        s = kout_sample(30, 3, 2, "without", seed)
        from bergelab import orient_two_out

        d = orient_two_out(s, seed)
        order = digraph_hamilton(d)
        if order is None:
            continue
        assert sorted(order) == list(range(1, 31))
        for i in range(len(order)):
            assert (order[i], order[(i + 1) % len(order)]) in d.arcs


# ---------------------------------------------------------------------------
# k-out pipelines


def test_kout2_pipeline_produces_valid_certificates():
    found = 0
    for seed in range(15):
        s = kout_sample(40, 3, 2, "without", seed)
        res = kout2_pipeline(s, seed=seed)
        if res.status == "found":
            found += 1
            v = verify_certificate(s.hypergraph, res.certificate)
            assert v.valid and v.hamiltonian and not res.certificate.weak
    assert found >= 12


def test_kout2_rejects_wrong_k():
    with pytest.raises(WrongK):
        kout2_pipeline(kout_sample(10, 3, 1, "without", 0))


def test_one_out_pipeline_r4():
    found = 0
    for seed in range(10):
        s = kout_sample(40, 4, 1, "without", seed)
        res = one_out_weak_pipeline(s)
        if res.status == "found":
            found += 1
            v = verify_certificate(s.hypergraph, res.certificate)
            assert v.valid and v.hamiltonian and res.certificate.weak
    assert found >= 8


def test_one_out_pipeline_rejects_r3():
    with pytest.raises(WrongR):
        one_out_weak_pipeline(kout_sample(10, 3, 1, "without", 0))
    with pytest.raises(WrongK):
        one_out_weak_pipeline(kout_sample(10, 4, 2, "without", 0))


# ---------------------------------------------------------------------------
# obstruction witness


def test_obstruction_direct_construction():
    h = Hypergraph(
        10,
        3,
        [[1, 4, 5], [2, 4, 6], [3, 4, 7], [5, 6, 7], [5, 6, 8], [8, 9, 10]],
    )
    w = degree1_triple_obstruction(h)
    assert w is not None
    assert w.vertices == (1, 2, 3) and w.hub == 4


def test_obstruction_none_on_complete():
    assert degree1_triple_obstruction(F1) is None


def test_obstruction_requires_r3():
    with pytest.raises(WrongR):
        degree1_triple_obstruction(Hypergraph(5, 4, [[1, 2, 3, 4]]))


def test_obstruction_implies_weak_absent_small():
    # plant three degree-1 vertices around hub 4 on top of random instances
    rng = np.random.default_rng(17)
    import itertools

    core = list(itertools.combinations(range(4, 9), 3))
    for _ in range(20):
        take = rng.choice(len(core), size=int(rng.integers(2, 6)), replace=False)
        edges = [core[int(i)] for i in sorted(take)]
        edges += [(1, 4, 5), (2, 4, 6), (3, 4, 7)]
        seen = set()
        edges = [e for e in edges if not (frozenset(e) in seen or seen.add(frozenset(e)))]
        h = Hypergraph(8, 3, edges)
        if h.degree(1) != 1 or h.degree(2) != 1 or h.degree(3) != 1:
            continue
        w = degree1_triple_obstruction(h)
        assert w is not None and w.hub == 4
        assert find_weak_hamiltonian(h, EXACT).status == "provedAbsent"
        assert brute_weak_hamiltonian(h) is None
