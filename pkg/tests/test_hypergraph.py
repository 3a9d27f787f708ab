import json

import numpy as np
import pytest

from bergelab import (
    BergeCertificate,
    DuplicateEdge,
    EdgeWrongSize,
    Hypergraph,
    VertexOutOfRange,
    format_fixture,
    parse_fixture,
    verify_certificate,
)
from oracles import random_hypergraph

F1 = Hypergraph(4, 3, [[1, 2, 3], [1, 2, 4], [1, 3, 4], [2, 3, 4]])
F2 = Hypergraph(4, 3, [[1, 2, 3], [1, 2, 4]])
F3 = Hypergraph(3, 3, [[1, 2, 3]])


def test_construction_complete_3_graph():
    assert F1.m == 4
    assert F1.n == 4 and F1.r == 3


def test_duplicate_edge_rejected():
    with pytest.raises(DuplicateEdge):
        Hypergraph(3, 3, [[1, 2, 3], [3, 2, 1]])
    h = Hypergraph(3, 3, [[1, 2, 3], [3, 2, 1]], allow_duplicates=True)
    assert h.m == 2


def test_edge_arity_checked():
    with pytest.raises(EdgeWrongSize):
        Hypergraph(4, 3, [[1, 2]])
    with pytest.raises(EdgeWrongSize):
        Hypergraph(4, 3, [[1, 2, 2]])  # collapses to 2 distinct vertices


def test_vertex_range_checked():
    with pytest.raises(VertexOutOfRange):
        Hypergraph(4, 3, [[1, 2, 5]])
    with pytest.raises(VertexOutOfRange):
        F1.degree(0)


def test_degrees():
    assert F1.degree(1) == 3
    assert F2.degree(3) == 1
    assert Hypergraph(5, 3, []).degree(1) == 0


def test_min_degree():
    assert F1.min_degree() == 3
    assert F2.min_degree() == 1
    assert Hypergraph(5, 3, []).min_degree() == 0


def test_degree_sum_is_r_times_m():
    rng = np.random.default_rng(7)
    for _ in range(30):
        n = int(rng.integers(3, 10))
        m = int(rng.integers(0, 12))
        h = random_hypergraph(rng, n, 3, m)
        assert sum(h.degree(v) for v in range(1, n + 1)) == h.r * h.m


def test_shadow_pairs_and_multiplicity():
    sh = F2.shadow()
    assert sh.pairs() == [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4)]
    assert sh.multiplicity(1, 2) == (0, 1)
    assert sh.multiplicity(2, 1) == (0, 1)
    assert sh.multiplicity(3, 4) == ()
    assert F3.shadow().pairs() == [(1, 2), (1, 3), (2, 3)]
    assert Hypergraph(4, 3, []).shadow().pairs() == []


def test_verify_hamiltonian_cycle_on_complete():
    cert = BergeCertificate("cycle", (1, 2, 3, 4), (0, 3, 2, 1), weak=False)
    v = verify_certificate(F1, cert)
    assert v.valid and v.hamiltonian


def test_weak_reuse_separates_from_ordinary():
    cert = BergeCertificate("cycle", (3, 1, 4, 2), (0, 1, 1, 0), weak=True)
    v = verify_certificate(F2, cert)
    assert v.valid and v.hamiltonian
    strict = BergeCertificate("cycle", (3, 1, 4, 2), (0, 1, 1, 0), weak=False)
    v = verify_certificate(F2, strict)
    assert not v.valid
    assert v.violation == "repeated edge at step 2"


def test_single_edge_weak_triangle():
    cert = BergeCertificate("cycle", (1, 2, 3), (0, 0, 0), weak=True)
    v = verify_certificate(F3, cert)
    assert v.valid and v.hamiltonian


def test_violations_name_the_first_bad_step():
    cert = BergeCertificate("cycle", (1, 2, 3, 4), (0, 0, 2, 1), weak=False)
    v = verify_certificate(F1, cert)
    assert not v.valid and "step 1" in v.violation
    cert = BergeCertificate("cycle", (1, 2, 4, 3), (0, 1, 1, 0), weak=True)
    v = verify_certificate(F2, cert)  # pair (4,3) is uncovered
    assert not v.valid and "step 2" in v.violation


def test_ordinary_valid_implies_weak_valid():
    rng = np.random.default_rng(11)
    from bergelab import find_hamiltonian_berge

    for _ in range(20):
        h = random_hypergraph(rng, 5, 3, int(rng.integers(5, 9)))
        res = find_hamiltonian_berge(h)
        if res.status != "found":
            continue
        cert = res.certificate
        relaxed = BergeCertificate(cert.kind, cert.vertices, cert.edges, weak=True)
        assert verify_certificate(h, relaxed).valid


def test_two_vertex_cycle_recognized_but_not_hamiltonian():
    h = Hypergraph(2, 2, [[1, 2], [2, 1]], allow_duplicates=True)
    cert = BergeCertificate("cycle", (1, 2), (0, 1), weak=False)
    v = verify_certificate(h, cert)
    assert v.valid and not v.hamiltonian


def test_path_certificates():
    cert = BergeCertificate("path", (1, 2, 4), (0, 1), weak=False)
    assert verify_certificate(Hypergraph(4, 3, [[1, 2, 3], [2, 3, 4]]), cert).valid
    solo = BergeCertificate("path", (2,), (), weak=False)
    assert verify_certificate(F1, solo).valid


def test_fixture_round_trip():
    text = format_fixture(F2)
    assert text.splitlines()[0] == "4 3 2"
    back = parse_fixture(text)
    assert back.n == 4 and back.r == 3
    assert [sorted(e) for e in back.edges] == [[1, 2, 3], [1, 2, 4]]


def test_certificate_json_round_trip():
    cert = BergeCertificate("cycle", (3, 1, 4, 2), (0, 1, 1, 0), weak=True)
    data = json.loads(cert.dumps())
    assert set(data) == {"kind", "weak", "vertices", "edges"}
    assert BergeCertificate.loads(cert.dumps()) == cert
