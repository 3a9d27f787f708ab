import numpy as np
import pytest

from bergelab import (
    BergeCertificate,
    Hypergraph,
    InvalidPath,
    rotation_closure,
    verify_certificate,
)
from bergelab.rotation import apply_move
from oracles import brute_rotation_closure, random_hypergraph

F1 = Hypergraph(4, 3, [[1, 2, 3], [1, 2, 4], [1, 3, 4], [2, 3, 4]])


def _random_start_path(rng, h, max_len=5):
    """Greedy random Berge path with distinct edges, or None."""
    start = int(rng.integers(1, h.n + 1))
    vs, es = (start,), ()
    while len(vs) < max_len:
        z = vs[-1]
        options = []
        for eid in h.incidence[z]:
            if eid in es:
                continue
            for w in h.edges[eid]:
                if w not in vs:
                    options.append((eid, w))
        if not options:
            break
        eid, w = options[int(rng.integers(0, len(options)))]
        vs, es = vs + (w,), es + (eid,)
    if len(vs) < 2:
        return None
    return BergeCertificate("path", vs, es, weak=False)


def test_rejects_invalid_input():
    with pytest.raises(InvalidPath):
        rotation_closure(F1, BergeCertificate("cycle", (1, 2, 3), (0, 1, 2)))
    with pytest.raises(InvalidPath):
        rotation_closure(F1, BergeCertificate("path", (1, 1), (0,)))
    with pytest.raises(InvalidPath):
        rotation_closure(F1, BergeCertificate("path", (1, 2, 3), (0, 0), weak=True))


def test_single_vertex_path_reports_extension():
    st = rotation_closure(F1, BergeCertificate("path", (1,), ()))
    assert st.R == frozenset({1})
    assert st.extension is not None
    assert st.extension.new_vertex in {2, 3, 4}


def test_two_edge_instance_closure():
    h = Hypergraph(4, 3, [[1, 2, 3], [2, 3, 4]])
    st = rotation_closure(h, BergeCertificate("path", (1, 2, 4), (0, 1)))
    assert st.left_endpoint == 1
    assert st.R == frozenset({4})
    assert st.r_pm == frozenset({2})
    assert st.extension is None
    r, r_pm, _states, ext = brute_rotation_closure(h, (1, 2, 4), (0, 1))
    assert st.R == frozenset(r) and st.r_pm == frozenset(r_pm)
    assert ext is False


def test_closure_matches_brute_force_fuzz():
    rng = np.random.default_rng(71)
    done = 0
    while done < 40:
        n = int(rng.integers(4, 8))
        h = random_hypergraph(rng, n, 3, int(rng.integers(2, 9)))
        cert = _random_start_path(rng, h)
        if cert is None:
            continue
        done += 1
        st = rotation_closure(h, cert)
        r, r_pm, states, ext = brute_rotation_closure(
            h, tuple(cert.vertices), tuple(cert.edges)
        )
        assert st.R == frozenset(r)
        assert st.r_pm == frozenset(r_pm)
        assert st.states_explored == len(states)
        assert (st.extension is not None) == ext


def test_every_derivation_replays_to_valid_path():
    rng = np.random.default_rng(5)
    done = 0
    while done < 20:
        h = random_hypergraph(rng, 6, 3, int(rng.integers(3, 10)))
        cert = _random_start_path(rng, h)
        if cert is None:
            continue
        done += 1
        st = rotation_closure(h, cert)
        for endpoint, moves in st.derivations.items():
            vs, es = tuple(cert.vertices), tuple(cert.edges)
            for move in moves:
                vs, es = apply_move(h, vs, es, move)
                replayed = BergeCertificate("path", vs, es)
                assert verify_certificate(h, replayed).valid
                assert len(set(es)) == len(es)
            assert vs[-1] == endpoint
            assert vs[0] == cert.vertices[0]
            assert set(vs) == set(cert.vertices)
            assert (vs, es) == st.endpoint_paths[endpoint]


def test_r_is_stable_across_reachable_states():
    # rotations are reversible, so the closure from any reachable state
    # has the same endpoint set
    rng = np.random.default_rng(13)
    done = 0
    while done < 10:
        h = random_hypergraph(rng, 6, 3, int(rng.integers(4, 10)))
        cert = _random_start_path(rng, h)
        if cert is None:
            continue
        st = rotation_closure(h, cert)
        if len(st.R) < 2:
            continue
        done += 1
        for endpoint, (vs, es) in st.endpoint_paths.items():
            again = rotation_closure(h, BergeCertificate("path", vs, es))
            assert again.R == st.R


def test_left_endpoint_never_in_r_for_real_paths():
    rng = np.random.default_rng(40)
    done = 0
    while done < 20:
        h = random_hypergraph(rng, 6, 3, int(rng.integers(3, 10)))
        cert = _random_start_path(rng, h)
        if cert is None:
            continue
        done += 1
        st = rotation_closure(h, cert)
        assert cert.vertices[0] not in st.R
