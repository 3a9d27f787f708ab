"""r-uniform hypergraphs, shadow graphs, and Berge certificates.

Vertices are labeled 1..n.  Edges are r-element vertex sets with stable
integer ids 0..m-1 assigned in insertion order.  A Berge certificate is a
vertex sequence plus one covering edge per consecutive pair; the ``weak``
flag permits the same edge to be reused across steps.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .errors import (
    DuplicateEdge,
    EdgeWrongSize,
    ParameterOutOfRange,
    VertexOutOfRange,
)


class Hypergraph:
    """Immutable r-uniform hypergraph with dual edge indexing.

    Both directions (edge id -> vertex set, vertex -> incident edge ids)
    are built at construction: rotation closures and expander checks are
    dominated by incidence queries.  Instances are safe to share across
    workers.
    """

    def __init__(
        self,
        n: int,
        r: int,
        edges: Iterable[Iterable[int]] = (),
        allow_duplicates: bool = False,
    ):
        if n < 1:
            raise ParameterOutOfRange(f"need n >= 1, got n={n}")
        if not 2 <= r <= n:
            raise ParameterOutOfRange(f"need 2 <= r <= n, got r={r}, n={n}")
        self.n = n
        self.r = r
        edge_sets: list[frozenset[int]] = []
        first_id: dict[frozenset[int], int] = {}
        incidence: list[list[int]] = [[] for _ in range(n + 1)]
        for pos, raw in enumerate(edges):
            e = frozenset(raw)
            if len(e) != r:
                raise EdgeWrongSize(
                    f"edge {pos} has {len(e)} distinct vertices, expected {r}"
                )
            for v in e:
                if not 1 <= v <= n:
                    raise VertexOutOfRange(
                        f"edge {pos} contains vertex {v}, valid range is 1..{n}"
                    )
            if e in first_id:
                if not allow_duplicates:
                    raise DuplicateEdge(
                        f"edge {pos} duplicates edge {first_id[e]}: {sorted(e)}"
                    )
            else:
                first_id[e] = pos
            for v in e:
                incidence[v].append(len(edge_sets))
            edge_sets.append(e)
        self.edges: tuple[frozenset[int], ...] = tuple(edge_sets)
        self.incidence: tuple[tuple[int, ...], ...] = tuple(
            tuple(ids) for ids in incidence
        )
        self._first_id = first_id
        self._shadow: Optional[ShadowGraph] = None

    @property
    def m(self) -> int:
        return len(self.edges)

    def degree(self, v: int) -> int:
        """Number of edges containing v."""
        if not 1 <= v <= self.n:
            raise VertexOutOfRange(f"vertex {v} out of range 1..{self.n}")
        return len(self.incidence[v])

    def min_degree(self) -> int:
        return min(len(self.incidence[v]) for v in range(1, self.n + 1))

    def max_degree(self) -> int:
        return max(len(self.incidence[v]) for v in range(1, self.n + 1))

    def has_edge(self, vertices: Iterable[int]) -> bool:
        return frozenset(vertices) in self._first_id

    def edge_id(self, vertices: Iterable[int]) -> Optional[int]:
        """Id of the first edge equal to the given vertex set, if present."""
        return self._first_id.get(frozenset(vertices))

    def shadow(self) -> "ShadowGraph":
        if self._shadow is None:
            self._shadow = ShadowGraph(self)
        return self._shadow

    def with_edges(self, extra: Iterable[Iterable[int]]) -> "Hypergraph":
        """New hypergraph with ``extra`` appended after the current edges."""
        return Hypergraph(
            self.n, self.r, [sorted(e) for e in self.edges] + [sorted(e) for e in extra]
        )

    def edge_sets(self) -> set[frozenset[int]]:
        return set(self._first_id)

    def __repr__(self) -> str:
        return f"Hypergraph(n={self.n}, r={self.r}, m={self.m})"


class ShadowGraph:
    """2-uniform projection: u ~ v iff some edge contains both.

    ``multiplicity(u, v)`` lists the ids of all covering edges, sorted.
    Weak Berge Hamiltonicity of the hypergraph is exactly Hamiltonicity
    of its shadow.
    """

    def __init__(self, h: Hypergraph):
        self.n = h.n
        mult: dict[tuple[int, int], list[int]] = {}
        adj: list[set[int]] = [set() for _ in range(h.n + 1)]
        for eid, e in enumerate(h.edges):
            vs = sorted(e)
            for i in range(len(vs)):
                for j in range(i + 1, len(vs)):
                    u, v = vs[i], vs[j]
                    mult.setdefault((u, v), []).append(eid)
                    adj[u].add(v)
                    adj[v].add(u)
        self._mult = mult
        self.adj: tuple[tuple[int, ...], ...] = tuple(
            tuple(sorted(s)) for s in adj
        )

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.adj[v]

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def has_pair(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in self._mult

    def multiplicity(self, u: int, v: int) -> tuple[int, ...]:
        """Sorted ids of edges containing both u and v (empty if none)."""
        return tuple(self._mult.get((min(u, v), max(u, v)), ()))

    def pairs(self) -> list[tuple[int, int]]:
        return sorted(self._mult)


@dataclass(frozen=True)
class BergeCertificate:
    """Witness for a Berge cycle or path.

    ``vertices`` are pairwise distinct; ``edges[i]`` must contain
    ``vertices[i]`` and ``vertices[i+1]`` (indices mod length for cycles).
    With ``weak=False`` the assigned edge ids must be pairwise distinct.
    """

    kind: str  # "cycle" | "path"
    vertices: tuple[int, ...]
    edges: tuple[int, ...]
    weak: bool = False

    def to_json_dict(self) -> dict:
        return {
            "kind": self.kind,
            "weak": self.weak,
            "vertices": list(self.vertices),
            "edges": list(self.edges),
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "BergeCertificate":
        return cls(
            kind=data["kind"],
            vertices=tuple(data["vertices"]),
            edges=tuple(data["edges"]),
            weak=bool(data["weak"]),
        )

    def dumps(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True)

    @classmethod
    def loads(cls, text: str) -> "BergeCertificate":
        return cls.from_json_dict(json.loads(text))


@dataclass(frozen=True)
class CertificateVerdict:
    valid: bool
    hamiltonian: bool
    violation: Optional[str] = None


def verify_certificate(h: Hypergraph, cert: BergeCertificate) -> CertificateVerdict:
    """Check a certificate against ``h``; violations name the first bad step.

    The Hamiltonian flag requires a valid cycle visiting all n vertices
    with n >= 3; the degenerate two-vertex cycle verifies as valid but is
    never flagged Hamiltonian.
    """

    def bad(msg: str) -> CertificateVerdict:
        return CertificateVerdict(valid=False, hamiltonian=False, violation=msg)

    if cert.kind not in ("cycle", "path"):
        return bad(f"unknown certificate kind {cert.kind!r}")
    ell = len(cert.vertices)
    if ell == 0:
        return bad("certificate has no vertices")
    if cert.kind == "cycle":
        if ell < 2:
            return bad("a cycle needs at least 2 vertices")
        want = ell
    else:
        want = ell - 1
    if len(cert.edges) != want:
        return bad(
            f"edge assignment has {len(cert.edges)} entries, expected {want}"
        )
    seen_v: set[int] = set()
    for v in cert.vertices:
        if not 1 <= v <= h.n:
            return bad(f"vertex {v} out of range 1..{h.n}")
        if v in seen_v:
            return bad(f"vertex {v} repeated")
        seen_v.add(v)
    seen_e: set[int] = set()
    for i, eid in enumerate(cert.edges):
        if not 0 <= eid < h.m:
            return bad(f"edge id {eid} out of range at step {i}")
        u = cert.vertices[i]
        w = cert.vertices[(i + 1) % ell]
        edge = h.edges[eid]
        if u not in edge or w not in edge:
            return bad(f"edge {eid} does not cover pair ({u},{w}) at step {i}")
        if not cert.weak:
            if eid in seen_e:
                return bad(f"repeated edge at step {i}")
            seen_e.add(eid)
    hamiltonian = cert.kind == "cycle" and ell == h.n and h.n >= 3
    return CertificateVerdict(valid=True, hamiltonian=hamiltonian, violation=None)


# ---------------------------------------------------------------------------
# text fixture format: first line "n r m", then m lines of r vertex labels


def format_fixture(h: Hypergraph) -> str:
    lines = [f"{h.n} {h.r} {h.m}"]
    for e in h.edges:
        lines.append(" ".join(str(v) for v in sorted(e)))
    return "\n".join(lines) + "\n"


def parse_fixture(text: str, allow_duplicates: bool = False) -> Hypergraph:
    rows = [ln for ln in (s.strip() for s in text.splitlines()) if ln]
    if not rows:
        raise ParameterOutOfRange("empty fixture")
    head = rows[0].split()
    if len(head) != 3:
        raise ParameterOutOfRange(f"bad fixture header {rows[0]!r}")
    n, r, m = (int(x) for x in head)
    if len(rows) - 1 != m:
        raise ParameterOutOfRange(
            f"fixture announces {m} edges but contains {len(rows) - 1}"
        )
    edges = [[int(x) for x in row.split()] for row in rows[1:]]
    return Hypergraph(n, r, edges, allow_duplicates=allow_duplicates)


def dump_fixture(h: Hypergraph, path) -> None:
    with open(path, "w", encoding="ascii") as fh:
        fh.write(format_fixture(h))


def load_fixture(path, allow_duplicates: bool = False) -> Hypergraph:
    with open(path, "r", encoding="ascii") as fh:
        return parse_fixture(fh.read(), allow_duplicates=allow_duplicates)
