"""Berge Hamiltonicity in random r-uniform hypergraphs.

Library plus experiment harness: hypergraph core and certificate
verification, random models (density, edge process, k-out), exact and
rotation-heuristic Hamiltonicity solvers, expander and sparsifier
property checkers, and seeded Monte Carlo experiments.
"""

__version__ = "0.1.0"

from .errors import (
    BergelabError,
    BudgetExceeded,
    ConfigInvalid,
    DuplicateEdge,
    EdgeWrongSize,
    Infeasible,
    InvalidPath,
    IoError,
    MissingGamma0,
    ParameterOutOfRange,
    Unreachable,
    VertexOutOfRange,
    WrongK,
    WrongR,
)
from .hypergraph import (
    BergeCertificate,
    CertificateVerdict,
    Hypergraph,
    ShadowGraph,
    dump_fixture,
    format_fixture,
    load_fixture,
    parse_fixture,
    verify_certificate,
)
from .randmodels import (
    Digraph,
    KOutSample,
    ProcessTrace,
    child_seed,
    coupon_cover_estimate,
    gnrp_sample,
    kout_sample,
    limit_probability,
    make_rng,
    orient_two_out,
    process_sample,
    stopping_time,
    subset_rank,
    subset_unrank,
    threshold_p,
)
from .rotation import RotationMove, RotationState, rotation_closure
from .solvers import (
    ObstructionWitness,
    SolveBudget,
    SolveResult,
    SolveStats,
    degree1_triple_obstruction,
    digraph_hamilton,
    find_hamiltonian_berge,
    find_weak_hamiltonian,
    kout2_pipeline,
    longest_berge_path,
    one_out_weak_pipeline,
)
from .expanders import (
    ExpanderReport,
    booster_absorption,
    boosters,
    is_connected,
    is_expander,
    is_weak_expander,
)
from .sparsifier import (
    ImplicationReport,
    PropertyReport,
    PropertyVerdict,
    SparsifierOutput,
    check_properties,
    implication_check,
    small_set,
    sparsify,
    verify_property_witness,
)
