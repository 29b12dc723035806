"""Spanning subdivisions of small patterns in dense digraphs."""

from .absorber import AbsorbingPath, GoodTupleSystem, absorb, build_absorbing_path, good_tuples_for
from .assembler import (
    CertificateReport,
    SolverParams,
    SolveStats,
    SubdivisionCertificate,
    brute_force_subdivision,
    format_certificate,
    parse_certificate,
    solve,
    solve_undirected,
    verify_certificate,
)
from .connector import ConnectorSystem, Reservoir, build_reservoir, connect_through, exclude
from .digraph import (
    Digraph,
    arcs_between,
    common_out_in,
    min_semi_degree,
    parse_digraph,
    read_digraph,
    remove_add,
    write_digraph,
)
from .errors import (
    AbsorptionFailed,
    FamilyNotFound,
    HamiltonNotFound,
    InfeasibleDensity,
    InstanceTooLarge,
    InvalidDegree,
    InvalidPattern,
    InvalidSizes,
    InvalidSystem,
    LinkageFailed,
    PreconditionViolated,
    ReservoirExhausted,
    SolveFailed,
    SpanSubError,
)
from .hamilton import hamiltonian_cycle, hamiltonian_path
from .instances import gen_extremal, gen_random_pattern, gen_random_semidegree
from .tuples import TupleSystem, check_family, select_family, verify_tuple_system

__version__ = "0.1.0"
