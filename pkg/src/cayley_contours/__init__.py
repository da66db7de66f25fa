"""Contour machinery and exact Gibbs computations for q-state models on Cayley trees."""

from .contour import (
    BoundaryEdgeSet,
    Contour,
    Subcontour,
    assemble_contours,
    boundary,
    contours,
    count_contours_at,
    extend_configuration,
    spanning_subgraph,
    subcontours,
)
from .errors import BudgetError, DegenerateSpecError, DomainError, StructureError, ValidationError
from .gibbs import (
    GibbsReport,
    chi_gamma,
    contour_hamiltonian,
    contour_probability,
    direct_hamiltonian,
    log_partition_bruteforce,
    peierls_sweep,
    root_marginal_bruteforce,
    root_marginal_recursion,
)
from .group import FiniteQuotient, coset_index, periodic_configuration, vertex_word
from .model import (
    ModelSpec,
    boundary_hamiltonian,
    check_condition9,
    edge_energy,
    ground_state_bruteforce,
    lambda0,
    lemma8_check,
    relative_hamiltonian,
)
from .tree import (
    SubgraphHandle,
    TreeVolume,
    build_volume,
    distance,
    enumerate_connected_subgraphs,
    incident_edge_boundary,
    vertex_boundary,
)

__version__ = "0.1.0"
