"""Spectral reality domain of a PT-symmetric six-site tight-binding lattice."""
from .domain import (
    BoundaryMesh,
    BoundarySlice,
    DomainVerdict,
    InconclusiveCrossingError,
    PhysicalSet,
    TransitionKind,
    TransitionReport,
    Verdict,
    c_slice,
    classify_transition,
    classify_transition4,
    membership,
    membership4,
    scan_lambda4,
    scan_physical_set,
    trace_boundary,
)
from .implicit import (
    AlphaProfile,
    BranchProfile,
    PoleError,
    UnphysicalLimitError,
    alpha_of_e,
    alpha_profile,
    b_ep_of_c_branch,
    b_of_e,
    b_threshold,
    c_branch_profile,
    c_of_e,
    critical_energies,
)
from .model import (
    CartesianCouplings,
    DomainError,
    InvalidDimensionError,
    ProductCouplings,
    build_hamiltonian4,
    build_hamiltonian6,
    build_laplacean,
    build_parity,
    build_product_representative,
    check_pt_symmetry,
    from_products,
    to_products,
)
from .oracle import ConvergenceError, EigenResult, charpoly, eig_dense
from .secular import (
    Classification,
    SecularCoefficients,
    SpectrumResult,
    coefficients,
    count_real_energies,
    eval_secular,
    solve_cubic,
    spectrum,
    spectrum4,
)

__version__ = "0.1.0"
