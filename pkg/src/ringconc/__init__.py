"""Maximal two-site concurrence of translation-invariant qubit rings at fixed up-spin count."""

__version__ = "0.1.0"

from .basis import (
    BasisState,
    Necklace,
    SymmetricBasis,
    build_symmetric_basis,
    enumerate_necklaces,
    necklace_basis,
    necklace_count,
)
from .errors import DomainError, NumericalError, UnsupportedCaseError
from .kernels import BACKEND
from .lagrange import LagrangeSolution, lagrange_polynomial, lagrange_solve
from .oracle import OracleResult, optimize_direct, optimize_direct_complex
from .ow import OWSolution, ow_closed_form, ow_solve
from .qneighbor import ReductionPlan, qth_neighbor_max, verify_reduction
from .rdm import (
    AmplitudeVector,
    TwoSiteRDM,
    concurrence,
    single_site_entropy,
    two_site_rdm,
    wootters_concurrence,
)
from .stability import StabilityVerdict, stability_test
from .xxz import SGrid, build_sector_hamiltonian, cmax_exact, ground_state, sweep

__all__ = [
    "BACKEND", "AmplitudeVector", "BasisState", "DomainError", "LagrangeSolution", "Necklace",
    "NumericalError", "OWSolution", "OracleResult", "ReductionPlan", "SGrid", "StabilityVerdict",
    "SymmetricBasis", "TwoSiteRDM", "UnsupportedCaseError", "build_sector_hamiltonian",
    "build_symmetric_basis", "cmax_exact", "concurrence", "enumerate_necklaces", "ground_state",
    "lagrange_polynomial", "lagrange_solve", "necklace_basis", "necklace_count", "optimize_direct",
    "optimize_direct_complex", "ow_closed_form", "ow_solve", "qth_neighbor_max", "single_site_entropy",
    "stability_test", "sweep", "two_site_rdm", "verify_reduction", "wootters_concurrence",
]
