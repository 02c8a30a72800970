"""Exact Dirac spectra on Heisenberg manifolds and collapsing circle bundles."""

from .clifford import CliffordRep, build_clifford_rep, clifford_defect, gamma_of_two_form, volume_element
from .collapse import (
    CollapseReport,
    CollapseSlice,
    DivergentEntry,
    MatchedPair,
    ScaledLimitRow,
    berger_collapse_report,
    heisenberg_collapse_report,
    scaled_limit_check,
)
from .deformation import (
    ConnectionTermReport,
    CotangentSample,
    DeformationWitness,
    FiberDirac,
    char_poly_coefficients,
    connection_term_report,
    deformation_scan,
    det_derivative_numeric,
    det_derivative_poly,
    det_fiber,
    dirac_connection_term,
    fiber_dirac,
)
from .liealg import (
    ChristoffelTensor,
    MetricLieAlgebra,
    check_automorphism,
    christoffel,
    deformation_algebra,
    deformation_automorphism,
    heisenberg_metric_algebra,
)
from .oracle import (
    FiberBlock,
    HermiteResiduals,
    fiber_block_matrix,
    fiber_operator_fd,
    fiber_operator_fd_matrix,
    hermite_samples,
    hermitian_eig,
    hermitian_eigenvalues,
    spectrum_completeness_audit,
)
from .spectra import (
    HeisenbergGeometry,
    Spectrum,
    SpectrumDiff,
    SpectrumEntry,
    SpinDelta,
    admissible_spin_structures,
    berger_spectrum,
    cpm_spectrum,
    fiber_pair_eigenvalue,
    fiber_zero_mode_eigenvalue,
    harmonic_spinor_metric,
    heisenberg_rep_multiplicity,
    heisenberg_spectrum,
    lattice_eigenvalue,
    spectrum_compare,
    torus_spectrum,
)

__version__ = "0.1.0"
