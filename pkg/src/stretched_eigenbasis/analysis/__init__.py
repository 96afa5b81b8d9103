from .convergence import (
    ConvergenceReport,
    ConvergenceRow,
    EvaluationLattice,
    convergence_study,
    error_norms,
    norms_from_errors,
)
from .interpolation import (
    NodeSet1D,
    cd_cardinal,
    cd_lebesgue_sweep,
    cofactor_cardinal,
    lagrange_1d,
    lebesgue_constant,
    lebesgue_function,
    psi_basis,
    theorem1_bound,
)
