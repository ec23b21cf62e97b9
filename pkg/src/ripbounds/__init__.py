"""Bounds on the restricted isometry ratio of sensing matrices and tools to certify them."""

from .bounds import (
    BoundReport,
    ProblemSize,
    bound_report,
    cap_integral,
    covering_bound,
    optimal_scaling,
    packing_bound,
    packing_crossover,
    ratio_to_delta,
    solve_cap_angle,
    structural_bound,
    structural_bound_k2_closed,
    structural_bound_k2_limit,
    structural_bound_spectrum,
    structural_ratio_cap,
    welch_coherence_bound,
    welch_extension_bound,
)
from .errors import BudgetExceeded, ContractError, MatrixParseError, RootFindingError
from .identities import (
    euler_residual,
    gpt_residual,
    minimality_check,
    q_volume,
    root_sensitivity,
    thompson_general_residual,
    thompson_residual,
)
from .linalg import (
    enumerate_k_subsets,
    gram,
    normalize_columns,
    random_gaussian,
    random_with_spectrum,
    read_matrix,
    singular_values,
    submatrix_columns,
    write_matrix,
)
from .realpoly import (
    RealRootedPoly,
    differentiate,
    elementary_symmetric,
    real_roots,
    spectral_poly,
    structural_poly,
)
from .ripeval import (
    coherence,
    etf_check,
    gaussian_baseline,
    histogram,
    rip_evaluate,
    sample_submatrix_spectra,
)

__version__ = "0.1.0"
