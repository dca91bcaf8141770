"""Equiangular vectors and matrices: generation, SR factorization, structured
inverses, spectral factorizations and simplex tight frames."""
from .errors import *  # noqa: F401,F403
from .errors import EquiangularError
from .etf import (
    FrameCheckReport, SimplexFrame, etf_coherence, etf_from_vectors, extend_to_orthogonal,
    frame_sum_check, simplex_frame, verify_tight,
)
from .generator import (
    DEFAULT_POLICY, EVState, GenerationDiagnostics, SignPolicy, b_basis_of, classical_gs,
    cot_phi, ev_step, generate, gs_reference, initial_state, modified_gs, standard_basis,
    trihedral_cosine,
)
from .gram import (
    EquiangularSpec, GramStructure, condition_number, eigenvalue_bounds, eigenvalue_modulus,
    equiangular_inverse, equiangular_solve, gram_deviation, gram_eigenvalues, gram_inverse,
    gram_matrix, gram_sqrt, inverse_row_geometry, make_spec, seidel_matrix, spec_from_alpha,
    sum_norm, validate_equiangular,
)
from .io import read_matrix, write_matrix
from .linalg import (
    ComplexRootSet, SchurForm, invert_dense, matmul, polynomial_roots, real_schur, symmetric_eig,
)
from .spectral import (
    BlockTriangularSim, SDSFactors, TwoEigenFactors, alpha_feasibility_threshold,
    arithmetic_g_poly, dg_charpoly, equiangular_eigvecs, equiangular_similarity, factor_rSSt,
    feasibility_scan, g_coefficients, g_poly, sds_coefficients, sds_factorize,
    two_eigen_parameters,
)
from .sr import CholeskyRankOne, SRFactors, spd_cholesky_rank_one, sr_enumerate, sr_factorize
from .stability import StabilityRecord, report_csv, stability_harness

__version__ = "0.1.0"
