"""Default tolerances shared across modules."""
import os

#: max-entry check on Q^T Q - I and A - A^T
ORTHOGONALITY_TOL = 1e-10
SYMMETRY_TOL = 1e-10
#: relative reconstruction bound for factorizations
RECONSTRUCTION_TOL = 1e-8
#: residual norm <= DEPENDENCE_TOL * ||v|| declares linear dependence
DEPENDENCE_TOL = 1e-10
#: |Im z| <= REALNESS_TOL * max(1, |z|) counts as a real root
REALNESS_TOL = 1e-8
#: relative gap separating distinct eigenvalues
CLUSTER_TOL = 1e-6
#: guard band around the feasibility limits of alpha
ANGLE_TOL = 1e-12

_VALIDATION_TOL = 1e-6


def validation_tolerance():
    """Max |S^T S - G_alpha| accepted for an equiangular matrix.

    ``EQK_TOLERANCE`` in the environment overrides the default of 1e-6.
    """
    raw = os.environ.get("EQK_TOLERANCE")
    if raw:
        try:
            value = float(raw)
        except ValueError:
            raise ValueError(f"EQK_TOLERANCE must be a number, got {raw!r}") from None
        if not value > 0:
            raise ValueError("EQK_TOLERANCE must be positive")
        return value
    return _VALIDATION_TOL
