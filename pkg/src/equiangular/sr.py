"""SR factorization: ``A = S R`` with ``S`` equiangular and ``R`` upper triangular."""
import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionTooLarge, NotSPD
from .generator import DEFAULT_POLICY, SignPolicy, generate
from .linalg import as_matrix, max_abs, symmetric_eig
from .tolerances import SYMMETRY_TOL

MAX_ENUMERATION_COLUMNS = 12


@dataclass(frozen=True)
class SRFactors:
    s: np.ndarray
    r: np.ndarray
    theta: float
    alpha: float
    policy: SignPolicy

    def reconstruct(self):
        return self.s @ self.r


def sr_factorize(a, theta=None, policy=None, *, alpha=None, projection="modified"):
    """Factor a full-column-rank ``a`` (m x n, n <= m) as ``S @ R``.

    ``R`` is collected from the reconstruction coefficients of each generation
    step, not recomputed afterwards.  Under the default policy its diagonal is
    positive; a ``-1`` at step k makes ``r_kk`` negative.

    Raises
    ------
    RankDeficient
        (as :class:`~equiangular.errors.LinearlyDependent`) if a column lies in
        the span of the previous ones.
    AngleInfeasible
    """
    if alpha is None:
        alpha = math.cos(theta)
    else:
        theta = math.acos(alpha)
    policy = DEFAULT_POLICY if policy is None else policy
    s, diag = generate(a, policy=policy, alpha=alpha, projection=projection)
    return SRFactors(s, diag.r, float(theta), float(alpha), policy)


def sr_enumerate(a, theta=None, *, alpha=None):
    """All ``2**(n-1)`` SR factorizations at a fixed angle, one per sign policy."""
    a = as_matrix(a, "A")
    n = a.shape[1]
    if n > MAX_ENUMERATION_COLUMNS:
        raise DimensionTooLarge(f"enumeration is limited to n <= {MAX_ENUMERATION_COLUMNS}, got {n}")
    return [sr_factorize(a, theta, SignPolicy.from_index(i, n), alpha=alpha)
            for i in range(2 ** (n - 1))]


@dataclass(frozen=True)
class CholeskyRankOne:
    """``A = (1 - alpha) R^T R + alpha u u^T`` with ``u = R^T e``."""

    r: np.ndarray
    u: np.ndarray
    alpha: float

    def reconstruct(self):
        return (1.0 - self.alpha) * self.r.T @ self.r + self.alpha * np.outer(self.u, self.u)


def spd_cholesky_rank_one(a, theta=None, *, alpha=None, tol=SYMMETRY_TOL):
    """Split an SPD matrix into a scaled triangular Gram term plus a rank-one term.

    ``B`` with ``B^T B = a`` is taken as ``diag(sqrt(w)) Q^T`` from the
    symmetric eigendecomposition; ``B = S R`` then gives ``R`` and ``u = R^T e``.
    """
    a = as_matrix(a, "A")
    if a.shape[0] != a.shape[1] or max_abs(a - a.T) > tol * max(1.0, max_abs(a)):
        raise NotSPD("matrix is not symmetric")
    q, w = symmetric_eig(a, tol=tol)
    if w[0] <= a.shape[0] * np.finfo(float).eps * max(abs(w[-1]), 1e-300):
        raise NotSPD(f"smallest eigenvalue {w[0]!r} is not positive")
    b = np.sqrt(w)[:, None] * q.T
    f = sr_factorize(b, theta, alpha=alpha)
    u = f.r.T @ np.ones(a.shape[0])
    return CholeskyRankOne(f.r, u, f.alpha)
