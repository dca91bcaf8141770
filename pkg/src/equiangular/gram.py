"""Closed-form algebra of Gram matrices of equiangular systems.

``G_alpha = (1 - alpha) I + alpha e e^T`` has two eigenvalues, a structured
inverse ``k G_h`` and a structured principal square root ``G(s, t)``.  An
equiangular square ``S`` (``S^T S = G_alpha``) therefore inverts in O(n^2).
"""
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import AlphaOutOfRange, AngleInfeasible, DegenerateAngle, InputError, NotEquiangular
from .linalg import as_matrix, as_vector, max_abs
from .tolerances import ANGLE_TOL, validation_tolerance


def check_alpha(n, alpha):
    """Raise unless ``n`` unit vectors with common cosine ``alpha`` can exist."""
    if not math.isfinite(alpha):
        raise InputError("alpha must be finite")
    if alpha >= 1.0 - ANGLE_TOL:
        raise DegenerateAngle(f"cos(theta) = {alpha!r}: the vectors would coincide")
    if n >= 2 and 1.0 + (n - 1) * alpha <= ANGLE_TOL:
        raise AngleInfeasible(
            f"cos(theta) = {alpha!r} is not above -1/(n-1) = {-1.0 / (n - 1)!r} for n = {n}")
    if alpha <= -1.0:
        raise AngleInfeasible(f"cos(theta) = {alpha!r} is not above -1")


@dataclass(frozen=True)
class EquiangularSpec:
    """Dimension and common angle with the derived inverse scalars.

    ``h`` is the off-diagonal of the inverse Gram pattern and ``k`` its scale:
    ``G_alpha^{-1} = k G_h``.
    """

    n: int
    theta: float
    alpha: float

    @property
    def h(self):
        return -self.alpha / (1.0 + (self.n - 2) * self.alpha)

    @property
    def k(self):
        a, n = self.alpha, self.n
        return (1.0 + (n - 2) * a) / ((1.0 - a) * (1.0 + (n - 1) * a))


def make_spec(n, theta):
    if int(n) != n or n < 2:
        raise InputError(f"n must be an integer >= 2, got {n!r}")
    alpha = math.cos(theta)
    check_alpha(int(n), alpha)
    return EquiangularSpec(int(n), float(theta), alpha)


def spec_from_alpha(n, alpha):
    """Same as :func:`make_spec` but keeps ``alpha`` exact instead of re-deriving it."""
    if int(n) != n or n < 2:
        raise InputError(f"n must be an integer >= 2, got {n!r}")
    alpha = float(alpha)
    check_alpha(int(n), alpha)
    return EquiangularSpec(int(n), math.acos(alpha), alpha)


@dataclass(frozen=True)
class GramStructure:
    """The n x n matrix with ``diag`` on the diagonal and ``offdiag`` elsewhere.

    Never densified implicitly; call :meth:`dense` when a full array is needed.
    """

    n: int
    diag: float
    offdiag: float

    def dense(self):
        m = np.full((self.n, self.n), float(self.offdiag))
        np.fill_diagonal(m, self.diag)
        return m

    def matvec(self, x):
        x = np.asarray(x)
        return (self.diag - self.offdiag) * x + self.offdiag * np.sum(x, axis=0)

    def scaled(self, c):
        return GramStructure(self.n, c * self.diag, c * self.offdiag)

    @property
    def is_singular(self):
        small, large = gram_eigenvalues(self)
        return small == 0.0 or large == 0.0


class GramEigenvalues(NamedTuple):
    small: float  # multiplicity n - 1
    large: float  # eigenvector e


class SqrtPair(NamedTuple):
    s: float
    t: float

    def structure(self, n):
        return GramStructure(n, self.s, self.t)


def gram_matrix(spec):
    return GramStructure(spec.n, 1.0, spec.alpha)


def seidel_matrix(n):
    """Zero diagonal, ones elsewhere: ``G_alpha = I + alpha * seidel_matrix(n)``."""
    return GramStructure(n, 0.0, 1.0)


def gram_eigenvalues(g):
    return GramEigenvalues(g.diag - g.offdiag, g.diag + (g.n - 1) * g.offdiag)


def gram_inverse(spec):
    """``k G_h``, the inverse of ``G_alpha``."""
    k = spec.k
    return GramStructure(spec.n, k, k * spec.h)


def gram_sqrt(spec):
    """Principal square root ``G(s, t)`` of ``G_alpha``.

    Defined here for ``0 <= alpha < 1``; alpha = 0 gives the identity.
    """
    a, n = spec.alpha, spec.n
    if not 0.0 <= a < 1.0:
        raise AlphaOutOfRange(f"square root pair needs alpha in [0, 1), got {a!r}")
    big = math.sqrt(1.0 + (n - 1) * a)
    small = math.sqrt(1.0 - a)
    return SqrtPair((big + (n - 1) * small) / n, (big - small) / n)


# ---------------------------------------------------------------------------
# equiangular square matrices

def gram_deviation(s_mat, alpha):
    """max |S^T S - G_alpha|."""
    g = s_mat.T @ s_mat
    target = np.full_like(g, alpha)
    np.fill_diagonal(target, 1.0)
    return max_abs(g - target)


def validate_equiangular(s_mat, spec, tol=None):
    s_mat = as_matrix(s_mat, "S")
    if s_mat.shape != (spec.n, spec.n):
        raise NotEquiangular(f"expected a {spec.n} x {spec.n} matrix, got {s_mat.shape}")
    tol = validation_tolerance() if tol is None else tol
    dev = gram_deviation(s_mat, spec.alpha)
    if dev > tol:
        raise NotEquiangular(f"max |S^T S - G_alpha| = {dev:.3e} exceeds {tol:.1e}")
    return s_mat


def equiangular_inverse(s_mat, spec, validate=True, tol=None):
    """Inverse of an equiangular square matrix as ``k G_h S^T``.

    Entry ``(i, j)`` is ``k (s_ji + h * sum_{m != i} s_jm)``; the row sums of
    ``S`` are formed once, so the whole inverse costs O(n^2).
    """
    s_mat = validate_equiangular(s_mat, spec, tol) if validate else as_matrix(s_mat, "S")
    k, h = spec.k, spec.h
    row_sums = s_mat.sum(axis=1)
    return k * ((1.0 - h) * s_mat.T + h * row_sums[np.newaxis, :])


def equiangular_solve(s_mat, b, spec, validate=True, tol=None):
    """Solve ``S x = b`` in O(n^2) without forming any factorization."""
    s_mat = validate_equiangular(s_mat, spec, tol) if validate else as_matrix(s_mat, "S")
    b = as_vector(b, "b")
    if b.shape[0] != spec.n:
        raise InputError(f"b has length {b.shape[0]}, expected {spec.n}")
    y = s_mat.T @ b
    return spec.k * ((1.0 - spec.h) * y + spec.h * y.sum())


class RowGeometry(NamedTuple):
    row_norm: float
    row_cosine: float


def inverse_row_geometry(s_mat, spec, tol=1e-8):
    """Measured common row norm and row cosine of ``S^{-1}``.

    Expected values are ``sqrt(k)`` and ``h``.  Raises :class:`NotEquiangular`
    if the rows of the inverse do not share a norm and a cosine within ``tol``,
    or if ``k^{-1/2} S^{-T}`` fails to be column-equiangular with cosine ``h``.
    """
    inv = equiangular_inverse(s_mat, spec)
    norms = np.linalg.norm(inv, axis=1)
    unit = inv / norms[:, None]
    cos = unit @ unit.T
    off = cos[~np.eye(spec.n, dtype=bool)]
    if np.ptp(norms) > tol or (off.size and np.ptp(off) > tol):
        raise NotEquiangular("rows of the inverse are not equiangular")
    hat = inv.T / math.sqrt(spec.k)
    if gram_deviation(hat, spec.h) > max(tol, 10 * validation_tolerance()):
        raise NotEquiangular("k^-1/2 S^-T is not column-equiangular with cosine h")
    return RowGeometry(float(norms.mean()), float(off.mean()) if off.size else 0.0)


def eigenvalue_modulus(x, spec, tol=1e-8):
    """``|lambda|`` of an eigenpair of any ``S`` in ``S_alpha`` from its unit eigenvector.

    Complex eigenvectors are allowed; ``|e^T x|`` is then a complex modulus.
    """
    x = np.asarray(x)
    if x.ndim != 1 or x.shape[0] != spec.n:
        raise InputError(f"eigenvector must have length {spec.n}")
    nrm = np.linalg.norm(x)
    if abs(nrm - 1.0) > tol:
        raise InputError(f"eigenvector must have unit norm, got {nrm!r}")
    ex = abs(np.sum(x))
    return math.sqrt(spec.alpha * ex * ex + 1.0 - spec.alpha)


def eigenvalue_bounds(spec):
    return math.sqrt(1.0 - spec.alpha), math.sqrt(1.0 + (spec.n - 1) * spec.alpha)


def condition_number(spec):
    """2-norm condition number shared by every matrix in ``S_alpha``."""
    a = spec.alpha
    return math.sqrt(1.0 + spec.n * a / (1.0 - a))


def sum_norm(k_count, alpha):
    """Norm of the sum of ``k_count`` unit vectors with pairwise cosine ``alpha``."""
    if int(k_count) != k_count or k_count < 1:
        raise InputError("k_count must be a positive integer")
    k_count = int(k_count)
    if alpha >= 1.0 or (k_count > 1 and alpha < -1.0 / (k_count - 1)):
        raise AngleInfeasible(f"alpha = {alpha!r} infeasible for {k_count} vectors")
    return math.sqrt(max(k_count * (1.0 + (k_count - 1) * alpha), 0.0))
