"""Spectral factorizations built on equiangular matrices.

* ``A = S T S^{-1}`` with ``T`` block upper triangular (from the real Schur form)
* ``A = r S S^T`` for symmetric ``A`` with a two-point spectrum
* ``A = S D S^T`` with ``D`` real diagonal, which exists only when the
  polynomial ``g`` built from the eigenvalues of ``A`` and ``alpha`` has all
  real roots
"""
import logging
import math
from dataclasses import dataclass
from math import comb
from typing import NamedTuple

import numpy as np

from .errors import (
    AngleInfeasible, DegenerateAngle, EigsNotDistinct, EquiangularError, HypothesisViolated,
    InputError, RootsNotReal, SpectrumMismatch, WrongSpectrumShape, ZeroEigenvalue,
)
from .gram import check_alpha, equiangular_inverse, gram_sqrt, spec_from_alpha
from .generator import SignPolicy
from .linalg import (
    ComplexRootSet, as_matrix, invert_dense, max_abs, polynomial_roots,
    quasi_triangular_eigenvalues, real_schur, symmetric_eig,
)
from .sr import MAX_ENUMERATION_COLUMNS, sr_factorize
from .tolerances import CLUSTER_TOL, REALNESS_TOL

log = logging.getLogger(__name__)


def _inverse(s_mat, alpha):
    n = s_mat.shape[0]
    if n == 1:
        return 1.0 / s_mat
    return equiangular_inverse(s_mat, spec_from_alpha(n, alpha), validate=False)


def _clusters(w, tol=CLUSTER_TOL):
    """Group sorted eigenvalues whose gaps are below ``tol * max|w|``; (mean, count) pairs."""
    w = np.sort(np.asarray(w, dtype=float))
    scale = max(float(np.max(np.abs(w))), np.finfo(float).tiny)
    groups = [[w[0]]]
    for x in w[1:]:
        if x - groups[-1][-1] > tol * scale:
            groups.append([x])
        else:
            groups[-1].append(x)
    return [(float(np.mean(g)), len(g)) for g in groups]


# ---------------------------------------------------------------------------
# block triangular similarity

@dataclass(frozen=True)
class BlockTriangularSim:
    """``A = S T S^{-1}`` with ``S`` equiangular and ``T`` quasi-upper-triangular."""

    s: np.ndarray
    t: np.ndarray
    alpha: float

    def eigenvalues(self):
        return quasi_triangular_eigenvalues(self.t)

    def reconstruct(self):
        return self.s @ self.t @ _inverse(self.s, self.alpha)


def equiangular_similarity(a, theta=None, *, alpha=None):
    """Equiangular ``S`` with ``S^{-1} A S`` block upper triangular.

    The real Schur vectors ``Q`` are SR-factored, ``Q = S R``, and the Schur
    factor is carried along as ``T = R T_0 R^{-1}``.
    """
    a = as_matrix(a, "A")
    if a.shape[0] != a.shape[1]:
        raise InputError("A must be square")
    if alpha is None:
        alpha = math.cos(theta)
    sf = real_schur(a)
    f = sr_factorize(sf.q, alpha=alpha)
    r_inv = np.triu(invert_dense(f.r))
    t = f.r @ sf.t @ r_inv
    return BlockTriangularSim(f.s, t, float(alpha))


# ---------------------------------------------------------------------------
# r S S^T

class TwoEigenFactors(NamedTuple):
    r: float
    s: np.ndarray
    alpha_used: float


def two_eigen_parameters(beta, gamma, n):
    """``(r, alpha)`` with ``r (1 - alpha) = beta`` and ``r (1 + (n-1) alpha) = gamma``.

    Works with :class:`fractions.Fraction` arguments for exact results.
    """
    r = (gamma - beta + n * beta) / n
    alpha = (gamma - beta) / (gamma - beta + n * beta)
    return r, alpha


def _householder_to_ones(n):
    """Symmetric orthogonal ``H`` with ``H e_n = e / sqrt(n)``."""
    target = np.full(n, 1.0 / math.sqrt(n))
    v = target.copy()
    v[-1] -= 1.0
    nv = v @ v
    if nv == 0.0:
        return np.eye(n)
    return np.eye(n) - 2.0 * np.outer(v, v) / nv


def _factor_positive(q, w, beta_first):
    """Core of :func:`factor_rSSt` for positive spectra with ``beta < gamma``.

    ``q, w`` is the eigendecomposition with the multiplicity-one eigenvalue
    ``gamma`` at the index given by ``beta_first`` (True: gamma is last).
    """
    n = len(w)
    order = np.arange(n) if beta_first else np.r_[1:n, 0]
    q = q[:, order]
    w = w[order]
    beta = float(np.mean(w[:-1]))
    gamma = float(w[-1])
    r, alpha = two_eigen_parameters(beta, gamma, n)
    spec = spec_from_alpha(n, alpha)
    g = gram_sqrt(spec).structure(n).dense()
    s = q @ _householder_to_ones(n) @ g
    return r, alpha, s


def factor_rSSt(a):
    """Write a symmetric matrix with eigenvalues ``beta`` (n-1 times) and ``gamma`` as ``r S S^T``.

    For ``beta < gamma`` (after flipping the sign of a negative spectrum) ``r``
    and ``alpha`` come directly from the two eigenvalues.  For ``beta > gamma``
    the inverse, whose ordering is reversed, is factored as ``r' S' S'^T`` and
    ``A = (k'/r') S S^T`` with ``S = k'^{-1/2} S'^{-T}`` and cosine ``h'``.
    """
    a = as_matrix(a, "A")
    n = a.shape[0]
    if n != a.shape[1] or n < 2:
        raise InputError("A must be square with n >= 2")
    q, w = symmetric_eig(a)
    groups = _clusters(w)
    if any(abs(mu) <= CLUSTER_TOL * max(abs(w[0]), abs(w[-1])) for mu, _ in groups):
        raise ZeroEigenvalue("A has a zero eigenvalue")
    if len(groups) != 2:
        raise WrongSpectrumShape(f"expected two distinct eigenvalues, found {len(groups)}")
    (lo, m_lo), (hi, m_hi) = groups
    if lo * hi < 0:
        raise WrongSpectrumShape("eigenvalues of opposite sign cannot form r S S^T")
    if {m_lo, m_hi} != {n - 1, 1}:
        raise WrongSpectrumShape(f"multiplicities {m_lo}, {m_hi}; need n-1 and 1")

    sign = 1.0
    if hi < 0:
        sign = -1.0
        q, w = q[:, ::-1], -w[::-1]
        (lo, m_lo), (hi, m_hi) = (-hi, m_hi), (-lo, m_lo)
    # n = 2 has both multiplicities 1; take beta as the smaller one
    if m_lo == n - 1:
        r, alpha, s = _factor_positive(q, w, beta_first=True)
    else:
        # beta > gamma: work on the inverse, where 1/gamma is the larger value
        winv = 1.0 / w
        order = np.argsort(winv)
        r_p, alpha_p, s_p = _factor_positive(q[:, order], winv[order], beta_first=True)
        spec_p = spec_from_alpha(n, alpha_p)
        s = equiangular_inverse(s_p, spec_p, validate=False).T / math.sqrt(spec_p.k)
        r = spec_p.k / r_p
        alpha = spec_p.h
    return TwoEigenFactors(sign * r, s, alpha)


# ---------------------------------------------------------------------------
# S D S^T

def elementary_symmetric(values):
    """``[e_0, e_1, ..., e_n]`` of the given values."""
    e = [1.0] + [0.0] * len(values)
    for x in values:
        for j in range(len(e) - 1, 0, -1):
            e[j] = e[j] + x * e[j - 1]
    return e


def _weight(j, alpha):
    # (1 - alpha)^(j-1) (1 + (j-1) alpha): the factor linking e_j(d) and e_j(lambda)
    return (1.0 - alpha) ** (j - 1) * (1.0 + (j - 1) * alpha)


def sds_coefficients(eigs, alpha):
    """``c_1..c_n`` with ``c_j = e_j(lambda) / ((1-alpha)^(j-1) (1 + (j-1) alpha))``."""
    lam = list(np.asarray(eigs, dtype=float))
    if not 0.0 <= alpha < 1.0:
        raise InputError(f"alpha must lie in [0, 1), got {alpha!r}")
    e = elementary_symmetric(lam)
    return np.array([e[j] / _weight(j, alpha) for j in range(1, len(lam) + 1)])


def g_coefficients(c):
    """Monic descending coefficients of ``x^n - c_1 x^(n-1) + c_2 x^(n-2) - ...``."""
    c = np.asarray(c, dtype=float)
    signs = (-1.0) ** np.arange(1, len(c) + 1)
    return np.concatenate([[1.0], signs * c])


def dg_charpoly(d, alpha):
    """Coefficients of ``det(x I - D G_alpha)`` from the elementary symmetric functions of ``d``."""
    e = elementary_symmetric(list(np.asarray(d, dtype=float)))
    n = len(e) - 1
    return np.array([1.0] + [(-1.0) ** j * e[j] * _weight(j, alpha) for j in range(1, n + 1)])


@dataclass(frozen=True)
class SDSFactors:
    s: np.ndarray
    d: np.ndarray
    alpha: float
    c: np.ndarray
    roots: ComplexRootSet

    def reconstruct(self):
        return (self.s * self.d) @ self.s.T


def _check_sds_alpha(alpha):
    if not 0.0 < alpha < 1.0:
        raise InputError(f"alpha must lie in (0, 1), got {alpha!r}")


def sds_factorize(a, alpha, realness_tol=REALNESS_TOL, match_tol=1e-6):
    """``A = S D S^T`` with ``S`` in ``S_alpha`` and real diagonal ``D``.

    The diagonal of ``D`` is the root set of ``g``; when it is real,
    ``G(s,t) D G(s,t) = P Lambda P^T`` is diagonalized and
    ``S = Q P^T G(s,t)`` where ``A = Q Lambda Q^T``.

    Raises
    ------
    EigsNotDistinct
    RootsNotReal
        No real ``D`` exists at this ``alpha``.
    SpectrumMismatch
        ``G D G`` does not reproduce the spectrum of ``A`` (internal check).
    """
    a = as_matrix(a, "A")
    n = a.shape[0]
    if n != a.shape[1]:
        raise InputError("A must be square")
    _check_sds_alpha(alpha)
    q, lam = symmetric_eig(a)
    if len(_clusters(lam)) != n:
        raise EigsNotDistinct("A must have distinct eigenvalues")
    c = sds_coefficients(lam, alpha)
    roots = polynomial_roots(g_coefficients(c))
    if not roots.all_real(realness_tol):
        raise RootsNotReal(f"g has non-real roots at alpha = {alpha!r}", roots=roots)
    d = roots.real_sorted()
    g = gram_sqrt(spec_from_alpha(n, alpha)).structure(n).dense() if n > 1 else np.ones((1, 1))
    p, lam2 = symmetric_eig((g * d) @ g)
    scale = max(1.0, float(np.max(np.abs(lam))))
    if max_abs(lam2 - lam) > match_tol * scale:
        raise SpectrumMismatch(f"G D G spectrum deviates by {max_abs(lam2 - lam):.2e}")
    s = q @ p.T @ g
    return SDSFactors(s, d, float(alpha), c, roots)


def _roots_real(lam, alpha, realness_tol):
    roots = polynomial_roots(g_coefficients(sds_coefficients(lam, alpha)))
    return roots.all_real(realness_tol)


class FeasibilityScan(NamedTuple):
    threshold: float
    bracket: tuple  # (last feasible grid point, first infeasible grid point)
    monotone: bool


def feasibility_scan(a, tol=1e-6, step=1e-3, realness_tol=REALNESS_TOL):
    """Grid scan of ``alpha`` in (0, 1) followed by bisection at the first real/complex transition."""
    a = as_matrix(a, "A")
    _, lam = symmetric_eig(a)
    if len(_clusters(lam)) != len(lam):
        raise EigsNotDistinct("A must have distinct eigenvalues")
    grid = np.arange(step, 1.0, step)
    flags = [_roots_real(lam, al, realness_tol) for al in grid]
    if not flags[0]:
        return FeasibilityScan(0.0, (0.0, float(grid[0])), all(not f for f in flags))
    try:
        first_bad = flags.index(False)
    except ValueError:
        return FeasibilityScan(float(grid[-1]), (float(grid[-1]), 1.0), True)
    monotone = not any(flags[first_bad:])
    if not monotone:
        log.warning("feasible alphas resume above %.3f; reporting the first transition only",
                    grid[first_bad])
    lo, hi = float(grid[first_bad - 1]), float(grid[first_bad])
    bracket = (lo, hi)
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if _roots_real(lam, mid, realness_tol):
            lo = mid
        else:
            hi = mid
    return FeasibilityScan(lo, bracket, monotone)


def alpha_feasibility_threshold(a, tol=1e-6):
    """Largest ``alpha`` (to ``tol``) below which ``g`` keeps all roots real; 0 if none."""
    return feasibility_scan(a, tol).threshold


def g_poly(n, r, alpha):
    """Coefficients of ``g_n`` for the scalar spectrum ``r I``."""
    if r == 0:
        raise InputError("r must be nonzero")
    if not 0.0 <= alpha < 1.0:
        raise InputError(f"alpha must lie in [0, 1), got {alpha!r}")
    return g_coefficients(sds_coefficients([r] * int(n), alpha))


def arithmetic_g_poly(n, d, kind="reciprocal"):
    """``g_n`` written through ``d = alpha / (1 - alpha)``.

    ``kind="reciprocal"``: ``c_k = C(n,k) / (1 + d k)`` (the case ``r = 1 - alpha``).
    ``kind="power"``: ``c_k = C(n,k) (1 + d k)^(k-1)``.
    Both reduce to ``(x - 1)^n`` at ``d = 0``.
    """
    if d < 0:
        raise InputError("d must be nonnegative")
    if kind == "reciprocal":
        c = [comb(n, k) / (1.0 + d * k) for k in range(1, n + 1)]
    elif kind == "power":
        c = [comb(n, k) * (1.0 + d * k) ** (k - 1) for k in range(1, n + 1)]
    else:
        raise InputError(f"unknown kind {kind!r}")
    return g_coefficients(c)


# ---------------------------------------------------------------------------
# equiangular eigenvectors

def equiangular_eigvecs(a, b, tol=1e-6):
    """Equiangular eigenvector matrix of ``A`` when ``A = B A^T B^{-1}`` and ``B = r S S^T``.

    Every hypothesis is checked and reported as :class:`HypothesisViolated`
    rather than worked around.  ``B`` proportional to the identity is the
    orthogonal case (alpha = 0).  The Schur vectors of ``A`` are SR-factored
    under each sign policy in turn and the first ``S`` with ``B = r S S^T``
    is kept.

    Returns
    -------
    s : ndarray
    eigenvalues : ndarray
        Diagonal of ``S^{-1} A S``.
    """
    a = as_matrix(a, "A")
    b = as_matrix(b, "B")
    n = a.shape[0]
    if a.shape != (n, n) or b.shape != (n, n):
        raise HypothesisViolated("A and B must be square of the same size")
    if n > MAX_ENUMERATION_COLUMNS:
        raise HypothesisViolated(f"n <= {MAX_ENUMERATION_COLUMNS} required")
    scale_a = max(1.0, max_abs(a))
    scale_b = max(1.0, max_abs(b))
    if max_abs(b - b.T) > tol * scale_b:
        raise HypothesisViolated("B is not symmetric")
    try:
        b_inv = invert_dense(b)
    except EquiangularError as exc:
        raise HypothesisViolated(f"B is singular: {exc}") from None
    if max_abs(a - b @ a.T @ b_inv) > tol * scale_a:
        raise HypothesisViolated("A is not similar to A^T through B")

    _, wb = symmetric_eig(b)
    groups = _clusters(wb)
    if len(groups) == 1:
        r, alpha = groups[0][0], 0.0
        if r == 0.0:
            raise HypothesisViolated("B is zero")
    elif len(groups) == 2 and n > 1:
        (lo, m_lo), (hi, m_hi) = groups
        if m_lo == n - 1 and m_hi == 1:
            beta, gamma = lo, hi
        elif m_hi == n - 1 and m_lo == 1 and lo > 0:
            # gamma < beta: use B^{-1}, whose ordering is reversed
            beta, gamma = 1.0 / hi, 1.0 / lo
            b = b_inv
        else:
            raise HypothesisViolated("B needs eigenvalues beta (n-1 times) < gamma")
        if beta == 0.0:
            raise HypothesisViolated("B has a zero eigenvalue")
        r, alpha = two_eigen_parameters(beta, gamma, n)
        try:
            check_alpha(n, alpha)
        except (AngleInfeasible, DegenerateAngle) as exc:
            raise HypothesisViolated(str(exc)) from None
    else:
        raise HypothesisViolated("B needs exactly two distinct eigenvalues with multiplicities n-1 and 1")

    sf = real_schur(a)
    if any(size == 2 for _, size in sf.blocks()):
        raise HypothesisViolated("A has complex eigenvalues")
    scale_bb = max(1.0, max_abs(b))
    for idx in range(2 ** max(n - 1, 0)):
        f = sr_factorize(sf.q, alpha=alpha, policy=SignPolicy.from_index(idx, n))
        if max_abs(b - r * f.s @ f.s.T) <= tol * scale_bb:
            lam = _inverse(f.s, alpha) @ a @ f.s
            off = lam - np.diag(np.diag(lam))
            if max_abs(off) > tol * scale_a:
                raise HypothesisViolated("S^{-1} A S is not diagonal")
            return f.s, np.diag(lam).copy()
    raise HypothesisViolated("no SR factor of the Schur vectors satisfies B = r S S^T")
