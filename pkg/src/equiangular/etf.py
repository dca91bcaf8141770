"""Equiangular tight frames with ``m = n`` and ``m = n + 1`` vectors.

The simplex frame ``S_n`` (n x (n+1), cosine ``-1/n``) is built by the
recursion

    S_1 = [1, -1],   S_n = [[1, -(1/n) e^T], [0, rho S_{n-1}]],   rho = sqrt(n^2 - 1) / n

and is the reference every other construction is checked against.
"""
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import DimensionMismatch, InputError, LinearlyDependent, RankDeficient
from .generator import ev_step, initial_state
from .gram import equiangular_inverse, spec_from_alpha
from .linalg import as_matrix, as_vector
from .tolerances import DEPENDENCE_TOL


@dataclass(frozen=True)
class SimplexFrame:
    n: int
    s_n: np.ndarray
    rho: float
    frame_bound: float

    @property
    def m(self):
        return self.n + 1


def _simplex_matrix(n):
    s = np.array([[1.0, -1.0]])
    for j in range(2, n + 1):
        rho = math.sqrt(j * j - 1.0) / j
        top = np.concatenate([[1.0], np.full(j, -1.0 / j)])
        bottom = np.hstack([np.zeros((j - 1, 1)), rho * s])
        s = np.vstack([top, bottom])
    return s


def simplex_frame(n):
    """The ``n + 1`` unit vectors in R^n with pairwise cosine ``-1/n``."""
    if int(n) != n or n < 1:
        raise InputError(f"n must be a positive integer, got {n!r}")
    n = int(n)
    return SimplexFrame(n, _simplex_matrix(n), math.sqrt(n * n - 1.0) / n, (n + 1.0) / n)


def etf_coherence(n, m):
    """Welch bound ``sqrt((m - n) / (n (m - 1)))``; 0 for an orthonormal basis."""
    if int(n) != n or int(m) != m or n < 1 or m < n:
        raise InputError("need integers m >= n >= 1")
    if m == n:
        return 0.0
    return math.sqrt((m - n) / (n * (m - 1.0)))


class FrameCheckReport(NamedTuple):
    tightness_residual: float
    measured_coherence: float
    frame_bound_estimate: float


def verify_tight(s, unit_tol=1e-8):
    """Measure how far the columns of ``s`` are from a unit-norm tight frame.

    Returns ``max |S S^T - (m/n) I|``, the largest off-diagonal ``|s_i . s_j|``
    and the bound ``m/n``; nothing is asserted beyond unit columns.
    """
    s = as_matrix(s, "S")
    n, m = s.shape
    norms = np.linalg.norm(s, axis=0)
    bad = np.flatnonzero(np.abs(norms - 1.0) > unit_tol)
    if bad.size:
        raise InputError(f"column {bad[0]} has norm {norms[bad[0]]!r}, expected 1")
    bound = m / n
    resid = float(np.max(np.abs(s @ s.T - bound * np.eye(n))))
    g = np.abs(s.T @ s)
    np.fill_diagonal(g, 0.0)
    coh = float(g.max()) if m > 1 else 0.0
    return FrameCheckReport(resid, coh, bound)


def frame_sum_check(s, x):
    """``(sum_i <x, s_i>^2, (m/n) ||x||^2)``; equal for a unit tight frame."""
    s = as_matrix(s, "S")
    x = as_vector(x, "x")
    n, m = s.shape
    if x.shape[0] != n:
        raise DimensionMismatch(f"x has length {x.shape[0]}, frame vectors have length {n}")
    proj = s.T @ x
    return float(proj @ proj), float(m / n * (x @ x))


def extend_to_orthogonal(frame):
    """Append a constant row to ``S_n`` so the square result is ``sqrt((n+1)/n)`` times orthogonal.

    Column ``i`` and ``j`` of ``S_n`` meet at ``-1/n``, so the constant ``c``
    must satisfy ``c^2 = 1/n``.
    """
    n = frame.n
    c = 1.0 / math.sqrt(n)
    return np.vstack([frame.s_n, np.full((1, n + 1), c)])


def etf_from_vectors(v, dependence_tol=DEPENDENCE_TOL):
    """Simplex-type tight frame whose first ``n`` vectors span the same flags as ``v``.

    The generator runs at cosine ``-1/n`` over the columns of ``v``; a column
    that is dependent on the accepted ones is exchanged for the next one.
    The last vector is ``Q e_1`` with ``Q = [s_1 .. s_n] F^{-1}``, ``F`` the
    last ``n`` columns of the simplex frame.

    Raises
    ------
    RankDeficient
        Fewer than ``n`` independent columns.
    """
    v = as_matrix(v, "V")
    n, m = v.shape
    if n == 1:
        nz = np.flatnonzero(v[0] != 0.0)
        if nz.size == 0:
            raise RankDeficient("all columns are zero")
        s1 = np.sign(v[0, nz[0]])
        return np.array([[s1, -s1]])
    alpha = -1.0 / n
    state = initial_state(alpha=alpha)
    for j in range(m):
        if state.k == n:
            break
        try:
            state = ev_step(state, v[:, j], 1, column=j, dependence_tol=dependence_tol)
        except LinearlyDependent:
            continue
    if state.k < n:
        raise RankDeficient(f"only {state.k} of the {m} columns are independent; need {n}")
    s = state.matrix()
    f = simplex_frame(n).s_n[:, 1:]
    q = s @ equiangular_inverse(f, spec_from_alpha(n, alpha), validate=False)
    return np.column_stack([s, q[:, 0]])
