"""Sequential construction of unit equiangular vectors.

Each step takes the next input vector ``v``, removes its component in the
span of the vectors built so far, and tilts the unit residual ``q`` towards
the normalized running sum ``s_hat``::

    v_hat = sign * q + cot(phi) * s_hat,    s_new = v_hat / ||v_hat||

The span is represented by the mutually orthogonal vectors
``B_i = s_1 + ... + s_i - i s_{i+1}`` together with the running sum, so at
``theta = pi/2`` the step is an orthogonalization that never projects on the
``s_i`` themselves.  ``sign`` picks one of the two admissible sides at each
step, which is where the ``2**(n-1)`` distinct results come from.
"""
import math
from dataclasses import dataclass, field, replace
from typing import Optional, Tuple

import numpy as np

from .errors import AlphaOutOfRange, AngleInfeasible, InputError, LinearlyDependent
from .gram import check_alpha
from .linalg import as_matrix, as_vector
from .tolerances import ANGLE_TOL, DEPENDENCE_TOL


@dataclass(frozen=True)
class SignPolicy:
    """One sign per step k >= 2 (``+1`` or ``-1``); ``choices=None`` means all ``+1``."""

    choices: Optional[Tuple[int, ...]] = None

    def __post_init__(self):
        if self.choices is not None:
            ch = tuple(int(c) for c in self.choices)
            if any(c not in (1, -1) for c in ch):
                raise InputError("sign choices must be +1 or -1")
            object.__setattr__(self, "choices", ch)

    def sign(self, step):
        """Sign used when producing vector number ``step`` (0-based, step >= 1)."""
        if self.choices is None:
            return 1
        return self.choices[step - 1]

    def check_length(self, n):
        if self.choices is not None and len(self.choices) != max(n - 1, 0):
            raise InputError(f"sign policy has {len(self.choices)} choices, expected {max(n - 1, 0)}")

    @classmethod
    def from_index(cls, index, n):
        """Policy number ``index`` in ``range(2**(n-1))``; bit i set means a minus at step i+2."""
        return cls(tuple(-1 if (index >> i) & 1 else 1 for i in range(n - 1)))

    @property
    def label(self):
        if self.choices is None:
            return "default"
        return "".join("+" if c > 0 else "-" for c in self.choices)


DEFAULT_POLICY = SignPolicy()


def standard_basis(n, alpha):
    """Columns ``(x e + (1 - x) e_i) / sqrt(1 + (n-1) x^2)`` with pairwise cosine ``alpha``.

    ``x`` is the root in (0, 1) of ``(alpha (n-1) - (n-2)) x^2 - 2x + alpha = 0``,
    written as ``alpha / (1 + sqrt((1-alpha)(1+(n-1)alpha)))`` which stays
    finite where the textbook quotient has the 0/0 at ``(1-alpha)(n-1) = 1``.
    """
    if int(n) != n or n < 1:
        raise InputError("n must be a positive integer")
    if not 0.0 < alpha < 1.0:
        raise AlphaOutOfRange(f"standard basis needs alpha in (0, 1), got {alpha!r}")
    n = int(n)
    x = alpha / (1.0 + math.sqrt((1.0 - alpha) * (1.0 + (n - 1) * alpha)))
    s = x * np.ones((n, n)) + (1.0 - x) * np.eye(n)
    return s / math.sqrt(1.0 + (n - 1) * x * x)


def cot_phi(k, theta=None, *, alpha=None):
    """Magnitude of ``cot(phi)``, phi the angle between a new vector and the sum of ``k`` old ones.

    Equals ``sqrt(k / ((sec(theta) - 1)(sec(theta) + k)))``; evaluated through
    ``alpha = cos(theta)`` so ``theta = pi/2`` gives 0 rather than inf * 0.
    Obtuse angles return the same magnitude; the caller applies the minus.
    """
    if alpha is None:
        alpha = math.cos(theta)
    if k < 1:
        raise InputError("k must be >= 1")
    if alpha >= 1.0 - ANGLE_TOL:
        raise AngleInfeasible("cos(theta) must be below 1")
    den = (1.0 - alpha) * (1.0 + k * alpha)
    if den <= ANGLE_TOL:
        raise AngleInfeasible(
            f"cos(theta) = {alpha!r} is not above -1/{k}; no vector can join {k} equiangular vectors")
    return abs(alpha) * math.sqrt(k / den)


def trihedral_cosine(phi, eta):
    """cos(theta) of a trihedral angle whose faces at phi and eta are perpendicular."""
    return math.cos(phi) * math.cos(eta)


@dataclass(frozen=True)
class EVState:
    """Vectors produced so far and the orthogonal basis of their span.

    ``coef`` holds, per completed vector, the coefficients that rebuild the
    matching input column from ``s_1..s_k`` (one column of ``R``).
    """

    alpha: float
    s_cols: Tuple[np.ndarray, ...] = ()
    running_sum: Optional[np.ndarray] = None
    b_basis: Tuple[np.ndarray, ...] = ()
    coef: Tuple[np.ndarray, ...] = ()
    last_cot_phi: float = 0.0
    last_vhat_norm: float = 0.0
    cot_phis: Tuple[float, ...] = ()
    vhat_norms: Tuple[float, ...] = ()

    @property
    def k(self):
        return len(self.s_cols)

    def matrix(self):
        return np.column_stack(self.s_cols)

    def r_matrix(self):
        k = self.k
        r = np.zeros((k, k))
        for j, c in enumerate(self.coef):
            r[:j + 1, j] = c
        return r


def initial_state(theta=None, *, alpha=None):
    if alpha is None:
        alpha = math.cos(theta)
    return EVState(alpha=float(alpha))


def ev_step(state, v, sign=1, *, column=None, projection="modified", dependence_tol=DEPENDENCE_TOL):
    """Append one equiangular vector built from input ``v``; returns a new state.

    ``projection="classical"`` computes every projection coefficient from the
    original ``v`` (batch Gram-Schmidt order) instead of the running residual.
    """
    v = as_vector(v, "v")
    col = state.k if column is None else column
    vnorm = np.linalg.norm(v)
    alpha = state.alpha
    if sign not in (1, -1):
        raise InputError("sign must be +1 or -1")

    if state.k == 0:
        if vnorm == 0.0:
            raise LinearlyDependent(col, f"column {col} is zero")
        s1 = v / vnorm
        return replace(state, s_cols=(s1,), running_sum=s1.copy(), coef=(np.array([vnorm]),),
                       last_vhat_norm=vnorm, vhat_norms=(vnorm,), cot_phis=(0.0,))

    k = state.k
    if v.shape != state.s_cols[0].shape:
        raise InputError("v has the wrong length")
    cot = cot_phi(k, alpha=alpha)
    if alpha < 0:
        cot = -cot

    total = state.running_sum
    tnorm = np.linalg.norm(total)
    s_hat = total / tnorm
    # residual against span{s_hat, B_1..B_{k-1}} and its coordinates in the s basis
    coef = np.zeros(k)
    w = v.copy()
    src = v if projection == "classical" else None
    c = (w @ s_hat) if src is None else (src @ s_hat)
    w -= c * s_hat
    coef += c / tnorm
    for i, b in enumerate(state.b_basis):
        c = ((w @ b) if src is None else (src @ b)) / (b @ b)
        w -= c * b
        coef[:i + 1] += c
        coef[i + 1] -= c * (i + 1)
    wnorm = np.linalg.norm(w)
    if wnorm <= dependence_tol * vnorm or vnorm == 0.0:
        raise LinearlyDependent(col)
    q = w / wnorm
    v_hat = sign * q + cot * s_hat
    vhat_norm = np.linalg.norm(v_hat)
    s_new = v_hat / vhat_norm
    # v = p + wnorm * q  and  q = sign * (vhat_norm * s_new - cot * s_hat)
    coef -= sign * wnorm * cot / tnorm
    coef = np.append(coef, sign * wnorm * vhat_norm)
    b_new = total - k * s_new
    return replace(
        state,
        s_cols=state.s_cols + (s_new,),
        running_sum=total + s_new,
        b_basis=state.b_basis + (b_new,),
        coef=state.coef + (coef,),
        last_cot_phi=cot,
        last_vhat_norm=wnorm * vhat_norm,
        cot_phis=state.cot_phis + (cot,),
        vhat_norms=state.vhat_norms + (wnorm * vhat_norm,),
    )


@dataclass(frozen=True)
class GenerationDiagnostics:
    r: np.ndarray
    cot_phis: Tuple[float, ...]
    vhat_norms: Tuple[float, ...]
    b_basis: Tuple[np.ndarray, ...]
    policy: SignPolicy = field(default=DEFAULT_POLICY)


def generate(v_cols, theta=None, policy=None, *, alpha=None, projection="modified",
             dependence_tol=DEPENDENCE_TOL):
    """Turn the columns of ``v_cols`` into unit vectors with pairwise angle ``theta``.

    Parameters
    ----------
    v_cols : array_like, shape (m, n)
        Linearly independent columns, ``n <= m``.
    theta : float
        Common angle in radians.  Obtuse angles are accepted down to
        ``cos(theta) > -1/(n-1)``.  Pass ``alpha=cos(theta)`` instead to avoid
        the round trip through ``acos``.
    policy : SignPolicy, optional
        Side choice per step; default all ``+1``.

    Returns
    -------
    s : ndarray, shape (m, n)
        Equiangular matrix with ``span(s[:, :k]) == span(v_cols[:, :k])``.
    diagnostics : GenerationDiagnostics
        ``r`` is upper triangular with ``v_cols = s @ r``.
    """
    v = as_matrix(v_cols, "V")
    m, n = v.shape
    if n > m:
        raise LinearlyDependent(m, f"{n} columns in dimension {m} cannot be independent")
    if alpha is None:
        if theta is None:
            raise InputError("give theta or alpha")
        alpha = math.cos(theta)
    check_alpha(n, alpha)
    policy = DEFAULT_POLICY if policy is None else policy
    policy.check_length(n)
    state = initial_state(alpha=alpha)
    for j in range(n):
        sign = policy.sign(j) if j else 1
        state = ev_step(state, v[:, j], sign, projection=projection, dependence_tol=dependence_tol)
    diag = GenerationDiagnostics(state.r_matrix(), state.cot_phis, state.vhat_norms,
                                 state.b_basis, policy)
    return state.matrix(), diag


def b_basis_of(s_cols):
    """``[s_1 - s_2, s_1 + s_2 - 2 s_3, ...]`` for the columns of ``s_cols``."""
    s = as_matrix(s_cols, "S")
    out = []
    acc = np.zeros(s.shape[0])
    for i in range(s.shape[1] - 1):
        acc = acc + s[:, i]
        out.append(acc - (i + 1) * s[:, i + 1])
    return out


def gs_reference(v_cols, variant="modified", dependence_tol=DEPENDENCE_TOL):
    """Thin QR by classical or modified Gram-Schmidt; returns ``(q, r)``."""
    v = as_matrix(v_cols, "V")
    m, n = v.shape
    if variant not in ("classical", "modified"):
        raise InputError(f"unknown variant {variant!r}")
    q = np.zeros((m, n))
    r = np.zeros((n, n))
    for j in range(n):
        w = v[:, j].copy()
        vn = np.linalg.norm(w)
        for i in range(j):
            r[i, j] = q[:, i] @ (w if variant == "modified" else v[:, j])
            w -= r[i, j] * q[:, i]
        wn = np.linalg.norm(w)
        if vn == 0.0 or wn <= dependence_tol * vn:
            raise LinearlyDependent(j)
        r[j, j] = wn
        q[:, j] = w / wn
    return q, r


def classical_gs(v_cols):
    return gs_reference(v_cols, "classical")


def modified_gs(v_cols):
    return gs_reference(v_cols, "modified")
