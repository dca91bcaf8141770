"""Dense real kernels: products, Jacobi eigensolver, real Schur form, roots.

Matrices are plain 2-D ``float64`` numpy arrays.  :func:`as_matrix` is the
single gate that checks shape and finiteness; everything else assumes it has
been applied.
"""
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DimensionMismatch, InputError, NonConvergence, SingularMatrix
from .tolerances import REALNESS_TOL, RECONSTRUCTION_TOL, SYMMETRY_TOL

__all__ = [
    "as_matrix", "as_vector", "matmul", "symmetric_eig", "SchurForm",
    "real_schur", "hessenberg", "balance", "ComplexRootSet",
    "polynomial_roots", "invert_dense", "max_abs", "diagonal_blocks",
    "quasi_triangular_eigenvalues",
]

_EPS = np.finfo(float).eps


def as_matrix(a, name="matrix"):
    """Return `a` as a finite 2-D float array with positive dimensions."""
    m = np.array(a, dtype=float)
    if m.ndim != 2:
        raise InputError(f"{name} must be 2-D, got {m.ndim}-D")
    if m.shape[0] == 0 or m.shape[1] == 0:
        raise InputError(f"{name} has an empty dimension {m.shape}")
    if not np.all(np.isfinite(m)):
        raise InputError(f"{name} contains NaN or Inf")
    return m


def as_vector(x, name="vector", dtype=float):
    v = np.array(x, dtype=dtype)
    if v.ndim != 1 or v.size == 0:
        raise InputError(f"{name} must be a non-empty 1-D array")
    if not np.all(np.isfinite(v)):
        raise InputError(f"{name} contains NaN or Inf")
    return v


def max_abs(a):
    return float(np.max(np.abs(a))) if np.size(a) else 0.0


def matmul(a, b):
    a = as_matrix(a, "a")
    b = as_matrix(b, "b")
    if a.shape[1] != b.shape[0]:
        raise DimensionMismatch(f"cannot multiply {a.shape} by {b.shape}")
    return a @ b


def _square(a, name="matrix"):
    a = as_matrix(a, name)
    if a.shape[0] != a.shape[1]:
        raise DimensionMismatch(f"{name} must be square, got {a.shape}")
    return a


# ---------------------------------------------------------------------------
# symmetric eigenproblem

def symmetric_eig(a, tol=SYMMETRY_TOL, max_sweeps=100):
    """Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.

    Parameters
    ----------
    a : array_like, shape (n, n)
        Symmetric input; ``max|a - a.T|`` must not exceed ``tol * max(1, max|a|)``.
    tol : float
        Symmetry tolerance.
    max_sweeps : int
        Cap on full sweeps before :class:`NonConvergence` is raised.

    Returns
    -------
    q : ndarray
        Orthogonal matrix whose columns are eigenvectors.
    w : ndarray
        Eigenvalues in ascending order, so that ``a = q @ diag(w) @ q.T``.
    """
    a = _square(a, "a")
    scale = max(1.0, max_abs(a))
    if max_abs(a - a.T) > tol * scale:
        raise InputError("matrix is not symmetric within tolerance")
    n = a.shape[0]
    a = 0.5 * (a + a.T)
    v = np.eye(n)
    fro = np.linalg.norm(a)
    if n == 1 or fro == 0.0:
        return v, np.diag(a).copy()

    for _ in range(max_sweeps):
        off = np.linalg.norm(a - np.diag(np.diag(a)))
        if off <= _EPS * fro:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                app, aqq = a[p, p], a[q, q]
                if abs(apq) < _EPS * 1e-3 * np.sqrt(abs(app * aqq)):
                    a[p, q] = a[q, p] = 0.0
                    continue
                tau = (aqq - app) / (2.0 * apq)
                t = np.sign(tau) / (abs(tau) + np.sqrt(1.0 + tau * tau)) if tau != 0 else 1.0
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                # A <- J^T A J with J the (p, q) plane rotation
                ap = a[:, p].copy()
                aq = a[:, q]
                a[:, p] = c * ap - s * aq
                a[:, q] = s * ap + c * aq
                ap = a[p, :].copy()
                aq = a[q, :]
                a[p, :] = c * ap - s * aq
                a[q, :] = s * ap + c * aq
                a[p, q] = a[q, p] = 0.0
                vp = v[:, p].copy()
                v[:, p] = c * vp - s * v[:, q]
                v[:, q] = s * vp + c * v[:, q]
    else:
        raise NonConvergence(f"Jacobi iteration did not converge in {max_sweeps} sweeps")

    w = np.diag(a).copy()
    order = np.argsort(w, kind="stable")
    return v[:, order], w[order]


# ---------------------------------------------------------------------------
# real Schur form

@dataclass(frozen=True)
class SchurForm:
    """``a = q @ t @ q.T`` with ``t`` quasi-upper-triangular."""

    q: np.ndarray
    t: np.ndarray

    def blocks(self):
        """Start index and size (1 or 2) of each diagonal block of ``t``."""
        return diagonal_blocks(self.t)

    def eigenvalues(self):
        """Eigenvalues read off the diagonal blocks, in block order."""
        return quasi_triangular_eigenvalues(self.t)


def diagonal_blocks(t):
    """(start, size) of the 1x1 and 2x2 diagonal blocks of a quasi-triangular ``t``."""
    n = t.shape[0]
    out = []
    i = 0
    while i < n:
        if i + 1 < n and t[i + 1, i] != 0.0:
            out.append((i, 2))
            i += 2
        else:
            out.append((i, 1))
            i += 1
    return out


def quasi_triangular_eigenvalues(t):
    vals = []
    for i, size in diagonal_blocks(t):
        if size == 1:
            vals.append(complex(t[i, i]))
        else:
            vals.extend(_block_eigenvalues(t[i:i + 2, i:i + 2]))
    return np.array(vals, dtype=complex)


def _block_eigenvalues(b):
    a, bb, c, d = b[0, 0], b[0, 1], b[1, 0], b[1, 1]
    p = 0.5 * (a - d)
    disc = p * p + bb * c
    mid = 0.5 * (a + d)
    if disc >= 0:
        r = np.sqrt(disc)
        return [complex(mid + r), complex(mid - r)]
    r = np.sqrt(-disc)
    return [complex(mid, r), complex(mid, -r)]


def _householder(x):
    """Unit v with (I - 2 v v^T) x = -sign(x0) ||x|| e1, or None if x is already e1-aligned."""
    if not np.any(x[1:]):
        return None
    alpha = np.linalg.norm(x)
    v = x.copy()
    v[0] += alpha if x[0] >= 0 else -alpha
    return v / np.linalg.norm(v)


def hessenberg(a):
    """Householder reduction ``a = q @ h @ q.T`` with ``h`` upper Hessenberg."""
    h = _square(a, "a").copy()
    n = h.shape[0]
    q = np.eye(n)
    for k in range(n - 2):
        v = _householder(h[k + 1:, k])
        if v is None:
            continue
        h[k + 1:, k:] -= 2.0 * np.outer(v, v @ h[k + 1:, k:])
        h[:, k + 1:] -= 2.0 * np.outer(h[:, k + 1:] @ v, v)
        q[:, k + 1:] -= 2.0 * np.outer(q[:, k + 1:] @ v, v)
        h[k + 2:, k] = 0.0
    return h, q


def _apply_left(h, v, rows, cols):
    h[rows, cols] -= 2.0 * np.outer(v, v @ h[rows, cols])


def _apply_right(m, v, rows, cols):
    m[rows, cols] -= 2.0 * np.outer(m[rows, cols] @ v, v)


def _standardize_block(h, z, i):
    """Split the 2x2 block at (i, i) into a triangle when its eigenvalues are real."""
    blk = h[i:i + 2, i:i + 2]
    a, b, c, d = blk[0, 0], blk[0, 1], blk[1, 0], blk[1, 1]
    p = 0.5 * (a - d)
    disc = p * p + b * c
    if disc < 0:
        return
    lam = 0.5 * (a + d) + np.copysign(np.sqrt(disc), p)
    # eigenvector for lam: pick the better conditioned of two candidates
    v1 = np.array([b, lam - a])
    v2 = np.array([lam - d, c])
    vec = v1 if np.linalg.norm(v1) >= np.linalg.norm(v2) else v2
    nv = np.linalg.norm(vec)
    if nv == 0.0:
        h[i + 1, i] = 0.0
        return
    cs, sn = vec / nv
    g = np.array([[cs, -sn], [sn, cs]])
    h[i:i + 2, :] = g.T @ h[i:i + 2, :]
    h[:, i:i + 2] = h[:, i:i + 2] @ g
    z[:, i:i + 2] = z[:, i:i + 2] @ g
    h[i + 1, i] = 0.0


def real_schur(a, max_iter_per_eig=60):
    """Real Schur form via Hessenberg reduction and Francis double-shift QR.

    Raises :class:`NonConvergence` if an eigenvalue fails to deflate within
    ``max_iter_per_eig`` sweeps.
    """
    h, z = hessenberg(a)
    n = h.shape[0]
    norm = max(max_abs(h), np.finfo(float).tiny)
    hi = n - 1
    its = 0
    while hi >= 1:
        # locate the start of the unreduced trailing block
        l = hi
        while l > 0:
            s = abs(h[l - 1, l - 1]) + abs(h[l, l])
            if s == 0.0:
                s = norm
            if abs(h[l, l - 1]) <= _EPS * s:
                h[l, l - 1] = 0.0
                break
            l -= 1
        if l == hi:
            hi -= 1
            its = 0
            continue
        if l == hi - 1:
            _standardize_block(h, z, hi - 1)
            hi -= 2
            its = 0
            continue
        its += 1
        if its > max_iter_per_eig:
            raise NonConvergence("Francis QR did not converge")
        m = hi
        if its % 11 == 10:
            # exceptional shift
            w = abs(h[m, m - 1]) + abs(h[m - 1, m - 2])
            ss = h[m, m] + 1.5 * w
            tt = w * w
        else:
            ss = h[m - 1, m - 1] + h[m, m]
            tt = h[m - 1, m - 1] * h[m, m] - h[m - 1, m] * h[m, m - 1]
        x = h[l, l] * h[l, l] + h[l, l + 1] * h[l + 1, l] - ss * h[l, l] + tt
        y = h[l + 1, l] * (h[l, l] + h[l + 1, l + 1] - ss)
        zz = h[l + 1, l] * h[l + 2, l + 1]
        for k in range(l, hi - 1):
            v = _householder(np.array([x, y, zz]))
            if v is not None:
                r = max(l, k - 1)
                _apply_left(h, v, slice(k, k + 3), slice(r, n))
                rr = min(k + 3, hi)
                _apply_right(h, v, slice(0, rr + 1), slice(k, k + 3))
                _apply_right(z, v, slice(0, n), slice(k, k + 3))
                if k > l:
                    h[k + 1:k + 3, k - 1] = 0.0
            x = h[k + 1, k]
            y = h[k + 2, k]
            if k < hi - 2:
                zz = h[k + 3, k]
        v = _householder(np.array([x, y]))
        if v is not None:
            _apply_left(h, v, slice(hi - 1, hi + 1), slice(hi - 2, n))
            _apply_right(h, v, slice(0, hi + 1), slice(hi - 1, hi + 1))
            _apply_right(z, v, slice(0, n), slice(hi - 1, hi + 1))
            h[hi, hi - 2] = 0.0
    return SchurForm(q=z, t=np.triu(h, -1))


# ---------------------------------------------------------------------------
# polynomials

def balance(a, radix=2.0):
    """Diagonal similarity ``d^-1 a d`` (powers of ``radix``) equalizing row/column norms."""
    a = _square(a, "a").copy()
    n = a.shape[0]
    converged = False
    while not converged:
        converged = True
        for i in range(n):
            c = np.sum(np.abs(a[:, i])) - abs(a[i, i])
            r = np.sum(np.abs(a[i, :])) - abs(a[i, i])
            if c == 0.0 or r == 0.0:
                continue
            g = r / radix
            f = 1.0
            s = c + r
            while c < g:
                f *= radix
                c *= radix * radix
            g = r * radix
            while c > g:
                f /= radix
                c /= radix * radix
            if (c + r) / f < 0.95 * s:
                converged = False
                a[i, :] /= f
                a[:, i] *= f
    return a


@dataclass(frozen=True)
class ComplexRootSet:
    roots: np.ndarray  # complex, length = degree

    def __len__(self):
        return len(self.roots)

    def pairs(self):
        return [(float(z.real), float(z.imag)) for z in self.roots]

    def nonreal(self, tol=None):
        """Boolean mask of roots with ``|Im z| > tol * max(1, |z|)``."""
        tol = REALNESS_TOL if tol is None else tol
        mag = np.maximum(1.0, np.abs(self.roots))
        return np.abs(self.roots.imag) > tol * mag

    def all_real(self, tol=None):
        return not np.any(self.nonreal(tol))

    def real_sorted(self):
        return np.sort(self.roots.real)


def _horner(coeffs, z):
    p = 0j
    dp = 0j
    for c in coeffs:
        dp = dp * z + p
        p = p * z + c
    return p, dp


def polynomial_roots(coeffs, polish=2):
    """All roots of a polynomial given highest-degree coefficient first.

    The coefficients are normalized to monic form, the balanced companion
    matrix is reduced to real Schur form and its block eigenvalues are
    returned, followed by at most ``polish`` Newton steps per root (a step is
    kept only if it lowers ``|p(z)|``).
    """
    c = as_vector(coeffs, "coeffs")
    if c.size < 2:
        raise InputError("polynomial degree must be at least 1")
    if c[0] == 0.0:
        raise InputError("leading coefficient must be nonzero")
    c = c / c[0]
    deg = c.size - 1
    if deg == 1:
        return ComplexRootSet(np.array([complex(-c[1])]))
    comp = np.zeros((deg, deg))
    comp[0, :] = -c[1:]
    comp[np.arange(1, deg), np.arange(deg - 1)] = 1.0
    z = real_schur(balance(comp)).eigenvalues()
    for i in range(deg):
        zi = z[i]
        pv, _ = _horner(c, zi)
        for _ in range(polish):
            _, dp = _horner(c, zi)
            if dp == 0:
                break
            cand = zi - pv / dp
            if abs(z[i].imag) == 0.0:
                cand = complex(cand.real, 0.0)
            pc, _ = _horner(c, cand)
            if abs(pc) >= abs(pv):
                break
            zi, pv = cand, pc
        z[i] = zi
    return ComplexRootSet(z)


def invert_dense(a, pivot_tol: Optional[float] = None):
    """Gauss-Jordan inverse with partial pivoting."""
    a = _square(a, "a")
    n = a.shape[0]
    aug = np.hstack([a.copy(), np.eye(n)])
    scale = max_abs(a)
    if pivot_tol is None:
        pivot_tol = n * _EPS * scale
    if scale == 0.0:
        raise SingularMatrix("matrix is zero")
    for k in range(n):
        p = k + int(np.argmax(np.abs(aug[k:, k])))
        if abs(aug[p, k]) <= pivot_tol:
            raise SingularMatrix(f"pivot {k} below tolerance; matrix is singular")
        if p != k:
            aug[[k, p]] = aug[[p, k]]
        aug[k] /= aug[k, k]
        col = aug[:, k].copy()
        col[k] = 0.0
        aug -= np.outer(col, aug[k])
    return aug[:, n:]


def reconstruction_ok(a, b, rel=RECONSTRUCTION_TOL):
    return max_abs(a - b) <= rel * max(1.0, max_abs(a))
