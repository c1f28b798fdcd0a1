"""Minimal complex linear-algebra kernel.

Right pseudo-inverse, ridge-regularized least squares and Gram-Schmidt
orthogonal complement, sized for desk-scale problems (<= 64 unknowns).
All functions are pure and operate on complex128 arrays.
"""

import numpy as np

from .errors import (
    DimensionMismatchError,
    DomainError,
    RankDeficientError,
    SingularMatrixError,
)

# Gram-pivot ratio above which user channels are treated as degenerate.
COND_LIMIT = 1e12


def right_pinv(h):
    """Right pseudo-inverse P = H^H (H H^H)^{-1} of a fat K x M matrix.

    H @ P equals the K x K identity for full-row-rank H. Raises
    RankDeficientError when the Cholesky pivot ratio of the Gram matrix
    exceeds COND_LIMIT (or factorization fails outright).
    """
    h = np.asarray(h, dtype=np.complex128)
    if h.ndim != 2:
        raise DimensionMismatchError(f"expected a matrix, got ndim={h.ndim}")
    k, m = h.shape
    if k > m:
        raise DimensionMismatchError(f"need K <= M, got {k} x {m}")
    if not np.isfinite(h).all():
        raise DomainError("matrix entries must be finite")
    gram = h @ h.conj().T
    try:
        chol = np.linalg.cholesky(gram)
    except np.linalg.LinAlgError as exc:
        raise RankDeficientError("Gram matrix is not positive definite") from exc
    pivots = np.diag(chol).real ** 2
    if pivots.min() <= 0.0 or pivots.max() / pivots.min() > COND_LIMIT:
        raise RankDeficientError(
            f"Gram pivot ratio {pivots.max() / pivots.min():.3g} exceeds {COND_LIMIT:g}"
        )
    # P = H^H G^-1 = (G^-1 H)^H because G is Hermitian.
    return np.linalg.solve(gram, h).conj().T


def least_squares(a, b, ridge=None):
    """Minimizer of ||A x - b||^2 + ridge * ||x||^2 via normal equations.

    Args:
        a: (m, n) complex matrix.
        b: (m,) complex right-hand side.
        ridge: nonnegative damping. None selects 1e-12 * mean diagonal of
            A^H A, enough to stabilize benign desk-scale systems.

    Raises SingularMatrixError when the regularized normal matrix is
    numerically singular (only possible with ridge = 0).
    """
    a = np.asarray(a, dtype=np.complex128)
    b = np.asarray(b, dtype=np.complex128)
    if a.ndim != 2 or b.ndim != 1 or a.shape[0] != b.shape[0]:
        raise DimensionMismatchError(f"inconsistent shapes {a.shape} and {b.shape}")
    n = a.shape[1]
    normal = a.conj().T @ a
    rhs = a.conj().T @ b
    if ridge is None:
        ridge = 1e-12 * float(np.trace(normal).real) / max(n, 1)
    if ridge < 0:
        raise DomainError("ridge must be nonnegative")
    normal[np.diag_indices(n)] += ridge
    try:
        return np.linalg.solve(normal, rhs)
    except np.linalg.LinAlgError as exc:
        raise SingularMatrixError("normal matrix is singular") from exc


def orth_complement(x, basis):
    """Component of x orthogonal to span(basis), by sequential Gram-Schmidt.

    Near-dependent basis vectors are dropped; the subtraction runs twice for
    numerical robustness. Returns the zero vector when x lies in the span.
    """
    x = np.asarray(x, dtype=np.complex128)
    ortho = []
    for b in basis:
        v = np.asarray(b, dtype=np.complex128)
        if v.shape != x.shape:
            raise DimensionMismatchError("basis vector length differs from x")
        v = v.copy()
        for u in ortho:
            v -= np.vdot(u, v) * u
        norm = np.linalg.norm(v)
        if norm > 1e-12 * max(np.linalg.norm(b), 1.0):
            ortho.append(v / norm)
    result = x.copy()
    for _ in range(2):
        for u in ortho:
            result -= np.vdot(u, result) * u
    return result
