"""Exact linear algebra over the rationals on numpy object arrays of Fractions."""

from __future__ import annotations

from fractions import Fraction

import numpy as np

ZERO = Fraction(0)
ONE = Fraction(1)


def zeros(rows: int, cols: int) -> np.ndarray:
    M = np.empty((rows, cols), dtype=object)
    M.fill(ZERO)
    return M


def identity(n: int) -> np.ndarray:
    M = zeros(n, n)
    for i in range(n):
        M[i, i] = ONE
    return M


def field_matrix(rows, shape: tuple | None = None) -> np.ndarray:
    """Copy nested sequences (or an array) into an exact rational matrix."""
    A = np.array(rows, dtype=object)
    if shape is not None:
        A = A.reshape(shape)
    elif A.size == 0:
        A = A.reshape(0, 0)
    out = zeros(*A.shape)
    for idx, v in np.ndenumerate(A):
        out[idx] = Fraction(v)
    return out


def rref(M: np.ndarray) -> tuple:
    """Reduced row echelon form and the tuple of pivot columns."""
    R = M.copy()
    rows, cols = R.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = [i for i in range(r, rows) if R[i, c] != 0]
        if not nz:
            continue
        p = nz[0]
        if p != r:
            R[[r, p]] = R[[p, r]]
        R[r] = R[r] / R[r, c]
        for i in range(rows):
            if i != r and R[i, c] != 0:
                R[i] = R[i] - R[i, c] * R[r]
        pivots.append(c)
        r += 1
    return R, tuple(pivots)


def rank(M: np.ndarray) -> int:
    if M.size == 0:
        return 0
    return len(rref(M)[1])


def nullspace(M: np.ndarray) -> np.ndarray:
    """Columns spanning the kernel, one per free variable."""
    rows, cols = M.shape
    R, pivots = rref(M) if rows else (M, ())
    free = [c for c in range(cols) if c not in pivots]
    N = zeros(cols, len(free))
    for k, f in enumerate(free):
        N[f, k] = ONE
        for i, p in enumerate(pivots):
            N[p, k] = -R[i, f]
    return N


def column_basis(M: np.ndarray) -> np.ndarray:
    """A subset of the columns of ``M`` forming a basis of its column space."""
    if M.shape[1] == 0 or M.shape[0] == 0:
        return zeros(M.shape[0], 0)
    _, pivots = rref(M)
    return M[:, list(pivots)]


def solve(A: np.ndarray, B: np.ndarray) -> np.ndarray | None:
    """Some ``X`` with ``A @ X == B`` (free variables set to zero), or None."""
    rows, cols = A.shape
    B2 = B if B.ndim == 2 else B.reshape(rows, 1)
    if rows == 0:
        return zeros(cols, B2.shape[1])
    aug = np.concatenate([A, B2], axis=1)
    R, pivots = rref(aug)
    if any(p >= cols for p in pivots):
        return None
    X = zeros(cols, B2.shape[1])
    for i, p in enumerate(pivots):
        X[p] = R[i, cols:]
    return X[:, 0] if B.ndim == 1 else X


def inverse(A: np.ndarray) -> np.ndarray | None:
    n, m = A.shape
    if n != m:
        return None
    if rank(A) != n:
        return None
    return solve(A, identity(n))


def matrix_power(A: np.ndarray, k: int) -> np.ndarray:
    out = identity(A.shape[0])
    base = A
    while k:
        if k & 1:
            out = out.dot(base)
        base = base.dot(base)
        k >>= 1
    return out


def to_json(M: np.ndarray) -> list:
    """Rows of the matrix as strings (``"p/q"``) for debugging output."""
    return [[str(v) for v in row] for row in M]
