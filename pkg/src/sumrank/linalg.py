"""Dense linear algebra over a finite field.

Every function takes the field ``F`` (a :class:`sumrank.gf.GF`) as first
argument and works on ``int64`` arrays of encoded elements. Row operations are
vectorized; only the pivot loop is in Python.
"""

from __future__ import annotations

import itertools
from typing import Iterator, List, Tuple

import numpy as np


def as_matrix(A, cols: int | None = None) -> np.ndarray:
    M = np.array(A, dtype=np.int64)
    if M.ndim == 1 and M.size == 0 and cols is not None:
        M = M.reshape(0, cols)
    if M.ndim != 2:
        raise ValueError(f"expected a 2-d matrix, got shape {M.shape}")
    return M


def matmul(F, A, B) -> np.ndarray:
    A = np.asarray(A, dtype=np.int64)
    B = np.asarray(B, dtype=np.int64)
    if A.shape[-1] != B.shape[0]:
        raise ValueError(f"shape mismatch {A.shape} @ {B.shape}")
    if F.degree == 1:
        return (A @ B) % F.p
    out = np.zeros(A.shape[:-1] + B.shape[1:], dtype=np.int64)
    for i in range(B.shape[0]):
        out = F.add(out, F.mul(A[..., i, None], B[i]))
    return out


def rref(F, A, cols: int | None = None) -> Tuple[np.ndarray, List[int]]:
    """Reduced row echelon form; returns (nonzero rows, pivot columns)."""
    M = as_matrix(A, cols).copy()
    nrows, ncols = M.shape
    pivots: List[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.flatnonzero(M[r:, c])
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            M[[r, piv]] = M[[piv, r]]
        M[r] = F.mul(F.inv(M[r, c]), M[r])
        f = M[:, c].copy()
        f[r] = 0
        rows = np.flatnonzero(f)
        if rows.size:
            M[rows] = F.sub(M[rows], F.mul(f[rows, None], M[r][None, :]))
        pivots.append(c)
        r += 1
    return M[:r], pivots


def rank(F, A) -> int:
    M = np.asarray(A, dtype=np.int64)
    if M.size == 0:
        return 0
    return len(rref(F, M)[1])


def nullspace(F, A, cols: int | None = None) -> np.ndarray:
    """Rows spanning the right kernel ``{x : A x^T = 0}``."""
    M = as_matrix(A, cols)
    n = M.shape[1]
    R, pivots = rref(F, M)
    free = [c for c in range(n) if c not in set(pivots)]
    K = np.zeros((len(free), n), dtype=np.int64)
    for row, f in enumerate(free):
        K[row, f] = 1
        for i, p in enumerate(pivots):
            K[row, p] = F.neg(R[i, f])
    return K


def inverse(F, A) -> np.ndarray:
    M = as_matrix(A)
    n = M.shape[0]
    if M.shape != (n, n):
        raise ValueError("inverse of a non-square matrix")
    aug = np.concatenate([M, np.eye(n, dtype=np.int64)], axis=1)
    R, pivots = rref(F, aug)
    if pivots[:n] != list(range(n)) or len(R) < n:
        raise ValueError("matrix is singular")
    return R[:, n:]


def batched_rank(F, mats) -> np.ndarray:
    """Ranks of a stack of matrices of shape (B, r, c), eliminated in lockstep."""
    M = np.array(mats, dtype=np.int64)
    if M.ndim != 3:
        raise ValueError("expected a (B, r, c) stack")
    if M.shape[2] > M.shape[1]:
        M = np.ascontiguousarray(M.transpose(0, 2, 1))
    B, r, c = M.shape
    ranks = np.zeros(B, dtype=np.int64)
    if B == 0 or r == 0 or c == 0:
        return ranks
    for col in range(c):
        cand = M[:, :, col] != 0
        has = cand.any(axis=1)
        if not has.any():
            continue
        idx = np.flatnonzero(has)
        piv = cand[idx].argmax(axis=1)
        prow = M[idx, piv, :]
        prow = F.mul(F.inv(prow[:, col])[:, None], prow)
        f = M[idx, :, col]
        M[idx] = F.sub(M[idx], F.mul(f[:, :, None], prow[:, None, :]))
        ranks[idx] += 1
    return ranks


def gaussian_binomial(n: int, r: int, order: int) -> int:
    """Number of r-dimensional subspaces of GF(order)^n."""
    if r < 0 or r > n:
        return 0
    num = den = 1
    for i in range(r):
        num *= order ** (n - i) - 1
        den *= order ** (i + 1) - 1
    return num // den


def iter_rref(order: int, nrows: int, ncols: int) -> Iterator[np.ndarray]:
    """Every full-rank ``nrows x ncols`` RREF matrix over GF(order), canonical order.

    Pivot sets are visited in lexicographic order; free entries vary with the
    last free position fastest.
    """
    for pivots in itertools.combinations(range(ncols), nrows):
        pset = set(pivots)
        free = [(i, j) for i, p in enumerate(pivots) for j in range(p + 1, ncols) if j not in pset]
        base = np.zeros((nrows, ncols), dtype=np.int64)
        for i, p in enumerate(pivots):
            base[i, p] = 1
        for values in itertools.product(range(order), repeat=len(free)):
            M = base.copy()
            for (i, j), v in zip(free, values):
                M[i, j] = v
            yield M
