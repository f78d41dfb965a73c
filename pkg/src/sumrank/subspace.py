"""F_q-subspaces of F_{q^m}^k in canonical echelon form.

A vector of F_{q^m}^k is coordinatized over F_q by concatenating the
power-basis coordinates of its entries, entry 0 first, so the ambient space is
F_q^{mk} and flat index ``i*m + j`` is the coefficient of ``y^j`` in entry ``i``.
The same class also holds plain subspaces of F_q^n (``k is None``), which is how
codeword supports are represented.
"""

from __future__ import annotations

import itertools
from typing import Iterable, Iterator, List, Optional, Sequence

import numpy as np

from . import linalg
from .errors import FieldError, InvariantViolation, PreconditionError
from .gf import FieldTower


class FqSubspace:
    """An F_q-subspace stored by its reduced row-echelon basis.

    Equal subspaces have identical ``basis`` arrays, so equality and hashing
    compare bytes.
    """

    __slots__ = ("tower", "k", "width", "basis", "_pivots", "_hash")

    def __init__(self, tower: FieldTower, k: Optional[int], width: int, basis: np.ndarray,
                 pivots: Optional[List[int]] = None):
        self.tower = tower
        self.k = k
        self.width = width
        basis = np.asarray(basis, dtype=np.int64).reshape(-1, width)
        basis.setflags(write=False)
        self.basis = basis
        self._pivots = pivots
        self._hash = None

    # construction ------------------------------------------------------------
    @classmethod
    def from_rows(cls, tower: FieldTower, rows, k: Optional[int] = None,
                  width: Optional[int] = None) -> "FqSubspace":
        """Row space of an F_q matrix (rows of length ``m*k``, or ``width`` if k is None)."""
        if width is None:
            if k is None:
                raise PreconditionError("either k or width is required")
            width = tower.m * k
        M = linalg.as_matrix(rows, cols=width) if np.size(rows) else np.zeros((0, width), np.int64)
        if M.shape[1] != width:
            raise PreconditionError(f"rows have length {M.shape[1]}, ambient needs {width}")
        if (M < 0).any() or (M >= tower.q).any():
            raise FieldError("subspace rows must have F_q entries")
        R, piv = linalg.rref(tower.Fq, M)
        return cls(tower, k, width, R, piv)

    @classmethod
    def zero(cls, tower: FieldTower, k: Optional[int] = None, width: Optional[int] = None):
        return cls.from_rows(tower, np.zeros((0, width or tower.m * k), np.int64), k, width)

    @classmethod
    def full(cls, tower: FieldTower, k: Optional[int] = None, width: Optional[int] = None):
        w = width or tower.m * k
        return cls(tower, k, w, np.eye(w, dtype=np.int64), list(range(w)))

    # basic data ----------------------------------------------------------------
    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    @property
    def pivots(self) -> List[int]:
        if self._pivots is None:
            self._pivots = [int(np.flatnonzero(r)[0]) for r in self.basis]
        return self._pivots

    def vectors(self) -> np.ndarray:
        """Basis rows as vectors of F_{q^m}^k (shape dim x k)."""
        self._need_k()
        return self.tower.from_coords(self.basis.reshape(self.dim, self.k, self.tower.m))

    def elements(self) -> np.ndarray:
        """All ``q^dim`` vectors, as flat F_q rows, in coefficient order."""
        if self.dim == 0:
            return np.zeros((1, self.width), dtype=np.int64)
        coeffs = np.array(list(itertools.product(range(self.tower.q), repeat=self.dim)),
                          dtype=np.int64)
        return linalg.matmul(self.tower.Fq, coeffs, self.basis)

    def element_vectors(self) -> np.ndarray:
        self._need_k()
        return self.tower.from_coords(self.elements().reshape(-1, self.k, self.tower.m))

    def contains(self, row) -> bool:
        row = np.asarray(row, dtype=np.int64).reshape(1, self.width)
        return linalg.rank(self.tower.Fq, np.concatenate([self.basis, row])) == self.dim

    def _need_k(self):
        if self.k is None:
            raise PreconditionError("operation needs an F_{q^m}^k ambient")

    def _same_ambient(self, other: "FqSubspace"):
        if not isinstance(other, FqSubspace):
            raise TypeError("expected an FqSubspace")
        if (self.tower, self.k, self.width) != (other.tower, other.k, other.width):
            raise PreconditionError("subspaces live in different ambient spaces")

    # comparisons ---------------------------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, FqSubspace):
            return NotImplemented
        return ((self.tower, self.k, self.width) == (other.tower, other.k, other.width)
                and self.basis.shape == other.basis.shape
                and np.array_equal(self.basis, other.basis))

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.tower, self.k, self.width, self.basis.shape, self.basis.tobytes()))
        return self._hash

    def __le__(self, other: "FqSubspace") -> bool:
        self._same_ambient(other)
        if self.dim > other.dim:
            return False
        stacked = np.concatenate([other.basis, self.basis])
        return linalg.rank(self.tower.Fq, stacked) == other.dim

    def __repr__(self):
        amb = f"F_{self.tower.Q}^{self.k}" if self.k is not None else f"F_{self.tower.q}^{self.width}"
        return f"FqSubspace(dim={self.dim} in {amb})"

    # serialization ---------------------------------------------------------------
    def to_dict(self) -> dict:
        d = {"dim": self.dim, "basis": [[self.tower.fq_to_list(c) for c in row]
                                         for row in self.basis.tolist()]}
        if self.k is not None:
            d["k"] = self.k
        else:
            d["width"] = self.width
        return d

    @classmethod
    def from_dict(cls, tower: FieldTower, d: dict) -> "FqSubspace":
        k = d.get("k")
        width = None if k is not None else int(d["width"])
        k = None if k is None else int(k)
        w = width if width is not None else tower.m * k
        rows = [[tower.fq_from_list(c) for c in row] for row in d.get("basis", [])]
        U = cls.from_rows(tower, np.array(rows, dtype=np.int64).reshape(-1, w), k, width)
        if "dim" in d and int(d["dim"]) != U.dim:
            raise FieldError(f"declared dim {d['dim']} but basis has rank {U.dim}")
        return U


def _vec_rows(tower: FieldTower, vectors, k: int) -> np.ndarray:
    V = np.asarray(vectors, dtype=np.int64)
    if V.size == 0:
        return np.zeros((0, tower.m * k), dtype=np.int64)
    V = V.reshape(-1, k)
    if (V < 0).any() or (V >= tower.Q).any():
        raise FieldError("vector entries outside the field")
    return tower.coords(V).reshape(len(V), tower.m * k)


def span(tower: FieldTower, vectors, k: Optional[int] = None) -> FqSubspace:
    """F_q-span of vectors of F_{q^m}^k."""
    V = np.asarray(vectors, dtype=np.int64)
    if k is None:
        if V.ndim != 2:
            raise PreconditionError("k is required for an empty or ragged vector list")
        k = V.shape[1]
    elif V.size and V.ndim == 2 and V.shape[1] != k:
        raise PreconditionError(f"vectors have length {V.shape[1]}, ambient has k={k}")
    return FqSubspace.from_rows(tower, _vec_rows(tower, V, k), k)


def meet(U: FqSubspace, V: FqSubspace) -> FqSubspace:
    """Intersection via the kernel of the stacked bases."""
    U._same_ambient(V)
    F = U.tower.Fq
    if U.dim == 0 or V.dim == 0:
        return FqSubspace.zero(U.tower, U.k, U.width)
    stacked = np.concatenate([U.basis, V.basis])
    # (a, b) with a.U + b.V = 0 gives the common vector a.U
    K = linalg.nullspace(F, stacked.T)
    W = linalg.matmul(F, K[:, :U.dim], U.basis) if len(K) else np.zeros((0, U.width), np.int64)
    return FqSubspace.from_rows(U.tower, W, U.k, U.width)


def join(U: FqSubspace, V: FqSubspace) -> FqSubspace:
    U._same_ambient(V)
    S = FqSubspace.from_rows(U.tower, np.concatenate([U.basis, V.basis]), U.k, U.width)
    return S


def grassmann_check(U: FqSubspace, V: FqSubspace) -> bool:
    ok = join(U, V).dim == U.dim + V.dim - meet(U, V).dim
    if not ok:
        raise InvariantViolation("Grassmann identity failed")
    return ok


def rank_q(tower: FieldTower, v) -> int:
    """F_q-dimension of the span of the entries of ``v``."""
    v = np.atleast_1d(np.asarray(v, dtype=np.int64))
    if v.size == 0:
        return 0
    return linalg.rank(tower.Fq, tower.coords(v))


def fqm_line(tower: FieldTower, x) -> FqSubspace:
    """The m-dimensional F_q-space underlying the F_{q^m}-line through ``x``."""
    x = np.asarray(x, dtype=np.int64).reshape(-1)
    if not x.any():
        raise PreconditionError("fqm_line needs a nonzero vector")
    powers = np.array([tower.q**j for j in range(tower.m)], dtype=np.int64)
    return span(tower, tower.F.mul(powers[:, None], x[None, :]), len(x))


def fqm_span(U: FqSubspace) -> FqSubspace:
    """Smallest F_{q^m}-subspace containing U."""
    U._need_k()
    T = U.tower
    if U.dim == 0:
        return U
    vecs = U.vectors()
    powers = np.array([T.q**j for j in range(T.m)], dtype=np.int64)
    allv = T.F.mul(powers[:, None, None], vecs[None, :, :]).reshape(-1, U.k)
    return span(T, allv, U.k)


def is_fqm_linear(U: FqSubspace) -> bool:
    """Closed under multiplication by the generator y of F_{q^m} over F_q."""
    U._need_k()
    if U.dim == 0:
        return True
    T = U.tower
    y = T.q if T.m > 1 else 1
    shifted = T.F.mul(y, U.vectors())
    return all(U.contains(r) for r in _vec_rows(T, shifted, U.k))


def fqm_dim(U: FqSubspace) -> int:
    if not is_fqm_linear(U):
        raise PreconditionError("subspace is not F_{q^m}-linear")
    return U.dim // U.tower.m


def hyperplane(tower: FieldTower, v) -> FqSubspace:
    """``v^perp = {x : sum v_i x_i = 0}`` (standard scalar product) as an F_q-space."""
    v = np.asarray(v, dtype=np.int64).reshape(-1)
    if not v.any():
        raise PreconditionError("hyperplane normal must be nonzero")
    k, m = len(v), tower.m
    # image of the flat basis vector y^j e_i under x -> v.x
    images = tower.F.mul(v[:, None], np.array([tower.q**j for j in range(m)])[None, :])
    M = tower.coords(images.reshape(k * m))            # (mk) x m
    return FqSubspace.from_rows(tower, linalg.nullspace(tower.Fq, M.T), k)


def trace_form_matrix(tower: FieldTower, k: int) -> np.ndarray:
    """Matrix of (u, v) -> Tr(u . v) in flat coordinates: block diagonal Gram matrices."""
    G = tower.trace_gram()
    m = tower.m
    B = np.zeros((m * k, m * k), dtype=np.int64)
    for i in range(k):
        B[i * m:(i + 1) * m, i * m:(i + 1) * m] = G
    return B


def perp_prime(U: FqSubspace) -> FqSubspace:
    """Orthogonal complement under the trace form Tr(u . v)."""
    U._need_k()
    T = U.tower
    if U.dim == 0:
        return FqSubspace.full(T, U.k)
    UB = linalg.matmul(T.Fq, U.basis, trace_form_matrix(T, U.k))
    return FqSubspace.from_rows(T, linalg.nullspace(T.Fq, UB), U.k)


def sigma_perp(W: FqSubspace) -> FqSubspace:
    """Orthogonal complement of an F_{q^m}-subspace under the standard scalar product.

    Computed over F_{q^m} directly, independent of the trace form.
    """
    W._need_k()
    T = W.tower
    if not is_fqm_linear(W):
        raise PreconditionError("sigma_perp needs an F_{q^m}-linear subspace")
    if W.dim == 0:
        return FqSubspace.full(T, W.k)
    R, _ = linalg.rref(T.F, W.vectors())
    K = linalg.nullspace(T.F, R, cols=W.k)
    if len(K) == 0:
        return FqSubspace.zero(T, W.k)
    return fqm_span(span(T, K, W.k))


def dual_weight_identity_check(U: FqSubspace, W: FqSubspace) -> bool:
    """dim(U' ∩ W') - dim(U ∩ W) == mk - dim U - m dim_{F_{q^m}} W, with ' the trace dual."""
    U._same_ambient(W)
    s = fqm_dim(W)
    T = U.tower
    lhs = meet(perp_prime(U), perp_prime(W)).dim - meet(U, W).dim
    return lhs == T.m * U.k - U.dim - s * T.m


# enumeration ---------------------------------------------------------------------
def iter_subspaces(tower: FieldTower, k: int, dim: Optional[int] = None) -> Iterator[FqSubspace]:
    """Every F_q-subspace of F_{q^m}^k (of one dimension, or all by increasing dim)."""
    n = tower.m * k
    dims = range(n + 1) if dim is None else [dim]
    for r in dims:
        for R in linalg.iter_rref(tower.q, r, n):
            yield FqSubspace(tower, k, n, R)


def count_subspaces(tower: FieldTower, k: int, dim: Optional[int] = None) -> int:
    n = tower.m * k
    dims = range(n + 1) if dim is None else [dim]
    return sum(linalg.gaussian_binomial(n, r, tower.q) for r in dims)


def iter_fqm_subspaces(tower: FieldTower, k: int, dim: Optional[int] = None) -> Iterator[FqSubspace]:
    """Every F_{q^m}-subspace of F_{q^m}^k, as F_q-subspaces."""
    dims = range(k + 1) if dim is None else [dim]
    for r in dims:
        for R in linalg.iter_rref(tower.Q, r, k):
            yield fqm_span(span(tower, R, k)) if r else FqSubspace.zero(tower, k)


def random_subspace(tower: FieldTower, k: int, dim: int, rng: np.random.Generator) -> FqSubspace:
    n = tower.m * k
    if not 0 <= dim <= n:
        raise PreconditionError(f"dimension {dim} outside [0, {n}]")
    while True:
        U = FqSubspace.from_rows(tower, rng.integers(0, tower.q, size=(dim, n)), k)
        if U.dim == dim:
            return U


def all_vectors(tower: FieldTower, k: int) -> np.ndarray:
    """Every vector of F_{q^m}^k, last coordinate varying fastest."""
    return np.array(list(itertools.product(range(tower.Q), repeat=k)), dtype=np.int64).reshape(-1, k)


def column_space(tower: FieldTower, M) -> FqSubspace:
    """Column space of an F_q matrix, as a subspace of F_q^{rows}."""
    M = np.asarray(M, dtype=np.int64)
    return FqSubspace.from_rows(tower, M.T, None, M.shape[0])
