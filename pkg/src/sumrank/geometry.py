"""Systems, linear sets and hyperplane geometry in PG(k-1, q^m).

Projective points are normalized vectors (first nonzero entry 1) enumerated in
the same canonical order as projective messages of a code. Hyperplanes are
represented by their normal vector v, standing for v^perp under the standard
scalar product.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import linalg
from .code import BlockShape, SumRankCode, iter_projective_messages
from .errors import DegenerateCodeError, InvariantViolation, PreconditionError, check_cap
from .gf import FieldTower
from .subspace import (FqSubspace, fqm_line, fqm_span, hyperplane, iter_fqm_subspaces, meet,
                       perp_prime, span)

Point = Tuple[int, ...]


# points --------------------------------------------------------------------------
def n_points(Q: int, k: int) -> int:
    return (Q**k - 1) // (Q - 1)


def enumerate_points(tower: FieldTower, k: int, cap: Optional[int] = None) -> np.ndarray:
    """Every point of PG(k-1, q^m) as a normalized row, canonical order."""
    check_cap("projective points", n_points(tower.Q, k), cap)
    return np.concatenate(list(iter_projective_messages(tower.Q, k)))


def enumerate_hyperplanes(tower: FieldTower, k: int, cap: Optional[int] = None) -> np.ndarray:
    """Normal vectors of every hyperplane, same order as the points."""
    return enumerate_points(tower, k, cap)


def normalize(tower: FieldTower, V) -> np.ndarray:
    """Scale each nonzero row so its first nonzero entry is 1."""
    V = np.atleast_2d(np.asarray(V, dtype=np.int64))
    nz = V != 0
    if not nz.any(axis=1).all():
        raise PreconditionError("cannot normalize the zero vector")
    lead = V[np.arange(len(V)), nz.argmax(axis=1)]
    return tower.F.mul(tower.F.inv(lead)[:, None], V)


def dot(tower: FieldTower, V, P) -> np.ndarray:
    """Matrix of standard scalar products ``V[a] . P[b]``."""
    V = np.atleast_2d(np.asarray(V, dtype=np.int64))
    P = np.atleast_2d(np.asarray(P, dtype=np.int64))
    return tower.F.sum(tower.F.mul(V[:, None, :], P[None, :, :]), axis=-1)


# systems ---------------------------------------------------------------------------
@dataclass(frozen=True)
class System:
    """An ordered tuple of F_q-subspaces of F_{q^m}^k.

    Spanning is recorded, not enforced, so partial systems (single linear sets,
    geometric duals) can use the same type.
    """

    tower: FieldTower
    k: int
    subspaces: Tuple[FqSubspace, ...]

    def __post_init__(self):
        object.__setattr__(self, "subspaces", tuple(self.subspaces))
        for U in self.subspaces:
            if U.tower != self.tower or U.k != self.k:
                raise PreconditionError("system subspaces must share the ambient F_{q^m}^k")

    @property
    def dims(self) -> Tuple[int, ...]:
        return tuple(U.dim for U in self.subspaces)

    @property
    def t(self) -> int:
        return len(self.subspaces)

    @property
    def N(self) -> int:
        return sum(self.dims)

    def is_spanning(self) -> bool:
        if not self.subspaces:
            return False
        rows = np.concatenate([U.basis for U in self.subspaces])
        return fqm_span(FqSubspace.from_rows(self.tower, rows, self.k)).dim == self.tower.m * self.k

    def __eq__(self, other):
        return (isinstance(other, System) and (self.tower, self.k) == (other.tower, other.k)
                and self.subspaces == other.subspaces)

    def __hash__(self):
        return hash((self.tower, self.k, self.subspaces))

    def to_dict(self) -> dict:
        return {"field": self.tower.describe(), "k": self.k,
                "subspaces": [U.to_dict() for U in self.subspaces]}


def system_from_code(C: SumRankCode) -> System:
    """U_i is the F_q-span of the columns of G_i."""
    T = C.tower
    subs = []
    for i, Gi in enumerate(C.blocks()):
        U = span(T, Gi.T, C.k)
        if U.dim != C.shape.n[i]:
            raise DegenerateCodeError(
                f"block {i}: columns span an F_q-space of dim {U.dim} < n_i = {C.shape.n[i]}")
        subs.append(U)
    return System(T, C.k, tuple(subs))


def code_from_system(S: System) -> SumRankCode:
    """Generator whose block i has the echelon basis of U_i as columns."""
    if any(d == 0 for d in S.dims):
        raise DegenerateCodeError("a system with a zero subspace has no code")
    G = np.concatenate([U.vectors().T for U in S.subspaces], axis=1)
    if linalg.rank(S.tower.F, G) != S.k:
        raise DegenerateCodeError("system does not span F_{q^m}^k")
    return SumRankCode(S.tower, S.dims, G)


def _hyper(S: System, v) -> FqSubspace:
    v = np.asarray(v, dtype=np.int64).reshape(-1)
    if len(v) != S.k:
        raise PreconditionError("normal vector has the wrong length")
    return hyperplane(S.tower, v)


def hyperplane_meets(S: System, v) -> Tuple[int, ...]:
    H = _hyper(S, v)
    return tuple(meet(U, H).dim for U in S.subspaces)


def rank_list_via_hyperplanes(S: System, v) -> Tuple[int, ...]:
    return tuple(n - d for n, d in zip(S.dims, hyperplane_meets(S, v)))


def weight_via_hyperplanes(S: System, v) -> int:
    return S.N - sum(hyperplane_meets(S, v))


# linear sets ------------------------------------------------------------------------
@dataclass
class LinearSet:
    source: FqSubspace
    points: Dict[Point, int]
    counts: Dict[int, int] = field(default_factory=dict)

    @property
    def rank(self) -> int:
        return self.source.dim

    @property
    def size(self) -> int:
        return len(self.points)

    def point_array(self) -> np.ndarray:
        return np.array(sorted(self.points), dtype=np.int64).reshape(-1, self.source.k)

    def is_scattered(self) -> bool:
        return all(w == 1 for w in self.points.values())

    def to_dict(self) -> dict:
        T = self.source.tower
        return {"rank": self.rank, "size": self.size,
                "counts": {str(i): c for i, c in sorted(self.counts.items())},
                "points": [{"point": [T.to_nested(x) for x in p], "weight": w}
                           for p, w in sorted(self.points.items())]}


def linear_set_identities(L: LinearSet) -> Dict[str, bool]:
    q, r = L.source.tower.q, L.rank
    total = (q**r - 1) // (q - 1)
    return {
        "size_bound": L.size <= total,
        "count_sum": sum(L.counts.values()) == L.size,
        "weighted_count": sum(c * (q**i - 1) // (q - 1) for i, c in L.counts.items()) == total,
    }


def linear_set(U: FqSubspace, cap: Optional[int] = None) -> LinearSet:
    """Points of L_U with weights, by normalizing every nonzero vector of U.

    A point P of weight w is hit by exactly q^w - 1 nonzero vectors of U.
    """
    U._need_k()
    T = U.tower
    check_cap("subspace vectors", T.q**U.dim, cap)
    points: Dict[Point, int] = {}
    if U.dim:
        V = U.element_vectors()[1:]
        P = normalize(T, V)
        uniq, cnt = np.unique(P, axis=0, return_counts=True)
        for p, c in zip(uniq.tolist(), cnt.tolist()):
            w = 0
            while T.q**w - 1 < c:
                w += 1
            if T.q**w - 1 != c:
                raise InvariantViolation("point multiplicity is not of the form q^w - 1")
            points[tuple(p)] = w
    counts: Dict[int, int] = {i: 0 for i in range(1, U.dim + 1)}
    for w in points.values():
        counts[w] += 1
    L = LinearSet(U, dict(sorted(points.items())), counts)
    failed = [name for name, ok in linear_set_identities(L).items() if not ok]
    if failed:
        raise InvariantViolation(f"linear set identities failed: {failed}")
    return L


def point_weight(U: FqSubspace, P) -> int:
    """dim(U ∩ <P>_{F_{q^m}}), computed by a meet (independent of :func:`linear_set`)."""
    return meet(U, fqm_line(U.tower, P)).dim


# hyperplane criteria -----------------------------------------------------------------
def is_scattered_wrt_hyperplanes(U: FqSubspace, k: Optional[int] = None,
                                 cap: Optional[int] = None) -> bool:
    k = U.k if k is None else k
    if k != U.k:
        raise PreconditionError("k does not match the subspace ambient")
    return all(meet(U, hyperplane(U.tower, v)).dim <= k - 1
               for v in enumerate_hyperplanes(U.tower, k, cap))


def hyperplane_sums(S: System, cap: Optional[int] = None) -> np.ndarray:
    """``sum_i dim(U_i ∩ v^perp)`` for every hyperplane normal v, canonical order."""
    return np.array([sum(hyperplane_meets(S, v)) for v in enumerate_hyperplanes(S.tower, S.k, cap)],
                    dtype=np.int64)


def msrd_check(S: System, cap: Optional[int] = None) -> bool:
    return int(hyperplane_sums(S, cap).max()) <= S.k - 1


def one_weight_msrd_check(S: System, cap: Optional[int] = None) -> bool:
    return bool((hyperplane_sums(S, cap) == S.k - 1).all())


def subspace_design_check(S: System, j: int, cap: Optional[int] = None) -> bool:
    """``sum_i dim(U_i ∩ W) <= j`` for every j-dim F_{q^m}-subspace W, 1 <= j <= k-1."""
    if not 1 <= j <= S.k - 1:
        raise PreconditionError(f"j must lie in [1, {S.k - 1}]")
    check_cap("F_{q^m}-subspaces", linalg.gaussian_binomial(S.k, j, S.tower.Q), cap)
    for W in iter_fqm_subspaces(S.tower, S.k, j):
        if sum(meet(U, W).dim for U in S.subspaces) > j:
            return False
    return True


def dim2_msrd_partition_check(S: System, cap: Optional[int] = None) -> bool:
    """Scattered, pairwise disjoint linear sets covering PG(1, q^m)."""
    if S.k != 2:
        raise PreconditionError("the partition criterion needs k = 2")
    seen = set()
    for U in S.subspaces:
        L = linear_set(U, cap)
        if not L.is_scattered():
            return False
        pts = set(L.points)
        if pts & seen:
            return False
        seen |= pts
    return len(seen) == n_points(S.tower.Q, 2)


def geometric_dual(S: System) -> System:
    return System(S.tower, S.k, tuple(perp_prime(U) for U in S.subspaces))


def transfer_identity_check(U: FqSubspace, v) -> bool:
    """dim(U ∩ v^perp) == dim U - m + dim(U' ∩ <v>), ' the trace dual."""
    T = U.tower
    lhs = meet(U, hyperplane(T, v)).dim
    rhs = U.dim - T.m + meet(perp_prime(U), fqm_line(T, v)).dim
    return lhs == rhs


# plane geometry -------------------------------------------------------------------------
def _incidence(tower: FieldTower, lines: np.ndarray, points: np.ndarray) -> np.ndarray:
    if len(points) == 0:
        return np.zeros((len(lines), 0), dtype=bool)
    return dot(tower, lines, points) == 0


def classify_lines(S: System, cap: Optional[int] = None) -> dict:
    """Tally lines of PG(2, q^m) by how they meet the linear sets L_{U_i}.

    A line is a long secant when it meets exactly one set, in q+1 points; a
    transversal when it meets exactly two sets in one point each; anything else
    is a violation.
    """
    if S.k != 3:
        raise PreconditionError("line classification needs k = 3")
    T = S.tower
    lines = enumerate_hyperplanes(T, 3, cap)
    hits = np.stack([_incidence(T, lines, linear_set(U, cap).point_array()).sum(axis=1)
                     for U in S.subspaces], axis=1) if S.subspaces else np.zeros((len(lines), 0), np.int64)
    touched = (hits > 0).sum(axis=1)
    long_secant = (touched == 1) & (hits.sum(axis=1) == T.q + 1)
    transversal = (touched == 2) & (hits.sum(axis=1) == 2)
    tally = {
        "one_set_long_secants": int(long_secant.sum()),
        "two_set_transversals": int(transversal.sum()),
        "violations": int((~(long_secant | transversal)).sum()),
    }
    tally["total_lines"] = len(lines)
    return tally


def blocking_set_check(tower: FieldTower, points, cap: Optional[int] = None) -> dict:
    """Two-fold blocking and minimality of a point set of PG(2, F) with F = tower.F."""
    P = np.asarray(points, dtype=np.int64).reshape(-1, 3)
    if len(P):
        P = np.unique(normalize(tower, P), axis=0)
    lines = enumerate_hyperplanes(tower, 3, cap)
    inc = _incidence(tower, lines, P)
    sizes = inc.sum(axis=1)
    hist_vals, hist_counts = np.unique(sizes, return_counts=True)
    two_fold = bool((sizes >= 2).all())
    on_two_secant = inc[sizes == 2].any(axis=0) if len(P) else np.zeros(0, bool)
    minimal = two_fold and bool(on_two_secant.all())
    return {"is_two_fold": two_fold, "is_minimal": minimal, "size": int(len(P)),
            "secant_histogram": {str(a): int(b) for a, b in zip(hist_vals.tolist(), hist_counts.tolist())},
            "total_lines": int(len(lines))}


def line_points(tower: FieldTower, v) -> np.ndarray:
    """Points of PG(2, F) on the line with normal v."""
    pts = enumerate_points(tower, 3)
    return pts[_incidence(tower, np.asarray(v).reshape(1, 3), pts)[0]]


def union_points(S: System, cap: Optional[int] = None) -> np.ndarray:
    pts = set()
    for U in S.subspaces:
        pts |= set(linear_set(U, cap).points)
    return np.array(sorted(pts), dtype=np.int64).reshape(-1, S.k)
