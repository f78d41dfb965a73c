"""Sum-rank metric codes in the vector framework.

A code is a k-dimensional F_{q^m}-subspace of F_{q^m}^N split into blocks of
lengths ``n = (n_1, ..., n_t)``; the weight of a codeword is the sum over blocks
of the F_q-rank of the block. All metric data comes from exhaustive projective
enumeration, vectorized over chunks of messages.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from . import linalg
from .errors import (DegenerateCodeError, FieldError, PreconditionError, check_cap)
from .gf import ExpansionBasis, FieldTower, expand
from .subspace import FqSubspace, column_space, join, rank_q

CHUNK = 1 << 14


@dataclass(frozen=True)
class BlockShape:
    n: Tuple[int, ...]

    def __post_init__(self):
        n = tuple(int(x) for x in self.n)
        if not n or any(x < 1 for x in n):
            raise PreconditionError(f"block lengths must be positive, got {self.n}")
        object.__setattr__(self, "n", n)

    @property
    def t(self) -> int:
        return len(self.n)

    @property
    def N(self) -> int:
        return sum(self.n)

    @property
    def slices(self) -> List[slice]:
        out, pos = [], 0
        for x in self.n:
            out.append(slice(pos, pos + x))
            pos += x
        return out


class SumRankCode:
    """A k-dimensional code with generator matrix ``G = (G_1 | ... | G_t)``."""

    def __init__(self, tower: FieldTower, shape, G):
        self.tower = tower
        self.shape = shape if isinstance(shape, BlockShape) else BlockShape(tuple(shape))
        G = np.array(G, dtype=np.int64)
        if G.ndim == 1:
            G = G.reshape(1, -1)
        if G.ndim != 2 or G.shape[1] != self.shape.N:
            raise PreconditionError(f"generator has shape {G.shape}, block shape needs N={self.shape.N}")
        if (G < 0).any() or (G >= tower.Q).any():
            raise FieldError("generator entries outside F_{q^m}")
        k = G.shape[0]
        if not 1 <= k <= self.shape.N:
            raise PreconditionError(f"dimension {k} outside [1, N]")
        if linalg.rank(tower.F, G) != k:
            raise PreconditionError("generator matrix does not have full row rank")
        G.setflags(write=False)
        self.G = G

    @property
    def k(self) -> int:
        return self.G.shape[0]

    @property
    def N(self) -> int:
        return self.shape.N

    @property
    def t(self) -> int:
        return self.shape.t

    def block(self, i: int) -> np.ndarray:
        return self.G[:, self.shape.slices[i]]

    def blocks(self) -> List[np.ndarray]:
        return [self.G[:, s] for s in self.shape.slices]

    def encode(self, v) -> "Codeword":
        v = np.asarray(v, dtype=np.int64).reshape(1, self.k)
        c = linalg.matmul(self.tower.F, v, self.G)[0]
        return Codeword.from_flat(self.shape, c)

    def n_projective(self) -> int:
        Q = self.tower.Q
        return (Q**self.k - 1) // (Q - 1)

    def canonical_G(self) -> np.ndarray:
        return linalg.rref(self.tower.F, self.G)[0]

    def __repr__(self):
        return f"SumRankCode([{self.shape.n}, {self.k}]_{self.tower.Q}/{self.tower.q})"

    # serialization -------------------------------------------------------------
    def to_dict(self) -> dict:
        T = self.tower
        return {"field": T.describe(), "shape": list(self.shape.n), "k": self.k,
                "G": [[T.to_nested(x) for x in row] for row in self.G.tolist()]}


@dataclass(frozen=True)
class Codeword:
    blocks: Tuple[Tuple[int, ...], ...]

    @classmethod
    def from_flat(cls, shape: BlockShape, c) -> "Codeword":
        c = [int(x) for x in np.asarray(c).reshape(-1)]
        if len(c) != shape.N:
            raise PreconditionError("codeword length does not match the shape")
        return cls(tuple(tuple(c[s]) for s in shape.slices))

    def flat(self) -> np.ndarray:
        return np.array([x for b in self.blocks for x in b], dtype=np.int64)

    def scale(self, tower: FieldTower, lam: int) -> "Codeword":
        return Codeword(tuple(tuple(int(x) for x in tower.F.mul(lam, np.array(b))) for b in self.blocks))


def _check_shape(c: Codeword, shape: Optional[BlockShape]):
    if shape is not None and tuple(len(b) for b in c.blocks) != shape.n:
        raise PreconditionError("codeword blocks do not match the shape")


def rank_list(tower: FieldTower, c: Codeword, shape: Optional[BlockShape] = None) -> Tuple[int, ...]:
    _check_shape(c, shape)
    return tuple(rank_q(tower, b) for b in c.blocks)


def tau(ranks: Sequence[int]) -> Tuple[int, ...]:
    """Sort a rank-list into non-increasing order."""
    return tuple(sorted((int(r) for r in ranks), reverse=True))


def rank_profile(tower: FieldTower, c: Codeword, shape: Optional[BlockShape] = None) -> Tuple[int, ...]:
    return tau(rank_list(tower, c, shape))


def weight(tower: FieldTower, c: Codeword, shape: Optional[BlockShape] = None) -> int:
    return sum(rank_list(tower, c, shape))


def support(tower: FieldTower, c: Codeword, gamma: Optional[ExpansionBasis] = None) -> Tuple[FqSubspace, ...]:
    """Per block, the column space of the expansion matrix, inside F_q^{n_i}."""
    return tuple(column_space(tower, expand(tower, np.array(b, dtype=np.int64), gamma))
                 for b in c.blocks)


def code_support(C: SumRankCode) -> Tuple[FqSubspace, ...]:
    """Blockwise sum of supports over the F_q-spanning set {y^j g_l} of C."""
    T = C.tower
    powers = [T.q**j for j in range(T.m)]
    sup = [FqSubspace.zero(T, None, n) for n in C.shape.n]
    for row in C.G:
        for lam in powers:
            cw = Codeword.from_flat(C.shape, T.F.mul(lam, row))
            sup = [join(a, b) for a, b in zip(sup, support(T, cw))]
    return tuple(sup)


def is_nondegenerate(C: SumRankCode) -> bool:
    return all(S.dim == n for S, n in zip(code_support(C), C.shape.n))


def block_column_ranks(C: SumRankCode) -> Tuple[int, ...]:
    """F_q-rank of the columns of each G_i viewed as vectors of F_{q^m}^k."""
    T = C.tower
    out = []
    for Gi in C.blocks():
        cols = T.coords(Gi.T).reshape(Gi.shape[1], -1)
        out.append(linalg.rank(T.Fq, cols))
    return tuple(out)


def is_nondegenerate_columns(C: SumRankCode) -> bool:
    """Nondegeneracy via F_q-independence of the columns of every block."""
    return block_column_ranks(C) == C.shape.n


# enumeration kernel ------------------------------------------------------------------
def _digits(idx: np.ndarray, base: int, width: int) -> np.ndarray:
    """Base-``base`` digits of idx, most significant first (last digit fastest)."""
    out = np.zeros((len(idx), width), dtype=np.int64)
    rem = idx.copy()
    for j in range(width - 1, -1, -1):
        out[:, j] = rem % base
        rem //= base
    return out


def iter_projective_messages(Q: int, k: int, chunk: int = CHUNK) -> Iterator[np.ndarray]:
    """Normalized nonzero vectors of F_Q^k in canonical order, in chunks.

    Vectors with their leading one in position 0 come first; within a leading
    position the tail runs through F_Q^{k-1-i} with the last entry fastest.
    """
    for lead in range(k):
        tail = k - 1 - lead
        total = Q**tail
        for start in range(0, total, chunk):
            idx = np.arange(start, min(total, start + chunk), dtype=np.int64)
            M = np.zeros((len(idx), k), dtype=np.int64)
            M[:, lead] = 1
            if tail:
                M[:, lead + 1:] = _digits(idx, Q, tail)
            yield M


def iter_messages(Q: int, k: int, chunk: int = CHUNK) -> Iterator[np.ndarray]:
    """All vectors of F_Q^k, including zero, last entry fastest."""
    total = Q**k
    for start in range(0, total, chunk):
        idx = np.arange(start, min(total, start + chunk), dtype=np.int64)
        yield _digits(idx, Q, k)


def codeword_rank_lists(C: SumRankCode, messages: np.ndarray) -> np.ndarray:
    """Rank-lists of ``messages @ G``, one row per message."""
    T = C.tower
    cw = linalg.matmul(T.F, messages, C.G)
    coords = T.coords(cw)                    # (B, N, m)
    out = np.zeros((len(messages), C.t), dtype=np.int64)
    for i, s in enumerate(C.shape.slices):
        out[:, i] = linalg.batched_rank(T.Fq, coords[:, s, :])
    return out


def iter_rank_lists(C: SumRankCode, cap: Optional[int] = None,
                    chunk: int = CHUNK) -> Iterator[Tuple[np.ndarray, np.ndarray]]:
    """Yield (messages, rank-lists) over every projective message, chunked."""
    check_cap("projective messages", C.n_projective(), cap)
    for M in iter_projective_messages(C.tower.Q, C.k, chunk):
        yield M, codeword_rank_lists(C, M)


def enumerate_codewords(C: SumRankCode, projective: bool = False, cap: Optional[int] = None) -> np.ndarray:
    """Every codeword (or one per projective class) as rows of length N."""
    Q = C.tower.Q
    size = C.n_projective() if projective else Q**C.k
    check_cap("codewords", size, cap)
    gen = iter_projective_messages(Q, C.k) if projective else iter_messages(Q, C.k)
    parts = [linalg.matmul(C.tower.F, M, C.G) for M in gen]
    return np.concatenate(parts) if parts else np.zeros((0, C.N), np.int64)


def min_distance(C: SumRankCode, cap: Optional[int] = None) -> int:
    best = None
    for _, R in iter_rank_lists(C, cap):
        w = int(R.sum(axis=1).min())
        best = w if best is None else min(best, w)
    return int(best)


def singleton_bound(C: SumRankCode) -> int:
    return C.N - C.k + 1


def singleton_defect(C: SumRankCode, cap: Optional[int] = None) -> int:
    defect = singleton_bound(C) - min_distance(C, cap)
    if defect < 0:
        raise AssertionError("Singleton bound violated")
    return defect


def is_msrd(C: SumRankCode, cap: Optional[int] = None) -> bool:
    return singleton_defect(C, cap) == 0


def projection(C: SumRankCode, i: int) -> SumRankCode:
    """The rank-metric code ``{c_i : c in C}`` with a full-rank generator."""
    if not 0 <= i < C.t:
        raise IndexError(f"block index {i} outside [0, {C.t})")
    R, _ = linalg.rref(C.tower.F, C.block(i))
    if len(R) == 0:
        raise DegenerateCodeError(f"projection onto block {i} is the zero code")
    return SumRankCode(C.tower, (C.shape.n[i],), R)


def projection_dims(C: SumRankCode) -> Tuple[int, ...]:
    return tuple(linalg.rank(C.tower.F, Gi) for Gi in C.blocks())


# reports ---------------------------------------------------------------------------
@dataclass
class AnalysisReport:
    k: int
    N: int
    shape: Tuple[int, ...]
    weight_distribution: Dict[int, int]
    rank_lists: List[Tuple[int, ...]]
    rank_profiles: List[Tuple[int, ...]]
    d: int
    singleton_bound: int
    defect: int
    is_msrd: bool
    is_one_weight: bool
    is_constant_rank_list: bool
    is_constant_rank_profile: bool
    is_nondegenerate: bool
    projection_dims: Tuple[int, ...]
    projective_codewords: int
    notes: List[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "N": self.N,
            "d": self.d,
            "defect": self.defect,
            "is_constant_rank_list": self.is_constant_rank_list,
            "is_constant_rank_profile": self.is_constant_rank_profile,
            "is_msrd": self.is_msrd,
            "is_nondegenerate": self.is_nondegenerate,
            "is_one_weight": self.is_one_weight,
            "k": self.k,
            "notes": list(self.notes),
            "projection_dims": list(self.projection_dims),
            "projective_codewords": self.projective_codewords,
            "rank_lists": [list(r) for r in self.rank_lists],
            "rank_profiles": [list(r) for r in self.rank_profiles],
            "shape": list(self.shape),
            "singleton_bound": self.singleton_bound,
            "weight_distribution": {str(w): c for w, c in sorted(self.weight_distribution.items())},
        }

    def invariants(self) -> dict:
        """The isometry-invariant part of the report (rank-lists depend on block order)."""
        d = self.to_dict()
        d.pop("rank_lists")
        d.pop("projection_dims")
        d.pop("shape")
        d["shape_multiset"] = sorted(self.shape)
        d["projection_dims_multiset"] = sorted(self.projection_dims)
        return d


def classify_flags(C: SumRankCode, cap: Optional[int] = None, chunk: int = CHUNK) -> AnalysisReport:
    """Full report from one pass over the projective messages.

    Results do not depend on ``chunk`` or on enumeration order.
    """
    wd: Dict[int, int] = {}
    lists = set()
    for _, R in iter_rank_lists(C, cap, chunk):
        uniq, counts = np.unique(R, axis=0, return_counts=True)
        for row, cnt in zip(uniq.tolist(), counts.tolist()):
            lists.add(tuple(row))
        w, wc = np.unique(R.sum(axis=1), return_counts=True)
        for a, b in zip(w.tolist(), wc.tolist()):
            wd[a] = wd.get(a, 0) + b
    profiles = sorted({tau(r) for r in lists}, reverse=True)
    d = min(wd)
    bound = singleton_bound(C)
    if d > bound:
        raise AssertionError("Singleton bound violated")
    return AnalysisReport(
        k=C.k, N=C.N, shape=C.shape.n, weight_distribution=wd,
        rank_lists=sorted(lists, reverse=True), rank_profiles=profiles, d=d,
        singleton_bound=bound, defect=bound - d, is_msrd=d == bound,
        is_one_weight=len(wd) == 1, is_constant_rank_list=len(lists) == 1,
        is_constant_rank_profile=len(profiles) == 1,
        is_nondegenerate=is_nondegenerate_columns(C), projection_dims=projection_dims(C),
        projective_codewords=C.n_projective())


# isometries -------------------------------------------------------------------------
def apply_isometry(C: SumRankCode, a: Sequence[int], A: Sequence, pi: Sequence[int]) -> SumRankCode:
    """Map each codeword x to ``(a_1 x_{pi(1)} A_1 | ... | a_t x_{pi(t)} A_t)``.

    ``pi[i]`` is the (0-based) source block of target block i; it must preserve
    block lengths, the ``a_i`` must be nonzero and the ``A_i`` invertible over F_q.
    """
    T, t = C.tower, C.t
    pi = [int(x) for x in pi]
    if sorted(pi) != list(range(t)):
        raise PreconditionError("pi is not a permutation of the blocks")
    if any(C.shape.n[pi[i]] != C.shape.n[i] for i in range(t)):
        raise PreconditionError("pi must preserve block lengths")
    if len(a) != t or len(A) != t:
        raise PreconditionError("need one scalar and one matrix per block")
    blocks = []
    for i in range(t):
        ai = int(a[i])
        if not 0 < ai < T.Q:
            raise PreconditionError("isometry scalars must be nonzero field elements")
        Ai = np.asarray(A[i], dtype=np.int64)
        n = C.shape.n[i]
        if Ai.shape != (n, n) or (Ai < 0).any() or (Ai >= T.q).any():
            raise PreconditionError(f"A_{i} must be an {n}x{n} matrix over F_q")
        if linalg.rank(T.Fq, Ai) != n:
            raise PreconditionError(f"A_{i} is singular")
        Gi = linalg.matmul(T.F, C.block(pi[i]), Ai)
        blocks.append(T.F.mul(ai, Gi))
    return SumRankCode(T, C.shape, np.concatenate(blocks, axis=1))


def canonicalize(C: SumRankCode) -> SumRankCode:
    """Reorder blocks by non-increasing length (stable), an isometry."""
    order = sorted(range(C.t), key=lambda i: -C.shape.n[i])
    G = np.concatenate([C.block(i) for i in order], axis=1)
    return SumRankCode(C.tower, tuple(C.shape.n[i] for i in order), G)


def same_code(C1: SumRankCode, C2: SumRankCode) -> bool:
    return (C1.tower == C2.tower and C1.shape == C2.shape and C1.k == C2.k
            and np.array_equal(C1.canonical_G(), C2.canonical_G()))


def random_code(tower: FieldTower, k: int, shape: Sequence[int], rng: np.random.Generator,
                nondegenerate: bool = False, max_tries: int = 10_000) -> SumRankCode:
    shape = BlockShape(tuple(shape))
    for _ in range(max_tries):
        G = rng.integers(0, tower.Q, size=(k, shape.N))
        if linalg.rank(tower.F, G) != k:
            continue
        C = SumRankCode(tower, shape, G)
        if nondegenerate and not is_nondegenerate_columns(C):
            continue
        return C
    raise PreconditionError("no suitable random code found")


# the constant rank-list classification ------------------------------------------------
def check_constant_rank_list_structure(C: SumRankCode, cap: Optional[int] = None) -> dict:
    """Check the structure forced on nondegenerate constant rank-list codes.

    Bullets: (1) every projection with k_i >= 2 is a one-weight
    [m k_i, k_i, m] code; (2) every projection with k_i = 1 is an
    [n_i, 1, n_i] code; (3) no nonzero codeword has a zero block. All three are
    evaluated even when the preconditions fail, and the precondition status is
    reported separately.
    """
    report = classify_flags(C, cap)
    m = C.tower.m
    per_block = []
    b1 = b2 = True
    for i in range(C.t):
        ki = report.projection_dims[i]
        ni = C.shape.n[i]
        entry = {"block": i, "k_i": ki, "n_i": ni}
        if ki == 0:
            entry["ok"] = False
            b1 = b2 = False
        else:
            P = classify_flags(projection(C, i), cap)
            entry["d_i"] = P.d
            entry["one_weight"] = P.is_one_weight
            if ki >= 2:
                ok = ni == m * ki and P.is_one_weight and P.d == m
                b1 &= ok
            else:
                ok = P.d == ni
                b2 &= ok
            entry["ok"] = ok
        per_block.append(entry)
    b3 = all(0 not in r for r in report.rank_lists)
    pre = {"nondegenerate": report.is_nondegenerate,
           "constant_rank_list": report.is_constant_rank_list}
    return {"preconditions": pre, "preconditions_hold": all(pre.values()),
            "bullet_projections_one_weight": b1, "bullet_dimension_one_projections": b2,
            "bullet_no_zero_block": b3, "all_pass": b1 and b2 and b3, "blocks": per_block}
