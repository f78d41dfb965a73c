"""Deterministic builders for the explicit codes and systems.

Free choices (complements and subspaces of lines) take the first valid
candidate in canonical subspace order; a ``seed`` switches to uniformly random
valid candidates drawn from a seeded generator instead.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import linalg
from .code import SumRankCode
from .errors import InvariantViolation, PreconditionError
from .geometry import System, enumerate_points
from .gf import FieldTower, tower_for
from .subspace import (FqSubspace, fqm_line, iter_subspaces, join, meet, perp_prime,
                       random_subspace, span)


@dataclass(frozen=True)
class ConstructionParams:
    name: str
    q: int
    m: int
    k: Optional[int] = None
    e: Optional[int] = None
    r: Optional[int] = None
    s: Optional[int] = None
    tprime: Optional[int] = None
    choice_seed: Optional[int] = None
    extra: dict = field(default_factory=dict)


def _tower(q: int, m: int, tower: Optional[FieldTower]) -> FieldTower:
    if tower is None:
        return tower_for(q, m)
    if (tower.q, tower.m) != (q, m):
        raise PreconditionError("tower does not match (q, m)")
    return tower


def simplex_generator(tower: FieldTower, k: int) -> np.ndarray:
    """``(I_k | a I_k | ... | a^(m-1) I_k)`` for the primitive element a."""
    if k < 1:
        raise PreconditionError("k must be at least 1")
    I = np.eye(k, dtype=np.int64)
    return np.concatenate([tower.F.mul(int(tower.F.pow(tower.alpha, j)), I)
                           for j in range(tower.m)], axis=1)


def simplex_rank(q: int, m: int, k: int, tower: Optional[FieldTower] = None) -> SumRankCode:
    T = _tower(q, m, tower)
    return SumRankCode(T, (m * k,), simplex_generator(T, k))


def block_simplex(q: int, m: int, k: int, s: int, literal: bool = False,
                  tower: Optional[FieldTower] = None) -> SumRankCode:
    """s blocks each carrying a simplex code.

    By default every block sees the same k-dimensional message, G = (S|...|S),
    which yields the k-dimensional constant rank-list code. ``literal=True``
    builds the block-diagonal sk x smk matrix instead.
    """
    if s < 1:
        raise PreconditionError("s must be at least 1")
    T = _tower(q, m, tower)
    S = simplex_generator(T, k)
    if literal:
        G = np.zeros((s * k, s * m * k), dtype=np.int64)
        for i in range(s):
            G[i * k:(i + 1) * k, i * m * k:(i + 1) * m * k] = S
    else:
        G = np.concatenate([S] * s, axis=1)
    return SumRankCode(T, (m * k,) * s, G)


def _choose(candidates, seed_rng, sampler, valid, what: str):
    if seed_rng is None:
        for c in candidates:
            if valid(c):
                return c
        raise InvariantViolation(f"no valid {what}")
    for _ in range(100_000):
        c = sampler(seed_rng)
        if valid(c):
            return c
    raise InvariantViolation(f"random search for a {what} failed")


def dim2_profile(q: int, m: int, e: int, choice_seed: Optional[int] = None,
                 tower: Optional[FieldTower] = None) -> System:
    """U_i = <x_i>_{F_{q^m}} ⊕ S_i over every point x_i of PG(1, q^m), dim S_i = e."""
    if not 0 <= e < m:
        raise PreconditionError("need 0 <= e < m")
    T = _tower(q, m, tower)
    rng = None if choice_seed is None else np.random.default_rng(choice_seed)
    subs = []
    for x in enumerate_points(T, 2):
        line = fqm_line(T, x)
        Se = _choose(iter_subspaces(T, 2, e), rng, lambda g: random_subspace(T, 2, e, g),
                     lambda S: meet(S, line).dim == 0, "complement")
        U = join(line, Se)
        if U.dim != m + e:
            raise InvariantViolation("direct sum has the wrong dimension")
        subs.append(U)
    return System(T, 2, tuple(subs))


def repeat_code(C: SumRankCode, tprime: int) -> SumRankCode:
    """Codewords (c, ..., c) with t' copies."""
    if tprime < 1:
        raise PreconditionError("t' must be at least 1")
    return SumRankCode(C.tower, C.shape.n * tprime, np.concatenate([C.G] * tprime, axis=1))


def repeat_system(S: System, tprime: int) -> System:
    if tprime < 1:
        raise PreconditionError("t' must be at least 1")
    return System(S.tower, S.k, S.subspaces * tprime)


def dual_profile(q: int, m: int, k: int, r: int, choice_seed: Optional[int] = None,
                 tower: Optional[FieldTower] = None) -> System:
    """U_i = (S^i)^{perp'} with S^i an (m-r)-dim F_q-subspace of <x_i>, one per point."""
    if not 0 <= r < m:
        raise PreconditionError("need 0 <= r < m")
    if k < 2:
        raise PreconditionError("need k >= 2")
    T = _tower(q, m, tower)
    rng = None if choice_seed is None else np.random.default_rng(choice_seed)
    subs = []
    for x in enumerate_points(T, k):
        line = fqm_line(T, x)
        if rng is None:
            S = FqSubspace.from_rows(T, line.basis[:m - r], k)
        else:
            # a random (m-r)-subspace of the line: random coefficient rows
            while True:
                coeff = rng.integers(0, T.q, size=(m - r, m))
                if linalg.rank(T.Fq, coeff) == m - r:
                    break
            S = FqSubspace.from_rows(T, linalg.matmul(T.Fq, coeff, line.basis), k)
        U = perp_prime(S)
        if U.dim != m * k - m + r:
            raise InvariantViolation("dual has the wrong dimension")
        subs.append(U)
    return System(T, k, tuple(subs))


def dim2_point_partition(q: int, m: int, tower: Optional[FieldTower] = None) -> System:
    """Rank-one U_i, one per point of PG(1, q^m)."""
    T = _tower(q, m, tower)
    return System(T, 2, tuple(span(T, [x], 2) for x in enumerate_points(T, 2)))


CONSTRUCTIONS = ("simplex", "block-simplex", "dim2-profile", "repeat", "dual-profile",
                 "point-partition")
