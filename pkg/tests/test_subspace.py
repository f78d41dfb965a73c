import itertools

import numpy as np
import pytest

from sumrank import linalg
from sumrank.errors import FieldError, PreconditionError
from sumrank.gf import ExpansionBasis, build_tower, expand
from sumrank.subspace import (FqSubspace, all_vectors, count_subspaces, dual_weight_identity_check,
                              fqm_line, fqm_span, grassmann_check, hyperplane, is_fqm_linear,
                              iter_fqm_subspaces, iter_subspaces, join, meet, perp_prime,
                              random_subspace, rank_q, sigma_perp, span)


def _vecset(U):
    return {tuple(r) for r in U.elements().tolist()}


# span / canonical form ---------------------------------------------------------------
def test_span_examples(F4):
    Z = span(F4, np.zeros((0, 2), dtype=int), 2)
    assert Z.dim == 0
    assert span(F4, [[1, 0], [0, 1]]).dim == 2
    assert span(F4, [[1, 0], [0, 1], [1, 0], [1, 1]]).dim == 2
    assert span(F4, [[1, 0], [0, 1], [1, 0]]) == span(F4, [[0, 1], [1, 0]])


def test_canonicality(rng):
    T = build_tower(3, 1, 2)
    for _ in range(30):
        U = random_subspace(T, 2, int(rng.integers(0, 5)), rng)
        again = FqSubspace.from_rows(T, U.basis, 2)
        assert np.array_equal(again.basis, U.basis)
        mixed = rng.integers(0, 3, size=(4, U.dim)) @ U.basis % 3 if U.dim else np.zeros((0, 4), int)
        assert FqSubspace.from_rows(T, np.concatenate([mixed, U.basis]), 2) == U
        assert hash(again) == hash(U)


def test_ambient_mismatch(F4, F9):
    with pytest.raises(PreconditionError):
        meet(span(F4, [[1, 0]]), span(F9, [[1, 0]]))
    with pytest.raises(PreconditionError):
        join(span(F4, [[1, 0]]), span(F4, [[1, 0, 0]]))
    with pytest.raises(FieldError):
        span(F4, [[5, 0]])


# meet / join ---------------------------------------------------------------------------
def test_meet_examples(F4):
    U = span(F4, [[1, 0]])
    assert meet(U, U) == U
    assert meet(U, span(F4, [[2, 0]])).dim == 0


def test_meet_join_match_vector_sets(rng):
    for T in (build_tower(2, 1, 2), build_tower(3, 1, 2), build_tower(2, 2, 2)):
        for _ in range(25):
            U = random_subspace(T, 2, int(rng.integers(0, 5)), rng) if T.q < 4 else \
                random_subspace(T, 2, int(rng.integers(0, 3)), rng)
            V = random_subspace(T, 2, int(rng.integers(0, 5)), rng) if T.q < 4 else \
                random_subspace(T, 2, int(rng.integers(0, 3)), rng)
            M = meet(U, V)
            assert _vecset(M) == _vecset(U) & _vecset(V)
            J = join(U, V)
            assert _vecset(U) | _vecset(V) <= _vecset(J)
            assert grassmann_check(U, V)


def test_join_complementary(rng):
    T = build_tower(2, 1, 3)
    for _ in range(10):
        H = random_subspace(T, 2, 5, rng)
        while True:
            v = random_subspace(T, 2, 1, rng)
            if meet(H, v).dim == 0:
                break
        assert join(H, v) == FqSubspace.full(T, 2)


def test_containment(F4):
    U = span(F4, [[1, 0]])
    L = fqm_line(F4, [1, 0])
    assert U <= L and not L <= U


# rank_q --------------------------------------------------------------------------------
def test_rank_q_examples(F4, rng):
    assert rank_q(F4, [0, 0, 0]) == 0
    assert rank_q(F4, [1, 2]) == 2
    assert rank_q(F4, [1, 1]) == 1
    T = build_tower(3, 1, 3)
    for _ in range(30):
        v = rng.integers(0, T.Q, 4)
        lam = int(rng.integers(1, T.Q))
        assert rank_q(T, T.F.mul(lam, v)) == rank_q(T, v)


def test_rank_q_basis_invariant(rng):
    T = build_tower(2, 1, 3)
    B = ExpansionBasis(T, [3, 6, 7])
    for _ in range(30):
        v = rng.integers(0, T.Q, 4)
        assert linalg.rank(T.Fq, expand(T, v, B)) == rank_q(T, v)


def test_rank_q_equals_span_dimension(rng):
    T = build_tower(3, 1, 2)
    for _ in range(30):
        v = rng.integers(0, T.Q, 3)
        # brute-force span of the entries inside F_9 viewed over F_3
        vals = {0}
        for c in itertools.product(range(3), repeat=3):
            s = 0
            for a, x in zip(c, v):
                s = int(T.F.add(s, T.F.mul(a, int(x))))
            vals.add(s)
        assert len(vals) == 3 ** rank_q(T, v)


# F_{q^m}-lines ---------------------------------------------------------------------------
def test_fqm_line_examples(F4, rng):
    L = fqm_line(F4, [1, 0])
    assert {tuple(v) for v in L.element_vectors().tolist()} == {(0, 0), (1, 0), (2, 0), (3, 0)}
    T = build_tower(3, 1, 2)
    for _ in range(20):
        x = rng.integers(0, T.Q, 3)
        if not x.any():
            continue
        lam = int(rng.integers(1, T.Q))
        assert fqm_line(T, x) == fqm_line(T, T.F.mul(lam, x))
        assert fqm_line(T, x).dim == T.m
        assert is_fqm_linear(fqm_line(T, x))
    with pytest.raises(PreconditionError):
        fqm_line(F4, [0, 0])


def test_hyperplane_is_kernel(F9):
    for v in ([1, 0], [1, 4], [0, 1]):
        H = hyperplane(F9, v)
        assert H.dim == F9.m
        for x in H.element_vectors():
            assert int(F9.F.sum(F9.F.mul(np.array(v), x))) == 0


# trace duality ---------------------------------------------------------------------------
def _perp_brute(U):
    """Every x with Tr(u . x) = 0 for all basis vectors u, by direct trace evaluation."""
    T = U.tower
    xs = all_vectors(T, U.k)
    ok = np.ones(len(xs), dtype=bool)
    for u in U.vectors():
        prods = T.F.sum(T.F.mul(xs, u[None, :]), axis=1)
        ok &= T.trace(prods) == 0
    return {tuple(r) for r in T.coords(xs[ok]).reshape(ok.sum(), -1).tolist()}


def test_perp_prime_examples(F4, rng):
    assert perp_prime(FqSubspace.zero(F4, 2)) == FqSubspace.full(F4, 2)
    for _ in range(5):
        assert perp_prime(random_subspace(F4, 2, 1, rng)).dim == 3


def test_perp_prime_matches_brute_force(rng):
    for T in (build_tower(2, 1, 2), build_tower(3, 1, 2), build_tower(2, 1, 3)):
        for _ in range(10):
            U = random_subspace(T, 2, int(rng.integers(0, T.m * 2 + 1)), rng)
            assert _vecset(perp_prime(U)) == _perp_brute(U)


def test_duality_exhaustive_f4(F4):
    Us = list(iter_subspaces(F4, 2))
    Ws = list(iter_fqm_subspaces(F4, 2))
    assert len(Us) == 67 == count_subspaces(F4, 2)
    assert len(Ws) == 7
    perps = {U: perp_prime(U) for U in Us}
    for U in Us:
        assert U.dim + perps[U].dim == 4
        assert perp_prime(perps[U]) == U
        for V in Us:
            if U <= V:
                assert perps[V] <= perps[U]
        for W in Ws:
            assert dual_weight_identity_check(U, W)
    for W in Ws:
        assert is_fqm_linear(W)
        assert sigma_perp(W) == perps[W]


def test_inclusion_reversal_sampled_mk6(rng):
    T = build_tower(2, 1, 3)
    for _ in range(40):
        U = random_subspace(T, 2, int(rng.integers(0, 4)), rng)
        V = join(U, random_subspace(T, 2, int(rng.integers(0, 3)), rng))
        assert U <= V
        assert perp_prime(V) <= perp_prime(U)


def test_dual_weight_sampled_q3(rng):
    T = build_tower(3, 1, 2)
    Ws = list(iter_fqm_subspaces(T, 2))
    for _ in range(40):
        U = random_subspace(T, 2, int(rng.integers(0, 5)), rng)
        W = Ws[int(rng.integers(0, len(Ws)))]
        assert dual_weight_identity_check(U, W)


def test_dual_weight_rejects_non_fqm(F4):
    with pytest.raises(PreconditionError):
        dual_weight_identity_check(FqSubspace.zero(F4, 2), span(F4, [[1, 0]]))


def test_sigma_perp_q3_lines():
    T = build_tower(3, 1, 2)
    for W in iter_fqm_subspaces(T, 2):
        assert sigma_perp(W) == perp_prime(W)


def test_fqm_span_smallest(rng):
    T = build_tower(2, 1, 2)
    for _ in range(10):
        U = random_subspace(T, 2, int(rng.integers(0, 5)), rng)
        S = fqm_span(U)
        assert U <= S and is_fqm_linear(S)
        for W in iter_fqm_subspaces(T, 2):
            if U <= W:
                assert S <= W


def test_roundtrip_dict(rng):
    T = build_tower(2, 2, 2)
    U = random_subspace(T, 2, 2, rng)
    assert FqSubspace.from_dict(T, U.to_dict()) == U
    bad = U.to_dict()
    bad["dim"] = 3
    with pytest.raises(FieldError):
        FqSubspace.from_dict(T, bad)
