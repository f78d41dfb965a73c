import itertools

import numpy as np
import pytest

from sumrank import linalg
from sumrank.gf import build_tower


def _span_brute(F, M):
    """All F-combinations of the rows of M, as a set of tuples."""
    M = np.asarray(M)
    out = set()
    for coeffs in itertools.product(range(F.order), repeat=len(M)):
        v = np.zeros(M.shape[1], dtype=np.int64)
        for c, row in zip(coeffs, M):
            v = F.add(v, F.mul(c, row))
        out.add(tuple(v.tolist()))
    return out


@pytest.mark.parametrize("q", [2, 3, 4, 5])
def test_rref_preserves_row_space(q, rng):
    F = build_tower(*{2: (2, 1), 3: (3, 1), 4: (2, 2), 5: (5, 1)}[q], 1).Fq
    for _ in range(30):
        A = rng.integers(0, F.order, size=(rng.integers(1, 4), rng.integers(1, 5)))
        R, piv = linalg.rref(F, A)
        assert _span_brute(F, A) == _span_brute(F, R) if len(R) else True
        assert len(_span_brute(F, A)) == F.order ** len(R)
        for i, p in enumerate(piv):
            assert R[i, p] == 1
            assert (np.delete(R[:, p], i) == 0).all()
        assert piv == sorted(piv)


def test_nullspace_and_inverse(rng):
    F = build_tower(3, 1, 2).F
    for _ in range(30):
        A = rng.integers(0, F.order, size=(3, 5))
        K = linalg.nullspace(F, A)
        assert len(K) + linalg.rank(F, A) == 5
        if len(K):
            assert (linalg.matmul(F, A, K.T) == 0).all()
        S = rng.integers(0, F.order, size=(3, 3))
        if linalg.rank(F, S) == 3:
            inv = linalg.inverse(F, S)
            assert np.array_equal(linalg.matmul(F, S, inv), np.eye(3, dtype=np.int64))
        else:
            with pytest.raises(ValueError):
                linalg.inverse(F, S)


@pytest.mark.parametrize("order", [(2, 1), (3, 1), (2, 2)])
def test_batched_rank_matches_rank(order, rng):
    F = build_tower(order[0], order[1], 1).Fq
    mats = rng.integers(0, F.order, size=(200, 3, 4))
    mats[::7] = 0
    mats[1::5, 1] = mats[1::5, 0]
    expected = [linalg.rank(F, M) for M in mats]
    assert linalg.batched_rank(F, mats).tolist() == expected
    assert linalg.batched_rank(F, mats.transpose(0, 2, 1)).tolist() == expected


def test_gaussian_binomial_counts_rref():
    for order in (2, 3, 4):
        for n in range(0, 4):
            for r in range(0, n + 1):
                mats = list(linalg.iter_rref(order, r, n))
                assert len(mats) == linalg.gaussian_binomial(n, r, order)
                assert len({m.tobytes() for m in mats}) == len(mats)
    assert linalg.gaussian_binomial(4, 5, 2) == 0
    assert sum(linalg.gaussian_binomial(4, r, 2) for r in range(5)) == 67


def test_iter_rref_outputs_are_rref():
    F = build_tower(2, 1, 2).F
    for M in linalg.iter_rref(4, 2, 3):
        R, _ = linalg.rref(F, M)
        assert np.array_equal(R, M)


def test_shape_errors():
    F = build_tower(2, 1, 1).F
    with pytest.raises(ValueError):
        linalg.matmul(F, np.zeros((2, 3)), np.zeros((2, 3)))
    with pytest.raises(ValueError):
        linalg.as_matrix([1, 2, 3])
    with pytest.raises(ValueError):
        linalg.inverse(F, np.zeros((2, 3)))
