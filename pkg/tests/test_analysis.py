from fractions import Fraction

import pytest
import sympy as sp

from sumrank import linalg
from sumrank.analysis import (dim3_bounds_check, dim3_coefficients, dim3_predict, exact_sqrt,
                              exhaustive_search, m2_nonexistence, parse_predicate,
                              profile_identity_check, q2_delta_formula, q2_nonexistence,
                              rational_to_json, search_space_size, sign_surd, sqrt_bracket)
from sumrank.errors import CapExceeded, PreconditionError
from sumrank.gf import build_tower


def _sympy_root(q, m):
    """Positive root of the dimension-3 quadratic, symbolically, from the displayed formulas."""
    q, m = sp.Integer(q), sp.Integer(m)
    A = ((q**m - 1) / (q - 1))**2 / 2
    B = (q**m - 1) * (4 * q**(m - 1) - q**(m + 1) - q**m + q - 3) / (2 * (q - 1)**2 * (q + 1))
    C = -(q**(2 * m) + q**m + 1)
    return (-B + sp.sqrt(B**2 - 4 * A * C)) / (2 * A)


# profile identities ---------------------------------------------------------------------
def test_profile_identity_example():
    r = profile_identity_check(2, 3, 2, 2, 5, (2, 2, 2, 2, 1))
    assert r["ell"] == 7 and r["ell_integral"] and r["identity_holds"]
    assert r["lhs"] == r["rhs"] == 420


@pytest.mark.parametrize("tp", [1, 2, 3])
def test_profile_identity_repetition_family(tp):
    r = profile_identity_check(2, 3, 2, 2, 5 * tp, (2, 2, 2, 2) * tp + (1,) * tp)
    assert r["ell"] == 7 * tp and r["identity_holds"]
    assert r["lhs"] == 420 * tp


def test_profile_identity_failures():
    assert not profile_identity_check(2, 3, 2, 2, 5, (0,) * 5)["identity_holds"]
    assert not profile_identity_check(2, 3, 2, 2, 5, (2, 2, 2, 2, 2))["identity_holds"]
    with pytest.raises(PreconditionError):
        profile_identity_check(2, 3, 2, 2, 5, (2, 2))


# square roots ---------------------------------------------------------------------------
def test_exact_sqrt():
    assert exact_sqrt(Fraction(49, 36)) == Fraction(7, 6)
    assert exact_sqrt(Fraction(2)) is None
    assert exact_sqrt(Fraction(-4)) is None


@pytest.mark.parametrize("x", [Fraction(2), Fraction(5337), Fraction(7, 3), Fraction(10**40 + 1, 17)])
def test_sqrt_bracket_against_sympy(x):
    lo, hi = sqrt_bracket(x)
    assert lo * lo <= x <= hi * hi
    assert hi - lo <= Fraction(1, 2**64 * x.denominator)
    s = sp.sqrt(sp.Rational(x.numerator, x.denominator))
    assert sp.Rational(lo.numerator, lo.denominator) <= s <= sp.Rational(hi.numerator, hi.denominator)


def test_sign_surd_sweep():
    vals = [Fraction(v) for v in (-3, -1, 0, 1, 2)] + [Fraction(1, 2), Fraction(-7, 3)]
    for a in vals:
        for b in vals:
            for r in (Fraction(0), Fraction(2), Fraction(4), Fraction(9, 4)):
                exact = sp.Rational(a.numerator, a.denominator) + \
                    sp.Rational(b.numerator, b.denominator) * sp.sqrt(sp.Rational(r.numerator, r.denominator))
                assert sign_surd(a, b, r) == int(sp.sign(sp.nsimplify(exact)))


# dimension 3 ----------------------------------------------------------------------------
def test_dim3_q2_m3():
    P = dim3_predict(2, 3)
    assert P.Delta == Fraction(49, 36) * 5337
    assert P.t_exact is None
    assert P.t_upper < 2
    assert P.decimal(3) == "1.953"
    # 9 + sqrt(5337) < 84 is the same statement
    assert sign_surd(Fraction(75), Fraction(-1), Fraction(5337)) > 0
    assert P.root_lt(2)


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7, 16, 17])
@pytest.mark.parametrize("m", [1, 2, 3, 4])
def test_dim3_bracket_against_sympy(q, m):
    P = dim3_predict(q, m)
    assert P.A > 0 and P.C < 0 and P.Delta > 0
    A, B, C = dim3_coefficients(q, m)
    assert (A, B, C) == (P.A, P.B, P.C)
    t = _sympy_root(q, m)
    lo = sp.Rational(P.t_lower.numerator, P.t_lower.denominator)
    hi = sp.Rational(P.t_upper.numerator, P.t_upper.denominator)
    assert sp.simplify(lo - t) <= 0 <= sp.simplify(hi - t)
    assert P.t_upper - P.t_lower < Fraction(1, 10**15)
    if P.t_exact is not None:
        assert P.f(Fraction(P.t_exact)) == 0
    # exact comparison helpers
    for x in (Fraction(1), Fraction(2), Fraction(q), Fraction(q * q)):
        assert P.root_le(x) == bool(t <= sp.Rational(x.numerator, x.denominator))


def test_q2_coefficient_closed_forms():
    for m in range(1, 12):
        P = dim3_predict(2, m)
        assert P.B == -Fraction(2**(2 * m) - 1, 6)
        assert P.Delta == q2_delta_formula(m)
        assert P.notes


def test_q2_nonexistence_range():
    for m in range(3, 11):
        r = q2_nonexistence(m)
        assert r["root_below_2"] and r["in_range"] and r["delta_matches_closed_form"]
        assert r["verdict"] == "no integral t >= 2"
    r = q2_nonexistence(1)
    assert not r["in_range"] and not r["root_below_2"]
    # the limit (1 + sqrt 73)/6 lies below the m=10 root
    P = dim3_predict(2, 10)
    assert P.root_le_surd(Fraction(1, 6), Fraction(1, 6), 73) is False
    assert abs(float(P.t_lower) - (1 + 73**0.5) / 6) < 5e-3  # convergence is ~2^-m


@pytest.mark.parametrize("q,m", [(16, 3), (17, 3), (16, 4), (17, 4)])
def test_dim3_bounds(q, m):
    r = dim3_bounds_check(q, m)
    assert r["all_hold"], r["checks"]
    P = r["prediction"]
    assert P.t_lower >= q and P.t_upper**2 <= q**3


def test_dim3_bounds_precondition():
    with pytest.raises(PreconditionError):
        dim3_bounds_check(2, 3)
    with pytest.raises(PreconditionError):
        dim3_bounds_check(16, 2)
    with pytest.raises(PreconditionError):
        dim3_predict(1, 2)


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7, 8, 9])
def test_m2_nonexistence(q):
    r = m2_nonexistence(q)
    assert r["contradiction"]
    t = _sympy_root(q, 2)
    assert bool(t**2 <= 2 * q * q) == r["t_squared_le_2q2"]
    assert bool(t * (q + 1) < 2 * q * q + 2 * q + 2) == r["t_times_q_plus_1_lt_bound"]


def test_m2_closed_form_delta():
    # at m = 2: A = (q+1)^2/2, B = -(q-1)(q+3)/2, C = -(q^4 + q^2 + 1)
    for q in (2, 3, 4, 5, 7, 8, 9):
        A, B, C = dim3_coefficients(q, 2)
        assert A == Fraction((q + 1)**2, 2)
        assert B == Fraction(-(q - 1) * (q + 3), 2)
        assert C == -(q**4 + q**2 + 1)
        Delta = dim3_predict(q, 2).Delta
        assert Delta == Fraction((q - 1)**2 * (q + 3)**2, 4) + 2 * (q + 1)**2 * (q**4 + q**2 + 1)


def test_rational_json():
    assert rational_to_json(Fraction(3, 4)) == {"num": 3, "den": 4}
    assert rational_to_json(Fraction(2**60, 3)) == {"num": str(2**60), "den": 3}


# search ---------------------------------------------------------------------------------
def test_search_n3():
    T = build_tower(2, 1, 2)
    all_codes = exhaustive_search(T, 2, (3,))
    assert len(all_codes) == 21 == search_space_size(T, 2, (3,))
    assert exhaustive_search(T, 2, (3,), "nondegenerate+one-weight") == []


def test_search_n4():
    T = build_tower(2, 1, 2)
    found = exhaustive_search(T, 2, (4,), "nondegenerate+one-weight")
    assert found
    assert all(rep.weight_distribution == {2: 5} for _, rep in found)
    assert len(exhaustive_search(T, 2, (4,))) == linalg.gaussian_binomial(4, 2, 4) == 357


@pytest.mark.parametrize("shape", [(1, 1), (2, 1), (1, 1, 1)])
def test_search_counts(shape):
    T = build_tower(2, 1, 2)
    assert len(exhaustive_search(T, 2, shape)) == linalg.gaussian_binomial(sum(shape), 2, 4)


def test_search_one_weight_msrd_matches_partition_check():
    from sumrank.geometry import dim2_msrd_partition_check, system_from_code
    T = build_tower(2, 1, 2)
    for shape in [(1, 1, 1), (1, 1, 1, 1), (2, 1), (2, 1, 1)]:
        for C, rep in exhaustive_search(T, 2, shape, "nondegenerate"):
            expect = rep.is_one_weight and rep.is_msrd
            assert dim2_msrd_partition_check(system_from_code(C)) == expect


def test_search_cap_and_predicates():
    T = build_tower(2, 1, 2)
    with pytest.raises(CapExceeded):
        exhaustive_search(T, 2, (4,), cap=100)
    with pytest.raises(PreconditionError):
        parse_predicate("one-weight+bogus")
    assert parse_predicate(None) == []
