"""Exact parameter predictors and exhaustive micro-search.

All arithmetic uses :class:`fractions.Fraction` and integer square roots.
Comparisons of the positive root t of ``A x^2 + B x + C`` against a bound X
never evaluate t: since A > 0 > C the roots have opposite signs, so for X >= 0
we have ``t <= X`` iff ``f(X) >= 0``. Irrational X of the form ``a + b sqrt(r)``
are handled by an exact sign test.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import linalg
from .code import SumRankCode, classify_flags
from .errors import PreconditionError, check_cap, resolve_cap
from .gf import FieldTower

BRACKET_BITS = 64


def rational_to_json(x: Fraction) -> dict:
    x = Fraction(x)
    return {"num": _bigint(x.numerator), "den": _bigint(x.denominator)}


def _bigint(n: int):
    return n if abs(n) <= 2**53 else str(n)


def exact_sqrt(x: Fraction) -> Optional[Fraction]:
    """Square root of a nonnegative rational if it is rational, else None."""
    if x < 0:
        return None
    a, b = x.numerator, x.denominator
    ra, rb = math.isqrt(a), math.isqrt(b)
    if ra * ra == a and rb * rb == b:
        return Fraction(ra, rb)
    return None


def sqrt_bracket(x: Fraction, bits: int = BRACKET_BITS) -> Tuple[Fraction, Fraction]:
    """Rationals lo <= sqrt(x) <= hi with hi - lo <= 2^-bits / den(x)."""
    if x < 0:
        raise ValueError("square root of a negative rational")
    a, b = x.numerator, x.denominator
    S = 1 << bits
    # sqrt(a/b) = sqrt(a b) / b
    r = math.isqrt(a * b * S * S)
    lo = Fraction(r, S * b)
    hi = lo if r * r == a * b * S * S else Fraction(r + 1, S * b)
    return lo, hi


def sign_surd(a: Fraction, b: Fraction, r: Fraction) -> int:
    """Sign of ``a + b sqrt(r)`` for rational a, b and r >= 0."""
    if r < 0:
        raise ValueError("negative radicand")
    sa = (a > 0) - (a < 0)
    sb = (b > 0) - (b < 0) if r else 0
    if sb == 0:
        return sa
    if sa == 0 or sa == sb:
        return sb
    # opposite signs: compare a^2 with b^2 r
    diff = a * a - b * b * r
    return sa if diff > 0 else (0 if diff == 0 else sb)


# profile identities -------------------------------------------------------------------
def profile_identity_check(q: int, n: int, m: int, k: int, t: int, profile: Sequence[int]) -> dict:
    """Integrality of ell and the counting identity for constant rank-profile codes."""
    profile = [int(x) for x in profile]
    if len(profile) != t:
        raise PreconditionError(f"profile has length {len(profile)}, expected t = {t}")
    ell = Fraction(t * (q**n - 1) * (q**m - 1), (q - 1) * (q**(k * m) - 1))
    lhs = t * q**(m * (k - 1)) * (q**n - 1) * (q**m - 1)
    rhs = (q**(k * m) - 1) * (t * q**n - sum(Fraction(q**n, q**mu) for mu in profile))
    return {"ell": ell, "ell_integral": ell.denominator == 1, "identity_holds": lhs == rhs,
            "lhs": Fraction(lhs), "rhs": Fraction(rhs)}


# the dimension-3 quadratic -------------------------------------------------------------
@dataclass
class Dim3Prediction:
    q: int
    m: int
    A: Fraction
    B: Fraction
    C: Fraction
    Delta: Fraction
    t_exact: Optional[int]
    t_lower: Fraction
    t_upper: Fraction
    notes: List[str] = field(default_factory=list)

    def f(self, x: Fraction) -> Fraction:
        return self.A * x * x + self.B * x + self.C

    def root_le(self, x) -> bool:
        """Exact test t <= x for rational x >= 0."""
        return self.f(Fraction(x)) >= 0

    def root_lt(self, x) -> bool:
        return self.f(Fraction(x)) > 0

    def root_le_surd(self, a, b, r) -> bool:
        """Exact test t <= a + b sqrt(r), assuming the right side is >= 0."""
        a, b, r = Fraction(a), Fraction(b), Fraction(r)
        # f(a + b s) with s^2 = r: A(a^2 + b^2 r) + B a + C + (2 A a b + B b) s
        const = self.A * (a * a + b * b * r) + self.B * a + self.C
        coef = 2 * self.A * a * b + self.B * b
        return sign_surd(const, coef, r) >= 0

    def decimal(self, digits: int = 6) -> str:
        """Decimal digits of the lower bracket end (display only)."""
        scaled = self.t_lower * 10**digits
        n = scaled.numerator // scaled.denominator
        return f"{n // 10**digits}.{n % 10**digits:0{digits}d}"

    def to_dict(self) -> dict:
        return {"q": self.q, "m": self.m, "A": rational_to_json(self.A), "B": rational_to_json(self.B),
                "C": rational_to_json(self.C), "Delta": rational_to_json(self.Delta),
                "t_exact": self.t_exact,
                "t_real_bounds": [rational_to_json(self.t_lower), rational_to_json(self.t_upper)],
                "t_decimal": self.decimal(), "notes": list(self.notes)}


def dim3_coefficients(q: int, m: int) -> Tuple[Fraction, Fraction, Fraction]:
    qm = q**m
    A = Fraction(qm - 1, q - 1) ** 2 / 2
    B = Fraction((qm - 1) * (4 * q**(m - 1) - q**(m + 1) - qm + q - 3), 2 * (q - 1)**2 * (q + 1))
    C = Fraction(-(q**(2 * m) + qm + 1))
    return A, B, C


def dim3_predict(q: int, m: int, bits: int = BRACKET_BITS) -> Dim3Prediction:
    if q < 2 or m < 1:
        raise PreconditionError("need q >= 2 and m >= 1")
    A, B, C = dim3_coefficients(q, m)
    Delta = B * B - 4 * A * C
    if not (A > 0 and C < 0 and Delta > 0):
        raise AssertionError("coefficient signs violated")
    root = exact_sqrt(Delta)
    t_exact = None
    if root is not None:
        t = (-B + root) / (2 * A)
        if t.denominator == 1 and t > 0:
            t_exact = int(t)
            assert A * t * t + B * t + C == 0
        lo = hi = t
    else:
        slo, shi = sqrt_bracket(Delta, bits)
        lo, hi = (-B + slo) / (2 * A), (-B + shi) / (2 * A)
    notes = []
    if q == 2:
        notes.append("q=2: B = -(2^(2m)-1)/6 from the general formula; the squared form "
                     "-(2^(2m)-1)^2/6 is inconsistent with the stated discriminant")
    return Dim3Prediction(q, m, A, B, C, Delta, t_exact, lo, hi, notes)


def q2_delta_formula(m: int) -> Fraction:
    """The closed form of the discriminant at q = 2."""
    x = 2**m
    return Fraction((x - 1)**2, 36) * (73 * x * x + 37 * 2 * x + 73)


def dim3_bounds_check(q: int, m: int) -> dict:
    """Exact check of the bounds on -B and Delta and of q <= t <= q^(3/2) (q >= 16, m >= 3)."""
    if q < 16 or m < 3:
        raise PreconditionError("bounds need q >= 16 and m >= 3")
    P = dim3_predict(q, m)
    qm = q**m
    den = 2 * (q - 1)**2 * (q + 1)
    negB = -P.B
    dden = (q - 1)**4 * (q + 1)**2
    checks = {
        "negB_lower": Fraction(q**(m + 1) * (qm - 1), den) <= negB,
        "negB_upper": negB <= Fraction(q**(m + 2) * (qm - 1), den),
        "Delta_lower": Fraction(7 * q**(2 * m + 4) * (qm - 1)**2, 4 * dden) <= P.Delta,
        "Delta_upper": P.Delta <= Fraction(q**(2 * m + 5) * (qm - 1)**2, 8 * dden),
        "t_ge_q": not P.root_lt(q),
        # t <= q^(3/2) = q sqrt(q)
        "t_le_q_three_halves": P.root_le_surd(0, q, q),
    }
    out = {"q": q, "m": m, "checks": checks, "all_hold": all(checks.values()),
           "prediction": P}
    return out


def q2_nonexistence(m: int) -> dict:
    """At q = 2: is the positive root strictly below 2?"""
    if m < 1:
        raise PreconditionError("need m >= 1")
    P = dim3_predict(2, m)
    below = P.root_lt(2)
    in_range = m >= 3
    if in_range and not below:
        raise AssertionError(f"root not below 2 at m={m}")
    if below:
        verdict = "no integral t >= 2"
    else:
        verdict = "root not below 2; outside the m >= 3 range of the argument"
    return {"m": m, "root_below_2": below, "in_range": in_range, "verdict": verdict,
            "delta_matches_closed_form": P.Delta == q2_delta_formula(m), "prediction": P}


def m2_nonexistence(q: int) -> dict:
    """At m = 2: t <= sqrt(2) q and t (q+1) < 2q^2 + 2q + 2."""
    if q < 2:
        raise PreconditionError("need q >= 2")
    P = dim3_predict(q, 2)
    bound = 2 * q * q + 2 * q + 2
    t_le = P.root_le_surd(0, q, 2)
    size_lt = P.root_lt(Fraction(bound, q + 1))
    # the bound on t transfers to the size: sqrt(2) q (q+1) < 2q^2 + 2q + 2
    surd_lt = sign_surd(Fraction(bound), Fraction(-q * (q + 1)), Fraction(2)) > 0
    return {"q": q, "t_squared_le_2q2": t_le, "t_times_q_plus_1_lt_bound": size_lt,
            "sqrt2_bound_lt_blocking_bound": surd_lt, "blocking_bound": bound,
            "contradiction": t_le and size_lt and surd_lt, "prediction": P}


# exhaustive search ---------------------------------------------------------------------
PREDICATES: Dict[str, Callable] = {
    "nondegenerate": lambda r: r.is_nondegenerate,
    "one-weight": lambda r: r.is_one_weight,
    "constant-rank-list": lambda r: r.is_constant_rank_list,
    "constant-rank-profile": lambda r: r.is_constant_rank_profile,
    "msrd": lambda r: r.is_msrd,
}


def parse_predicate(spec: Optional[str]) -> List[str]:
    if not spec:
        return []
    names = [s.strip() for s in spec.split("+") if s.strip()]
    bad = [n for n in names if n not in PREDICATES]
    if bad:
        raise PreconditionError(f"unknown predicate(s) {bad}; choose from {sorted(PREDICATES)}")
    return names


def search_space_size(tower: FieldTower, k: int, shape: Sequence[int]) -> int:
    return linalg.gaussian_binomial(sum(shape), k, tower.Q)


def exhaustive_search(tower: FieldTower, k: int, shape: Sequence[int], predicate: Optional[str] = None,
                      cap: Optional[int] = None) -> List[Tuple[SumRankCode, object]]:
    """Every k-dim row space of F_{q^m}^N (canonical RREF order) passing the predicate."""
    names = parse_predicate(predicate)
    shape = tuple(int(x) for x in shape)
    N = sum(shape)
    total = search_space_size(tower, k, shape)
    check_cap("codes in the search space", total, cap)
    found = []
    for R in linalg.iter_rref(tower.Q, k, N):
        C = SumRankCode(tower, shape, R)
        rep = classify_flags(C, cap)
        if all(PREDICATES[n](rep) for n in names):
            found.append((C, rep))
    return found
