"""Exact arithmetic in a field tower F_p <= F_q <= F_{q^m}.

Elements are plain Python/numpy integers. An element of a field of order
``p^d`` is the integer whose base-``p`` digits, least significant first, are its
coordinates; for the top field this means the base-``q`` digits of an element
are its coefficients in the power basis ``1, y, ..., y^(m-1)`` of the extension
modulus, and ``F_q`` sits inside ``F_{q^m}`` as the integers below ``q``.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import linalg
from .errors import FieldError, InvariantViolation

FIELD_CAP = 2**20
_ADD_TABLE_MAX = 1024


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def factorize(n: int) -> Dict[int, int]:
    out: Dict[int, int] = {}
    f = 2
    while f * f <= n:
        while n % f == 0:
            out[f] = out.get(f, 0) + 1
            n //= f
        f += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def prime_power(q: int) -> Tuple[int, int]:
    """Split a prime power into ``(p, e)``."""
    fac = factorize(q) if q > 1 else {}
    if len(fac) != 1:
        raise FieldError(f"{q} is not a prime power")
    ((p, e),) = fac.items()
    return p, e


class GF:
    """A finite field of order ``p^degree`` with integer-encoded elements.

    Multiplication runs through exp/log tables built from ``primitive``;
    addition is digitwise mod ``p`` (xor for ``p = 2``). All arithmetic methods
    accept scalars or arrays and return numpy arrays.
    """

    def __init__(self, p: int, degree: int, exp: Sequence[int],
                 subfield: Optional["GF"] = None, modulus: Optional[Tuple[int, ...]] = None):
        self.p = p
        self.degree = degree
        self.order = p**degree
        self.subfield = subfield
        self.modulus = modulus
        n = self.order - 1
        exp = np.asarray(exp, dtype=np.int64)
        if exp.shape != (n,):
            raise InvariantViolation("exp table has the wrong length")
        log = np.full(self.order, -1, dtype=np.int64)
        log[exp] = np.arange(n)
        if log[0] != -1 or (log[1:] < 0).any():
            raise InvariantViolation("exp table is not a bijection onto the units")
        self.primitive = int(exp[1]) if n > 1 else 1
        self._exp = np.concatenate([exp, exp])
        self._log = log
        self._exp_l = self._exp.tolist()
        self._log_l = log.tolist()
        self._pw = [p**j for j in range(degree)]
        els = np.arange(self.order, dtype=np.int64)
        self._neg = self._digitwise(np.zeros_like(els), els, -1)
        self._add = None
        if p != 2 and self.order <= _ADD_TABLE_MAX:
            self._add = self._digitwise(els[:, None], els[None, :], 1)

    def __repr__(self):
        return f"GF({self.p}^{self.degree})"

    def _digitwise(self, a, b, sign):
        out = np.zeros(np.broadcast(a, b).shape, dtype=np.int64)
        for w in self._pw:
            out += ((a // w % self.p + sign * (b // w % self.p)) % self.p) * w
        return out

    # vectorized arithmetic -------------------------------------------------
    def add(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.p == 2:
            return a ^ b
        if self.degree == 1:
            return (a + b) % self.p
        if self._add is not None:
            return self._add[a, b]
        return self._digitwise(a, b, 1)

    def neg(self, a):
        return self._neg[np.asarray(a, dtype=np.int64)]

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.degree == 1:
            return a * b % self.p
        out = self._exp[self._log[a] + self._log[b]]
        return np.where((a == 0) | (b == 0), 0, out)

    def inv(self, a):
        a = np.asarray(a, dtype=np.int64)
        if (a == 0).any():
            raise ZeroDivisionError("inverse of zero")
        return self._exp[(self.order - 1 - self._log[a]) % (self.order - 1)]

    def pow(self, a, e: int):
        a = np.asarray(a, dtype=np.int64)
        if e == 0:
            return np.ones_like(a)
        if e < 0:
            a = self.inv(a)
            e = -e
        out = self._exp[(self._log[a] * (e % (self.order - 1))) % (self.order - 1)]
        return np.where(a == 0, 0, out)

    def sum(self, a, axis: int = -1):
        a = np.asarray(a, dtype=np.int64)
        if self.p == 2:
            return np.bitwise_xor.reduce(a, axis=axis)
        if self.degree == 1:
            return a.sum(axis=axis) % self.p
        a = np.moveaxis(a, axis, 0)
        out = np.zeros(a.shape[1:], dtype=np.int64)
        for part in a:
            out = self.add(out, part)
        return out

    def log(self, a):
        a = np.asarray(a, dtype=np.int64)
        if (a == 0).any():
            raise ZeroDivisionError("log of zero")
        return self._log[a]

    def exp(self, i):
        return self._exp[np.asarray(i, dtype=np.int64) % (self.order - 1)]

    # scalar helpers used by polynomial arithmetic ---------------------------
    def _sadd(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        if self.degree == 1:
            return (a + b) % self.p
        return int(self.add(a, b))

    def _smul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self._exp_l[self._log_l[a] + self._log_l[b]]

    def _sneg(self, a: int) -> int:
        return int(self._neg[a])

    def _sinv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return self._exp_l[(self.order - 1 - self._log_l[a]) % (self.order - 1)]

    def sort_key(self, a: int) -> Tuple[int, ...]:
        """Base-p digits least significant first: the coefficient-lexicographic key."""
        return tuple(a // w % self.p for w in self._pw)

    # constructors ------------------------------------------------------------
    @classmethod
    def prime(cls, p: int) -> "GF":
        if not is_prime(p):
            raise FieldError(f"{p} is not prime")
        n = p - 1
        primes = list(factorize(n))
        g = next(g for g in range(1, p) if all(pow(g, n // r, p) != 1 for r in primes))
        exp = [1] * n
        for i in range(1, n):
            exp[i] = exp[i - 1] * g % p
        return cls(p, 1, exp)

    @classmethod
    def extension(cls, K: "GF", modulus: Sequence[int]) -> "GF":
        """The field ``K[y]/(modulus)``; ``modulus`` is monic, low degree first."""
        f = tuple(int(c) for c in modulus)
        d = len(f) - 1
        if d < 1:
            raise FieldError("modulus must have degree >= 1")
        if f[-1] != 1:
            raise FieldError("modulus must be monic")
        if any(not 0 <= c < K.order for c in f):
            raise FieldError("modulus coefficient outside the coefficient field")
        if not is_irreducible(K, f):
            raise FieldError(f"modulus {list(f)} is reducible over {K}")
        order = K.order**d
        if order > FIELD_CAP:
            raise FieldError(f"field order {order} exceeds cap {FIELD_CAP}")
        n = order - 1

        def to_poly(a: int) -> List[int]:
            return [a // K.order**i % K.order for i in range(d)]

        def mulmod(a: List[int], b: List[int]) -> List[int]:
            return _poly_mod(K, _poly_mul(K, a, b), f)

        def powmod(a: List[int], e: int) -> List[int]:
            result = [1] + [0] * (d - 1)
            while e:
                if e & 1:
                    result = mulmod(result, a)
                a = mulmod(a, a)
                e >>= 1
            return result

        one = [1] + [0] * (d - 1)
        primes = list(factorize(n))
        digits = K.degree * d
        alpha = None
        for idx in range(1, order):
            # reversing the base-p digits walks elements in low-first lex order
            cand = sum((idx // K.p**j % K.p) * K.p ** (digits - 1 - j) for j in range(digits))
            a = to_poly(cand)
            if all(powmod(a, n // r) != one for r in primes):
                alpha = a
                break
        if alpha is None:
            raise InvariantViolation("no primitive element found")

        def mult_matrix(c: List[int]) -> np.ndarray:
            rows = []
            for j in range(d):
                basis = [0] * d
                basis[j] = 1
                rows.append(mulmod(basis, c))
            return np.array(rows, dtype=np.int64)

        block = np.array([one], dtype=np.int64)
        step = alpha
        while len(block) < n:
            nxt = linalg.matmul(K, block, mult_matrix(step))
            block = np.concatenate([block, nxt])[:n]
            step = mulmod(step, step)
        weights = np.array([K.order**i for i in range(d)], dtype=np.int64)
        exp = (block * weights).sum(axis=1)
        return cls(K.p, K.degree * d, exp, subfield=K, modulus=f)


def _poly_trim(a: List[int]) -> List[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mul(K: GF, a: Sequence[int], b: Sequence[int]) -> List[int]:
    out = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            if y:
                out[i + j] = K._sadd(out[i + j], K._smul(x, y))
    return out


def _poly_mod(K: GF, a: Sequence[int], f: Sequence[int]) -> List[int]:
    """Remainder of ``a`` modulo ``f`` (any nonzero f), padded to len(f) - 1."""
    r = _poly_trim(list(a))
    g = _poly_trim(list(f))
    dg = len(g) - 1
    lead_inv = K._sinv(g[-1])
    while len(r) - 1 >= dg and r:
        c = K._smul(r[-1], lead_inv)
        shift = len(r) - 1 - dg
        for i, gi in enumerate(g):
            if gi:
                r[shift + i] = K._sadd(r[shift + i], K._sneg(K._smul(c, gi)))
        _poly_trim(r)
    return r + [0] * (dg - len(r))


def _poly_gcd(K: GF, a: Sequence[int], b: Sequence[int]) -> List[int]:
    a = _poly_trim(list(a))
    b = _poly_trim(list(b))
    while b:
        a, b = b, _poly_trim(_poly_mod(K, a, b))
    return a


def _poly_powmod(K: GF, a: List[int], e: int, f: Sequence[int]) -> List[int]:
    result = [1]
    a = _poly_mod(K, a, f)
    while e:
        if e & 1:
            result = _poly_mod(K, _poly_mul(K, result, a), f)
        a = _poly_mod(K, _poly_mul(K, a, a), f)
        e >>= 1
    return _poly_mod(K, result, f)


def is_irreducible(K: GF, f: Sequence[int]) -> bool:
    """Ben-Or test: gcd(y^(|K|^i) - y, f) = 1 for every i <= deg(f)/2."""
    f = list(f)
    d = len(f) - 1
    if d == 1:
        return True
    y = [0, 1]
    h = y
    for _ in range(d // 2):
        h = _poly_powmod(K, h, K.order, f)
        diff = list(h) + [0] * max(0, 2 - len(h))
        diff[1] = K._sadd(diff[1], K._sneg(1))
        if len(_poly_gcd(K, f, diff)) > 1:
            return False
    return True


def is_irreducible_trial(K: GF, f: Sequence[int]) -> bool:
    """Trial division by every monic polynomial of degree <= deg(f)/2."""
    f = list(f)
    d = len(f) - 1
    for deg in range(1, d // 2 + 1):
        for idx in range(K.order**deg):
            g = [idx // K.order**i % K.order for i in range(deg)] + [1]
            if not any(_poly_mod(K, f, g)):
                return False
    return True


def smallest_irreducible(K: GF, d: int) -> Tuple[int, ...]:
    """Lexicographically smallest monic irreducible of degree d (low degree compared first)."""
    digits = K.degree * d
    # for d >= 2 every candidate with zero constant term is divisible by y
    start = K.order ** (d - 1) if d >= 2 else 0
    for idx in range(start, K.order**d):
        low = sum((idx // K.p**j % K.p) * K.p ** (digits - 1 - j) for j in range(digits))
        f = [low // K.order**i % K.order for i in range(d)] + [1]
        if is_irreducible(K, f):
            return tuple(f)
    raise InvariantViolation(f"no irreducible polynomial of degree {d} over {K}")


class FieldTower:
    """The chain F_p <= F_q <= F_{q^m} with its moduli and primitive element.

    ``Fq`` and ``F`` are the :class:`GF` objects of ``F_q`` and ``F_{q^m}``.
    Build instances with :func:`build_tower`, which caches them.
    """

    def __init__(self, p: int, e: int, m: int, base_modulus: Tuple[int, ...],
                 ext_modulus: Tuple[int, ...]):
        self.p, self.e, self.m = p, e, m
        self.Fp = GF.prime(p)
        self.Fq = GF.extension(self.Fp, base_modulus)
        self.F = GF.extension(self.Fq, ext_modulus)
        self.base_modulus = self.Fq.modulus
        self.ext_modulus = self.F.modulus
        self.q = self.Fq.order
        self.Q = self.F.order
        self.alpha = self.F.primitive
        self._qpow = np.array([self.q**j for j in range(m)], dtype=np.int64)
        self._trace_basis = np.array([int(self._trace_direct(self.q**j)) for j in range(m)],
                                     dtype=np.int64)

    @property
    def key(self):
        return (self.p, self.e, self.m, self.base_modulus, self.ext_modulus)

    def __eq__(self, other):
        return isinstance(other, FieldTower) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        return f"FieldTower(F_{self.p} <= F_{self.q} <= F_{self.Q})"

    def __call__(self, value) -> "FieldElement":
        return self.element(value)

    # coordinates ---------------------------------------------------------------
    def coords(self, x) -> np.ndarray:
        """Power-basis coordinates over F_q, shape ``x.shape + (m,)``."""
        x = np.asarray(x, dtype=np.int64)
        return x[..., None] // self._qpow % self.q

    def from_coords(self, c) -> np.ndarray:
        c = np.asarray(c, dtype=np.int64)
        if c.shape[-1:] != (self.m,):
            raise FieldError(f"expected trailing axis of length {self.m}")
        return (c * self._qpow).sum(axis=-1)

    def in_base_field(self, x) -> bool:
        return bool((np.asarray(x) < self.q).all())

    def mult_matrix(self, lam: int) -> np.ndarray:
        """m x m matrix over F_q with ``coords(lam * x) == coords(x) @ M``."""
        return self.coords(self.F.mul(lam, self._qpow))

    # trace ----------------------------------------------------------------------
    def _trace_direct(self, x):
        x = np.asarray(x, dtype=np.int64)
        out = np.zeros_like(x)
        y = x
        for _ in range(self.m):
            out = self.F.add(out, y)
            y = self.F.pow(y, self.q)
        if not self.in_base_field(out) or not np.array_equal(self.F.pow(out, self.q), out):
            raise InvariantViolation("relative trace left F_q")
        return out

    def trace(self, x):
        """Relative trace Tr_{q^m/q}, computed as sum of Frobenius images."""
        return self._trace_direct(x)

    def trace_linear(self, x):
        """Relative trace via its F_q-linear action on power-basis coordinates."""
        c = self.coords(x)
        return self.Fq.sum(self.Fq.mul(c, self._trace_basis), axis=-1)

    def trace_gram(self) -> np.ndarray:
        """``T[a, b] = Tr(y^a * y^b)``, the Gram matrix of the trace form on F_{q^m}."""
        prod = self.F.mul(self._qpow[:, None], self._qpow[None, :])
        return self.trace_linear(prod)

    # serialization ---------------------------------------------------------------
    def fq_to_list(self, c: int) -> List[int]:
        return [int(c) // self.p**j % self.p for j in range(self.e)]

    def fq_from_list(self, digits) -> int:
        if isinstance(digits, (int, np.integer)):
            v = int(digits)
        else:
            if len(digits) != self.e or any(not 0 <= int(d) < self.p for d in digits):
                raise FieldError(f"bad F_q coefficient list {digits!r}")
            v = sum(int(d) * self.p**j for j, d in enumerate(digits))
        if not 0 <= v < self.q:
            raise FieldError(f"{v} is not an element of F_{self.q}")
        return v

    def to_nested(self, x: int) -> List[List[int]]:
        return [self.fq_to_list(c) for c in self.coords(int(x)).tolist()]

    def from_nested(self, coeffs) -> int:
        if isinstance(coeffs, (int, np.integer)):
            v = int(coeffs)
            if not 0 <= v < self.Q:
                raise FieldError(f"{v} is not an element of F_{self.Q}")
            return v
        if len(coeffs) != self.m:
            raise FieldError(f"element needs {self.m} coefficients, got {len(coeffs)}")
        return sum(self.fq_from_list(c) * self.q**j for j, c in enumerate(coeffs))

    def describe(self) -> dict:
        return {
            "p": self.p,
            "e": self.e,
            "m": self.m,
            "base_modulus": list(self.base_modulus),
            "ext_modulus": [self.fq_to_list(c) for c in self.ext_modulus],
        }

    def element(self, value) -> "FieldElement":
        return FieldElement(self, self.from_nested(value))

    def elements(self) -> List["FieldElement"]:
        return [FieldElement(self, v) for v in range(self.Q)]


@functools.lru_cache(maxsize=None)
def _cached_tower(p, e, m, base_modulus, ext_modulus) -> FieldTower:
    return FieldTower(p, e, m, base_modulus, ext_modulus)


def build_tower(p: int, e: int = 1, m: int = 1, base_modulus: Optional[Sequence[int]] = None,
                ext_modulus: Optional[Sequence] = None) -> FieldTower:
    """Build (or fetch from cache) the tower F_p <= F_{p^e} <= F_{p^(em)}.

    Default moduli are the lexicographically smallest monic irreducibles.
    ``ext_modulus`` coefficients may be F_q integer codes or F_p digit lists.
    """
    if not is_prime(p):
        raise FieldError(f"{p} is not prime")
    if e < 1 or m < 1:
        raise FieldError("degrees e and m must be positive")
    if p ** (e * m) > FIELD_CAP:
        raise FieldError(f"field order {p ** (e * m)} exceeds cap {FIELD_CAP}")
    Fp = GF.prime(p)
    if base_modulus is None:
        base = smallest_irreducible(Fp, e)
    else:
        base = tuple(int(c) for c in base_modulus)
        if len(base) != e + 1:
            raise FieldError(f"base modulus must have degree {e}")
    if ext_modulus is None:
        Fq = GF.extension(Fp, base)
        ext = smallest_irreducible(Fq, m)
    else:
        q = p**e
        ext = []
        for c in ext_modulus:
            if isinstance(c, (int, np.integer)):
                ext.append(int(c))
            else:
                if len(c) != e:
                    raise FieldError(f"bad F_q coefficient {c!r}")
                ext.append(sum(int(d) * p**j for j, d in enumerate(c)))
        ext = tuple(ext)
        if len(ext) != m + 1 or any(not 0 <= c < q for c in ext):
            raise FieldError(f"extension modulus must have degree {m} over F_{q}")
    return _cached_tower(p, e, m, base, ext)


def tower_for(q: int, m: int) -> FieldTower:
    """Default tower for a prime power ``q`` and extension degree ``m``."""
    p, e = prime_power(q)
    return build_tower(p, e, m)


def tower_from_dict(d: dict) -> FieldTower:
    return build_tower(int(d["p"]), int(d["e"]), int(d["m"]), d.get("base_modulus"),
                       d.get("ext_modulus"))


@dataclass(frozen=True)
class FieldElement:
    """An element of F_{q^m} bound to its tower, with operator arithmetic."""

    tower: FieldTower
    value: int

    def __post_init__(self):
        if not 0 <= self.value < self.tower.Q:
            raise FieldError(f"{self.value} is not an element of F_{self.tower.Q}")

    def _other(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.tower != self.tower:
                raise FieldError("operands belong to different towers")
            return other.value
        if isinstance(other, (int, np.integer)):
            return self.tower.from_nested(int(other))
        return NotImplemented

    def _wrap(self, v) -> "FieldElement":
        return FieldElement(self.tower, int(v))

    def __add__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.tower.F.add(self.value, o))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.tower.F.sub(self.value, o))

    def __rsub__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.tower.F.sub(o, self.value))

    def __mul__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.tower.F.mul(self.value, o))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return NotImplemented
        return self._wrap(self.tower.F.mul(self.value, self.tower.F.inv(o)))

    def __neg__(self):
        return self._wrap(self.tower.F.neg(self.value))

    def __pow__(self, e: int):
        return self._wrap(self.tower.F.pow(self.value, int(e)))

    def __int__(self):
        return self.value

    def __bool__(self):
        return self.value != 0

    def inverse(self) -> "FieldElement":
        return self._wrap(self.tower.F.inv(self.value))

    def trace(self) -> int:
        return int(self.tower.trace(self.value))

    @property
    def coeffs(self) -> List[List[int]]:
        return self.tower.to_nested(self.value)

    def order(self) -> int:
        """Multiplicative order."""
        if self.value == 0:
            raise ZeroDivisionError("zero has no multiplicative order")
        n = self.tower.Q - 1
        return n // np.gcd(int(self.tower.F.log(self.value)), n) if n > 1 else 1


def arith(op: str, *operands: FieldElement) -> FieldElement:
    """Apply one of ``add|sub|mul|neg|inv|pow`` (``pow`` takes an int exponent last)."""
    if not operands or not isinstance(operands[0], FieldElement):
        raise FieldError("arith needs FieldElement operands")
    x = operands[0]
    if op == "add":
        return x + operands[1]
    if op == "sub":
        return x - operands[1]
    if op == "mul":
        return x * operands[1]
    if op == "neg":
        return -x
    if op == "inv":
        return x.inverse()
    if op == "pow":
        return x ** int(operands[1])
    raise FieldError(f"unknown operation {op!r}")


class ExpansionBasis:
    """An ordered F_q-basis ``(gamma_1, ..., gamma_m)`` of F_{q^m}."""

    def __init__(self, tower: FieldTower, gammas: Sequence[int]):
        self.tower = tower
        self.gammas = tuple(int(g) for g in gammas)
        if len(self.gammas) != tower.m:
            raise FieldError(f"a basis of F_{tower.Q} over F_{tower.q} has {tower.m} elements")
        self.matrix = tower.coords(np.array(self.gammas, dtype=np.int64))
        if linalg.rank(tower.Fq, self.matrix) != tower.m:
            raise FieldError("expansion basis is F_q-linearly dependent")
        self._inverse = linalg.inverse(tower.Fq, self.matrix)

    @classmethod
    def power(cls, tower: FieldTower) -> "ExpansionBasis":
        return cls(tower, [tower.q**j for j in range(tower.m)])

    def __eq__(self, other):
        return isinstance(other, ExpansionBasis) and (self.tower, self.gammas) == (other.tower, other.gammas)

    def __hash__(self):
        return hash((self.tower, self.gammas))


def expand(tower: FieldTower, v, basis: Optional[ExpansionBasis] = None) -> np.ndarray:
    """Row i of the result holds the basis coordinates of ``v[i]`` (an n x m matrix over F_q)."""
    v = np.atleast_1d(np.asarray(v, dtype=np.int64))
    c = tower.coords(v)
    if basis is None:
        return c
    if basis.tower != tower:
        raise FieldError("basis belongs to a different tower")
    return linalg.matmul(tower.Fq, c, basis._inverse)


def reconstruct(tower: FieldTower, M, basis: Optional[ExpansionBasis] = None) -> np.ndarray:
    """Inverse of :func:`expand`."""
    M = np.asarray(M, dtype=np.int64)
    if basis is None:
        return tower.from_coords(M)
    return tower.from_coords(linalg.matmul(tower.Fq, M, basis.matrix))
