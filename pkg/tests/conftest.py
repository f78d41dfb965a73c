import itertools

import numpy as np
import pytest

from sumrank.gf import build_tower, tower_for

ACCEPTANCE_LINES = []


class OracleField:
    """Schoolbook polynomial arithmetic, independent of the exp/log tables.

    Elements use the same integer encoding as the library: base-``b`` digits
    (b the order of the coefficient field) are coefficients, low degree first.
    """

    def __init__(self, p, base=None, modulus=None):
        self.p = p
        self.base = base
        self.modulus = modulus
        if base is None:
            self.order = p
        else:
            self.order = base.order ** (len(modulus) - 1)

    def _c_add(self, a, b):
        return (a + b) % self.p if self.base is None else self.base.add(a, b)

    def _c_mul(self, a, b):
        return a * b % self.p if self.base is None else self.base.mul(a, b)

    def _c_neg(self, a):
        return (-a) % self.p if self.base is None else self.base.neg(a)

    def _digits(self, x):
        d = len(self.modulus) - 1
        b = self.base.order
        return [x // b**i % b for i in range(d)]

    def _undigits(self, c):
        b = self.base.order
        return sum(v * b**i for i, v in enumerate(c))

    def add(self, x, y):
        if self.base is None:
            return (x + y) % self.p
        return self._undigits([self.base.add(a, b) for a, b in zip(self._digits(x), self._digits(y))])

    def neg(self, x):
        if self.base is None:
            return (-x) % self.p
        return self._undigits([self.base.neg(a) for a in self._digits(x)])

    def mul(self, x, y):
        if self.base is None:
            return x * y % self.p
        a, b = self._digits(x), self._digits(y)
        d = len(self.modulus) - 1
        prod = [0] * (2 * d - 1)
        for i, u in enumerate(a):
            for j, v in enumerate(b):
                prod[i + j] = self.base.add(prod[i + j], self.base.mul(u, v))
        f = list(self.modulus)
        for top in range(len(prod) - 1, d - 1, -1):
            c = prod[top]
            if c:
                for i in range(d + 1):
                    prod[top - d + i] = self.base.add(prod[top - d + i], self.base.neg(self.base.mul(c, f[i])))
        return self._undigits(prod[:d])

    def pow(self, x, e):
        r = 1
        for _ in range(e):
            r = self.mul(r, x)
        return r


def oracle_for(T):
    Fp = OracleField(T.p)
    Fq = OracleField(T.p, Fp, T.base_modulus)
    return OracleField(T.p, Fq, T.ext_modulus)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def F4():
    return build_tower(2, 1, 2)


@pytest.fixture
def F9():
    return build_tower(3, 1, 2)


SMALL_TOWERS = [(2, 1, 2), (2, 1, 3), (3, 1, 2), (2, 2, 2), (2, 1, 4), (3, 1, 3), (5, 1, 2),
                (2, 2, 3), (3, 2, 2), (2, 1, 6), (7, 1, 2)]


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
