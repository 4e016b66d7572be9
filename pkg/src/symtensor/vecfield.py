"""Vectorized arithmetic on integer-coded field elements (numpy arrays).

An element of F_{p^e} is coded as sum c_k p^k.  Multiplication and square
roots go through discrete log tables, so fields are limited to q <= 2^20.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations

import numpy as np

from .exactfield import FieldSpec, Fq

MAX_TABLE_ORDER = 1 << 20


class VecField:
    def __init__(self, spec: FieldSpec):
        if spec.order > MAX_TABLE_ORDER:
            raise ValueError(f"{spec} is too large for table arithmetic")
        self.spec = spec
        self.p = spec.p
        self.e = spec.e
        self.q = spec.order
        self._build_tables()

    def _build_tables(self):
        q = self.q
        order = q - 1
        factors = _prime_factors(order)
        gen = None
        for code in range(2, q) if q > 2 else []:
            g = self.spec.from_code(code)
            if all(g ** (order // f) != self.spec.one for f in factors):
                gen = g
                break
        if gen is None:
            gen = self.spec.one
        exp = np.zeros(2 * order, dtype=np.int64)
        log = np.full(q, -1, dtype=np.int64)
        x = self.spec.one
        for k in range(order):
            exp[k] = x.code
            log[x.code] = k
            x = x * gen
        exp[order:] = exp[:order]
        self.exp, self.log = exp, log
        self.order = order
        powers = self.p ** np.arange(self.e, dtype=np.int64)
        self.powers = powers

    # -- conversions
    def code(self, a: Fq | int) -> int:
        if isinstance(a, int):
            return a % self.p
        if a.spec == self.spec:
            return a.code
        return self.spec.embed(a).code

    def element(self, code: int) -> Fq:
        return self.spec.from_code(int(code))

    # -- arithmetic
    def _digits(self, a):
        return [(a // int(pk)) % self.p for pk in self.powers]

    def add(self, a, b):
        if self.e == 1:
            return (a + b) % self.p
        da, db = self._digits(a), self._digits(b)
        out = 0
        for k, pk in enumerate(self.powers):
            out = out + ((da[k] + db[k]) % self.p) * int(pk)
        return out

    def neg(self, a):
        if self.e == 1:
            return (-a) % self.p
        da = self._digits(a)
        out = 0
        for k, pk in enumerate(self.powers):
            out = out + ((-da[k]) % self.p) * int(pk)
        return out

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        if self.e == 1:
            return (a * b) % self.p
        a = np.asarray(a)
        b = np.asarray(b)
        la, lb = self.log[a], self.log[b]
        out = self.exp[(la + lb) % self.order]
        return np.where((a == 0) | (b == 0), 0, out)

    def scale(self, c: int, a):
        """Multiply an array by the coded constant c."""
        if c == 0:
            return np.zeros_like(np.asarray(a))
        if self.e == 1:
            return (c * a) % self.p
        return self.mul(np.full_like(np.asarray(a), c), a)

    def inv(self, a):
        a = np.asarray(a)
        return np.where(a == 0, 0, self.exp[(-self.log[a]) % self.order])

    def is_square(self, a):
        a = np.asarray(a)
        return (a == 0) | (self.log[a] % 2 == 0)

    def sqrt(self, a):
        """A square root of each square entry (garbage elsewhere)."""
        a = np.asarray(a)
        la = self.log[a]
        return np.where(a == 0, 0, self.exp[np.where(la >= 0, la // 2, 0)])

    def frobenius(self, a):
        a = np.asarray(a)
        return np.where(a == 0, 0, self.exp[(self.log[a] * self.p) % self.order])


@lru_cache(maxsize=None)
def vecfield(spec: FieldSpec) -> VecField:
    return VecField(spec)


def _prime_factors(n: int) -> list[int]:
    out, f = [], 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


def vec_det(vf: VecField, M: list[list]) -> np.ndarray:
    """Determinants of a batch of square matrices whose entries are coded arrays.

    Expands along rows with memoized minors indexed by column subsets.
    """
    d = len(M)
    minors: dict[tuple[int, ...], np.ndarray] = {(): None}
    # minors over the bottom k rows, keyed by the chosen column subset
    for k in range(1, d + 1):
        row = M[d - k]
        new = {}
        for cols in _subsets(d, k):
            acc = None
            for pos, c in enumerate(cols):
                rest = cols[:pos] + cols[pos + 1:]
                term = row[c] if not rest else vf.mul(row[c], minors[rest])
                if pos % 2:
                    term = vf.neg(term)
                acc = term if acc is None else vf.add(acc, term)
            new[cols] = acc
        minors = new
    return minors[tuple(range(d))]


def _subsets(d: int, k: int):
    return combinations(range(d), k)
