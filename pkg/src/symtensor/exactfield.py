"""Exact arithmetic in prime fields F_p and extension fields F_{p^e}.

Elements of F_{p^e} are coefficient vectors in the power basis of a fixed
monic irreducible modulus.  The modulus chosen by :func:`field_make` is the
lexicographically smallest one, so serialized data is reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from random import Random
from typing import Iterator, Sequence

__all__ = [
    "CharTwoOrThree",
    "DivisionByZero",
    "FieldMismatch",
    "FieldSpec",
    "Fq",
    "NotPrime",
    "field_make",
    "is_prime",
]


class NotPrime(ValueError):
    pass


class CharTwoOrThree(ValueError):
    pass


class DivisionByZero(ZeroDivisionError):
    pass


class FieldMismatch(TypeError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    i = 3
    while i * i <= n:
        if n % i == 0:
            return False
        i += 2
    return True


# -- polynomial helpers over F_p (lists of ints, low degree first) -----------

def _trim(f: list[int]) -> list[int]:
    while f and f[-1] == 0:
        f.pop()
    return f


def _pmod(f: list[int], g: list[int], p: int) -> list[int]:
    f = _trim([c % p for c in f])
    g = _trim([c % p for c in g])
    inv_lead = pow(g[-1], -1, p)
    while len(f) >= len(g):
        c = f[-1] * inv_lead % p
        shift = len(f) - len(g)
        for i, gi in enumerate(g):
            f[shift + i] = (f[shift + i] - c * gi) % p
        _trim(f)
    return f


def _pmulmod(f: list[int], g: list[int], mod: list[int], p: int) -> list[int]:
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] += a * b
    return _pmod(out, mod, p)


def _pgcd(f: list[int], g: list[int], p: int) -> list[int]:
    f = _trim([c % p for c in f])
    g = _trim([c % p for c in g])
    while g:
        f, g = g, _pmod(f, g, p)
    return f


def _is_irreducible(f: list[int], p: int) -> bool:
    """Rabin-style test: f has no factor of degree <= deg(f)/2."""
    e = len(f) - 1
    if e == 1:
        return True
    x = [0, 1]
    h = x
    for _ in range(e // 2):
        # h <- h^p mod f
        r, base, k = [1], h, p
        while k:
            if k & 1:
                r = _pmulmod(r, base, f, p)
            base = _pmulmod(base, base, f, p)
            k >>= 1
        h = r
        diff = list(h) + [0] * max(0, 2 - len(h))
        diff[1] = (diff[1] - 1) % p
        if len(_pgcd(f, diff, p)) > 1:
            return False
    return True


def _smallest_irreducible(p: int, e: int) -> tuple[int, ...]:
    # order: descending-degree coefficient vectors compared lexicographically
    if e == 1:
        return (0, 1)
    for code in range(p**e):
        desc = []
        c = code
        for _ in range(e):
            desc.append(c % p)
            c //= p
        desc.reverse()  # desc[0] is the x^{e-1} coefficient
        low_first = list(reversed(desc)) + [1]
        if low_first[0] == 0:
            continue
        if _is_irreducible(low_first, p):
            return tuple(low_first)
    raise AssertionError("no irreducible polynomial found")


# -- field objects ------------------------------------------------------------

@dataclass(frozen=True)
class FieldSpec:
    """The field F_{p^e}; ``modulus`` lists coefficients from x^0 up to x^e."""

    p: int
    e: int
    modulus: tuple[int, ...]
    _cache: dict = field(default_factory=dict, compare=False, hash=False, repr=False)

    @property
    def order(self) -> int:
        return self.p**self.e

    def __call__(self, value: int | Sequence[int] | Fq) -> Fq:
        if isinstance(value, Fq):
            if value.spec == self:
                return value
            if value.spec.p == self.p and value.spec.e == 1:
                return self.embed(value)
            raise FieldMismatch(f"cannot coerce {value.spec} element into {self}")
        if isinstance(value, int):
            return Fq(self, (value % self.p,) + (0,) * (self.e - 1))
        coeffs = [int(c) % self.p for c in value]
        if len(coeffs) > self.e:
            raise ValueError("too many coefficients")
        return Fq(self, tuple(coeffs + [0] * (self.e - len(coeffs))))

    def embed(self, a: Fq) -> Fq:
        """Embed an element of the prime field as a constant polynomial."""
        if a.spec.p != self.p or a.spec.e != 1:
            raise FieldMismatch("only prime-field elements can be embedded")
        return self(a.coeffs[0])

    @property
    def zero(self) -> Fq:
        return self(0)

    @property
    def one(self) -> Fq:
        return self(1)

    def gen(self) -> Fq:
        """The class of x in F_p[x]/(modulus)."""
        if self.e == 1:
            return self(-self.modulus[0])
        return self([0, 1])

    def from_code(self, code: int) -> Fq:
        coeffs = []
        for _ in range(self.e):
            coeffs.append(code % self.p)
            code //= self.p
        return Fq(self, tuple(coeffs))

    def elements(self) -> Iterator[Fq]:
        for code in range(self.order):
            yield self.from_code(code)

    def random(self, rng: Random) -> Fq:
        return self.from_code(rng.randrange(self.order))

    def random_nonzero(self, rng: Random) -> Fq:
        return self.from_code(rng.randrange(1, self.order))

    def nonresidue(self) -> Fq:
        if "nonresidue" not in self._cache:
            half = (self.order - 1) // 2
            for code in range(2, self.order):
                z = self.from_code(code)
                if z**half != self.one:
                    self._cache["nonresidue"] = z
                    break
        return self._cache["nonresidue"]

    def __repr__(self) -> str:
        if self.e == 1:
            return f"F_{self.p}"
        return f"F_{self.p}^{self.e}"


@lru_cache(maxsize=None)
def field_make(p: int, e: int = 1) -> FieldSpec:
    if p in (2, 3):
        raise CharTwoOrThree(f"characteristic {p} is not supported")
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    if e < 1:
        raise ValueError("extension degree must be at least 1")
    return FieldSpec(p, e, _smallest_irreducible(p, e))


class Fq:
    """An element of F_{p^e}; immutable, hashable, compared coefficient-wise."""

    __slots__ = ("spec", "coeffs")

    def __init__(self, spec: FieldSpec, coeffs: tuple[int, ...]):
        self.spec = spec
        self.coeffs = coeffs

    # -- coercion
    def _other(self, other) -> Fq | None:
        if isinstance(other, Fq):
            if other.spec is not self.spec and other.spec != self.spec:
                raise FieldMismatch(f"{self.spec} vs {other.spec}")
            return other
        if isinstance(other, int):
            return self.spec(other)
        return None

    # -- ring operations
    def __add__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        p = self.spec.p
        if self.spec.e == 1:
            return Fq(self.spec, ((self.coeffs[0] + o.coeffs[0]) % p,))
        return Fq(self.spec, tuple((a + b) % p for a, b in zip(self.coeffs, o.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        p = self.spec.p
        return Fq(self.spec, tuple((-a) % p for a in self.coeffs))

    def __sub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        p = self.spec.p
        if self.spec.e == 1:
            return Fq(self.spec, ((self.coeffs[0] - o.coeffs[0]) % p,))
        return Fq(self.spec, tuple((a - b) % p for a, b in zip(self.coeffs, o.coeffs)))

    def __rsub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        spec = self.spec
        p = spec.p
        if spec.e == 1:
            return Fq(spec, (self.coeffs[0] * o.coeffs[0] % p,))
        e = spec.e
        prod = [0] * (2 * e - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(o.coeffs):
                    prod[i + j] += a * b
        mod = spec.modulus
        for k in range(2 * e - 2, e - 1, -1):
            c = prod[k] % p
            if c:
                for i in range(e):
                    prod[k - e + i] -= c * mod[i]
        return Fq(spec, tuple(c % p for c in prod[:e]))

    __rmul__ = __mul__

    def inv(self) -> Fq:
        if not self:
            raise DivisionByZero("inverse of zero")
        spec = self.spec
        p = spec.p
        if spec.e == 1:
            return Fq(spec, (pow(self.coeffs[0], -1, p),))
        # extended Euclid: find s with s*a == 1 mod modulus
        r0, r1 = list(spec.modulus), _trim(list(self.coeffs))
        s0, s1 = [], [1]
        while len(r1) > 1:
            q, r = _pdivmod(r0, r1, p)
            r0, r1 = r1, r
            s0, s1 = s1, _psub(s0, _pmul(q, s1, p), p)
        c = pow(r1[0], -1, p)
        s = [x * c % p for x in s1]
        s = _pmod(s, list(spec.modulus), p) if len(s) > spec.e else s
        return spec(s)

    def __truediv__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return self * o.inv()

    def __rtruediv__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return o * self.inv()

    def __pow__(self, k: int) -> Fq:
        if k < 0:
            return self.inv() ** (-k)
        if self.spec.e == 1:
            return Fq(self.spec, (pow(self.coeffs[0], k, self.spec.p),))
        result, base = self.spec.one, self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def frobenius(self) -> Fq:
        return self ** self.spec.p

    def is_square(self) -> bool:
        if not self:
            return True
        return self ** ((self.spec.order - 1) // 2) == self.spec.one

    def sqrt(self) -> Fq | None:
        """A square root by Tonelli-Shanks, or None for non-squares."""
        if not self:
            return self
        if not self.is_square():
            return None
        q = self.spec.order
        s, t = 0, q - 1
        while t % 2 == 0:
            s, t = s + 1, t // 2
        z = self.spec.nonresidue()
        m, c, x, b = s, z**t, self ** ((t + 1) // 2), self**t
        one = self.spec.one
        while b != one:
            i, b2 = 0, b
            while b2 != one:
                b2, i = b2 * b2, i + 1
            f = c ** (1 << (m - i - 1))
            m, c = i, f * f
            x, b = x * f, b * c
        return x

    # -- comparisons and conversions
    def __eq__(self, other):
        if isinstance(other, Fq):
            return self.spec == other.spec and self.coeffs == other.coeffs
        if isinstance(other, int):
            return self == self.spec(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.spec.p, self.spec.e, self.coeffs))

    def __bool__(self):
        return any(self.coeffs)

    @property
    def code(self) -> int:
        """Integer encoding sum c_k p^k; also the enumeration order of elements."""
        out = 0
        for c in reversed(self.coeffs):
            out = out * self.spec.p + c
        return out

    def in_prime_field(self) -> bool:
        return all(c == 0 for c in self.coeffs[1:])

    def __int__(self):
        if not self.in_prime_field():
            raise ValueError("element is not in the prime field")
        return self.coeffs[0]

    def __repr__(self):
        if self.spec.e == 1:
            return str(self.coeffs[0])
        return "(" + ",".join(map(str, self.coeffs)) + ")"


def _pmul(f: list[int], g: list[int], p: int) -> list[int]:
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        for j, b in enumerate(g):
            out[i + j] = (out[i + j] + a * b) % p
    return _trim(out)


def _psub(f: list[int], g: list[int], p: int) -> list[int]:
    n = max(len(f), len(g))
    out = [((f[i] if i < len(f) else 0) - (g[i] if i < len(g) else 0)) % p for i in range(n)]
    return _trim(out)


def _pdivmod(f: list[int], g: list[int], p: int) -> tuple[list[int], list[int]]:
    f = _trim([c % p for c in f])
    g = _trim([c % p for c in g])
    q = [0] * max(0, len(f) - len(g) + 1)
    inv_lead = pow(g[-1], -1, p)
    while len(f) >= len(g):
        c = f[-1] * inv_lead % p
        shift = len(f) - len(g)
        q[shift] = c
        for i, gi in enumerate(g):
            f[shift + i] = (f[shift + i] - c * gi) % p
        _trim(f)
    return _trim(q), f
