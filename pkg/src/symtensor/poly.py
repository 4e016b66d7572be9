"""Univariate polynomials over Fq as coefficient lists, lowest degree first."""

from __future__ import annotations

import random
from functools import lru_cache
from typing import Callable, Sequence

from .exactfield import FieldSpec, Fq, field_make

Poly = list[Fq]


def trim(f: Sequence[Fq]) -> Poly:
    f = list(f)
    while f and not f[-1]:
        f.pop()
    return f


def degree(f: Sequence[Fq]) -> int:
    return len(trim(f)) - 1


def add(f: Poly, g: Poly) -> Poly:
    if len(f) < len(g):
        f, g = g, f
    return trim([a + b for a, b in zip(f, g)] + list(f[len(g):]))


def sub(f: Poly, g: Poly) -> Poly:
    return add(f, [-c for c in g])


def mul(f: Poly, g: Poly) -> Poly:
    if not f or not g:
        return []
    spec = f[0].spec
    out = [spec.zero] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                if b:
                    out[i + j] = out[i + j] + a * b
    return trim(out)


def scale(f: Poly, c: Fq) -> Poly:
    return trim([a * c for a in f])


def divmod_(f: Poly, g: Poly) -> tuple[Poly, Poly]:
    f, g = trim(f), trim(g)
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    spec = g[0].spec
    q = [spec.zero] * max(0, len(f) - len(g) + 1)
    inv_lead = g[-1].inv()
    f = list(f)
    while len(f) >= len(g) and f:
        c = f[-1] * inv_lead
        shift = len(f) - len(g)
        q[shift] = c
        for i, gi in enumerate(g):
            f[shift + i] = f[shift + i] - c * gi
        f = trim(f)
    return trim(q), f


def monic(f: Poly) -> Poly:
    f = trim(f)
    return scale(f, f[-1].inv()) if f else f


def gcd(f: Poly, g: Poly) -> Poly:
    f, g = trim(f), trim(g)
    while g:
        f, g = g, divmod_(f, g)[1]
    return monic(f)


def powmod(f: Poly, k: int, mod: Poly) -> Poly:
    spec = mod[0].spec
    result: Poly = [spec.one]
    base = divmod_(f, mod)[1]
    while k:
        if k & 1:
            result = divmod_(mul(result, base), mod)[1]
        base = divmod_(mul(base, base), mod)[1]
        k >>= 1
    return result


def evaluate(f: Sequence[Fq], x: Fq) -> Fq:
    acc = x.spec.zero
    for c in reversed(f):
        acc = acc * x + c
    return acc


def derivative(f: Poly) -> Poly:
    return trim([c * i for i, c in enumerate(f)][1:])


def interpolate(xs: Sequence[Fq], ys: Sequence[Fq]) -> Poly:
    """Lagrange interpolation through distinct nodes."""
    spec = xs[0].spec
    out: Poly = []
    for i, (xi, yi) in enumerate(zip(xs, ys)):
        if not yi:
            continue
        num: Poly = [spec.one]
        den = spec.one
        for j, xj in enumerate(xs):
            if j != i:
                num = mul(num, [-xj, spec.one])
                den = den * (xi - xj)
        out = add(out, scale(num, yi / den))
    return out


def _x_power_minus_x(f: Poly, k: int) -> Poly:
    """x^k - x modulo f."""
    spec = f[0].spec
    h = powmod([spec.zero, spec.one], k, f)
    return sub(h, [spec.zero, spec.one])


def distinct_degree_factors(f: Poly) -> list[tuple[int, Poly]]:
    """Split a squarefree monic f over F_q into products of equal-degree irreducibles."""
    spec = f[0].spec
    q = spec.order
    f = monic(f)
    out = []
    d = 0
    x: Poly = [spec.zero, spec.one]
    h = x
    while degree(f) >= 2 * (d + 1):
        d += 1
        h = powmod(h, q, f)
        g = gcd(f, sub(h, x))
        if degree(g) > 0:
            out.append((d, g))
            f = divmod_(f, g)[0]
            h = divmod_(h, f)[1] if degree(f) > 0 else h
    if degree(f) > 0:
        out.append((degree(f), monic(f)))
    return out


def equal_degree_split(f: Poly, d: int, rng: random.Random) -> list[Poly]:
    """Cantor-Zassenhaus splitting of f (product of degree-d irreducibles); odd q."""
    f = monic(f)
    if degree(f) == d:
        return [f]
    spec = f[0].spec
    q = spec.order
    while True:
        a = trim([spec.random(rng) for _ in range(degree(f))])
        if degree(a) < 1:
            continue
        g = gcd(f, a)
        if 0 < degree(g) < degree(f):
            break
        b = powmod(a, (q**d - 1) // 2, f)
        g = gcd(f, sub(b, [spec.one]))
        if 0 < degree(g) < degree(f):
            break
    return equal_degree_split(g, d, rng) + equal_degree_split(divmod_(f, g)[0], d, rng)


def squarefree_part(f: Poly) -> Poly:
    f = monic(f)
    df = derivative(f)
    if not df:
        raise ValueError("inseparable polynomial")
    return monic(divmod_(f, gcd(f, df))[0])


def roots_in_field(f: Poly, rng: random.Random | None = None) -> list[Fq]:
    """Distinct roots of f lying in f's own coefficient field, sorted by code."""
    f = trim(f)
    if degree(f) < 1:
        return []
    rng = rng or random.Random(0)
    spec = f[0].spec
    g = gcd(f, _x_power_minus_x(monic(f), spec.order))
    if degree(g) < 1:
        return []
    roots = [-lin[0] for lin in equal_degree_split(g, 1, rng)]
    return sorted(roots, key=lambda r: r.code)


@lru_cache(maxsize=None)
def _generator_image(src: FieldSpec, dst: FieldSpec) -> Fq:
    lifted = [dst(c) for c in src.modulus]
    return roots_in_field(lifted)[0]


def subfield_embedding(src: FieldSpec, dst: FieldSpec) -> Callable[[Fq], Fq]:
    """A field homomorphism F_{p^s} -> F_{p^t}; the generator goes to the smallest-code root."""
    if src.p != dst.p or dst.e % src.e:
        raise ValueError(f"{src} is not a subfield of {dst}")
    if src == dst:
        return lambda a: a
    if src.e == 1:
        return dst.embed
    g = _generator_image(src, dst)
    powers = [dst.one]
    for _ in range(src.e - 1):
        powers.append(powers[-1] * g)

    def embed(a: Fq) -> Fq:
        acc = dst.zero
        for c, gk in zip(a.coeffs, powers):
            if c:
                acc = acc + gk * c
        return acc

    return embed


def geometric_roots(f: Poly, rng: random.Random | None = None) -> list[tuple[int, list[Fq]]]:
    """Roots over the algebraic closure of a nonzero polynomial over F_{p^s}.

    Returns one entry per irreducible factor of the squarefree part:
    (degree k, its k roots in F_{p^(s*k)}), the roots listed as an orbit of
    the p^s-power map starting from the smallest code.
    """
    rng = rng or random.Random(0)
    spec = f[0].spec
    out = []
    if degree(f) < 1:
        return out
    for d, g in distinct_degree_factors(squarefree_part(f)):
        ext = field_make(spec.p, spec.e * d)
        emb = subfield_embedding(spec, ext)
        for factor in equal_degree_split(g, d, rng):
            roots = roots_in_field([emb(c) for c in factor], rng)
            orbit = [roots[0]]
            while len(orbit) < d:
                orbit.append(orbit[-1] ** spec.order)
            out.append((d, orbit))
    return out


def from_ints(spec: FieldSpec, coeffs: Sequence[int]) -> Poly:
    return trim([spec(c) for c in coeffs])
