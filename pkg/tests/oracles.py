"""Independent reference computations on plain integers.

Nothing here imports the package's arithmetic: fields are integer polynomials
reduced by hand, determinants are cofactor expansions, and Cayley points come
from evaluating every point of projective space.
"""

from __future__ import annotations

import itertools
from typing import Sequence

import numpy as np

# -- polynomials over F_p, coefficient lists low degree first ------------------------------


def ptrim(f):
    f = list(f)
    while f and f[-1] == 0:
        f.pop()
    return f


def pmod(f, g, p):
    f = ptrim([c % p for c in f])
    g = ptrim(g)
    inv = pow(g[-1], p - 2, p)
    while len(f) >= len(g):
        c = f[-1] * inv % p
        shift = len(f) - len(g)
        for k, gc in enumerate(g):
            f[shift + k] = (f[shift + k] - c * gc) % p
        f = ptrim(f)
    return f


def pmul(f, g, p):
    out = [0] * (len(f) + len(g) - 1) if f and g else []
    for i, a in enumerate(f):
        for j, b in enumerate(g):
            out[i + j] = (out[i + j] + a * b) % p
    return ptrim(out)


def monic_polys(p, deg):
    """Monic degree-deg polynomials, ordered by (a_{deg-1}, ..., a_0) lexicographically."""
    for desc in itertools.product(range(p), repeat=deg):
        yield list(reversed(desc)) + [1]


def irreducible_by_trial_division(f, p):
    deg = len(f) - 1
    for d in range(1, deg // 2 + 1):
        for g in monic_polys(p, d):
            if not pmod(f, g, p):
                return False
    return True


def smallest_monic_irreducible(p, e):
    for f in monic_polys(p, e):
        if irreducible_by_trial_division(f, p):
            return f
    raise AssertionError


def fq_mul(a, b, modulus, p):
    prod = pmod(pmul(a, b, p), modulus, p)
    return prod + [0] * (len(modulus) - 1 - len(prod))


def fq_pow(a, k, modulus, p):
    out = [1] + [0] * (len(modulus) - 2)
    for _ in range(k):
        out = fq_mul(out, a, modulus, p)
    return out


# -- matrices over F_p ---------------------------------------------------------------------


def laplace_det(M, p):
    n = len(M)
    if n == 0:
        return 1
    if n == 1:
        return M[0][0] % p
    total = 0
    for j in range(n):
        if M[0][j] % p == 0:
            continue
        minor = [row[:j] + row[j + 1:] for row in M[1:]]
        total += (-1) ** j * M[0][j] * laplace_det(minor, p)
    return total % p


def cofactor_adjugate(M, p):
    n = len(M)
    adj = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [row[:j] + row[j + 1:] for k, row in enumerate(M) if k != i]
            adj[j][i] = (-1) ** (i + j) * laplace_det(minor, p) % p
    return adj


def solve_mod_p(M, b, p):
    """Unique solution of a square invertible system by Gauss-Jordan on integers."""
    n = len(M)
    aug = [[c % p for c in row] + [bi % p] for row, bi in zip(M, b)]
    for col in range(n):
        piv = next(r for r in range(col, n) if aug[r][col])
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = pow(aug[col][col], p - 2, p)
        aug[col] = [c * inv % p for c in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [(a - f * c) % p for a, c in zip(aug[r], aug[col])]
    return [row[-1] for row in aug]


# -- projective space and Cayley points ----------------------------------------------------


def projective_count(dim, q):
    return (q ** (dim + 1) - 1) // (q - 1)


def normalized_points(dim, p):
    """Every point of P^dim(F_p) with leading nonzero coordinate 1, as int arrays in chunks."""
    for lead in range(dim + 1):
        tail = dim - lead
        total = p**tail
        step = 1 << 18
        for start in range(0, total, step):
            idx = np.arange(start, min(total, start + step), dtype=np.int64)
            Y = np.zeros((len(idx), dim + 1), dtype=np.int64)
            Y[:, lead] = 1
            for k in range(dim, lead, -1):
                Y[:, k] = idx % p
                idx = idx // p
            yield Y


def brute_cayley(full_slices: Sequence[Sequence[Sequence[int]]], p: int) -> set[tuple[int, ...]]:
    """All F_p points y of P^m with y^T S y = 0 for every assembled slice S."""
    m = len(full_slices[0]) - 1
    out = set()
    for Y in normalized_points(m, p):
        keep = np.ones(len(Y), dtype=bool)
        for S in full_slices:
            Z = Y[keep]
            val = np.zeros(len(Z), dtype=np.int64)
            for a in range(m + 1):
                for c in range(m + 1):
                    if S[a][c] % p:
                        val = (val + (S[a][c] % p) * Z[:, a] % p * Z[:, c]) % p
            idx = np.flatnonzero(keep)
            keep[idx[val != 0]] = False
        out.update(tuple(int(c) for c in row) for row in Y[keep])
    return out


def quadratic_roots_mod_p(a, b, c, p):
    """Roots t of a t^2 + b t + c over F_p by trying every residue."""
    return [t for t in range(p) if (a * t * t + b * t + c) % p == 0]


# -- determinant polynomial by evaluation and interpolation --------------------------------


def monomials(nvars, degree):
    return [e for e in itertools.product(range(degree + 1), repeat=nvars) if sum(e) == degree]


def eval_monomial(e, x, p):
    out = 1
    for xi, k in zip(x, e):
        out = out * pow(xi, k, p) % p
    return out


def det_polynomial(slices, p, rng):
    """Coefficients of x -> det(sum x_i S_i) on the degree-d monomial basis.

    Solves for the coefficients from values at random points; retries point sets
    until the evaluation matrix is invertible.
    """
    nvars = len(slices)
    d = len(slices[0])
    mons = monomials(nvars, d)
    while True:
        pts = [[rng.randrange(p) for _ in range(nvars)] for _ in mons]
        V = [[eval_monomial(e, x, p) for e in mons] for x in pts]
        if elimination_det(V, p):
            break
    vals = []
    for x in pts:
        M = [[sum(x[i] * slices[i][a][c] for i in range(nvars)) % p for c in range(d)] for a in range(d)]
        vals.append(laplace_det(M, p))
    return mons, solve_mod_p(V, vals, p)


def elimination_det(M, p):
    """Determinant by elimination, used only to test invertibility of evaluation matrices."""
    M = [[c % p for c in row] for row in M]
    n = len(M)
    det = 1
    for col in range(n):
        piv = next((r for r in range(col, n) if M[r][col]), None)
        if piv is None:
            return 0
        if piv != col:
            M[col], M[piv] = M[piv], M[col]
            det = -det
        det = det * M[col][col] % p
        inv = pow(M[col][col], p - 2, p)
        for r in range(col + 1, n):
            f = M[r][col] * inv % p
            if f:
                M[r] = [(a - f * b) % p for a, b in zip(M[r], M[col])]
    return det % p


def gradient_of_polynomial(mons, coeffs, x, p):
    """Formal partial derivatives of sum coeffs * x^mons, evaluated at x."""
    grad = []
    for j in range(len(x)):
        acc = 0
        for e, c in zip(mons, coeffs):
            if e[j] == 0 or c == 0:
                continue
            lowered = list(e)
            lowered[j] -= 1
            acc = (acc + c * e[j] * eval_monomial(lowered, x, p)) % p
        grad.append(acc)
    return grad
