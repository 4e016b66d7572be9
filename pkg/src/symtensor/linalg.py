"""Dense exact linear algebra over Fq.

Matrices are lists of rows of :class:`~symtensor.exactfield.Fq` values.
Pivoting always takes the first nonzero entry in column order, so echelon
forms and kernel bases are canonical.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .exactfield import FieldSpec, Fq

Matrix = list[list[Fq]]
Vector = list[Fq]

__all__ = [
    "Matrix",
    "NoSolution",
    "NotSquare",
    "Subspace",
    "Vector",
    "adjugate",
    "det",
    "identity",
    "kernel_basis",
    "left_kernel_basis",
    "mat_vec",
    "matmul",
    "normalize",
    "proportional",
    "rank",
    "rref",
    "solve",
    "transpose",
    "zeros",
]


class NotSquare(ValueError):
    pass


class NoSolution:
    """Return variant of :func:`solve` for inconsistent systems."""

    def __bool__(self):
        return False

    def __repr__(self):
        return "NoSolution()"


@dataclass(frozen=True)
class Subspace:
    """A subspace of F^dim given by its canonical RREF basis."""

    spec: FieldSpec
    ambient_dim: int
    basis: tuple[tuple[Fq, ...], ...]

    @property
    def dim(self) -> int:
        return len(self.basis)

    def contains(self, v: Sequence[Fq]) -> bool:
        if not any(v):
            return True
        if not self.basis:
            return False
        return rank([list(b) for b in self.basis] + [list(v)]) == self.dim


def zeros(spec: FieldSpec, rows: int, cols: int) -> Matrix:
    z = spec.zero
    return [[z] * cols for _ in range(rows)]


def identity(spec: FieldSpec, n: int) -> Matrix:
    out = zeros(spec, n, n)
    for i in range(n):
        out[i][i] = spec.one
    return out


def transpose(M: Matrix) -> Matrix:
    return [list(col) for col in zip(*M)]


def matmul(A: Matrix, B: Matrix) -> Matrix:
    Bt = transpose(B)
    return [[_dot(row, col) for col in Bt] for row in A]


def mat_vec(A: Matrix, v: Sequence[Fq]) -> Vector:
    return [_dot(row, v) for row in A]


def _dot(u: Sequence[Fq], v: Sequence[Fq]) -> Fq:
    acc = u[0] * v[0]
    for a, b in zip(u[1:], v[1:]):
        if a and b:
            acc = acc + a * b
    return acc


def rref(M: Matrix) -> tuple[Matrix, int, list[int]]:
    """Reduced row echelon form, rank, and pivot columns."""
    R = [list(row) for row in M]
    if not R:
        return R, 0, []
    rows, cols = len(R), len(R[0])
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        pr = next((i for i in range(r, rows) if R[i][c]), None)
        if pr is None:
            continue
        R[r], R[pr] = R[pr], R[r]
        inv = R[r][c].inv()
        R[r] = [x * inv for x in R[r]]
        for i in range(rows):
            if i != r and R[i][c]:
                f = R[i][c]
                R[i] = [a - f * b for a, b in zip(R[i], R[r])]
        pivots.append(c)
        r += 1
    return R, r, pivots


def rank(M: Matrix) -> int:
    return rref(M)[1]


def kernel_basis(M: Matrix, cols: int | None = None, spec: FieldSpec | None = None) -> Subspace:
    """Canonical basis of the right kernel {v : M v = 0}."""
    if M:
        cols = len(M[0])
        spec = M[0][0].spec
    assert cols is not None and spec is not None
    if not M:
        return Subspace(spec, cols, tuple(tuple(r) for r in identity(spec, cols)))
    R, rk, pivots = rref(M)
    free = [c for c in range(cols) if c not in pivots]
    vectors = []
    for f in free:
        v = [spec.zero] * cols
        v[f] = spec.one
        for i, pc in enumerate(pivots):
            v[pc] = -R[i][f]
        vectors.append(v)
    # the kernel vectors are already independent; RREF them for canonicity
    if vectors:
        K, _, _ = rref(vectors)
        vectors = K[: len(free)]
    return Subspace(spec, cols, tuple(tuple(v) for v in vectors))


def left_kernel_basis(M: Matrix) -> Subspace:
    return kernel_basis(transpose(M))


def det(M: Matrix) -> Fq:
    n = len(M)
    if any(len(row) != n for row in M):
        raise NotSquare(f"{n}x{len(M[0]) if M else 0} matrix")
    spec = M[0][0].spec
    R = [list(row) for row in M]
    result = spec.one
    for c in range(n):
        pr = next((i for i in range(c, n) if R[i][c]), None)
        if pr is None:
            return spec.zero
        if pr != c:
            R[c], R[pr] = R[pr], R[c]
            result = -result
        piv = R[c][c]
        result = result * piv
        inv = piv.inv()
        for i in range(c + 1, n):
            if R[i][c]:
                f = R[i][c] * inv
                R[i] = [a - f * b for a, b in zip(R[i], R[c])]
    return result


def adjugate(M: Matrix) -> Matrix:
    """Classical adjoint by cofactor expansion."""
    n = len(M)
    if any(len(row) != n for row in M):
        raise NotSquare(f"{n}x{len(M[0]) if M else 0} matrix")
    spec = M[0][0].spec
    if n == 1:
        return [[spec.one]]
    out = zeros(spec, n, n)
    for i in range(n):
        for j in range(n):
            minor = [row[:j] + row[j + 1:] for k, row in enumerate(M) if k != i]
            c = det(minor)
            out[j][i] = c if (i + j) % 2 == 0 else -c
    return out


def solve(M: Matrix, b: Sequence[Fq]) -> Vector | NoSolution:
    """Particular solution of M v = b with free variables set to zero."""
    rows = len(M)
    cols = len(M[0])
    aug = [list(M[i]) + [b[i]] for i in range(rows)]
    R, rk, pivots = rref(aug)
    if cols in pivots:
        return NoSolution()
    spec = b[0].spec
    v = [spec.zero] * cols
    for i, pc in enumerate(pivots):
        v[pc] = R[i][cols]
    return v


def normalize(v: Sequence[Fq]) -> tuple[Fq, ...]:
    """Projective representative with first nonzero coordinate equal to 1."""
    lead = next((c for c in v if c), None)
    if lead is None:
        raise ValueError("zero vector has no projective class")
    inv = lead.inv()
    return tuple(c * inv for c in v)


def proportional(u: Sequence[Fq], v: Sequence[Fq]) -> bool:
    """True iff u and v are nonzero and span the same line."""
    if not any(u) or not any(v):
        return False
    return normalize(u) == normalize(v)
