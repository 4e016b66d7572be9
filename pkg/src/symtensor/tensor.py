"""Block-diagonal symmetric tensors and their contractions.

A tensor lives in k^{n+1} (x) (Sym2 k^{d_1} (+) ... (+) Sym2 k^{d_r}).  Slice i
of block l is the symmetric d_l x d_l matrix A_i^{(l)}; the assembled slice A_i
is block-diagonal of size m+1 = sum d_l.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

from . import linalg
from .exactfield import FieldMismatch, FieldSpec, Fq
from .linalg import Matrix, Subspace

__all__ = [
    "BasedKernel",
    "Block",
    "BlockTensor",
    "CorankTooHigh",
    "CorankZero",
    "InvalidTensor",
    "SignPattern",
    "SingularGroupElement",
    "ZeroVector",
    "act",
    "bilinear_covector",
    "block_coranks",
    "contract_x",
    "contract_xy",
    "contract_yy",
    "daut_classes",
    "daut_elements",
    "delete_block",
    "gauss_diagram_holds",
    "jacobian_at",
    "kernel_map",
    "restrict_to_hyperplane",
    "splice",
    "unsplice",
]


class InvalidTensor(ValueError):
    pass


class ZeroVector(ValueError):
    pass


class SingularGroupElement(ValueError):
    pass


class CorankTooHigh(ValueError):
    def __init__(self, block: int, corank: int):
        super().__init__(f"block {block} has corank {corank}")
        self.block = block
        self.corank = corank


class CorankZero(ValueError):
    def __init__(self, block: int):
        super().__init__(f"block {block} is invertible at this point")
        self.block = block


Slice = tuple[tuple[Fq, ...], ...]


@dataclass(frozen=True)
class Block:
    d: int
    slices: tuple[Slice, ...]


@dataclass(frozen=True)
class BlockTensor:
    spec: FieldSpec
    n: int
    blocks: tuple[Block, ...]

    def __post_init__(self):
        if not self.blocks:
            raise InvalidTensor("a tensor needs at least one block")
        for l, b in enumerate(self.blocks):
            if b.d < 2:
                raise InvalidTensor(f"block {l} has size {b.d} < 2")
            if len(b.slices) != self.n + 1:
                raise InvalidTensor(f"block {l} has {len(b.slices)} slices, expected {self.n + 1}")
            nonzero = False
            for S in b.slices:
                if len(S) != b.d or any(len(row) != b.d for row in S):
                    raise InvalidTensor(f"block {l} slice has wrong shape")
                for i in range(b.d):
                    for j in range(b.d):
                        if S[i][j].spec != self.spec:
                            raise FieldMismatch("slice entry over the wrong field")
                        if S[i][j] != S[j][i]:
                            raise InvalidTensor(f"block {l} slice is not symmetric")
                        nonzero = nonzero or bool(S[i][j])
            if not nonzero:
                raise InvalidTensor(f"block {l} is identically zero")

    @classmethod
    def from_ints(cls, spec: FieldSpec, blocks: Sequence[Sequence[Sequence[Sequence[int]]]]) -> BlockTensor:
        """Build from nested integers: blocks[l][i] is the i-th slice of block l."""
        n = len(blocks[0]) - 1
        out = []
        for slices in blocks:
            d = len(slices[0])
            out.append(Block(d, tuple(tuple(tuple(spec(c) for c in row) for row in S) for S in slices)))
        return cls(spec, n, tuple(out))

    @property
    def r(self) -> int:
        return len(self.blocks)

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(b.d for b in self.blocks)

    @property
    def m(self) -> int:
        return sum(self.sizes) - 1

    @property
    def offsets(self) -> tuple[int, ...]:
        out, acc = [], 0
        for d in self.sizes:
            out.append(acc)
            acc += d
        return tuple(out)

    def block_range(self, l: int) -> range:
        start = self.offsets[l]
        return range(start, start + self.sizes[l])

    def block_part(self, y: Sequence[Fq], l: int) -> list[Fq]:
        return [y[k] for k in self.block_range(l)]

    def full_slice(self, i: int) -> Matrix:
        """The assembled (m+1)x(m+1) block-diagonal slice A_i."""
        size = self.m + 1
        out = linalg.zeros(self.spec, size, size)
        for l, b in enumerate(self.blocks):
            o = self.offsets[l]
            for a in range(b.d):
                for c in range(b.d):
                    out[o + a][o + c] = b.slices[i][a][c]
        return out

    def over(self, spec: FieldSpec) -> BlockTensor:
        """The same tensor with entries embedded in an extension of the prime field."""
        if spec == self.spec:
            return self
        if self.spec.e != 1 or spec.p != self.spec.p:
            raise FieldMismatch("can only extend scalars from the prime field")
        return BlockTensor(
            spec,
            self.n,
            tuple(
                Block(b.d, tuple(tuple(tuple(spec.embed(c) for c in row) for row in S) for S in b.slices))
                for b in self.blocks
            ),
        )

    def to_ints(self) -> list[list[list[list[int]]]]:
        if self.spec.e != 1:
            raise ValueError("integer export needs a prime field")
        return [[[[int(c) for c in row] for row in S] for S in b.slices] for b in self.blocks]


def _lift(spec: FieldSpec, v: Sequence) -> list[Fq]:
    return [spec(c) for c in v]


def _check_nonzero(v: Sequence[Fq], what: str):
    if not any(v):
        raise ZeroVector(f"{what} must be nonzero")


def _vector_spec(A: BlockTensor, v: Sequence) -> FieldSpec:
    for c in v:
        if isinstance(c, Fq):
            return c.spec
    return A.spec


def _tensor_for(A: BlockTensor, *vectors: Sequence) -> tuple[BlockTensor, list[list[Fq]]]:
    """Coerce vectors to a common field and extend A's scalars if needed."""
    spec = A.spec
    for v in vectors:
        s = _vector_spec(A, v)
        if s.e > spec.e:
            spec = s
    At = A.over(spec)
    return At, [_lift(spec, v) for v in vectors]


def contract_x_block(A: BlockTensor, l: int, x: Sequence[Fq]) -> Matrix:
    b = A.blocks[l]
    spec = x[0].spec
    out = linalg.zeros(spec, b.d, b.d)
    for i, xi in enumerate(x):
        if not xi:
            continue
        S = b.slices[i]
        for a in range(b.d):
            row = out[a]
            Sa = S[a]
            for c in range(a, b.d):
                if Sa[c]:
                    row[c] = row[c] + xi * Sa[c]
    for a in range(b.d):
        for c in range(a):
            out[a][c] = out[c][a]
    return out


def contract_x(A: BlockTensor, x: Sequence) -> Matrix:
    """A(x,.,.) = sum_i x_i A_i, assembled block-diagonally."""
    A, (x,) = _tensor_for(A, x)
    _check_nonzero(x, "x")
    size = A.m + 1
    out = linalg.zeros(A.spec, size, size)
    for l in range(A.r):
        o = A.offsets[l]
        blk = contract_x_block(A, l, x)
        for a, row in enumerate(blk):
            out[o + a][o: o + len(row)] = row
    return out


def _quad(S: Slice, u: Sequence[Fq], v: Sequence[Fq]) -> Fq:
    acc = u[0].spec.zero
    for a, ua in enumerate(u):
        if not ua:
            continue
        row = S[a]
        s = u[0].spec.zero
        for c, vc in enumerate(v):
            if vc and row[c]:
                s = s + row[c] * vc
        acc = acc + ua * s
    return acc


def bilinear_covector(A: BlockTensor, y: Sequence, z: Sequence) -> list[Fq]:
    """The covector A(., y, z) in k^{n+1}."""
    A, (y, z) = _tensor_for(A, y, z)
    out = []
    for i in range(A.n + 1):
        acc = A.spec.zero
        for l, b in enumerate(A.blocks):
            yl, zl = A.block_part(y, l), A.block_part(z, l)
            if any(yl) and any(zl):
                acc = acc + _quad(b.slices[i], yl, zl)
        out.append(acc)
    return out


def contract_yy(A: BlockTensor, y: Sequence) -> list[Fq]:
    """psi(y) = (y^T A_0 y, ..., y^T A_n y)."""
    A, (y,) = _tensor_for(A, y)
    _check_nonzero(y, "y")
    return bilinear_covector(A, y, y)


def contract_xy(A: BlockTensor, x: Sequence, y: Sequence) -> list[Fq]:
    """A(x, y, .) = A(x,.,.) y."""
    A, (x, y) = _tensor_for(A, x, y)
    _check_nonzero(x, "x")
    _check_nonzero(y, "y")
    out = []
    for l in range(A.r):
        out.extend(linalg.mat_vec(contract_x_block(A, l, x), A.block_part(y, l)))
    return out


# -- group actions --------------------------------------------------------------

def act(A: BlockTensor, g: Matrix, hs: Sequence[Matrix]) -> BlockTensor:
    """B_j^{(l)} = sum_i g_ij h_l^T A_i^{(l)} h_l."""
    if not linalg.det(g):
        raise SingularGroupElement("g is singular")
    if len(hs) != A.r:
        raise ValueError("one h per block is required")
    blocks = []
    for l, (b, h) in enumerate(zip(A.blocks, hs)):
        if not linalg.det(h):
            raise SingularGroupElement(f"h_{l} is singular")
        ht = linalg.transpose(h)
        conj = [linalg.matmul(linalg.matmul(ht, [list(r) for r in S]), h) for S in b.slices]
        new = []
        for j in range(A.n + 1):
            acc = linalg.zeros(A.spec, b.d, b.d)
            for i in range(A.n + 1):
                if g[i][j]:
                    acc = [[u + g[i][j] * w for u, w in zip(ra, rc)] for ra, rc in zip(acc, conj[i])]
            new.append(tuple(tuple(row) for row in acc))
        blocks.append(Block(b.d, tuple(new)))
    return BlockTensor(A.spec, A.n, tuple(blocks))


@dataclass(frozen=True)
class SignPattern:
    """A diagonal automorphism: block l is multiplied by signs[l]."""

    signs: tuple[int, ...]

    def apply(self, A: BlockTensor, y: Sequence[Fq]) -> list[Fq]:
        out = list(y)
        for l, s in enumerate(self.signs):
            if s == -1:
                for k in A.block_range(l):
                    out[k] = -out[k]
        return out

    def __mul__(self, other: SignPattern) -> SignPattern:
        return SignPattern(tuple(a * b for a, b in zip(self.signs, other.signs)))


def daut_elements(A: BlockTensor) -> list[SignPattern]:
    """All 2^r sign patterns; the first 2^{r-1} (first sign +1) represent classes mod -1."""
    pats = [SignPattern((1,) + rest) for rest in itertools.product((1, -1), repeat=A.r - 1)]
    return pats + [SignPattern(tuple(-s for s in p.signs)) for p in pats]


def daut_classes(A: BlockTensor) -> list[SignPattern]:
    return daut_elements(A)[: 2 ** (A.r - 1)]


def sigma(A: BlockTensor, l: int) -> SignPattern:
    """Identity on block l and -1 on every other block."""
    return SignPattern(tuple(1 if k == l else -1 for k in range(A.r)))


# -- restriction and block deletion ------------------------------------------------

def restrict_to_hyperplane(A: BlockTensor, H: Sequence) -> BlockTensor:
    """Contract A along the canonical basis of ker(H); the result has x-dimension n-1."""
    H = _lift(A.spec, H)
    _check_nonzero(H, "H")
    basis = hyperplane_basis(A.spec, H)
    blocks = []
    for b in A.blocks:
        new = []
        for v in basis:
            acc = [[A.spec.zero] * b.d for _ in range(b.d)]
            for i, vi in enumerate(v):
                if vi:
                    acc = [[u + vi * w for u, w in zip(ra, rs)] for ra, rs in zip(acc, b.slices[i])]
            new.append(tuple(tuple(row) for row in acc))
        blocks.append(Block(b.d, tuple(new)))
    return BlockTensor(A.spec, A.n - 1, tuple(blocks))


def hyperplane_basis(spec: FieldSpec, H: Sequence[Fq]) -> list[tuple[Fq, ...]]:
    return list(linalg.kernel_basis([list(H)]).basis)


def embed_from_hyperplane(spec: FieldSpec, H: Sequence[Fq], x_restricted: Sequence[Fq]) -> list[Fq]:
    """Map coordinates on H (w.r.t. the canonical basis) to a point of P^n."""
    basis = hyperplane_basis(spec, H)
    zero = x_restricted[0].spec.zero
    out = [zero] * len(H)
    for c, v in zip(x_restricted, basis):
        if c:
            out = [o + c * vi for o, vi in zip(out, v)]
    return out


def delete_block(A: BlockTensor, l: int) -> BlockTensor:
    if A.r < 2:
        raise ValueError("cannot delete the only block")
    return BlockTensor(A.spec, A.n, tuple(b for k, b in enumerate(A.blocks) if k != l))


def splice(A: BlockTensor, l: int, y_reduced: Sequence[Fq]) -> list[Fq]:
    """Insert zeros for block l into a vector of the block-deleted tensor."""
    zero = y_reduced[0].spec.zero
    start = A.offsets[l]
    return list(y_reduced[:start]) + [zero] * A.sizes[l] + list(y_reduced[start:])


def unsplice(A: BlockTensor, l: int, y: Sequence[Fq]) -> list[Fq]:
    """Drop block l's coordinates; they must vanish."""
    r = A.block_range(l)
    if any(y[k] for k in r):
        raise ValueError("vector has nonzero coordinates in the deleted block")
    return [c for k, c in enumerate(y) if k not in r]


# -- kernels and gradients ---------------------------------------------------------

def block_coranks(A: BlockTensor, x: Sequence) -> list[int]:
    A, (x,) = _tensor_for(A, x)
    _check_nonzero(x, "x")
    return [A.sizes[l] - linalg.rank(contract_x_block(A, l, x)) for l in range(A.r)]


@dataclass(frozen=True)
class BasedKernel:
    """Per-block kernel generators (block-local, normalized) and their joint span in k^{m+1}."""

    generators: tuple[tuple[Fq, ...], ...]
    span: Subspace

    def embedded(self, A: BlockTensor, l: int) -> list[Fq]:
        g = self.generators[l]
        zero = g[0].spec.zero
        out = [zero] * (A.m + 1)
        for k, c in zip(A.block_range(l), g):
            out[k] = c
        return out


def kernel_map(A: BlockTensor, x: Sequence) -> BasedKernel:
    A, (x,) = _tensor_for(A, x)
    _check_nonzero(x, "x")
    gens = []
    for l in range(A.r):
        K = linalg.kernel_basis(contract_x_block(A, l, x))
        if K.dim == 0:
            raise CorankZero(l)
        if K.dim > 1:
            raise CorankTooHigh(l, K.dim)
        gens.append(linalg.normalize(K.basis[0]))
    bk = BasedKernel(tuple(gens), Subspace(A.spec, A.m + 1, ()))
    vectors = [bk.embedded(A, l) for l in range(A.r)]
    R, rk, _ = linalg.rref(vectors)
    return BasedKernel(tuple(gens), Subspace(A.spec, A.m + 1, tuple(tuple(r) for r in R[:rk])))


def jacobian_at(A: BlockTensor, x: Sequence) -> Matrix:
    """Row l, column j: trace(adj A^{(l)}(x,.,.) * A_j^{(l)}), the gradient of det A^{(l)}."""
    A, (x,) = _tensor_for(A, x)
    _check_nonzero(x, "x")
    rows = []
    for l, b in enumerate(A.blocks):
        adj = linalg.adjugate(contract_x_block(A, l, x))
        row = []
        for j in range(A.n + 1):
            S = b.slices[j]
            acc = A.spec.zero
            for a in range(b.d):
                for c in range(b.d):
                    if adj[a][c] and S[c][a]:
                        acc = acc + adj[a][c] * S[c][a]
            row.append(acc)
        rows.append(row)
    return rows


def gauss_diagram_holds(A: BlockTensor, x: Sequence) -> bool:
    """psi of each block kernel agrees with that block's gradient at x.

    Both sides must be nonzero; x must have corank exactly 1 in every block.
    """
    A, (x,) = _tensor_for(A, x)
    bk = kernel_map(A, x)
    J = jacobian_at(A, x)
    for l in range(A.r):
        if not linalg.proportional(contract_yy(A, bk.embedded(A, l)), J[l]):
            return False
    return True
