"""Points of X and of the Cayley variety over finite fields, and singularities of X."""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np

from . import linalg, poly
from .exactfield import FieldSpec, Fq, field_make
from .tensor import (
    BlockTensor,
    block_coranks,
    contract_x_block,
    contract_xy,
    contract_yy,
    jacobian_at,
    kernel_map,
)
from .vecfield import VecField, vec_det, vecfield

__all__ = [
    "BudgetExceeded",
    "CayleyIncomplete",
    "CayleyVariety",
    "CoincidentSingularityPresent",
    "DEFAULT_BUDGET",
    "IncidenceCover",
    "NonReducedQuadric",
    "NotOnCayley",
    "NotOnX",
    "ProjPoint",
    "SingularAlongLinearSpace",
    "SingularityRecord",
    "UnsupportedPositiveDimensional",
    "cayley_from_candidates",
    "cayley_points",
    "classify_singularity",
    "enumerate_projective",
    "essential_locus_scan",
    "incidence_cover",
    "low_degree_degeneracy_check",
    "point_is_reduced",
    "points_of_x",
    "singular_points",
]

DEFAULT_BUDGET = 2 * 10**8


class BudgetExceeded(RuntimeError):
    pass


class NotOnCayley(ValueError):
    pass


class NotOnX(ValueError):
    pass


class CoincidentSingularityPresent(ValueError):
    pass


class CayleyIncomplete(RuntimeError):
    pass


class UnsupportedPositiveDimensional(RuntimeError):
    pass


class NonReducedQuadric(UserWarning):
    pass


class SingularAlongLinearSpace(UserWarning):
    pass


@dataclass(frozen=True)
class ProjPoint:
    """Normalized homogeneous coordinates: the first nonzero entry is 1."""

    coords: tuple[Fq, ...]

    @classmethod
    def of(cls, v: Sequence) -> ProjPoint:
        return cls(linalg.normalize(v))

    @classmethod
    def from_ints(cls, spec: FieldSpec, v: Sequence[int]) -> ProjPoint:
        return cls.of([spec(c) for c in v])

    @property
    def spec(self) -> FieldSpec:
        return self.coords[0].spec

    @property
    def ext_degree(self) -> int:
        return self.spec.e

    def frobenius(self) -> ProjPoint:
        return ProjPoint(tuple(c.frobenius() for c in self.coords))

    def orbit(self) -> list[ProjPoint]:
        out = [self]
        while True:
            nxt = out[-1].frobenius()
            if nxt == self:
                return out
            out.append(nxt)

    @property
    def degree(self) -> int:
        """Degree of the field of definition over F_p."""
        return len(self.orbit())

    def lowered(self) -> ProjPoint:
        """Re-express a point defined over F_p in the prime field."""
        if self.ext_degree == 1 or not all(c.in_prime_field() for c in self.coords):
            return self
        base = field_make(self.spec.p, 1)
        return ProjPoint(tuple(base(int(c)) for c in self.coords))

    def sort_key(self):
        lead = next(i for i, c in enumerate(self.coords) if c)
        return (self.ext_degree, lead, tuple(c.code for c in self.coords))

    def __iter__(self):
        return iter(self.coords)

    def __len__(self):
        return len(self.coords)

    def __getitem__(self, k):
        return self.coords[k]

    def __repr__(self):
        return "[" + ":".join(map(repr, self.coords)) + "]"


# -- enumeration ------------------------------------------------------------------

def _decode(idx: np.ndarray, q: int, width: int) -> np.ndarray:
    """Base-q digits of idx, most significant first; shape (len(idx), width)."""
    out = np.empty((len(idx), width), dtype=np.int64)
    rest = idx.copy()
    for s in range(width - 1, -1, -1):
        out[:, s] = rest % q
        rest //= q
    return out


def projective_chunks(dim: int, q: int, chunk: int = 1 << 18) -> Iterator[np.ndarray]:
    """Coded points of P^dim(F_q) in canonical order, in arrays of shape (N, dim+1)."""
    for lead in range(dim + 1):
        free = dim - lead
        total = q**free
        for start in range(0, total, chunk):
            idx = np.arange(start, min(total, start + chunk), dtype=np.int64)
            pts = np.zeros((len(idx), dim + 1), dtype=np.int64)
            pts[:, lead] = 1
            if free:
                pts[:, lead + 1:] = _decode(idx, q, free)
            yield pts


def projective_size(dim: int, q: int) -> int:
    return sum(q**k for k in range(dim + 1))


def enumerate_projective(dim: int, spec: FieldSpec, budget: int = DEFAULT_BUDGET) -> Iterator[ProjPoint]:
    """Every point of P^dim(F_{p^e}) once: by leading-1 position, then lexicographically."""
    if projective_size(dim, spec.order) > budget:
        raise BudgetExceeded(f"P^{dim}({spec}) exceeds budget {budget}")
    for pts in projective_chunks(dim, spec.order):
        for row in pts:
            yield ProjPoint(tuple(spec.from_code(int(c)) for c in row))


# -- Cayley variety -----------------------------------------------------------------

def _quadric_terms(A: BlockTensor) -> list[list[tuple[int, int, int]]]:
    """Per slice, the monomial terms (a, b, coefficient) with a <= b of y^T A_i y."""
    terms = []
    for i in range(A.n + 1):
        t = []
        for l, b in enumerate(A.blocks):
            o = A.offsets[l]
            S = b.slices[i]
            for a in range(b.d):
                for c in range(a, b.d):
                    v = int(S[a][c]) * (1 if a == c else 2) % A.spec.p
                    if v:
                        t.append((o + a, o + c, v))
        terms.append(t)
    return terms


def _eval_terms(vf: VecField, terms, Y: np.ndarray) -> np.ndarray:
    acc = np.zeros(len(Y), dtype=np.int64)
    for a, b, c in terms:
        col = Y[:, a] if a == b else None
        prod = vf.mul(Y[:, a], Y[:, b]) if col is None else vf.mul(col, col)
        acc = vf.add(acc, vf.scale(c, prod))
    return acc


def _sweep_cost(m: int, q: int) -> int:
    return sum(q ** max(0, m - lead - 1) for lead in range(m + 1))


def _sweep_quadrics(A: BlockTensor, spec: FieldSpec, budget: int) -> np.ndarray:
    """Coded common zeros in P^m(F_{p^e}) of the slices' quadrics.

    Each chart fixes all but the last coordinate t; one quadric with a nonzero
    t^2 coefficient gives at most two roots per prefix, which are then checked
    against every quadric.
    """
    if A.spec.e != 1:
        raise ValueError("tensor must be defined over the prime field")
    m = A.m
    vf = vecfield(spec)
    q = spec.order
    if _sweep_cost(m, q) > budget:
        raise BudgetExceeded(f"sweep of P^{m}({spec}) exceeds budget {budget}")
    terms = _quadric_terms(A)
    lead_t2 = [next((c for a, b, c in t if a == b == m), 0) for t in terms]
    found = []
    chunk = 1 << 17
    two_inv_cache = {}
    for lead in range(m + 1):
        if lead == m:
            Y = np.zeros((1, m + 1), dtype=np.int64)
            Y[0, m] = 1
            if all(not _eval_terms(vf, t, Y)[0] for t in terms):
                found.append(Y)
            continue
        k = m - lead - 1
        total = q**k
        for start in range(0, total, chunk):
            idx = np.arange(start, min(total, start + chunk), dtype=np.int64)
            Y = np.zeros((len(idx), m + 1), dtype=np.int64)
            Y[:, lead] = 1
            if k:
                Y[:, lead + 1: m] = _decode(idx, q, k)
            cands = _roots_in_t(vf, terms, lead_t2, Y, m, two_inv_cache)
            for t in terms:
                if len(cands) == 0:
                    break
                cands = cands[_eval_terms(vf, t, cands) == 0]
            if len(cands):
                found.append(cands)
    if not found:
        return np.zeros((0, m + 1), dtype=np.int64)
    return np.unique(np.concatenate(found), axis=0)


def _linear_t_parts(vf: VecField, terms, Y: np.ndarray, m: int):
    """Split a quadric at y_m = t into b*t + c for each prefix row."""
    b = np.zeros(len(Y), dtype=np.int64)
    cterms = []
    for a, bb, c in terms:
        if bb == m and a != m:
            b = vf.add(b, vf.scale(c, Y[:, a]))
        elif bb != m:
            cterms.append((a, bb, c))
    return b, _eval_terms(vf, cterms, Y)


def _roots_in_t(vf: VecField, terms, lead_t2, Y: np.ndarray, m: int, cache) -> np.ndarray:
    pivot = next((i for i, a in enumerate(lead_t2) if a), None)
    if pivot is not None:
        a = lead_t2[pivot]
        b, c = _linear_t_parts(vf, terms[pivot], Y, m)
        # t = (-b +- sqrt(b^2 - 4ac)) / 2a
        disc = vf.sub(vf.mul(b, b), vf.scale((4 * a) % vf.p, c))
        ok = vf.is_square(disc)
        if a not in cache:
            cache[a] = vf.code(vf.spec(2 * a).inv())
        inv2a = cache[a]
        s = vf.sqrt(disc[ok])
        nb = vf.neg(b[ok])
        base = Y[ok]
        out = []
        for root in (vf.scale(inv2a, vf.add(nb, s)), vf.scale(inv2a, vf.sub(nb, s))):
            Z = base.copy()
            Z[:, m] = root
            out.append(Z)
        return np.concatenate(out)
    # every quadric is linear in t; a vanishing linear system means a line inside the variety
    parts = [_linear_t_parts(vf, t, Y, m) for t in terms]
    t_val = np.zeros(len(Y), dtype=np.int64)
    solved = np.zeros(len(Y), dtype=bool)
    for b, c in parts:
        use = (~solved) & (b != 0)
        if use.any():
            t_val[use] = vf.mul(vf.neg(c[use]), vf.inv(b[use]))
            solved |= use
    if not solved.all():
        free_rows = ~solved
        consistent = np.ones(free_rows.sum(), dtype=bool)
        for b, c in parts:
            consistent &= c[free_rows] == 0
        if consistent.any():
            raise UnsupportedPositiveDimensional("a line lies in the common zero locus")
    Z = Y[solved].copy()
    Z[:, m] = t_val[solved]
    return Z


@dataclass
class CayleyVariety:
    """Geometric points of the Cayley variety found up to an extension degree."""

    points: list[ProjPoint]
    orbits: list[tuple[int, ...]]
    bezout_bound: int
    reduced: tuple[bool, ...]
    max_ext_degree: int
    complete: bool = field(init=False)

    def __post_init__(self):
        self.complete = len(self.points) == self.bezout_bound and all(self.reduced)

    @property
    def count(self) -> int:
        return len(self.points)

    @property
    def geometrically_complete(self) -> bool:
        """True when every geometric point has been found.

        Reduced points count once and non-reduced points at least twice towards
        the Bezout bound, so reaching it rules out further points.
        """
        return sum(1 if r else 2 for r in self.reduced) >= self.bezout_bound

    def orbit_degrees(self) -> list[int]:
        return [len(o) for o in self.orbits]

    def index(self, y: ProjPoint) -> int:
        return self.points.index(y)


def _assemble(A: BlockTensor, pts: list[ProjPoint], E: int) -> CayleyVariety:
    pts = sorted(set(pts), key=ProjPoint.sort_key)
    pos = {p: i for i, p in enumerate(pts)}
    orbits, seen = [], set()
    for p in pts:
        if p in seen:
            continue
        orb = p.orbit()
        seen.update(orb)
        orbits.append(tuple(sorted(pos[o] for o in orb)))
    reduced = tuple(point_is_reduced(A, p) for p in pts)
    return CayleyVariety(pts, orbits, 2 ** (A.n + 1), reduced, E)


def cayley_points(A: BlockTensor, max_ext_degree: int = 2, budget: int = DEFAULT_BUDGET) -> CayleyVariety:
    """All points of the Cayley variety over F_{p^e}, e <= E, grouped into Frobenius orbits."""
    pts: list[ProjPoint] = []
    for e in range(1, max_ext_degree + 1):
        spec = field_make(A.spec.p, e)
        rows = _sweep_quadrics(A, spec, budget)
        for row in rows:
            y = ProjPoint(tuple(spec.from_code(int(c)) for c in row))
            if e == 1 or y.degree == e:
                pts.append(y)
        if len(pts) > 2 ** (A.n + 1):
            raise UnsupportedPositiveDimensional(f"{len(pts)} points exceed the Bezout bound")
    return _assemble(A, pts, max_ext_degree)


def cayley_from_candidates(A: BlockTensor, candidates: Sequence[ProjPoint]) -> CayleyVariety:
    """Certify a list of candidate points (closed under Frobenius) as Cayley points."""
    pts = []
    for y in candidates:
        if any(contract_yy(A, y.coords)):
            raise NotOnCayley(f"{y} is not on the Cayley variety")
        pts.extend(y.orbit())
    E = max((p.ext_degree for p in pts), default=1)
    return _assemble(A, pts, E)


def point_is_reduced(A: BlockTensor, y: ProjPoint | Sequence[Fq]) -> bool:
    """Zero-dimensional tangent space: the rows A_i y span a space of dimension m."""
    coords = list(y)
    if any(contract_yy(A, coords)):
        raise NotOnCayley(f"{y} is not on the Cayley variety")
    At = A.over(coords[0].spec)
    rows = [linalg.mat_vec(At.full_slice(i), coords) for i in range(A.n + 1)]
    return linalg.rank(rows) == A.m


# -- singularities of X ---------------------------------------------------------------

@dataclass(frozen=True)
class SingularityRecord:
    point: ProjPoint
    kind: str  # "essential" | "accidental" | "coincident"
    block_coranks: tuple[int, ...]
    jacobian_corank: int
    witness: ProjPoint | None = None
    witness_ext_degree: int | None = None


def classify_singularity(A: BlockTensor, x: ProjPoint | Sequence[Fq]) -> SingularityRecord | None:
    """Classify x on X; smooth points give None."""
    x = x if isinstance(x, ProjPoint) else ProjPoint.of(x)
    coranks = tuple(block_coranks(A, x.coords))
    if any(c == 0 for c in coranks):
        raise NotOnX(f"{x} is not on X")
    J = jacobian_at(A, x.coords)
    jc = A.r - linalg.rank(J)
    if any(c >= 2 for c in coranks):
        return SingularityRecord(x, "essential", coranks, jc)
    if jc == 0:
        return None
    if jc > 1:
        return SingularityRecord(x, "coincident", coranks, jc)
    witness, wdeg = _accidental_witness(A, x, J)
    return SingularityRecord(x, "accidental", coranks, jc, witness, wdeg)


def _accidental_witness(A: BlockTensor, x: ProjPoint, J) -> tuple[ProjPoint, int]:
    """q = (c_l phi_l(x)) with c_l^2 = v_l u_l, v in the left kernel of J, adj = u phi phi^T."""
    spec = x.spec
    v = linalg.left_kernel_basis(J).basis[0]
    bk = kernel_map(A, x.coords)
    scales = []
    for l in range(A.r):
        y = bk.generators[l]
        adj = linalg.adjugate(contract_x_block(A.over(spec), l, x.coords))
        a, b = next((a, b) for a in range(len(y)) for b in range(len(y)) if y[a] and y[b])
        u = adj[a][b] / (y[a] * y[b])
        scales.append(v[l] * u)
    target = spec
    if not all(s.is_square() for s in scales):
        if spec.e != 1:
            raise NotImplementedError("quadratic extension of an extension field")
        target = field_make(spec.p, 2)
    roots = [target(s).sqrt() for s in scales]
    q = []
    for l in range(A.r):
        q.extend(roots[l] * target(c) for c in bk.generators[l])
    return ProjPoint.of(q), target.e


@dataclass
class IncidenceCover:
    pairs: list[tuple[ProjPoint, ProjPoint]]
    fibers: dict[ProjPoint, list[ProjPoint]]
    expected_degree: int

    def fiber_sizes(self) -> dict[ProjPoint, int]:
        return {x: len(f) for x, f in self.fibers.items()}


def incidence_cover(A: BlockTensor, cv: CayleyVariety, singular: Sequence[ProjPoint]) -> IncidenceCover:
    """Pairs (x, y) with y a Cayley point and A(x, y, .) = 0, over the given singular points."""
    if not cv.geometrically_complete:
        raise CayleyIncomplete("Cayley variety is not certified complete")
    fibers = {}
    pairs = []
    for x in singular:
        rec = classify_singularity(A, x)
        if rec is not None and rec.kind == "coincident":
            raise CoincidentSingularityPresent(f"{x} is a coincident singularity")
        fib = [y for y in cv.points if not any(contract_xy(A, x.coords, y.coords))]
        fibers[x] = fib
        pairs.extend((x, y) for y in fib)
    return IncidenceCover(pairs, fibers, 2 ** (A.r - 1))


def _block_arrays(A: BlockTensor, vf: VecField, l: int, X: np.ndarray):
    """Entries of A^{(l)}(x,.,.) for a batch of coded points x."""
    b = A.blocks[l]
    M = [[None] * b.d for _ in range(b.d)]
    for a in range(b.d):
        for c in range(a, b.d):
            acc = np.zeros(len(X), dtype=np.int64)
            for i in range(A.n + 1):
                coef = int(b.slices[i][a][c])
                if coef:
                    acc = vf.add(acc, vf.scale(coef, X[:, i]))
            M[a][c] = M[c][a] = acc
    return M


def points_of_x(A: BlockTensor, ext_degree: int = 1, budget: int = DEFAULT_BUDGET) -> list[ProjPoint]:
    """X(F_{p^e}) by a vectorized sweep of P^n."""
    spec = field_make(A.spec.p, ext_degree)
    if projective_size(A.n, spec.order) > budget:
        raise BudgetExceeded(f"P^{A.n}({spec}) exceeds budget {budget}")
    vf = vecfield(spec)
    out = []
    for X in projective_chunks(A.n, spec.order):
        keep = np.ones(len(X), dtype=bool)
        for l in range(A.r):
            sub = X[keep]
            if not len(sub):
                break
            d = vec_det(vf, _block_arrays(A, vf, l, sub))
            idx = np.flatnonzero(keep)
            keep[idx[d != 0]] = False
        for row in X[keep]:
            out.append(ProjPoint(tuple(spec.from_code(int(c)) for c in row)))
    return out


def singular_points(A: BlockTensor, ext_degree: int = 1, budget: int = DEFAULT_BUDGET) -> list[SingularityRecord]:
    """Every singular point of X(F_{p^e}) with its classification."""
    out = []
    for x in points_of_x(A, ext_degree, budget):
        rec = classify_singularity(A, x)
        if rec is not None:
            out.append(rec)
    return out


def _small_block_cayley(A: BlockTensor, l: int, E: int) -> list[ProjPoint]:
    single = BlockTensor(A.spec, A.n, (A.blocks[l],))
    pts = []
    for e in range(1, E + 1):
        spec = field_make(A.spec.p, e)
        try:
            rows = _sweep_quadrics(single, spec, DEFAULT_BUDGET)
        except UnsupportedPositiveDimensional:
            return [ProjPoint.of([spec.one] + [spec.zero] * (A.sizes[l] - 1))]
        pts.extend(ProjPoint(tuple(spec.from_code(int(c)) for c in r)) for r in rows)
        if pts:
            break
    return pts


@dataclass(frozen=True)
class DegeneracyWarning:
    block: int
    category: type
    witness: ProjPoint

    def message(self) -> str:
        return f"block {self.block}: {self.category.__name__} (own Cayley point {self.witness})"


def low_degree_degeneracy_check(A: BlockTensor, max_ext_degree: int = 2) -> list[DegeneracyWarning]:
    """Blocks of size 2 or 3 whose own quadrics share a zero make X degenerate."""
    out = []
    for l, d in enumerate(A.sizes):
        if d not in (2, 3):
            continue
        pts = _small_block_cayley(A, l, max_ext_degree)
        if pts:
            cat = NonReducedQuadric if d == 2 else SingularAlongLinearSpace
            out.append(DegeneracyWarning(l, cat, pts[0]))
    return out


def _size_two_zero_locus(A: BlockTensor, l: int) -> linalg.Subspace:
    """x with A^{(l)}(x,.,.) = 0: kernel of the 3 x (n+1) coefficient matrix."""
    b = A.blocks[l]
    rows = [[b.slices[i][a][c] for i in range(A.n + 1)] for a, c in ((0, 0), (0, 1), (1, 1))]
    return linalg.kernel_basis(rows)


def size_two_essential_free(A: BlockTensor) -> bool:
    """No geometric point of X makes a size-2 block vanish identically.

    The vanishing locus of such a block is linear; on a point or a line the
    remaining determinants are checked exactly over the algebraic closure.
    """
    for l, d in enumerate(A.sizes):
        if d != 2:
            continue
        K = _size_two_zero_locus(A, l)
        others = [k for k in range(A.r) if k != l]
        if K.dim == 1:
            x = list(K.basis[0])
            if all(not linalg.det(contract_x_block(A, k, x)) for k in others):
                return False
        elif K.dim == 2:
            b0, b1 = (list(v) for v in K.basis)
            if all(not linalg.det(contract_x_block(A, k, b1)) for k in others):
                return False
            g: list[Fq] = []
            for k in others:
                nodes = [A.spec(t) for t in range(A.sizes[k] + 1)]
                vals = [linalg.det(contract_x_block(A, k, [u + t * v for u, v in zip(b0, b1)])) for t in nodes]
                g = poly.gcd(g, poly.interpolate(nodes, vals)) if g else poly.interpolate(nodes, vals)
            if not g or poly.degree(g) > 0:
                return False
        elif K.dim > 2:
            if essential_locus_scan(A, 2):
                return False
    return True


def essential_locus_scan(A: BlockTensor, max_ext_degree: int = 2, budget: int = DEFAULT_BUDGET) -> list[ProjPoint]:
    """Points of X(F_{p^e}), e <= E, where some block has corank >= 2."""
    for w in low_degree_degeneracy_check(A, max_ext_degree):
        warnings.warn(w.message(), w.category, stacklevel=2)
    found: set[ProjPoint] = set()
    for l, d in enumerate(A.sizes):
        if d == 2:
            K = _size_two_zero_locus(A, l)
            cands = _points_of_span(K, max_ext_degree, budget)
        else:
            cands = _high_corank_candidates(A, l, max_ext_degree, budget)
        for x in cands:
            if all(c >= 1 for c in block_coranks(A, x.coords)) and block_coranks(A, x.coords)[l] >= 2:
                found.add(x.lowered())
    return sorted(found, key=ProjPoint.sort_key)


def _points_of_span(K: linalg.Subspace, E: int, budget: int) -> list[ProjPoint]:
    if K.dim == 0:
        return []
    out = []
    for e in range(1, E + 1):
        spec = field_make(K.spec.p, e)
        for c in enumerate_projective(K.dim - 1, spec, budget):
            v = [spec.zero] * K.ambient_dim
            for coef, b in zip(c.coords, K.basis):
                v = [vi + coef * spec(bi) for vi, bi in zip(v, b)]
            p = ProjPoint.of(v)
            if e == 1 or p.degree == e:
                out.append(p)
        if K.dim == 1:
            break
    return out


def _high_corank_candidates(A: BlockTensor, l: int, E: int, budget: int) -> list[ProjPoint]:
    """Filter P^n by two principal (d-1)-minors, then confirm exactly."""
    d = A.sizes[l]
    out = []
    for e in range(1, E + 1):
        spec = field_make(A.spec.p, e)
        if projective_size(A.n, spec.order) > budget:
            raise BudgetExceeded(f"P^{A.n}({spec}) exceeds budget {budget}")
        vf = vecfield(spec)
        for X in projective_chunks(A.n, spec.order):
            M = _block_arrays(A, vf, l, X)
            keep = np.ones(len(X), dtype=bool)
            for drop in (d - 1, 0):
                rows = [k for k in range(d) if k != drop]
                sub = [[M[a][c][keep] for c in rows] for a in rows]
                dd = vec_det(vf, sub)
                idx = np.flatnonzero(keep)
                keep[idx[dd != 0]] = False
                if not keep.any():
                    break
            for row in X[keep]:
                x = ProjPoint(tuple(spec.from_code(int(c)) for c in row))
                if (e == 1 or x.degree == e) and block_coranks(A, x.coords)[l] >= 2:
                    out.append(x)
    return out
