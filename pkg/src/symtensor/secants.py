"""Secant lines of the Cayley variety, their hyperplanes, and contact with X.

Contact points are found along the pencil y(u) = u*p + q: a point x of X with
A(x, y, .) = 0 for some y on the secant makes the (m+1) x (n+1) matrix
[A_0 y | ... | A_n y] rank deficient, so the admissible u are the common roots
of its maximal minors.  For curves, n distinct tangent points of a hyperplane
exhaust the intersection by degree counting.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import linalg, poly
from .poly import Poly
from .exactfield import FieldSpec, Fq, field_make
from .tensor import (
    BlockTensor,
    CorankTooHigh,
    bilinear_covector,
    contract_x_block,
    contract_yy,
    daut_classes,
    jacobian_at,
    restrict_to_hyperplane,
    sigma,
)
from .variety import (
    DEFAULT_BUDGET,
    BudgetExceeded,
    CayleyIncomplete,
    CayleyVariety,
    NotOnCayley,
    ProjPoint,
    _block_arrays,
    _eval_terms,
    _quadric_terms,
    cayley_points,
    projective_chunks,
    projective_size,
)
from .vecfield import vec_det, vecfield


class DegenerateSecant(ValueError):
    """A(., p, q) vanishes, so the secant has no well-defined image."""


ODD = "odd_theta_type"
UNKNOWN = "unknown"


def theta0(l: int) -> str:
    return f"theta0_type({l})"


@dataclass(frozen=True)
class Secant:
    i: int
    j: int
    pair_field_degree: int
    frobenius_stable: bool

    def __post_init__(self):
        if self.i >= self.j:
            raise ValueError("secant indices must satisfy i < j")


@dataclass(frozen=True)
class Hyperplane:
    covector: tuple[Fq, ...]

    def __post_init__(self):
        if not any(self.covector):
            raise ValueError("zero covector")
        if linalg.normalize(self.covector) != tuple(self.covector):
            raise ValueError("covector is not normalized")

    @classmethod
    def of(cls, v: Sequence[Fq]) -> Hyperplane:
        return cls(ProjPoint.of(v).lowered().coords)

    @property
    def spec(self) -> FieldSpec:
        return self.covector[0].spec

    def sort_key(self):
        return ProjPoint(self.covector).sort_key()

    def __repr__(self):
        return "H" + repr(ProjPoint(self.covector))


@dataclass(frozen=True)
class ContactPoint:
    point: ProjPoint
    tangent: bool
    kernel_meets_secant: bool


@dataclass
class TangentReport:
    secant: Secant
    hyperplane: Hyperplane
    contact_points: list[ContactPoint]
    classification: str
    orbit_id: int
    certified: bool = False

    @property
    def tangent_count(self) -> int:
        return sum(c.tangent for c in self.contact_points)


# -- secants -------------------------------------------------------------------------------

def _pair_degree(a: ProjPoint, b: ProjPoint) -> int:
    pair = {a, b}
    fa, fb, k = a, b, 0
    while True:
        fa, fb, k = fa.frobenius(), fb.frobenius(), k + 1
        if {fa, fb} == pair:
            return k


def all_secants(cv: CayleyVariety) -> list[Secant]:
    if not cv.complete:
        raise CayleyIncomplete(f"{cv.count} of {cv.bezout_bound} points, or non-reduced points")
    out = []
    for i, j in itertools.combinations(range(cv.count), 2):
        d = _pair_degree(cv.points[i], cv.points[j])
        out.append(Secant(i, j, d, d == 1))
    return out


def _common(A: BlockTensor, *pts: Sequence) -> list[list[Fq]]:
    """Coordinates of all points over their largest field (A is over F_p)."""
    first = list(pts[0])[0].spec
    spec = field_make(first.p, math.lcm(*(list(p)[0].spec.e for p in pts)))
    out = []
    for p in pts:
        p = list(p)
        src = p[0].spec
        emb = poly.subfield_embedding(src, spec) if src != spec else (lambda a: a)
        out.append([emb(c) for c in p])
    return out


def psi_of_secant(A: BlockTensor, p: Sequence, q: Sequence) -> Hyperplane:
    p, q = _common(A, p, q)
    h = bilinear_covector(A, p, q)
    if not any(h):
        raise DegenerateSecant("A(., p, q) = 0")
    if any(contract_yy(A, p)) or any(contract_yy(A, q)):
        raise NotOnCayley("secant endpoints must lie on the Cayley variety")
    mid = contract_yy(A, [a + b for a, b in zip(p, q)])
    if not linalg.proportional(mid, h):
        raise NotOnCayley("psi is not constant along the secant")
    return Hyperplane.of(h)


def secant_meets_block_spaces(A: BlockTensor, p: Sequence, q: Sequence) -> bool:
    """Some nonzero a*p + b*q is supported in a single block.

    With one block the block space is the whole ambient space, which the
    hypothesis does not intend; this returns False when r = 1.
    """
    if A.r == 1:
        return False
    p, q = _common(A, p, q)
    for l in range(A.r):
        outside = [k for k in range(A.m + 1) if k not in A.block_range(l)]
        M = [[p[k], q[k]] for k in outside]
        if linalg.rank(M) < 2:
            return True
    return False


@dataclass
class SecantOrbit:
    members: list[int]
    sigma_fixed: bool

    @property
    def size(self) -> int:
        return len(self.members)

    @property
    def representative(self) -> int:
        return self.members[0]


def _image_index(A: BlockTensor, cv: CayleyVariety, pat, k: int, pos: dict) -> int:
    return pos[ProjPoint.of(pat.apply(A, cv.points[k].coords))]


def daut_orbit_partition(A: BlockTensor, cv: CayleyVariety, secants: Sequence[Secant]) -> list[SecantOrbit]:
    """Orbits of unordered pairs under the sign patterns modulo -1."""
    pos = {pt: k for k, pt in enumerate(cv.points)}
    index = {(s.i, s.j): t for t, s in enumerate(secants)}
    pats = daut_classes(A)
    seen: set[int] = set()
    orbits = []
    for t, s in enumerate(secants):
        if t in seen:
            continue
        members = set()
        for pat in pats:
            a = _image_index(A, cv, pat, s.i, pos)
            b = _image_index(A, cv, pat, s.j, pos)
            members.add(index[(min(a, b), max(a, b))])
        seen.update(members)
        orbits.append(SecantOrbit(sorted(members), len(members) == 1))
    return orbits


def classify_secant(A: BlockTensor, cv: CayleyVariety, s: Secant) -> str:
    p, q = cv.points[s.i], cv.points[s.j]
    for l, d in enumerate(A.sizes):
        if d == 2 and A.r > 1 and ProjPoint.of(sigma(A, l).apply(A, p.coords)) == q:
            return theta0(l)
    if not secant_meets_block_spaces(A, p.coords, q.coords):
        return ODD
    return UNKNOWN


# -- contact points ------------------------------------------------------------------------

def is_tangent(A: BlockTensor, x: ProjPoint, h: Sequence[Fq]) -> bool:
    """T_x X lies in H: the covector is in the row space of the Jacobian."""
    x_c, h_c = _common(A, x.coords, h)
    J = jacobian_at(A, x_c)
    return linalg.rank(J + [h_c]) == linalg.rank(J)


def kernel_meets_secant(A: BlockTensor, x: ProjPoint, p: Sequence, q: Sequence) -> bool:
    x_c, p_c, q_c = _common(A, x.coords, p, q)
    At = A.over(x_c[0].spec)
    vectors = []
    for l in range(A.r):
        for v in linalg.kernel_basis(contract_x_block(At, l, x_c)).basis:
            full = [x_c[0].spec.zero] * (A.m + 1)
            for k, c in zip(A.block_range(l), v):
                full[k] = c
            vectors.append(full)
    if not vectors:
        return False
    base = linalg.rank(vectors)
    return linalg.rank(vectors + [p_c, q_c]) < base + 2


def on_x(A: BlockTensor, x: Sequence[Fq]) -> bool:
    At = A.over(x[0].spec)
    return all(linalg.det(contract_x_block(At, l, list(x))) == x[0].spec.zero for l in range(A.r))


def _pencil_matrix(A: BlockTensor, y: Sequence[Fq]) -> list[list[Fq]]:
    At = A.over(y[0].spec)
    cols = [linalg.mat_vec(At.full_slice(i), y) for i in range(A.n + 1)]
    return linalg.transpose(cols)


def _kernel_points(A: BlockTensor, y: Sequence[Fq]) -> list[ProjPoint]:
    K = linalg.kernel_basis(_pencil_matrix(A, y))
    if K.dim != 1:
        return []
    return [ProjPoint.of(K.basis[0])]


def pencil_contact_points(A: BlockTensor, p: Sequence, q: Sequence) -> list[ProjPoint]:
    """Points x of X with A(x, y, .) = 0 for some y on the line through p and q."""
    p, q = _common(A, p, q)
    spec = p[0].spec
    if spec.order < A.n + 3:
        raise ValueError("field too small to interpolate the pencil minors")
    nodes = [spec(k) for k in range(A.n + 2)]
    rows = A.m + 1
    values = {r: [] for r in range(rows)}
    for u in nodes:
        M = _pencil_matrix(A, [u * a + b for a, b in zip(p, q)])
        for r in range(rows):
            minor = [row for k, row in enumerate(M) if k != r]
            values[r].append(linalg.det(minor) if len(minor) == A.n + 1 else spec.zero)
    g: list[Fq] = []
    for r in range(rows):
        g = poly.gcd(g, poly.interpolate(nodes, values[r])) if g else poly.interpolate(nodes, values[r])
    if not g:
        raise DegenerateSecant("every point of the secant meets a kernel")
    found: list[ProjPoint] = []
    for _, roots in poly.geometric_roots(g):
        for u in roots:
            emb = poly.subfield_embedding(spec, u.spec)
            found.extend(_kernel_points(A, [u * emb(a) + emb(b) for a, b in zip(p, q)]))
    found.extend(_kernel_points(A, p))
    out = []
    for x in found:
        x = x.lowered()
        if on_x(A, x.coords) and x not in out:
            out.append(x)
    return sorted(out, key=ProjPoint.sort_key)


def contact_report(
    A: BlockTensor,
    cv: CayleyVariety,
    secant: Secant,
    orbit_id: int = -1,
    classification: str | None = None,
) -> TangentReport:
    if not cv.complete:
        raise CayleyIncomplete("contact reports need every Cayley point")
    p, q = cv.points[secant.i], cv.points[secant.j]
    H = psi_of_secant(A, p.coords, q.coords)
    contacts = []
    for x in pencil_contact_points(A, p.coords, q.coords):
        if not _on_hyperplane(H, x):
            continue
        try:
            tangent = is_tangent(A, x, H.covector)
        except CorankTooHigh:
            tangent = False
        contacts.append(ContactPoint(x, tangent, kernel_meets_secant(A, x, p.coords, q.coords)))
    cls = classification or classify_secant(A, cv, secant)
    if cls.startswith("theta0_type"):
        # the kernels of these contact points miss the secant, so the pencil sees none of them
        l = int(cls[cls.index("(") + 1: -1])
        contacts = []
        for x in cone_contact_points(A, l, H):
            try:
                tangent = is_tangent(A, x, H.covector)
            except CorankTooHigh:
                tangent = False
            contacts.append(ContactPoint(x, tangent, kernel_meets_secant(A, x, p.coords, q.coords)))
    certified = len(contacts) == A.n and all(c.tangent for c in contacts)
    return TangentReport(secant, H, contacts, cls, orbit_id, certified)


def _on_hyperplane(H: Hyperplane, x: ProjPoint) -> bool:
    h, xc = _common(None, H.covector, x.coords)
    return not linalg._dot(h, xc)


def contact_points_by_enumeration(
    A: BlockTensor, H: Hyperplane, ext_degree: int = 1, budget: int = DEFAULT_BUDGET
) -> list[ProjPoint]:
    """Points of X inside H over F_{p^e}, found by sweeping H as a P^{n-1}.

    Independent of the pencil; used as a cross-check for small fields.
    """
    if H.spec.e != 1:
        raise ValueError("enumeration needs a hyperplane over the prime field")
    spec = field_make(A.spec.p, ext_degree)
    if projective_size(A.n - 1, spec.order) > budget:
        raise BudgetExceeded(f"P^{A.n - 1}({spec}) exceeds budget {budget}")
    vf = vecfield(spec)
    basis = linalg.kernel_basis([list(H.covector)]).basis
    B = [[vf.code(spec.embed(c)) for c in b] for b in basis]
    found = []
    for pts in projective_chunks(A.n - 1, spec.order):
        X = np.zeros((len(pts), A.n + 1), dtype=np.int64)
        for k, row in enumerate(B):
            for i, c in enumerate(row):
                if c:
                    X[:, i] = vf.add(X[:, i], vf.scale(c, pts[:, k]))
        keep = np.ones(len(pts), dtype=bool)
        for l in range(A.r):
            M = _block_arrays(A, vf, l, X)
            keep &= vec_det(vf, M) == 0
        for row in X[keep]:
            x = ProjPoint.of([spec.from_code(int(c)) for c in row])
            if ext_degree == 1 or x.degree == ext_degree:
                found.append(x.lowered())
    return sorted(set(found), key=ProjPoint.sort_key)


# -- census --------------------------------------------------------------------------------

@dataclass
class HyperplaneCensus:
    hyperplanes: list[Hyperplane]
    by_class: dict[str, int]
    orbit_count: int

    @property
    def count(self) -> int:
        return len(self.hyperplanes)

    @property
    def injective_on_orbits(self) -> bool:
        return self.count == self.orbit_count


def distinct_hyperplanes(reports: Sequence[TangentReport]) -> HyperplaneCensus:
    classes: dict[Hyperplane, set[str]] = {}
    for r in reports:
        classes.setdefault(r.hyperplane, set()).add(r.classification)
    hyperplanes = sorted(classes, key=Hyperplane.sort_key)
    by_class: dict[str, int] = {}
    for h in hyperplanes:
        for c in classes[h]:
            by_class[c] = by_class.get(c, 0) + 1
    return HyperplaneCensus(hyperplanes, dict(sorted(by_class.items())), len({r.orbit_id for r in reports}))


@dataclass
class SecantAnalysis:
    secants: list[Secant]
    orbits: list[SecantOrbit]
    reports: list[TangentReport]
    census: HyperplaneCensus = field(init=False)

    def __post_init__(self):
        self.census = distinct_hyperplanes(self.reports)


def analyze_secants(A: BlockTensor, cv: CayleyVariety, with_contacts: bool = True) -> SecantAnalysis:
    """Every secant with its hyperplane, orbit and (optionally) contact points."""
    secants = all_secants(cv)
    orbits = daut_orbit_partition(A, cv, secants)
    reports: list[TangentReport | None] = [None] * len(secants)
    for oid, orb in enumerate(orbits):
        first: TangentReport | None = None
        for t in orb.members:
            s = secants[t]
            if not with_contacts:
                p, q = cv.points[s.i], cv.points[s.j]
                H = psi_of_secant(A, p.coords, q.coords)
                reports[t] = TangentReport(s, H, [], classify_secant(A, cv, s), oid)
            elif first is None:
                first = reports[t] = contact_report(A, cv, s, oid)
            else:
                reports[t] = _transported_report(A, cv, s, oid, first)
    return SecantAnalysis(secants, orbits, reports)


def _transported_report(A: BlockTensor, cv: CayleyVariety, secant: Secant, orbit_id: int, known: TangentReport) -> TangentReport:
    """Reuse the contact points of a secant with the same hyperplane.

    Contact points live on X, which the sign patterns fix, so they depend only on
    the hyperplane; the kernel condition involves the secant and is recomputed.
    """
    p, q = cv.points[secant.i], cv.points[secant.j]
    H = psi_of_secant(A, p.coords, q.coords)
    if H != known.hyperplane:
        return contact_report(A, cv, secant, orbit_id)
    contacts = [
        ContactPoint(c.point, c.tangent, kernel_meets_secant(A, c.point, p.coords, q.coords))
        for c in known.contact_points
    ]
    return TangentReport(secant, H, contacts, classify_secant(A, cv, secant), orbit_id, known.certified)


# -- size-two blocks -----------------------------------------------------------------------

def block_quadric_matrix(A: BlockTensor, l: int) -> list[list[Fq]]:
    """Symmetric S with det A^{(l)}(x) = x^T S x, for a size-2 block."""
    if A.sizes[l] != 2:
        raise ValueError("only size-2 blocks define a quadric")
    sl = A.blocks[l].slices
    half = A.spec(2).inv()
    return [
        [(sl[i][0][0] * sl[j][1][1] + sl[j][0][0] * sl[i][1][1]) * half - sl[i][0][1] * sl[j][0][1] for j in range(A.n + 1)]
        for i in range(A.n + 1)
    ]


def tangent_to_block_quadric(A: BlockTensor, l: int, H: Hyperplane) -> ProjPoint | None:
    """A point x of X_l whose gradient is proportional to H, if there is one."""
    S = block_quadric_matrix(A, l)
    h = list(H.covector)
    if h[0].spec != A.spec:
        S = [[h[0].spec.embed(c) for c in row] for row in S]
    x0 = linalg.solve(S, h)
    if not x0:
        return None
    if linalg._dot(h, x0):
        return None
    return ProjPoint.of(x0).lowered()


def _block_dets_on_line(A: BlockTensor, blocks: Sequence[int], u: Sequence[Fq], v: Sequence[Fq]) -> list[Poly]:
    """det A^{(k)}(u + t v) as polynomials in t, by interpolation."""
    spec = u[0].spec
    At = A.over(spec)
    out = []
    for k in blocks:
        d = A.sizes[k]
        if spec.order < d + 1:
            raise ValueError("field too small to interpolate block determinants")
        nodes = [spec(i) for i in range(d + 1)]
        vals = [linalg.det(contract_x_block(At, k, [a + t * b for a, b in zip(u, v)])) for t in nodes]
        out.append(poly.interpolate(nodes, vals))
    return out


def _embed_all(vectors: Sequence[Sequence[Fq]], dst: FieldSpec) -> list[list[Fq]]:
    src = vectors[0][0].spec
    if src == dst:
        return [list(v) for v in vectors]
    emb = poly.subfield_embedding(src, dst)
    return [[emb(c) for c in v] for v in vectors]


def _x_points_on_line(A: BlockTensor, blocks: Sequence[int], u: Sequence[Fq], v: Sequence[Fq]) -> list[ProjPoint]:
    """Common zeros of the given block determinants on the line through u and v."""
    found = []
    if all(not linalg.det(contract_x_block(A.over(v[0].spec), k, list(v))) for k in blocks):
        found.append(ProjPoint.of(v))
    g: Poly = []
    for f in _block_dets_on_line(A, blocks, u, v):
        g = poly.gcd(g, f) if g else f
    if not g:
        raise DegenerateSecant("a block determinant vanishes on the whole line")
    for _, roots in poly.geometric_roots(g):
        for t in roots:
            uu, vv = _embed_all([u, v], t.spec)
            found.append(ProjPoint.of([a + t * b for a, b in zip(uu, vv)]))
    return found


def _x_points_on_plane(A: BlockTensor, blocks: Sequence[int], basis: Sequence[Sequence[Fq]]) -> list[ProjPoint]:
    """Common zeros of the block determinants on a plane, via a resultant in the chart b0 + s b1 + t b2."""
    spec = basis[0][0].spec
    b0, b1, b2 = basis
    At = A.over(spec)
    f_idx, g_idx = blocks[0], blocks[1]
    if A.sizes[f_idx] != 2 or A.sizes[g_idx] != 2:
        raise NotImplementedError("plane contact loci are supported for size-2 blocks")
    if not linalg.det(contract_x_block(At, f_idx, list(b2))):
        raise DegenerateSecant("chart is not in general position")
    nodes = [spec(i) for i in range(9)]
    res_vals = []
    for s in nodes:
        u = [a + s * b for a, b in zip(b0, b1)]
        f, g = _block_dets_on_line(A, (f_idx, g_idx), u, b2)
        f = f + [spec.zero] * (3 - len(f))
        g = g + [spec.zero] * (3 - len(g))
        z = spec.zero
        syl = [
            [f[2], f[1], f[0], z],
            [z, f[2], f[1], f[0]],
            [g[2], g[1], g[0], z],
            [z, g[2], g[1], g[0]],
        ]
        res_vals.append(linalg.det(syl))
    res = poly.interpolate(nodes, res_vals)
    if not res:
        raise DegenerateSecant("the block determinants share a component on the plane")
    found = []
    for _, roots in poly.geometric_roots(res):
        for s in roots:
            e0, e1, e2 = _embed_all([b0, b1, b2], s.spec)
            found.extend(_x_points_on_line(A, blocks, [a + s * b for a, b in zip(e0, e1)], e2))
    found.extend(_x_points_on_line(A, blocks, b1, b2))
    return found


def cone_contact_points(A: BlockTensor, l: int, H: Hyperplane) -> list[ProjPoint]:
    """Points of X inside H when H is tangent to the size-2 block quadric X_l.

    Such an H meets X_l in the doubled linear space spanned by a solution of
    S x = h and the vertex ker S, so X cap H is that space cut by the other
    blocks.  Supported when the space is a line or a plane.
    """
    S = block_quadric_matrix(A, l)
    h = list(H.covector)
    spec = h[0].spec
    if spec != A.spec:
        S = [[spec.embed(c) for c in row] for row in S]
    x0 = linalg.solve(S, h)
    if not x0 or linalg._dot(h, x0):
        return []
    span = [list(x0)] + [list(v) for v in linalg.kernel_basis(S).basis]
    others = [k for k in range(A.r) if k != l]
    if len(span) == 2:
        found = _x_points_on_line(A, others, span[0], span[1])
    elif len(span) == 3:
        rng = random.Random(0)
        for _ in range(20):
            g = [[spec.random(rng) for _ in range(3)] for _ in range(3)]
            if not linalg.det(g):
                continue
            basis = [[sum((g[i][j] * c for j, c in enumerate(col)), spec.zero) for col in zip(*span)] for i in range(3)]
            try:
                found = _x_points_on_plane(A, others, basis)
                break
            except DegenerateSecant:
                continue
        else:
            raise DegenerateSecant("no general-position chart found")
    else:
        raise NotImplementedError(f"tangency locus of dimension {len(span) - 1}")
    out = []
    for x in found:
        x = x.lowered()
        if on_x(A, x.coords) and x not in out:
            out.append(x)
    return sorted(out, key=ProjPoint.sort_key)


# -- restriction to a hyperplane -----------------------------------------------------------

def psi_fiber(A: BlockTensor, H: Sequence[Fq], max_ext_degree: int = 1, budget: int = DEFAULT_BUDGET) -> list[ProjPoint]:
    """Every y with psi(y) zero or proportional to H, by direct enumeration of P^m."""
    terms = _quadric_terms(A)
    out = []
    for e in range(1, max_ext_degree + 1):
        spec = field_make(A.spec.p, e)
        if projective_size(A.m, spec.order) > budget:
            raise BudgetExceeded(f"P^{A.m}({spec}) exceeds budget {budget}")
        vf = vecfield(spec)
        h = [vf.code(spec.embed(c)) for c in H]
        for Y in projective_chunks(A.m, spec.order):
            psi = [_eval_terms(vf, t, Y) for t in terms]
            keep = np.ones(len(Y), dtype=bool)
            for i, j in itertools.combinations(range(A.n + 1), 2):
                keep &= vf.scale(h[i], psi[j]) == vf.scale(h[j], psi[i])
            for row in Y[keep]:
                y = ProjPoint(tuple(spec.from_code(int(c)) for c in row))
                if e == 1 or y.degree == e:
                    out.append(y)
    return sorted(out, key=ProjPoint.sort_key)


def restriction_fiber_check(A: BlockTensor, H: Sequence, max_ext_degree: int = 1, budget: int = DEFAULT_BUDGET) -> bool:
    """The Cayley variety of the restricted tensor equals the psi-fiber over [H]."""
    H = [A.spec(c) if not isinstance(c, Fq) else c for c in H]
    B = restrict_to_hyperplane(A, H)
    restricted = cayley_points(B, max_ext_degree, budget).points
    return restricted == psi_fiber(A, H, max_ext_degree, budget)
