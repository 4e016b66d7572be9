"""Seeded generation of tensors with prescribed Cayley points.

The conditions y^T A_i y = 0 are linear in the entries of A, so a tensor whose
Cayley variety contains chosen points is a random element of a kernel.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Sequence

from . import linalg
from .exactfield import FieldSpec, Fq, field_make
from .tensor import Block, BlockTensor, InvalidTensor
from .variety import (
    CayleyVariety,
    ProjPoint,
    UnsupportedPositiveDimensional,
    cayley_from_candidates,
    cayley_points,
    classify_singularity,
    essential_locus_scan,
    low_degree_degeneracy_check,
    point_is_reduced,
    singular_points,
    size_two_essential_free,
)

SHAPES: dict[str, tuple[int, tuple[int, ...]]] = {
    "genus3": (2, (4,)),
    "genus4": (3, (2, 3)),
    "genus5": (4, (2, 2, 2)),
    "quintic": (3, (5,)),
}

# seed orbits per shape: enough to leave a nondegenerate space of slices
SEED_ORBITS = {"genus3": 7, "genus4": 5, "genus5": 4, "quintic": 11}




class RetriesExhausted(RuntimeError):
    pass


class ConditionsInconsistent(ValueError):
    pass


@dataclass(frozen=True)
class SeedRecipe:
    shape: str
    field: FieldSpec
    rng_seed: int
    retries: int = 200

    def rng(self, attempt: int) -> random.Random:
        return random.Random(f"{self.shape}:{self.field.p}:{self.field.e}:{self.rng_seed}:{attempt}")


@dataclass
class Seeded:
    tensor: BlockTensor
    cayley: CayleyVariety
    seeds: list[ProjPoint]
    attempt: int
    provenance: dict = field(default_factory=dict)
    analysis: object | None = None


# -- the linear system ----------------------------------------------------------------

def _unknowns(n: int, sizes: Sequence[int]) -> list[tuple[int, int, int, int]]:
    """(slice i, block l, row a, col c) with a <= c."""
    return [
        (i, l, a, c)
        for i in range(n + 1)
        for l, d in enumerate(sizes)
        for a in range(d)
        for c in range(a, d)
    ]


def _offsets(sizes: Sequence[int]) -> list[int]:
    out, acc = [], 0
    for d in sizes:
        out.append(acc)
        acc += d
    return out


def _expand(spec: FieldSpec, row: list[Fq]) -> list[list[Fq]]:
    """An F_{p^e}-linear condition on F_p unknowns is e conditions over F_p."""
    e = row[0].spec.e if row else 1
    return [[spec(c.coeffs[k]) for c in row] for k in range(e)]


def point_conditions(spec: FieldSpec, n: int, sizes: Sequence[int], y: Sequence[Fq]) -> list[list[Fq]]:
    unknowns = _unknowns(n, sizes)
    off = _offsets(sizes)
    ext = y[0].spec
    rows = []
    for i in range(n + 1):
        row = []
        for (j, l, a, c) in unknowns:
            if j != i:
                row.append(ext.zero)
                continue
            v = y[off[l] + a] * y[off[l] + c]
            row.append(v if a == c else v + v)
        rows.extend(_expand(spec, row))
    return rows


def singular_conditions(spec: FieldSpec, n: int, sizes: Sequence[int], x: Sequence[Fq], y: Sequence[Fq]) -> list[list[Fq]]:
    """Rows expressing A(x, y, .) = 0."""
    unknowns = _unknowns(n, sizes)
    off = _offsets(sizes)
    ext = y[0].spec
    rows = []
    for l, d in enumerate(sizes):
        for a in range(d):
            row = []
            for (i, ll, r, c) in unknowns:
                v = ext.zero
                if ll == l:
                    if r == a:
                        v = v + ext(x[i]) * y[off[l] + c]
                    if c == a and r != c:
                        v = v + ext(x[i]) * y[off[l] + r]
                row.append(v)
            rows.extend(_expand(spec, row))
    return rows


def quadrics_through_points(
    spec: FieldSpec,
    n: int,
    sizes: Sequence[int],
    points: Sequence[Sequence[Fq]],
    extra_rows: Sequence[list[Fq]] = (),
) -> list[list[Fq]]:
    """RREF basis of the block-diagonal tensors vanishing at every given point."""
    rows = []
    for y in points:
        rows.extend(point_conditions(spec, n, sizes, y))
    rows.extend(extra_rows)
    cols = len(_unknowns(n, sizes))
    return [list(v) for v in linalg.kernel_basis(rows, cols, spec).basis]


def tensor_from_vector(spec: FieldSpec, n: int, sizes: Sequence[int], v: Sequence[Fq]) -> BlockTensor:
    mats = [[[[spec.zero] * d for _ in range(d)] for _ in range(n + 1)] for d in sizes]
    for (i, l, a, c), val in zip(_unknowns(n, sizes), v):
        mats[l][i][a][c] = val
        mats[l][i][c][a] = val
    blocks = tuple(
        Block(d, tuple(tuple(tuple(row) for row in S) for S in mats[l])) for l, d in enumerate(sizes)
    )
    return BlockTensor(spec, n, blocks)


def random_combination(spec: FieldSpec, basis: Sequence[Sequence[Fq]], rng: random.Random) -> list[Fq]:
    if not basis:
        raise ConditionsInconsistent("only the zero tensor satisfies the conditions")
    out = [spec.zero] * len(basis[0])
    for b in basis:
        c = spec.random(rng)
        if c:
            out = [o + c * x for o, x in zip(out, b)]
    return out


def random_tensor(spec: FieldSpec, shape: str | tuple[int, tuple[int, ...]], rng_seed: int) -> BlockTensor:
    """Uniform symmetric slice entries, deterministic in the seed."""
    n, sizes = SHAPES[shape] if isinstance(shape, str) else shape
    rng = random.Random(f"random_tensor:{spec.p}:{spec.e}:{rng_seed}")
    while True:
        v = [spec.random(rng) for _ in _unknowns(n, sizes)]
        try:
            return tensor_from_vector(spec, n, sizes, v)
        except InvalidTensor:
            continue


# -- random points ------------------------------------------------------------------------

def random_point_off_blocks(spec: FieldSpec, sizes: Sequence[int], rng: random.Random) -> ProjPoint:
    while True:
        parts = [[spec.random(rng) for _ in range(d)] for d in sizes]
        if all(any(p) for p in parts):
            return ProjPoint.of([c for p in parts for c in p])


def random_point_of_degree(p: int, degree: int, dim: int, rng: random.Random) -> ProjPoint:
    """A point of P^dim whose field of definition is exactly F_{p^degree}."""
    spec = field_make(p, degree)
    while True:
        y = ProjPoint.of([spec.random(rng) for _ in range(dim + 1)])
        if y.degree == degree:
            return y


def daut_orbit(A_sizes: Sequence[int], y: ProjPoint) -> list[ProjPoint]:
    """y together with its images under the sign patterns (mod -1)."""
    off = _offsets(A_sizes)
    out = []
    for rest in itertools.product((1, -1), repeat=len(A_sizes) - 1):
        signs = (1,) + rest
        v = list(y.coords)
        for l, s in enumerate(signs):
            if s == -1:
                for k in range(off[l], off[l] + A_sizes[l]):
                    v[k] = -v[k]
        out.append(ProjPoint.of(v))
    return out


# -- validation -----------------------------------------------------------------------------

def _on_block_space(A: BlockTensor, y: ProjPoint) -> bool:
    return any(not any(A.block_part(y.coords, l)) for l in range(A.r))


def validate_smooth_instance(A: BlockTensor, cv: CayleyVariety, expected: int) -> str | None:
    """Reason for rejection, or None when the instance is certified."""
    if cv.count != expected or not cv.complete:
        return f"cayley count {cv.count}, complete={cv.complete}"
    if any(_on_block_space(A, y) for y in cv.points):
        return "Cayley point on a block space"
    if low_degree_degeneracy_check(A):
        return "low-degree degeneracy"
    return None


def generic_position_failure(A: BlockTensor, cv: CayleyVariety):
    """(reason or None, secant analysis): distinct orbits give distinct hyperplanes
    and every odd-type hyperplane touches X at n distinct tangent points."""
    from .secants import ODD, UNKNOWN, analyze_secants

    quick = analyze_secants(A, cv, with_contacts=False)
    if not quick.census.injective_on_orbits:
        return f"{quick.census.count} hyperplanes for {quick.census.orbit_count} orbits", quick
    if any(r.classification == UNKNOWN for r in quick.reports):
        return "secant meets a block space", quick
    analysis = analyze_secants(A, cv)
    if not analysis.census.injective_on_orbits:
        return f"{analysis.census.count} hyperplanes for {analysis.census.orbit_count} orbits", analysis
    for r in analysis.reports:
        if r.classification == UNKNOWN:
            return "secant meets a block space", analysis
        if r.classification == ODD and not r.certified:
            return "degenerate contact", analysis
    return None, analysis


def essential_failure(A: BlockTensor, shape: str) -> str | None:
    if shape in ("genus4", "genus5") and not size_two_essential_free(A):
        return "size-2 block vanishes on X"
    if shape in ("genus3", "genus4") and essential_locus_scan(A, 1):
        return "essential singularity"
    return None


# -- quotient by the sign patterns (all blocks of size 2) ----------------------------------

def _quotient_tensor(A: BlockTensor) -> tuple[BlockTensor, list[list[Fq]]]:
    """The rank-one conditions on the block monomials, restricted to the linear span.

    Each block contributes w_l = (y_a^2, y_a y_b, y_b^2); the slices are linear
    in w, and the Cayley points modulo sign patterns are the common zeros of the
    quadrics w_l0 w_l2 - w_l1^2 on the kernel of those linear forms.
    """
    spec = A.spec
    rows = []
    for i in range(A.n + 1):
        row = []
        for b in A.blocks:
            S = b.slices[i]
            row += [S[0][0], S[0][1] + S[0][1], S[1][1]]
        rows.append(row)
    basis = [list(v) for v in linalg.kernel_basis(rows).basis]
    half = spec(2).inv()
    slices = []
    for l in range(A.r):
        Q = [
            [
                (u[3 * l] * v[3 * l + 2] + v[3 * l] * u[3 * l + 2]) * half - u[3 * l + 1] * v[3 * l + 1]
                for v in basis
            ]
            for u in basis
        ]
        slices.append(tuple(tuple(r) for r in Q))
    return BlockTensor(spec, A.r - 1, (Block(len(basis), tuple(slices)),)), basis


def sign_quotient_lifts(A: BlockTensor) -> tuple[int, list[ProjPoint]]:
    """(number of F_p points of the quotient, their lifts to Cayley points).

    A lift needs square roots of the block scale ratios; when one is a
    non-square the lifted orbit lies over F_{p^2} and is Frobenius-stable.
    """
    if any(d != 2 for d in A.sizes):
        raise ValueError("every block must have size 2")
    Q, basis = _quotient_tensor(A)
    spec = A.spec
    quotient = cayley_points(Q, 1).points
    lifts = []
    for t in quotient:
        w = [sum((c * b[k] for c, b in zip(t.coords, basis)), spec.zero) for k in range(3 * A.r)]
        parts, scales = [], []
        for l in range(A.r):
            w0, w1, w2 = w[3 * l: 3 * l + 3]
            if w0:
                parts.append([w0, w1])
                scales.append(w0.inv())
            elif w2:
                parts.append([w1, w2])
                scales.append(w2.inv())
            else:
                parts = None
                break
        if parts is None:
            continue
        ratios = [s / scales[0] for s in scales]
        ext = spec if all(r.is_square() for r in ratios) else field_make(spec.p, 2)
        roots = [ext(r).sqrt() if ext != spec else r.sqrt() for r in ratios]
        y = ProjPoint.of([rt * ext(c) if ext != spec else rt * c for rt, part in zip(roots, parts) for c in part])
        lifts.extend(daut_orbit(A.sizes, y))
    return len(quotient), lifts


def _random_vector(spec: FieldSpec, dim: int, rng: random.Random) -> list[Fq]:
    while True:
        v = [spec.random(rng) for _ in range(dim)]
        if any(v):
            return v


def _bilinear(C: Sequence[Sequence[Fq]], u: Sequence[Fq], v: Sequence[Fq]) -> Fq:
    return linalg._dot(u, linalg.mat_vec(C, v))


def _cone_as_rank_one_form(C, rng: random.Random) -> list[list[Fq]] | None:
    """A 3x4 matrix M with C proportional to M^T S M, S the form w0 w2 - w1^2.

    C must have rank 3.  Coordinates are taken in a basis (e, f, g, v) with e, f
    a hyperbolic pair, g orthogonal to both and v spanning the kernel.
    """
    spec = C[0][0].spec
    kernel = linalg.kernel_basis(C).basis
    if len(kernel) != 1:
        return None
    v = list(kernel[0])
    for _ in range(200 * spec.order):
        e = _random_vector(spec, 4, rng)
        if not _bilinear(C, e, e) and any(linalg.mat_vec(C, e)):
            break
    else:
        return None
    while True:
        f = _random_vector(spec, 4, rng)
        h = _bilinear(C, e, f)
        if h:
            break
    f = [c * h.inv() for c in f]
    half_ff = _bilinear(C, f, f) * spec(2).inv()
    f = [a - half_ff * b for a, b in zip(f, e)]
    orth = linalg.kernel_basis([linalg.mat_vec(C, e), linalg.mat_vec(C, f)]).basis
    g = next((list(u) for u in orth if _bilinear(C, u, u)), None)
    if g is None:
        g = [a + b for a, b in zip(orth[0], orth[1])]
    c = _bilinear(C, g, g)
    P = linalg.transpose([e, f, g, v])
    inverse_rows = linalg.transpose([linalg.solve(P, [spec.one if k == j else spec.zero for k in range(4)]) for j in range(4)])
    x, y, z = inverse_rows[0], inverse_rows[1], inverse_rows[2]
    scale = -(spec(2) * c.inv())
    return [list(x), list(z), [scale * t for t in y]]


def genus5_from_octad(spec: FieldSpec, rng: random.Random) -> tuple[BlockTensor, list[ProjPoint]] | str:
    """A (2,2,2)-block tensor whose sign quotient is a net with 8 rational base points.

    Seven random points of P^3 fix a net of quadrics whose eighth base point is
    then rational.  Three independent rank-3 members of the net are written as
    pullbacks of w0 w2 - w1^2, which gives the block monomial maps, and the slices
    span the linear forms vanishing on their joint image.
    """
    points = [ProjPoint.of(_random_vector(spec, 4, rng)) for _ in range(7)]
    basis = quadrics_through_points(spec, 0, (4,), [q.coords for q in points])
    if len(basis) != 3:
        return "seven points do not impose independent conditions"
    net = [tensor_from_vector(spec, 0, (4,), b).blocks[0].slices[0] for b in basis]
    octad = cayley_points(BlockTensor(spec, 2, (Block(4, tuple(net)),)), 1)
    if octad.count != 8 or not octad.complete:
        return f"net has {octad.count} rational base points"
    cones = []
    plane = [[spec.one, spec(a), spec(b)] for a, b in itertools.product(range(spec.p), repeat=2)]
    plane += [[spec.zero, spec.one, spec(a)] for a in range(spec.p)] + [[spec.zero, spec.zero, spec.one]]
    for lead in plane:
        M = [[sum((a * S[i][j] for a, S in zip(lead, net)), spec.zero) for j in range(4)] for i in range(4)]
        if linalg.rank(M) == 3:
            cones.append((lead, M))
    rng.shuffle(cones)
    chosen = []
    for lead, M in cones:
        if linalg.rank([c[0] for c in chosen] + [lead]) == len(chosen) + 1:
            chosen.append((lead, M))
            if len(chosen) == 3:
                break
    if len(chosen) < 3:
        return "too few rational cones in the net"
    maps = [_cone_as_rank_one_form(M, rng) for _, M in chosen]
    if any(m is None for m in maps):
        return "cone without a rational ruling"
    W = [row for m in maps for row in m]
    forms = linalg.left_kernel_basis(W).basis
    while True:
        g = [_random_vector(spec, len(forms), rng) for _ in forms]
        if linalg.det(g):
            break
    half = spec(2).inv()
    slices = [[], [], []]
    for coeffs in g:
        r = [sum((c * f[k] for c, f in zip(coeffs, forms)), spec.zero) for k in range(9)]
        for l in range(3):
            a, b, d = r[3 * l: 3 * l + 3]
            slices[l].append(((a, b * half), (b * half, d)))
    A = BlockTensor(spec, 4, tuple(Block(2, tuple(sl)) for sl in slices))
    return A, list(octad.points)


# quintic seeds: one rational point and conjugate pairs, so that most secants
# are defined over F_{q^2} and small-field coincidences are rare
QUINTIC_SEED_DEGREES = (1, 2, 2, 2, 2, 2)


def projection_lifts(A: BlockTensor) -> tuple[int, list[ProjPoint]]:
    """Cayley points of a (2,3)-block tensor found through their block-2 parts.

    For fixed z in the size-3 block the size-2 block enters linearly through
    w = (y0^2, y0 y1, y1^2), so solvability is a conic in z, and the point lifts
    when the solution w has rank one with a square scale.  Returns the number
    of rational conic points tried and the rational lifts.
    """
    if A.sizes != (2, 3):
        raise ValueError("block sizes must be (2, 3)")
    spec = A.spec
    n = A.n
    W = [[s[0][0], s[0][1] + s[0][1], s[1][1]] for s in A.blocks[0].slices]
    C = A.blocks[1].slices
    cof = []
    for i in range(n + 1):
        minor = [row for k, row in enumerate(W) if k != i]
        c = linalg.det(minor)
        cof.append(c if (i + n) % 2 == 0 else -c)
    if not any(cof):
        raise ValueError("size-2 block slices are dependent")
    S = [[sum((cof[i] * C[i][a][b] for i in range(n + 1)), spec.zero) for b in range(3)] for a in range(3)]
    from .variety import projective_chunks

    conic_points = []
    for Z in projective_chunks(2, spec.order):
        acc = 0
        for a in range(3):
            for b in range(3):
                if S[a][b]:
                    acc = (acc + int(S[a][b]) * Z[:, a] * Z[:, b]) % spec.p
        conic_points.extend(Z[acc == 0])
    lifts = []
    for row in conic_points:
        z = [spec(int(c)) for c in row]
        v = [-sum((C[i][a][b] * z[a] * z[b] for a in range(3) for b in range(3)), spec.zero) for i in range(n + 1)]
        w = linalg.solve(W, v)
        if not w:
            continue
        w0, w1, w2 = w
        if w0 * w2 != w1 * w1 or not any(w):
            continue
        if w0:
            r = w0.sqrt()
            y0 = [r, w1 / r] if r is not None else None
        else:
            r = w2.sqrt()
            y0 = [w1 / r, r] if r is not None else None
        if y0 is None:
            continue
        y = ProjPoint.of(y0 + z)
        lifts.extend(daut_orbit(A.sizes, y))
    return len(conic_points), sorted(set(lifts), key=ProjPoint.sort_key)


def _seed_points(shape: str, spec: FieldSpec, sizes, rng) -> list[ProjPoint]:
    if shape == "quintic":
        m = sum(sizes) - 1
        return [random_point_of_degree(spec.p, d, m, rng).lowered() for d in QUINTIC_SEED_DEGREES]
    return [random_point_off_blocks(spec, sizes, rng) for _ in range(SEED_ORBITS[shape])]


def _certified_cayley(A: BlockTensor, shape: str, expected: int) -> CayleyVariety | str:
    if shape == "genus5":
        found, lifts = sign_quotient_lifts(A)
        if len(lifts) != expected:
            return f"{len(lifts)} lifts of {found} quotient points"
        return cayley_from_candidates(A, lifts)
    if shape == "genus4":
        found, lifts = projection_lifts(A)
        if len(lifts) != expected:
            return f"{len(lifts)} rational lifts from {found} conic points"
        return cayley_from_candidates(A, lifts)
    if shape == "quintic":
        rational = cayley_points(A, 1)
        if rational.count % 2:
            return "odd number of rational points"
        return cayley_points(A, 2)
    return cayley_points(A, 1)


def _seed_shape(recipe: SeedRecipe, shape: str) -> Seeded:
    if recipe.shape != shape:
        raise ValueError(f"recipe is for {recipe.shape}, not {shape}")
    n, sizes = SHAPES[shape]
    spec = recipe.field
    expected = 2 ** (n + 1)
    last = ""
    for attempt in range(recipe.retries):
        rng = recipe.rng(attempt)
        try:
            if shape == "genus5":
                drawn = genus5_from_octad(spec, rng)
                if isinstance(drawn, str):
                    last = drawn
                    continue
                A, seeds = drawn
            else:
                seeds = _seed_points(shape, spec, sizes, rng)
                conditions = [q.coords for s in seeds for q in s.orbit()]
                basis = quadrics_through_points(spec, n, sizes, conditions)
                A = tensor_from_vector(spec, n, sizes, random_combination(spec, basis, rng))
            cv = _certified_cayley(A, shape, expected)
        except (InvalidTensor, UnsupportedPositiveDimensional) as exc:
            last = str(exc)
            continue
        if isinstance(cv, str):
            last = cv
            continue
        last = validate_smooth_instance(A, cv, expected) or essential_failure(A, shape) or ""
        if last:
            continue
        last, analysis = generic_position_failure(A, cv)
        if last:
            continue
        return Seeded(A, cv, seeds, attempt, {"shape": shape, "seed": recipe.rng_seed, "attempt": attempt}, analysis)
    raise RetriesExhausted(f"{shape}: {recipe.retries} attempts failed (last: {last})")


def seed_genus3(recipe: SeedRecipe) -> Seeded:
    return _seed_shape(recipe, "genus3")


def seed_genus4(recipe: SeedRecipe) -> Seeded:
    return _seed_shape(recipe, "genus4")


def seed_genus5(recipe: SeedRecipe) -> Seeded:
    return _seed_shape(recipe, "genus5")


def seed_quintic(recipe: SeedRecipe) -> Seeded:
    return _seed_shape(recipe, "quintic")


SEEDERS = {"genus3": seed_genus3, "genus4": seed_genus4, "genus5": seed_genus5, "quintic": seed_quintic}


def seed(shape: str, spec: FieldSpec, rng_seed: int, retries: int = 200) -> Seeded:
    return SEEDERS[shape](SeedRecipe(shape, spec, rng_seed, retries))


# -- singular genus-4 instances ------------------------------------------------------------

SINGULAR_SEED_ORBITS = 3


def seed_singular_genus4(recipe: SeedRecipe, p_star: ProjPoint | None = None, q_star: ProjPoint | None = None) -> Seeded:
    """A genus-4 tensor with A(p*, q*, .) = 0, so p* is an accidental singularity of X."""
    n, sizes = SHAPES["genus4"]
    spec = recipe.field
    last = ""
    for attempt in range(recipe.retries):
        rng = recipe.rng(attempt)
        ps = p_star or ProjPoint.of([spec.random(rng) for _ in range(n + 1)])
        if not any(ps.coords):
            continue
        qs = q_star or random_point_off_blocks(spec, sizes, rng)
        seeds = [random_point_off_blocks(spec, sizes, rng) for _ in range(SINGULAR_SEED_ORBITS)]
        extra = singular_conditions(spec, n, sizes, ps.coords, qs.coords)
        basis = quadrics_through_points(spec, n, sizes, [s.coords for s in seeds] + [qs.coords], extra)
        if not basis:
            raise ConditionsInconsistent("no nonzero tensor satisfies the conditions")
        try:
            A = tensor_from_vector(spec, n, sizes, random_combination(spec, basis, rng))
            cv = cayley_points(A, 1)
        except (InvalidTensor, UnsupportedPositiveDimensional) as exc:
            last = str(exc)
            continue
        if not cv.geometrically_complete or any(_on_block_space(A, y) for y in cv.points):
            last = f"cayley count {cv.count}"
            continue
        if low_degree_degeneracy_check(A):
            last = "low-degree degeneracy"
            continue
        rec = classify_singularity(A, ps)
        if rec is None or rec.kind != "accidental":
            last = f"p* classified as {rec.kind if rec else 'smooth'}"
            continue
        # all Cayley points are rational here, so two non-reduced points means
        # p* is the only accidental singularity, rational or not
        nonreduced = [y for y in cv.points if not point_is_reduced(A, y)]
        others = [r for r in singular_points(A, 1) if r.point != ps]
        if len(nonreduced) != 2 or others:
            last = f"{len(nonreduced)} non-reduced Cayley points, {len(others)} further singular points"
            continue
        return Seeded(
            A, cv, seeds + [qs], attempt,
            {"shape": "genus4", "p_star": ps, "q_star": qs, "attempt": attempt},
        )
    raise RetriesExhausted(f"singular genus4: {recipe.retries} attempts failed (last: {last})")


# -- octads with prescribed Galois orbit types ----------------------------------------------

@dataclass(frozen=True)
class OrbitType:
    """n1 rational points, n2 conjugate pairs, and further orbits of the given degrees."""

    n1: int
    n2: int
    higher: tuple[int, ...] = ()

    def __post_init__(self):
        if self.n1 < 1:
            raise ValueError("the forced eighth point is rational, so n1 >= 1")
        if self.n1 + 2 * self.n2 + sum(self.higher) != 8 or any(d < 3 for d in self.higher):
            raise ValueError("orbit degrees must partition 8")

    def rational_bitangents(self) -> int:
        return self.n1 * (self.n1 - 1) // 2 + self.n2


def seed_octad(spec: FieldSpec, orbit_type: OrbitType, rng_seed: int, retries: int = 50) -> Seeded:
    """A plane-quartic tensor whose octad has the requested Frobenius orbit type."""
    n, sizes = SHAPES["genus3"]
    degrees = [1] * (orbit_type.n1 - 1) + [2] * orbit_type.n2 + list(orbit_type.higher)
    last = ""
    for attempt in range(retries):
        rng = random.Random(f"octad:{spec.p}:{orbit_type}:{rng_seed}:{attempt}")
        reps = [random_point_of_degree(spec.p, d, 3, rng) for d in degrees]
        if any(d == 1 for d in degrees):
            reps = [r.lowered() for r in reps]
        pts = [q for r in reps for q in r.orbit()]
        basis = quadrics_through_points(spec, n, sizes, [q.coords for q in pts])
        try:
            A = tensor_from_vector(spec, n, sizes, random_combination(spec, basis, rng))
            rational = cayley_points(A, 1)
        except (InvalidTensor, UnsupportedPositiveDimensional) as exc:
            last = str(exc)
            continue
        candidates = list(rational.points) + [r for r in reps if r.ext_degree > 1]
        cv = cayley_from_candidates(A, candidates)
        if not cv.complete or rational.count != orbit_type.n1:
            last = f"{cv.count} points, {rational.count} rational"
            continue
        return Seeded(A, cv, reps, attempt, {"orbit_type": orbit_type, "attempt": attempt})
    raise RetriesExhausted(f"octad {orbit_type}: {retries} attempts failed (last: {last})")
