"""End-to-end verification for the four curve and surface shapes.

Each pipeline returns named checks rather than raising on a failed count, so a
report shows every claim at once.  Preconditions (shape, smoothness, complete
Cayley variety) do raise.
"""

from __future__ import annotations

import random
import warnings
from dataclasses import dataclass, field
from math import comb
from typing import Sequence

from . import linalg, poly
from .exactfield import FieldSpec, Fq
from .instances import (
    RetriesExhausted,
    daut_orbit,
    essential_failure,
    generic_position_failure,
    projection_lifts,
    sign_quotient_lifts,
)
from .secants import (
    ODD,
    SecantAnalysis,
    _common,
    all_secants,
    analyze_secants,
    tangent_to_block_quadric,
    theta0,
)
from .tensor import Block, BlockTensor, InvalidTensor, block_coranks, contract_x_block, daut_classes
from .variety import (
    CayleyIncomplete,
    CayleyVariety,
    ProjPoint,
    cayley_from_candidates,
    cayley_points,
    essential_locus_scan,
    low_degree_degeneracy_check,
    size_two_essential_free,
)

BITANGENT_VALUES = frozenset({28, 16, 10, 8, 6, 4, 3, 2, 1, 0})


class NondegeneracyFailure(ValueError):
    pass


class DegenerateConic(ValueError):
    pass


@dataclass(frozen=True)
class Check:
    claim: str
    passed: bool
    detail: str = ""


@dataclass
class PipelineResult:
    shape: str
    cayley_count: int
    secant_count: int
    orbit_census: dict[str, int]
    checks: list[Check] = field(default_factory=list)
    data: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failed(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def check(self, claim: str) -> Check:
        return next(c for c in self.checks if c.claim == claim)

    def add(self, claim: str, passed: bool, detail: str = ""):
        self.checks.append(Check(claim, bool(passed), detail))


def _require_shape(A: BlockTensor, n: int, sizes: tuple[int, ...]):
    if A.n != n or A.sizes != sizes:
        raise NondegeneracyFailure(f"expected n={n}, blocks {sizes}; got n={A.n}, blocks {A.sizes}")


def _require_smooth_cayley(A: BlockTensor, cv: CayleyVariety):
    if not cv.complete:
        raise CayleyIncomplete(f"{cv.count} of {cv.bezout_bound} points certified")
    if low_degree_degeneracy_check(A):
        raise NondegeneracyFailure("a small block is degenerate")
    for y in cv.points:
        if any(not any(A.block_part(y.coords, l)) for l in range(A.r)):
            raise NondegeneracyFailure(f"Cayley point {y} lies on a block space")


def _quiet_scan(A: BlockTensor, E: int) -> list[ProjPoint]:
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return essential_locus_scan(A, E)


def _point_orbits(A: BlockTensor, cv: CayleyVariety) -> list[frozenset[int]]:
    pos = {p: k for k, p in enumerate(cv.points)}
    out = []
    for k, y in enumerate(cv.points):
        orb = frozenset(pos[ProjPoint.of(pat.apply(A, y.coords))] for pat in daut_classes(A))
        if orb not in out:
            out.append(orb)
    return out


# -- genus 3 -------------------------------------------------------------------------------

def rational_bitangent_count(cv: CayleyVariety) -> tuple[int, int, int]:
    """(Frobenius-stable secants, rational points n1, conjugate pairs n2)."""
    stable = sum(s.frobenius_stable for s in all_secants(cv))
    degrees = cv.orbit_degrees()
    return stable, degrees.count(1), degrees.count(2)


def genus3_pipeline(
    A: BlockTensor,
    E: int = 1,
    cv: CayleyVariety | None = None,
    analysis: SecantAnalysis | None = None,
    contacts: bool = True,
) -> PipelineResult:
    _require_shape(A, 2, (4,))
    cv = cv or cayley_points(A, E)
    _require_smooth_cayley(A, cv)
    secants = all_secants(cv)
    res = PipelineResult("genus3", cv.count, len(secants), {})
    res.add("g3-octad-8", cv.count == 8, f"{cv.count} points")
    res.add("g3-secants-28", len(secants) == 28, f"{len(secants)} secants")
    stable, n1, n2 = rational_bitangent_count(cv)
    res.data.update(rational_bitangents=stable, n1=n1, n2=n2)
    res.add("g3-rational-bitangents-formula", stable == comb(n1, 2) + n2, f"{stable} vs C({n1},2)+{n2}")
    res.add("g3-rational-bitangents-in-S", stable in BITANGENT_VALUES, f"{stable}")
    if contacts:
        analysis = analysis or analyze_secants(A, cv)
        res.orbit_census = analysis.census.by_class
        res.add("g3-lines-28", analysis.census.count == 28, f"{analysis.census.count} distinct lines")
        bad = [r.secant for r in analysis.reports if len(r.contact_points) != 2 or r.tangent_count != 2]
        res.add("g3-contacts-2", not bad, f"{len(bad)} secants without 2 tangent contact points")
    return res


# -- genus 4 -------------------------------------------------------------------------------

@dataclass
class ProjectedLineCensus:
    projected_points: list[ProjPoint]
    lines: list[tuple[int, int]]
    fiber_map: dict[int, int]
    cover_degrees: tuple[int | None, int | None]


def project_genus4(y: ProjPoint) -> ProjPoint:
    """Drop the size-2 block coordinates."""
    return ProjPoint.of(list(y.coords[2:])).lowered()


def genus4_cayley(A: BlockTensor) -> CayleyVariety:
    """Cayley points via conic lifting when all are rational, else a sweep at E = 1."""
    _, lifts = projection_lifts(A)
    if len(lifts) == 16:
        return cayley_from_candidates(A, lifts)
    return cayley_points(A, 1)


def _on_line(u: Sequence[Fq], v: Sequence[Fq], w: Sequence[Fq]) -> bool:
    u, v, w = _common(None, u, v, w)
    return linalg.rank([u, v, w]) <= 2


def genus4_pipeline(
    A: BlockTensor, cv: CayleyVariety | None = None, analysis: SecantAnalysis | None = None
) -> tuple[PipelineResult, ProjectedLineCensus]:
    _require_shape(A, 3, (2, 3))
    cv = cv or genus4_cayley(A)
    _require_smooth_cayley(A, cv)
    if not all(cv.reduced) or essential_failure(A, "genus4"):
        raise NondegeneracyFailure("X is singular")
    analysis = analysis or analyze_secants(A, cv)
    reports = analysis.reports
    res = PipelineResult("genus4", cv.count, len(analysis.secants), analysis.census.by_class)
    res.add("g4-count-16", cv.count == 16, f"{cv.count} points")
    res.add("g4-secants-120", len(analysis.secants) == 120, f"{len(analysis.secants)} secants")
    fixed = sum(o.sigma_fixed for o in analysis.orbits)
    pairs = sum(o.size == 2 for o in analysis.orbits)
    res.add("g4-split-8-56", (fixed, pairs) == (8, 56), f"{fixed} fixed, {pairs} pairs")
    by = analysis.census.by_class
    res.add(
        "g4-hyperplanes-64",
        analysis.census.count == 64 and by.get(ODD) == 56 and by.get(theta0(0)) == 8,
        f"{analysis.census.count} planes: {by}",
    )
    odd = [r for r in reports if r.classification == ODD]
    bad = [r for r in odd if len(r.contact_points) != 3 or r.tangent_count != 3]
    res.add("g4-odd-contacts-3", not bad and len(odd) == 112, f"{len(bad)} of {len(odd)} odd secants fail")
    cone = [r for r in reports if r.classification == theta0(0)]
    res.add(
        "g4-theta0-cone-tangent",
        all(tangent_to_block_quadric(A, 0, r.hyperplane) is not None for r in cone),
        f"{len(cone)} sigma-fixed secants",
    )
    collinear = True
    for r in odd:
        p, q = cv.points[r.secant.i], cv.points[r.secant.j]
        for c in r.contact_points:
            x = list(c.point.coords)
            At = A.over(x[0].spec)
            K = linalg.kernel_basis(contract_x_block(At, 1, x))
            if K.dim != 1 or not _on_line(p.coords[2:], q.coords[2:], K.basis[0]):
                collinear = False
    res.add("g4-kernel-images-on-line", collinear)

    proj = [project_genus4(y) for y in cv.points]
    distinct = sorted(set(proj), key=ProjPoint.sort_key)
    index = {z: k for k, z in enumerate(distinct)}
    fibers = [proj.count(z) for z in distinct]
    res.add("g4-projection-8x2", len(distinct) == 8 and set(fibers) == {2}, f"{len(distinct)} images, fibers {sorted(set(fibers))}")
    lines: list[tuple[int, int]] = []
    fiber_map: dict[int, int] = {}
    for t, r in enumerate(reports):
        if r.classification != ODD:
            continue
        a, b = index[proj[r.secant.i]], index[proj[r.secant.j]]
        line = (min(a, b), max(a, b))
        if line not in lines:
            lines.append(line)
        fiber_map[t] = lines.index(line)
    order = sorted(range(len(lines)), key=lambda k: lines[k])
    rank_of = {old: new for new, old in enumerate(order)}
    lines = [lines[k] for k in order]
    fiber_map = {t: rank_of[k] for t, k in fiber_map.items()}
    secants_per = [sum(1 for v in fiber_map.values() if v == k) for k in range(len(lines))]
    planes_per = [len({reports[t].hyperplane for t, v in fiber_map.items() if v == k}) for k in range(len(lines))]
    degs = (
        secants_per[0] if len(set(secants_per)) == 1 else None,
        planes_per[0] if len(set(planes_per)) == 1 else None,
    )
    res.add("g4-lines-28", len(lines) == 28 and degs == (4, 2), f"{len(lines)} lines, cover degrees {degs}")
    sig = daut_classes(A)[1]
    pos = {p: k for k, p in enumerate(cv.points)}
    pairing = True
    for t, r in enumerate(reports):
        if r.classification != ODD:
            continue
        i, j = r.secant.i, r.secant.j
        j2 = pos[ProjPoint.of(sig.apply(A, cv.points[j].coords))]
        other = next(u for u in reports if {u.secant.i, u.secant.j} == {i, j2})
        line_planes = {reports[u].hyperplane for u, v in fiber_map.items() if v == fiber_map[t]}
        if {r.hyperplane, other.hyperplane} != line_planes:
            pairing = False
    res.add("g4-line-pairs-2", pairing)
    census = ProjectedLineCensus(distinct, lines, fiber_map, degs)
    return res, census


# -- genus 5 -------------------------------------------------------------------------------

def genus5_cayley(A: BlockTensor) -> CayleyVariety:
    """Cayley points through the sign quotient, certified by the Bezout count."""
    _, lifts = sign_quotient_lifts(A)
    if len(lifts) == 32:
        return cayley_from_candidates(A, lifts)
    return cayley_points(A, 1)


def genus5_pipeline(
    A: BlockTensor, cv: CayleyVariety | None = None, analysis: SecantAnalysis | None = None
) -> PipelineResult:
    _require_shape(A, 4, (2, 2, 2))
    cv = cv or genus5_cayley(A)
    _require_smooth_cayley(A, cv)
    if not all(cv.reduced) or not size_two_essential_free(A):
        raise NondegeneracyFailure("X is singular")
    analysis = analysis or analyze_secants(A, cv)
    reports = analysis.reports
    res = PipelineResult("genus5", cv.count, len(analysis.secants), analysis.census.by_class)
    orbits = _point_orbits(A, cv)
    res.add("g5-count-32", cv.count == 32, f"{cv.count} points")
    res.add("g5-orbits-8x4", len(orbits) == 8 and {len(o) for o in orbits} == {4}, f"{len(orbits)} orbits")
    res.add("g5-secants-496", len(analysis.secants) == 496, f"{len(analysis.secants)} secants")
    res.add("g5-secant-orbits-136", len(analysis.orbits) == 136, f"{len(analysis.orbits)} orbits")
    by = analysis.census.by_class
    per_l = [by.get(theta0(l), 0) for l in range(3)]
    sigma_orbits = sum(1 for o in analysis.orbits if reports[o.representative].classification != ODD)
    res.add("g5-theta0-8-per-block", per_l == [8, 8, 8] and sigma_orbits == 24, f"{per_l}, {sigma_orbits} orbits")
    res.add("g5-odd-112", by.get(ODD) == 112, f"{by.get(ODD)}")
    odd = [r for r in reports if r.classification == ODD]
    bad = [r for r in odd if len(r.contact_points) != 4 or r.tangent_count != 4]
    res.add("g5-odd-contacts-4", not bad, f"{len(bad)} of {len(odd)} odd secants fail")
    index = {(s.i, s.j): t for t, s in enumerate(analysis.secants)}
    orbit_of = {t: k for k, o in enumerate(analysis.orbits) for t in o.members}
    anatomy = True
    for orb in orbits:
        members = sorted(orb)
        internal = [index[(a, b)] for a in members for b in members if a < b]
        classes = {orbit_of[t] for t in internal}
        kinds = sorted(reports[t].classification for t in internal)
        if len(classes) != 3 or kinds != sorted([theta0(l) for l in range(3)] * 2):
            anatomy = False
    res.add("g5-orbit-anatomy", anatomy)
    return res


# -- quintic symmetroid --------------------------------------------------------------------

def quintic_pipeline(
    A: BlockTensor, E: int = 2, cv: CayleyVariety | None = None, analysis: SecantAnalysis | None = None
) -> PipelineResult:
    _require_shape(A, 3, (5,))
    cv = cv or cayley_points(A, E)
    _require_smooth_cayley(A, cv)
    analysis = analysis or analyze_secants(A, cv)
    res = PipelineResult("quintic", cv.count, len(analysis.secants), analysis.census.by_class)
    res.add("quintic-count-16", cv.count == 16, f"{cv.count} points")
    res.add("quintic-secants-120", len(analysis.secants) == 120)
    res.add("quintic-tritangents-120", analysis.census.count == 120, f"{analysis.census.count} distinct planes")
    bad = 0
    for r in analysis.reports:
        ok = len(r.contact_points) == 3 and all(
            c.tangent and c.kernel_meets_secant and block_coranks(A, c.point.coords) == [1] for c in r.contact_points
        )
        bad += not ok
    res.add("quintic-collinear-kernels", bad == 0, f"{bad} planes fail")
    nodes = _quiet_scan(A, E)
    coranks = {block_coranks(A, x.coords)[0] for x in nodes}
    res.data["quintic-nodes-corank-2"] = len(nodes)
    res.add("quintic-nodes-corank-2", coranks <= {2} and len(nodes) <= 20, f"{len(nodes)} points of corank {sorted(coranks)}")
    # the only completeness certificate is reaching the bound; below it the
    # remaining nodes may lie over larger fields, so nothing is asserted
    res.data["nodes_certified"] = len(nodes) == 20
    if len(nodes) == 20:
        res.add("quintic-nodes-20", True, f"20 found at E={E}")
    return res


# -- Recillas' construction ---------------------------------------------------------------

def recillas_slices(a, b, c, d, zero=0, one=1) -> list[list[list]]:
    """The four 5x5 slices: a fixed 2x2 block beside the coefficient matrices a, b, c, d."""
    z, m = zero, -one
    heads = [((m, z), (z, z)), ((z, m), (m, z)), ((z, z), (z, m)), ((z, z), (z, z))]
    out = []
    for head, low in zip(heads, (a, b, c, d)):
        S = [[z] * 5 for _ in range(5)]
        for i in range(2):
            for j in range(2):
                S[i][j] = head[i][j]
        for i in range(3):
            for j in range(3):
                S[2 + i][2 + j] = low[i][j]
        out.append(S)
    return out


def _as_field_matrix(spec: FieldSpec, M) -> list[list[Fq]]:
    return [[spec(v) for v in row] for row in M]


def recillas_construct(spec: FieldSpec, a, b, c, d) -> BlockTensor:
    """Tensor in k^4 (x) (Sym_2 k^2 + Sym_2 k^3) from the coefficient matrices of a, b, c and the conic d."""
    a, b, c, d = (_as_field_matrix(spec, M) for M in (a, b, c, d))
    if not linalg.det(d):
        raise DegenerateConic("the conic matrix is singular")
    slices = recillas_slices(a, b, c, d, spec.zero, spec.one)
    small = tuple(tuple(tuple(S[i][j] for j in range(2)) for i in range(2)) for S in slices)
    big = tuple(tuple(tuple(S[2 + i][2 + j] for j in range(3)) for i in range(3)) for S in slices)
    return BlockTensor(spec, 3, (Block(2, small), Block(3, big)))


def _qf(M: list[list[Fq]], v: Sequence[Fq]) -> Fq:
    return linalg._dot(v, linalg.mat_vec(M, v))


def recillas_lift(a, b, c, alpha: Sequence[Fq]) -> list[ProjPoint]:
    """Both lifts of a point of C with a c - (b/2)^2 = 0, or [] when no square root exists."""
    spec = alpha[0].spec
    av, bv, cv = (_qf(M, alpha) for M in (a, b, c))
    half = spec(2).inv()
    if av and av.sqrt() is not None:
        r = av.sqrt()
        head = [r, bv * half / r]
    elif cv and cv.sqrt() is not None:
        r = cv.sqrt()
        head = [bv * half / r, r]
    else:
        return []
    y = ProjPoint.of(head + list(alpha))
    return daut_orbit((2, 3), y)


@dataclass
class RecillasInstance:
    tensor: BlockTensor
    a: list[list[Fq]]
    b: list[list[Fq]]
    c: list[list[Fq]]
    d: list[list[Fq]]
    branch_points: list[ProjPoint]
    cayley: CayleyVariety
    attempt: int


def _binary_to_ternary(spec: FieldSpec, f: Sequence[Fq], conic_multiple: Fq) -> list[list[Fq]]:
    """Pull a binary quartic back along t -> (1 : t : t^2), plus a multiple of y3^2 - y2 y4."""
    f = list(f) + [spec.zero] * (5 - len(f))
    half = spec(2).inv()
    M = [[spec.zero] * 3 for _ in range(3)]
    M[0][0] = f[0]
    M[0][1] = M[1][0] = f[1] * half
    M[1][1] = f[2] + conic_multiple
    M[0][2] = M[2][0] = -conic_multiple * half
    M[1][2] = M[2][1] = f[3] * half
    M[2][2] = f[4]
    return M


def _prod(values) -> Fq:
    values = list(values)
    out = values[0]
    for v in values[1:]:
        out = out * v
    return out


def recillas_instance(spec: FieldSpec, rng_seed: int, retries: int = 200, generic: bool = True) -> RecillasInstance:
    """A Recillas tensor whose 16 Cayley points are rational.

    The branch form F has 8 rational roots on the conic t -> (1:t:t^2); a and
    beta come from 4 auxiliary points where -F is a square, so that
    a c - beta^2 = F with b = 2 beta.
    """
    half = spec(2).inv()
    last = ""
    for attempt in range(retries):
        rng = random.Random(f"recillas:{spec.p}:{rng_seed}:{attempt}")
        elems = [spec(k) for k in range(spec.p)]
        rng.shuffle(elems)
        aux = elems[:4]
        a_bin = [spec.one]
        for r in aux:
            a_bin = poly.mul(a_bin, [-r, spec.one])
        pool = [t for t in elems[4:] if poly.evaluate(a_bin, t).is_square()]
        if len(pool) < 8:
            last = "too few branch candidates"
            continue
        roots = pool[:8]
        values = [-_prod(r - t for t in roots) for r in aux]
        lam = values[0]
        if not all((v * lam).is_square() for v in values):
            last = "-F is not a square at every auxiliary point"
            continue
        F = [lam]
        for t in roots:
            F = poly.mul(F, [-t, spec.one])
        beta = poly.interpolate(aux, [(-poly.evaluate(F, r)).sqrt() * rng.choice((1, -1)) for r in aux])
        c_bin, rem = poly.divmod_(poly.add(F, poly.mul(beta, beta)), a_bin)
        if rem:
            last = "division failed"
            continue
        a = _binary_to_ternary(spec, a_bin, spec.random(rng))
        b = _binary_to_ternary(spec, [x + x for x in beta], spec.random(rng))
        c = _binary_to_ternary(spec, c_bin, spec.random(rng))
        d = [[spec.zero, spec.zero, -half], [spec.zero, spec.one, spec.zero], [-half, spec.zero, spec.zero]]
        g = [[spec.random(rng) for _ in range(3)] for _ in range(3)]
        if not linalg.det(g):
            last = "singular change of coordinates"
            continue
        gt = linalg.transpose(g)
        a, b, c, d = (linalg.matmul(linalg.matmul(gt, M), g) for M in (a, b, c, d))
        ginv = linalg.rref([row + e for row, e in zip(g, linalg.identity(spec, 3))])[0]
        ginv = [row[3:] for row in ginv]
        branch = [ProjPoint.of(linalg.mat_vec(ginv, [spec.one, t, t * t])) for t in roots]
        try:
            A = recillas_construct(spec, a, b, c, d)
        except InvalidTensor as exc:
            last = str(exc)
            continue
        lifts = [y for z in branch for y in recillas_lift(a, b, c, z.coords)]
        if len(set(lifts)) != 16:
            last = f"{len(set(lifts))} lifts"
            continue
        cv = cayley_from_candidates(A, lifts)
        if not cv.complete or low_degree_degeneracy_check(A) or essential_failure(A, "genus4"):
            last = "degenerate or singular"
            continue
        if generic:
            why, _ = generic_position_failure(A, cv)
            if why:
                last = why
                continue
        return RecillasInstance(A, a, b, c, d, sorted(branch, key=ProjPoint.sort_key), cv, attempt)
    raise RetriesExhausted(f"recillas: {retries} attempts failed (last: {last})")
