"""Named end-to-end checks on seeded instances, shared by the CLI and the tests."""

from __future__ import annotations

import random
from typing import Callable

from . import linalg
from .exactfield import FieldSpec, field_make
from .instances import SeedRecipe, daut_orbit, seed, seed_singular_genus4
from .pipelines import (
    PipelineResult,
    genus3_pipeline,
    genus4_pipeline,
    genus5_pipeline,
    quintic_pipeline,
    recillas_instance,
)
from .tensor import BlockTensor, block_coranks, contract_yy, gauss_diagram_holds, jacobian_at
from .variety import incidence_cover, point_is_reduced, points_of_x, singular_points

# what each check asserts, carried into reports next to the claim id
STATEMENTS: dict[str, str] = {
    "g3-octad-8": "the Cayley variety of a plane quartic tensor is 8 reduced points",
    "g3-secants-28": "8 Cayley points span 28 secant lines",
    "g3-rational-bitangents-formula": "Frobenius-stable secants number C(n1,2)+n2",
    "g3-rational-bitangents-in-S": "the rational bitangent count lies in {28,16,10,8,6,4,3,2,1,0}",
    "g3-lines-28": "psi sends the 28 secants to 28 distinct lines",
    "g3-contacts-2": "each such line is tangent to the quartic at exactly 2 points",
    "g4-count-16": "the Cayley variety of a (2,3)-block tensor is 16 points",
    "g4-secants-120": "16 points span 120 secants",
    "g4-split-8-56": "sign patterns split the secants into 8 fixed and 56 swapped pairs",
    "g4-hyperplanes-64": "the secants give 56 odd-type and 8 sigma-fixed hyperplanes",
    "g4-odd-contacts-3": "every odd-type hyperplane is tangent at exactly 3 points",
    "g4-theta0-cone-tangent": "every sigma-fixed hyperplane is tangent to the quadric cone",
    "g4-kernel-images-on-line": "kernel images of contact points lie on the projected line",
    "g4-projection-8x2": "projection of the Cayley points is 8 points with fibers of size 2",
    "g4-lines-28": "odd-type secants map 4-to-1 onto 28 lines",
    "g4-line-pairs-2": "each projected line carries exactly 2 distinct hyperplanes",
    "g5-count-32": "the Cayley variety of a (2,2,2)-block tensor is 32 points",
    "g5-orbits-8x4": "sign patterns group the points into 8 orbits of size 4",
    "g5-secants-496": "32 points span 496 secants",
    "g5-secant-orbits-136": "sign patterns group the secants into 136 orbits",
    "g5-theta0-8-per-block": "each block has 8 sigma-fixed hyperplane classes",
    "g5-odd-112": "112 hyperplanes are of odd type",
    "g5-odd-contacts-4": "every odd-type hyperplane is tangent at exactly 4 points",
    "g5-orbit-anatomy": "orbit sizes are 2 for sigma-fixed and 4 for odd-type classes",
    "quintic-count-16": "the Cayley variety of a quintic symmetroid tensor is 16 points",
    "quintic-secants-120": "16 points span 120 secants",
    "quintic-tritangents-120": "the secants give 120 distinct tritangent planes",
    "quintic-collinear-kernels": "kernel images of each contact triple lie on the secant",
    "quintic-nodes-corank-2": "singular points found have corank 2 and number at most 20",
    "quintic-nodes-20": "a certified complete node scan finds 20 nodes",
    "incidence-unique-singularity": "the seeded singular point is the only non-essential singularity",
    "incidence-fiber-2": "the incidence cover has a fiber of 2 geometric points",
    "incidence-fiber-one-orbit": "the fiber is a single sign-pattern orbit",
    "incidence-nonreduced": "the fiber points are exactly the non-reduced Cayley points",
    "psi-gauss-diagram": "psi of the kernel equals the gradient at every sampled smooth point",
    "recillas-lifts-in-cayley": "every lifted point lies in the Cayley variety",
    "recillas-branch-points": "projected Cayley points are the branch points, with fibers of size 2",
}

DEFAULT_FIELDS = {"genus3": (101, 1), "genus4": (101, 1), "genus5": (41, 1), "quintic": (11, 1)}


def seeded_pipeline(shape: str, spec: FieldSpec, rng_seed: int, A: BlockTensor | None = None, E: int = 2) -> PipelineResult:
    """Run a shape's pipeline on A, or on a freshly seeded instance."""
    cv = analysis = None
    if A is None:
        s = seed(shape, spec, rng_seed)
        A, cv, analysis = s.tensor, s.cayley, s.analysis
    if shape == "genus3":
        return genus3_pipeline(A, 1, cv, analysis)
    if shape == "genus4":
        return genus4_pipeline(A, cv, analysis)[0]
    if shape == "genus5":
        return genus5_pipeline(A, cv, analysis)
    if shape == "quintic":
        return quintic_pipeline(A, E, cv, analysis)
    raise ValueError(f"unknown shape {shape!r}")


def incidence_cover_check(spec: FieldSpec, rng_seed: int) -> PipelineResult:
    s = seed_singular_genus4(SeedRecipe("genus4", spec, rng_seed))
    A, cv = s.tensor, s.cayley
    p_star = s.provenance["p_star"]
    res = PipelineResult("genus4", cv.count, 0, {})
    sing = [r for r in singular_points(A, 1) if r.kind != "essential"]
    res.add("incidence-unique-singularity", [r.point for r in sing] == [p_star], f"{[r.point for r in sing]}")
    cover = incidence_cover(A, cv, [p_star])
    fiber = cover.fibers[p_star]
    res.add("incidence-fiber-2", len(fiber) == 2 and cover.expected_degree == 2, f"{len(fiber)} points")
    res.add("incidence-fiber-one-orbit", len(fiber) == 2 and fiber[1] in daut_orbit(A.sizes, fiber[0]))
    nonreduced = {y for y in cv.points if not point_is_reduced(A, y)}
    res.add("incidence-nonreduced", nonreduced == set(fiber), f"{len(nonreduced)} non-reduced")
    res.data["p_star"] = p_star
    res.data["fiber"] = fiber
    return res


def smooth_points(A: BlockTensor, ext_degree: int = 1) -> list:
    """Points of X with corank 1 in every block and a Jacobian of full rank."""
    out = []
    for x in points_of_x(A, ext_degree):
        if block_coranks(A, x.coords) == [1] * A.r and linalg.rank(jacobian_at(A, x.coords)) == A.r:
            out.append(x)
    return out


def gauss_diagram_check(A: BlockTensor, samples: int = 200, rng_seed: int = 0) -> PipelineResult:
    pts = smooth_points(A)
    rng = random.Random(rng_seed)
    chosen = pts if len(pts) <= samples else rng.sample(pts, samples)
    bad = [x for x in chosen if not gauss_diagram_holds(A, x.coords)]
    res = PipelineResult("any", 0, 0, {})
    res.add("psi-gauss-diagram", bool(chosen) and not bad, f"{len(bad)} of {len(chosen)} smooth points fail")
    res.data["sampled"] = len(chosen)
    return res


def recillas_check(spec: FieldSpec, rng_seed: int) -> PipelineResult:
    inst = recillas_instance(spec, rng_seed)
    A = inst.tensor
    res, census = genus4_pipeline(A, inst.cayley)
    res.add("recillas-lifts-in-cayley", all(not any(contract_yy(A, y.coords)) for y in inst.cayley.points))
    same = set(census.projected_points) == set(inst.branch_points)
    res.add("recillas-branch-points", same and res.check("g4-projection-8x2").passed)
    return res


VERIFY: dict[str, Callable[..., PipelineResult]] = {
    "g3-bitangents": lambda spec, s, A=None, E=2: seeded_pipeline("genus3", spec, s, A, E),
    "g4-tritangents": lambda spec, s, A=None, E=2: seeded_pipeline("genus4", spec, s, A, E),
    "g5-quadritangents": lambda spec, s, A=None, E=2: seeded_pipeline("genus5", spec, s, A, E),
    "quintic-tritangents": lambda spec, s, A=None, E=2: seeded_pipeline("quintic", spec, s, A, E),
    "incidence-cover": lambda spec, s, A=None, E=2: incidence_cover_check(spec, s),
    "psi-gauss-diagram": lambda spec, s, A=None, E=2: gauss_diagram_check(A if A is not None else seed("genus3", spec, s).tensor),
    "recillas": lambda spec, s, A=None, E=2: recillas_check(spec, s),
}

VERIFY_SHAPES = {
    "g3-bitangents": "genus3",
    "g4-tritangents": "genus4",
    "g5-quadritangents": "genus5",
    "quintic-tritangents": "quintic",
    "incidence-cover": "genus4",
    "psi-gauss-diagram": "genus3",
    "recillas": "genus4",
}


def default_field(claim: str) -> FieldSpec:
    return field_make(*DEFAULT_FIELDS[VERIFY_SHAPES[claim]])
