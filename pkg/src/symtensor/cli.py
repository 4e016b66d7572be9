"""Command-line interface: ``symtensor <subcommand> [flags] [tensor.json]``.

Exit status is 0 when every check in the report passes, 1 when a check fails
or a computation cannot be certified, and 2 on usage or input errors.
"""

from __future__ import annotations

import argparse
import os
import sys
from typing import Sequence

from .claims import DEFAULT_FIELDS, STATEMENTS, VERIFY, default_field
from .exactfield import FieldSpec, field_make
from .fileio import TensorFileError, dumps, encode_element, encode_point, load_tensor, report_dict, save_tensor
from .instances import SHAPES, RetriesExhausted, seed
from .pipelines import (
    NondegeneracyFailure,
    PipelineResult,
    genus3_pipeline,
    genus4_cayley,
    genus4_pipeline,
    genus5_cayley,
    genus5_pipeline,
    quintic_pipeline,
)
from .secants import SecantAnalysis, analyze_secants
from .tensor import BlockTensor, daut_classes
from .variety import (
    DEFAULT_BUDGET,
    BudgetExceeded,
    CayleyIncomplete,
    CayleyVariety,
    ProjPoint,
    UnsupportedPositiveDimensional,
    cayley_points,
    singular_points,
)

THREADS_ENV = "SYMTENSOR_THREADS"


class UsageError(Exception):
    pass


# -- report pieces -------------------------------------------------------------------------

def _check_entries(res: PipelineResult) -> list[dict]:
    return [
        {"claim_id": c.claim, "statement": STATEMENTS.get(c.claim, ""), "pass": c.passed, "detail": c.detail}
        for c in res.checks
    ]


def _cayley_section(A: BlockTensor, cv: CayleyVariety) -> dict:
    pos = {y: k for k, y in enumerate(cv.points)}
    sign_orbits: list[list[int]] = []
    for k, y in enumerate(cv.points):
        images = {pos.get(ProjPoint.of(pat.apply(A, y.coords))) for pat in daut_classes(A)} - {None}
        orb = sorted(images | {k})
        if orb not in sign_orbits:
            sign_orbits.append(orb)
    return {
        "count": cv.count,
        "complete": cv.complete,
        "geometrically_complete": cv.geometrically_complete,
        "max_ext_degree": cv.max_ext_degree,
        "points": [encode_point(y) for y in cv.points],
        "reduced": list(cv.reduced),
        "orbits": [list(o) for o in cv.orbits],
        "sign_orbits": sign_orbits,
    }


def _secant_section(analysis: SecantAnalysis) -> dict:
    return {
        "count": len(analysis.secants),
        "orbit_count": len(analysis.orbits),
        "orbit_census": analysis.census.by_class,
        "distinct_hyperplanes": analysis.census.count,
    }


def _hyperplane_entries(analysis: SecantAnalysis, contacts: bool) -> list[dict]:
    out = []
    for oid, orb in enumerate(analysis.orbits):
        r = analysis.reports[orb.members[0]]
        entry = {
            "orbit_id": oid,
            "covector": [encode_element(c) for c in r.hyperplane.covector],
            "classification": r.classification,
            "secants": [[analysis.secants[t].i, analysis.secants[t].j] for t in orb.members],
        }
        if contacts:
            entry["contact_points"] = [encode_point(c.point) for c in r.contact_points]
            entry["tangent"] = [c.tangent for c in r.contact_points]
            entry["certified"] = r.certified
        out.append(entry)
    return out


# -- shared computation --------------------------------------------------------------------

def _shape_of(A: BlockTensor) -> str | None:
    for name, (n, sizes) in SHAPES.items():
        if A.n == n and A.sizes == sizes:
            return name
    return None


def _cayley(A: BlockTensor, E: int, budget: int) -> CayleyVariety:
    shape = _shape_of(A)
    if shape == "genus4":
        cv = genus4_cayley(A)
        if cv.complete:
            return cv
    if shape == "genus5":
        cv = genus5_cayley(A)
        if cv.complete:
            return cv
    # stop at the first degree where the Bezout count certifies completeness
    for e in range(1, E + 1):
        cv = cayley_points(A, e, budget)
        if cv.geometrically_complete:
            break
    return cv


# -- subcommands ---------------------------------------------------------------------------

def cmd_cayley(A: BlockTensor, args) -> tuple[dict, bool]:
    cv = _cayley(A, args.max_ext_degree, args.budget)
    res = PipelineResult(_shape_of(A) or "any", cv.count, 0, {})
    found = sum(1 if r else 2 for r in cv.reduced)
    res.add("cayley-complete", cv.geometrically_complete, f"{found} of {cv.bezout_bound} with multiplicity")
    return report_dict(A, res.shape, _cayley_section(A, cv), checks=_check_entries(res)), res.passed


def _analysis(A: BlockTensor, args, contacts: bool) -> tuple[CayleyVariety, SecantAnalysis]:
    cv = _cayley(A, args.max_ext_degree, args.budget)
    if not cv.complete:
        raise CayleyIncomplete(f"{cv.count} Cayley points found, not certified complete")
    return cv, analyze_secants(A, cv, with_contacts=contacts)


def cmd_secants(A: BlockTensor, args) -> tuple[dict, bool]:
    cv, analysis = _analysis(A, args, contacts=False)
    rep = report_dict(
        A, _shape_of(A), _cayley_section(A, cv), _secant_section(analysis), _hyperplane_entries(analysis, False)
    )
    return rep, True


def cmd_tangents(A: BlockTensor, args) -> tuple[dict, bool]:
    cv, analysis = _analysis(A, args, contacts=True)
    rep = report_dict(
        A, _shape_of(A), _cayley_section(A, cv), _secant_section(analysis), _hyperplane_entries(analysis, True)
    )
    return rep, True


def cmd_singularities(A: BlockTensor, args) -> tuple[dict, bool]:
    records = []
    for e in range(1, args.max_ext_degree + 1):
        for rec in singular_points(A, e, args.budget):
            records.append(
                {
                    "point": encode_point(rec.point),
                    "kind": rec.kind,
                    "block_coranks": list(rec.block_coranks),
                    "jacobian_corank": rec.jacobian_corank,
                }
            )
    return report_dict(A, _shape_of(A), extra={"singularities": records}), True


def cmd_pipeline(A: BlockTensor, args) -> tuple[dict, bool]:
    shape = args.shape
    n, sizes = SHAPES[shape]
    if (A.n, A.sizes) != (n, sizes):
        raise UsageError(f"--shape {shape} needs n={n} and blocks {sizes}; the tensor has n={A.n}, blocks {A.sizes}")
    cv, analysis = _analysis(A, args, contacts=True)
    if shape == "genus3":
        res = genus3_pipeline(A, args.max_ext_degree, cv, analysis)
    elif shape == "genus4":
        res = genus4_pipeline(A, cv, analysis)[0]
    elif shape == "genus5":
        res = genus5_pipeline(A, cv, analysis)
    else:
        res = quintic_pipeline(A, args.max_ext_degree, cv, analysis)
    rep = report_dict(
        A,
        shape,
        _cayley_section(A, cv),
        _secant_section(analysis),
        _hyperplane_entries(analysis, True),
        _check_entries(res),
    )
    return rep, res.passed


def parse_field(text: str) -> FieldSpec:
    try:
        parts = [int(t) for t in text.split(",")]
    except ValueError as exc:
        raise UsageError(f"--field expects p or p,e; got {text!r}") from exc
    if len(parts) not in (1, 2):
        raise UsageError(f"--field expects p or p,e; got {text!r}")
    try:
        return field_make(*parts)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


# -- argument handling ---------------------------------------------------------------------

def _threads(text: str) -> int:
    t = int(text)
    if t < 1:
        raise argparse.ArgumentTypeError("--threads must be at least 1")
    return t


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--max-ext-degree", type=int, default=2, metavar="E")
    common.add_argument("--budget", type=int, default=DEFAULT_BUDGET, metavar="N")
    common.add_argument("--out", metavar="FILE")
    common.add_argument("--threads", type=_threads, default=int(os.environ.get(THREADS_ENV, "1")), metavar="T")

    parser = argparse.ArgumentParser(prog="symtensor", description="Cayley varieties of block-diagonal symmetric tensors")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, helptext in [
        ("cayley", "Cayley points"),
        ("secants", "secant census"),
        ("tangents", "secants with contact points"),
        ("singularities", "singular points of X with their types"),
    ]:
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("tensor", nargs="?", default="-", help="tensor file, or - for stdin")
    p = sub.add_parser("pipeline", parents=[common], help="all checks for one shape")
    p.add_argument("--shape", required=True, choices=sorted(SHAPES))
    p.add_argument("tensor", nargs="?", default="-")
    p = sub.add_parser("seed", parents=[common], help="write a seeded tensor file")
    p.add_argument("--shape", required=True, choices=sorted(SHAPES))
    p.add_argument("--field", default=None, help="p or p,e")
    p.add_argument("--seed", type=int, default=1)
    p = sub.add_parser("verify", parents=[common], help="run a named acceptance check")
    p.add_argument("--claim", required=True, choices=sorted(VERIFY))
    p.add_argument("--field", default=None, help="p or p,e")
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("tensor", nargs="?", default=None, help="optional tensor file")
    return parser


def _read_tensor(path: str) -> BlockTensor:
    try:
        text = sys.stdin.read() if path == "-" else open(path, encoding="utf-8").read()
    except OSError as exc:
        raise TensorFileError(str(exc)) from exc
    return load_tensor(text)


def _emit(text: str, out: str | None):
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


COMMANDS = {
    "cayley": cmd_cayley,
    "secants": cmd_secants,
    "tangents": cmd_tangents,
    "singularities": cmd_singularities,
    "pipeline": cmd_pipeline,
}


def run(args) -> int:
    if args.max_ext_degree < 1:
        raise UsageError("--max-ext-degree must be at least 1")
    if args.command == "seed":
        spec = parse_field(args.field) if args.field else field_make(*DEFAULT_FIELDS[args.shape])
        _emit(save_tensor(seed(args.shape, spec, args.seed).tensor), args.out)
        return 0
    if args.command == "verify":
        spec = parse_field(args.field) if args.field else default_field(args.claim)
        A = _read_tensor(args.tensor) if args.tensor else None
        res = VERIFY[args.claim](spec, args.seed, A, args.max_ext_degree)
        rep = {"claim": args.claim, "field": [spec.p, spec.e], "seed": args.seed, "checks": _check_entries(res)}
        _emit(dumps(rep), args.out)
        return 0 if res.passed else 1
    A = _read_tensor(args.tensor)
    rep, ok = COMMANDS[args.command](A, args)
    _emit(dumps(rep), args.out)
    return 0 if ok else 1


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return run(args)
    except (UsageError, TensorFileError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (
        CayleyIncomplete,
        NondegeneracyFailure,
        BudgetExceeded,
        UnsupportedPositiveDimensional,
        RetriesExhausted,
    ) as exc:
        print(f"check failed: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
