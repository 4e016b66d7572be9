"""JSON tensor files and reports.

Tensor files store full symmetric matrices.  A prime-field entry is an integer;
an entry of F_{p^e} with e > 1 is its list of e power-basis coefficients.
Canonical text is ``json.dumps(..., indent=1, sort_keys=True)`` plus a newline,
so saving a loaded canonical file reproduces it byte for byte.
"""

from __future__ import annotations

import hashlib
import json
from typing import Any, Sequence

from .exactfield import FieldSpec, Fq, field_make
from .tensor import Block, BlockTensor, InvalidTensor
from .variety import ProjPoint

TOOL_VERSION = "0.1.0"


class TensorFileError(ValueError):
    pass


def encode_element(a: Fq) -> int | list[int]:
    if a.spec.e == 1:
        return a.coeffs[0]
    return list(a.coeffs)


def decode_element(spec: FieldSpec, raw: Any) -> Fq:
    if isinstance(raw, bool):
        raise TensorFileError(f"entry {raw!r} is not a field element")
    if isinstance(raw, int):
        return spec(raw)
    if isinstance(raw, list) and all(isinstance(c, int) and not isinstance(c, bool) for c in raw):
        if len(raw) > spec.e:
            raise TensorFileError(f"entry {raw!r} has more than {spec.e} coefficients")
        return spec(raw)
    raise TensorFileError(f"entry {raw!r} is not a field element")


def encode_point(y: ProjPoint) -> dict:
    return {"degree": y.ext_degree, "coords": [encode_element(c) for c in y.coords]}


def tensor_to_dict(A: BlockTensor) -> dict:
    spec = A.spec
    return {
        "p": spec.p,
        "e": spec.e,
        "modulus": list(spec.modulus),
        "n": A.n,
        "blocks": [
            {"d": b.d, "slices": [[[encode_element(c) for c in row] for row in S] for S in b.slices]}
            for b in A.blocks
        ],
    }


def tensor_from_dict(data: dict) -> BlockTensor:
    try:
        p, e, n = int(data["p"]), int(data["e"]), int(data["n"])
        raw_blocks = data["blocks"]
        modulus = data["modulus"]
    except (KeyError, TypeError, ValueError) as exc:
        raise TensorFileError(f"missing or malformed header field: {exc}") from exc
    try:
        spec = field_make(p, e)
    except ValueError as exc:
        raise TensorFileError(str(exc)) from exc
    if [c % p for c in modulus] != list(spec.modulus):
        raise TensorFileError(f"modulus {modulus} differs from the canonical {list(spec.modulus)}")
    blocks = []
    for k, rb in enumerate(raw_blocks):
        d = int(rb["d"])
        slices = rb["slices"]
        if len(slices) != n + 1:
            raise TensorFileError(f"block {k} has {len(slices)} slices, expected {n + 1}")
        mats = []
        for i, S in enumerate(slices):
            if len(S) != d or any(len(row) != d for row in S):
                raise TensorFileError(f"block {k} slice {i} is not {d}x{d}")
            M = tuple(tuple(decode_element(spec, c) for c in row) for row in S)
            if any(M[a][c] != M[c][a] for a in range(d) for c in range(a)):
                raise TensorFileError(f"block {k} slice {i} is not symmetric")
            mats.append(M)
        blocks.append(Block(d, tuple(mats)))
    try:
        return BlockTensor(spec, n, tuple(blocks))
    except InvalidTensor as exc:
        raise TensorFileError(str(exc)) from exc


def dumps(obj: dict) -> str:
    return json.dumps(obj, indent=1, sort_keys=True) + "\n"


def save_tensor(A: BlockTensor) -> str:
    return dumps(tensor_to_dict(A))


def load_tensor(text: str) -> BlockTensor:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise TensorFileError(f"not JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise TensorFileError("a tensor file holds a JSON object")
    return tensor_from_dict(data)


def digest(A: BlockTensor) -> str:
    return hashlib.sha256(save_tensor(A).encode()).hexdigest()


def report_dict(
    A: BlockTensor,
    shape: str | None,
    cayley: dict | None = None,
    secants: dict | None = None,
    hyperplanes: Sequence[dict] = (),
    checks: Sequence[dict] = (),
    extra: dict | None = None,
) -> dict:
    out = {
        "tool_version": TOOL_VERSION,
        "input_digest": digest(A),
        "shape": shape,
        "cayley": cayley,
        "secants": secants,
        "hyperplanes": list(hyperplanes),
        "checks": list(checks),
    }
    if extra:
        out.update(extra)
    return out
