"""Block-diagonal symmetric tensors over finite fields and their Cayley varieties."""

from .exactfield import FieldSpec, Fq, field_make
from .instances import SHAPES, OrbitType, seed, seed_octad, seed_singular_genus4
from .pipelines import (
    PipelineResult,
    genus3_pipeline,
    genus4_pipeline,
    genus5_pipeline,
    quintic_pipeline,
    recillas_construct,
    recillas_instance,
)
from .secants import analyze_secants, contact_report
from .tensor import Block, BlockTensor, contract_x, contract_xy, contract_yy, jacobian_at, kernel_map
from .variety import CayleyVariety, ProjPoint, cayley_points, classify_singularity, essential_locus_scan

__version__ = "0.1.0"

__all__ = [
    "Block",
    "BlockTensor",
    "CayleyVariety",
    "FieldSpec",
    "Fq",
    "OrbitType",
    "PipelineResult",
    "ProjPoint",
    "SHAPES",
    "analyze_secants",
    "cayley_points",
    "classify_singularity",
    "contact_report",
    "contract_x",
    "contract_xy",
    "contract_yy",
    "essential_locus_scan",
    "field_make",
    "genus3_pipeline",
    "genus4_pipeline",
    "genus5_pipeline",
    "jacobian_at",
    "kernel_map",
    "quintic_pipeline",
    "recillas_construct",
    "recillas_instance",
    "seed",
    "seed_octad",
    "seed_singular_genus4",
]
