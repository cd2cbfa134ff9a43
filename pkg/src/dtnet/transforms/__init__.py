"""Deterministic linear transforms with fast kernels and dense references."""

from .dense import transform_matrix
from .kinds import (
    BIOR1_3,
    COIF1,
    DB4,
    DB20,
    DCT2,
    DHT,
    DST1,
    FWHT_NATURAL,
    FWHT_SEQUENCY,
    HAAR,
    RBIOR1_1,
    SYM2,
    TransformKind,
    TransformPlan,
    bag_default,
    next_pow2,
    parse_kind,
    plan,
    random_kind,
)
from .ops import apply_fast, apply_fast_block, apply_naive, apply_naive_block

__all__ = [
    "TransformKind", "TransformPlan", "plan", "bag_default", "parse_kind",
    "random_kind", "next_pow2", "transform_matrix",
    "apply_fast", "apply_naive", "apply_fast_block", "apply_naive_block",
    "DCT2", "DST1", "FWHT_NATURAL", "FWHT_SEQUENCY", "DHT", "HAAR",
    "DB4", "DB20", "SYM2", "COIF1", "BIOR1_3", "RBIOR1_1",
]
