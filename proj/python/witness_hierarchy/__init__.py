from ._core import (
    WhkError,
    ces_max_dim,
    classify,
    delta,
    distinguish,
    is_edge,
    is_finer,
    is_optimal,
    measure,
    optimize,
    partial_transpose,
    super_witness_for,
    tiles_state,
    werner,
    witness_for,
)

__all__ = [
    "WhkError",
    "ces_max_dim",
    "classify",
    "delta",
    "distinguish",
    "is_edge",
    "is_finer",
    "is_optimal",
    "measure",
    "optimize",
    "partial_transpose",
    "super_witness_for",
    "tiles_state",
    "werner",
    "witness_for",
]
