"""Exact-arithmetic toolkit for squared-volume discriminants of orthogonal
group actions and for weighted sum-of-squares certificates built from
equivariant decompositions.

All computations are over the rationals; no floating point is used anywhere.
"""

__all__ = [
    "exactlin",
    "polyring",
    "actions",
    "discriminant",
    "equivariant",
    "cli",
]

__version__ = "0.1.0"
