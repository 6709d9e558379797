"""Chevalley-basis Lie algebras and basis adaptation."""

from .algebra import (
    LieAlgebraFq,
    build_lie_algebra,
    fixed_space,
    structure_constants_over_z,
    verify_jacobi_over_z,
)
from .adapted import (
    ChevBasisChange,
    GraphMismatch,
    NotSemisimple,
    adapted_chevalley_basis,
)

__all__ = [
    "LieAlgebraFq",
    "build_lie_algebra",
    "fixed_space",
    "structure_constants_over_z",
    "verify_jacobi_over_z",
    "ChevBasisChange",
    "GraphMismatch",
    "NotSemisimple",
    "adapted_chevalley_basis",
]
