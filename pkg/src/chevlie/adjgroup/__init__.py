"""Adjoint Chevalley groups as explicit matrices over GF(q)."""

from .generators import (
    GroupElem,
    coroot_table,
    diag_of,
    element_order,
    ghn,
    h_of_root,
    membership,
    n_of_root,
    root_character_table,
    torus_from_exponents,
    x_of_root,
)
from .torus import (
    BlockMonomial,
    BlockNotFound,
    MonomialSubgroup,
    NormalizerReport,
    NotFinite,
    NotNormalizing,
    TorusLayer,
    action_on_torus_layer,
    block_monomial_from_mat,
    block_monomial_to_mat,
    build_torus_layer,
    centralizer_in_torus_layers,
    exponent_action_of_perm,
    find_u,
    normalizer_in_torus_normalizer,
    torus_block,
    weyl_cosets_preserving_layer,
)

__all__ = [
    "BlockMonomial",
    "BlockNotFound",
    "GroupElem",
    "MonomialSubgroup",
    "NormalizerReport",
    "NotFinite",
    "NotNormalizing",
    "TorusLayer",
    "action_on_torus_layer",
    "block_monomial_from_mat",
    "block_monomial_to_mat",
    "build_torus_layer",
    "centralizer_in_torus_layers",
    "coroot_table",
    "diag_of",
    "element_order",
    "exponent_action_of_perm",
    "find_u",
    "ghn",
    "h_of_root",
    "membership",
    "n_of_root",
    "normalizer_in_torus_normalizer",
    "root_character_table",
    "torus_block",
    "torus_from_exponents",
    "weyl_cosets_preserving_layer",
    "x_of_root",
]
