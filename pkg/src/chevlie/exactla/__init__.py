from .field import FieldTooSmall, Fq, NotInSubgroup, discrete_log, embed_hom, factorize
from .intlat import (
    SolveModResult,
    kernel_count_mod,
    quotient_invariants,
    quotient_order,
    smith_normal_form,
    snf_diagonal,
    solve_mod,
)
from .mat import (
    Mat,
    NoLDU,
    RcfBlock,
    RcfResult,
    bivariate_det_interpolate,
    bivariate_eval,
    companion_matrix,
    dets_batched,
    ldu,
    mat_minpoly,
    poly_of_matrix,
    rational_canonical_form,
    vandermonde_inv,
)
from .matio import (
    matrix_to_text,
    read_all_matrices,
    read_matrix,
    read_matrix_stream,
    write_matrix,
)
from .poly import Poly, lagrange_interpolate, min_poly_over_prime, roots_in_field

__all__ = [
    "Fq",
    "Poly",
    "Mat",
    "NotInSubgroup",
    "FieldTooSmall",
    "NoLDU",
    "RcfBlock",
    "RcfResult",
    "discrete_log",
    "embed_hom",
    "factorize",
    "min_poly_over_prime",
    "roots_in_field",
    "lagrange_interpolate",
    "ldu",
    "mat_minpoly",
    "poly_of_matrix",
    "companion_matrix",
    "rational_canonical_form",
    "bivariate_det_interpolate",
    "bivariate_eval",
    "dets_batched",
    "vandermonde_inv",
    "smith_normal_form",
    "snf_diagonal",
    "solve_mod",
    "SolveModResult",
    "kernel_count_mod",
    "quotient_invariants",
    "quotient_order",
    "matrix_to_text",
    "write_matrix",
    "read_matrix",
    "read_matrix_stream",
    "read_all_matrices",
]
