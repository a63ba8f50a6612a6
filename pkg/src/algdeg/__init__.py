"""Exact computations with finite-dimensional algebras and the rational maps they induce."""

__version__ = "0.1.0"

from .algebra import (
    AlgElement, Algebra, AlgebraProfile, Dim2Type, Flags, GenericInvariants, algebra_from_quadratic,
    check_isomorphism_witness, classify_dim2, element_min_poly, find_unit, generic_invariants,
    left_mult_matrix, matrix_algebra, multiply, nilradical_and_m, predicates, product_algebra, profile,
    split_algebra, squaring_map, truncated_poly_algebra, unit_fixed_point_check,
)
from .degrees import (
    DegreeSequence, Provenance, Status, Verdict, asymptotic_check, brute_force_degrees, dynamical_degree,
    product_degree, skew_degree, theorem_a_predict, theorem_b_blockwise, theorem_b_predict,
)
from .errors import (
    AlgdegError, ConsistencyError, DegenerateMapError, DomainError, IndeterminacyError, MapUndefinedError,
    NumericError, ParseError,
)
from .exactnum import (
    Matrix, UniPoly, block_diag, char_poly, det, exterior_power, inverse, kernel_basis, matrix_power,
    norm_max, rank, solve_linear, spectral_moduli, squarefree_decomposition, squarefree_degree,
)
from .induced import (
    MonomialSpec, UniRationalFunction, coefficient_structure_check, conjugacy_check_local, exp_element,
    induce_monomial, induce_univariate, log_element,
)
from .multipoly import (
    AffineRationalMap, MultiPoly, ProjectiveMap, RatFunc, compose, gcd_multi, homogenize_reduce, map_degree,
)
from .parsing import algebra_to_doc, parse_algebra, parse_matrix, parse_multipoly, parse_polynomial, parse_ratfunc
