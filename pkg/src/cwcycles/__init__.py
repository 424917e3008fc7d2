"""Exact Chow-Witt cycle representatives for local orientations.

Fields and polynomials (``scalars``, ``polyring``), based chain complexes
(``komplex``), quadratic forms (``witt``), orientations (``orient``) and
cycles with boundaries (``gersten``).
"""

from .errors import CWError, FalsifiedCheck, FieldMismatch, ParseError, RejectedInput, UnsupportedCase
from .gersten import (BoundaryDatum, CWCycle, d1_boundary, homotopy_check, theta,
                      verify_cycle_difference)
from .groebner import Ideal, buchberger, colon, height, is_regular_sequence, normal_form, substitute
from .komplex import (ChainComplex, ChainMap, PolyMatrix, cone, cone_matches_koszul,
                      conjugate_by_elementary, koszul, koszul_duality, scalar_map)
from .orient import LocalOrientation, compare_orientations, evaluate, phi_form, validate
from .points import Point, minimal_primes_zero_dim
from .polyring import PolyRing, Polynomial
from .scalars import (QQ, FieldElem, PrimeField, SimpleExtension, factor_univariate, is_square,
                      parse_field, set_trial_division_bound, square_class)
from .witt import (DiagonalForm, GWClass, decide_isometry, diagonalize, fundamental_ideal_level,
                   gw_invariants, hilbert_symbol)

__version__ = "0.1.0"

__all__ = [
    "BoundaryDatum",
    "CWCycle",
    "CWError",
    "ChainComplex",
    "ChainMap",
    "DiagonalForm",
    "FalsifiedCheck",
    "FieldElem",
    "FieldMismatch",
    "GWClass",
    "Ideal",
    "LocalOrientation",
    "ParseError",
    "Point",
    "PolyMatrix",
    "PolyRing",
    "Polynomial",
    "PrimeField",
    "QQ",
    "RejectedInput",
    "SimpleExtension",
    "UnsupportedCase",
    "buchberger",
    "colon",
    "compare_orientations",
    "cone",
    "cone_matches_koszul",
    "conjugate_by_elementary",
    "d1_boundary",
    "decide_isometry",
    "diagonalize",
    "evaluate",
    "factor_univariate",
    "fundamental_ideal_level",
    "gw_invariants",
    "height",
    "hilbert_symbol",
    "homotopy_check",
    "is_regular_sequence",
    "is_square",
    "koszul",
    "koszul_duality",
    "minimal_primes_zero_dim",
    "normal_form",
    "parse_field",
    "phi_form",
    "scalar_map",
    "set_trial_division_bound",
    "square_class",
    "substitute",
    "theta",
    "validate",
    "verify_cycle_difference",
]
