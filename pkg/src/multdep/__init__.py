"""Multiplicative dependence of polynomial values and orbits, computed exactly."""

from .arith import Rational, factor_integer, parse_rational, weil_height
from .dependence import (
    IndependenceVerdict,
    Relation,
    bounded_field_dependence,
    generates_power_linear_fractional,
    is_power_of_linear_fractional,
    mult_indep_mod_constants,
    rational_dependence,
)
from .dynamics import (
    check_archimedean_growth,
    consecutive_dependence_search,
    growth_constant_L,
    is_preperiodic,
    orbit,
    places_S_f,
    preperiodic_points,
    scan_fixed_alpha,
    search_dependent_pairs,
    valuation_escape_check,
)
from .numberfield import (
    FieldElement,
    NumberField,
    house,
    is_algebraic_integer,
    is_root_of_unity,
    minimal_polynomial,
    weil_height_alg,
)
from .poly import (
    Polynomial,
    RationalFunction,
    X,
    chebyshev,
    compose,
    coprime_base,
    cyclotomic,
    iterate,
    parse_poly,
    parse_rational_function,
    poly_gcd,
    reduce,
    sparsity_upper,
)
from .special import compositional_sqrt_T4, is_special

__version__ = "0.1.0"
