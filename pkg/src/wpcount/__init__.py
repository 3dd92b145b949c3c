"""Exact arithmetic on weighted projective spaces over Q."""

from .arith import (
    BoundedReal,
    FactoredRational,
    euler_totient,
    factorize,
    is_nth_power,
    is_prime,
    mobius_sieve,
    pi_enclosure,
    rational_root,
    root_enclosure,
    valuation,
    zeta,
)
from .constants import (
    FieldInvariants,
    bounds_evaluators,
    comparison_constants,
    degree_e_constant_term,
    exponent_predictors,
    numberfield_leading_constant,
    rational_leading_constant,
    schanuel_constant,
    sparsity_factor,
)
from .counting import (
    asymptotic_report,
    count_box,
    count_points_height,
    count_points_size,
    count_primitive_fast,
    fixed_tuple_count,
)
from .errors import BudgetExceededError, OracleMismatchError, OracleTooLargeError
from .lift import (
    LiftResult,
    Obstruction,
    SparsityRecord,
    fiber_rational_points,
    lift_bruteforce_oracle,
    lift_check,
    orbit_count_oracle,
    sparsity_scan,
    veronese_degree,
)
from .space import (
    ExactHeight,
    ProjectivePoint,
    WeightedPoint,
    WeightSystem,
    archimedean_height,
    canonicalize,
    equivalent,
    normalize,
    point,
    size,
    veronese,
    weighted_height,
    weil_height,
    wgcd,
)
