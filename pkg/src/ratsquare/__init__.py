"""Exact search and verification tools for the square rational-distance problem."""

__version__ = "0.1.0"

from .numeric import RangeError, gcd, is_perfect_square, is_prime, isqrt
from .triples import PythTriple, primitive_triples, triple_from_params
from .lattice import (
    PointProfile,
    SearchReport,
    SquareInstance,
    classify_point,
    search_square,
    three_distance_family,
)
from .descent import (
    EquationInstance,
    StructureViolation,
    ascend,
    descent_step,
    equation_residual,
    forced_k_probe,
    multiplier_primes,
    pythagorean_identity,
    ratio_identities,
    search_equation,
)
from .heuristic import fit_exponent, square_hit_rate, tail_integral
from .sweep import SweepConfig, sweep
