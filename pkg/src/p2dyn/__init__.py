"""Exact computations with birational maps of the projective plane.

Compose maps with cancellation, compute degree sequences and certified bounds
on the first dynamical degree, reduce maps modulo primes, detect algebraic
stability and count periodic points over finite fields.
"""

__version__ = "0.1.0"

from .fields import QQ, ExtensionField, FieldError, PrimeField, Rationals, field_make, multiplicative_order
from .hpoly import DegreeOverflow, HPoly, hp_gcd, pure_python, term_cap
from .points import ProjPoint, enumerate_p2
from .cremona import (
    CremonaMap,
    DegreeSequence,
    MapError,
    StableProven,
    StableUpTo,
    UnstableAt,
    compose,
    evaluate,
    find_inverse,
    identity,
    indeterminacy_points,
    iterate_degrees,
    linear_map,
    map_new,
    reduce_mod_p,
    stability_witness,
    verify_inverse,
)
from .dyndeg import (
    Bound,
    Lambda1Bounds,
    bounds_from_sequence,
    classify_growth,
    cor32_lower_bound,
    largest_real_root,
    submult_upper_bound,
    thm31_lower_bound,
)
from .findyn import density_check, orbit, periodic_census, pgl3_stability_sweep
from .parsing import MapFile, ParseError, parse_poly, parse_triple
from .example_map import example_maps

__all__ = [
    "__version__",
    "QQ",
    "ExtensionField",
    "FieldError",
    "PrimeField",
    "Rationals",
    "field_make",
    "multiplicative_order",
    "DegreeOverflow",
    "HPoly",
    "hp_gcd",
    "pure_python",
    "term_cap",
    "ProjPoint",
    "enumerate_p2",
    "CremonaMap",
    "DegreeSequence",
    "MapError",
    "StableProven",
    "StableUpTo",
    "UnstableAt",
    "compose",
    "evaluate",
    "find_inverse",
    "identity",
    "indeterminacy_points",
    "iterate_degrees",
    "linear_map",
    "map_new",
    "reduce_mod_p",
    "stability_witness",
    "verify_inverse",
    "Bound",
    "Lambda1Bounds",
    "bounds_from_sequence",
    "classify_growth",
    "cor32_lower_bound",
    "largest_real_root",
    "submult_upper_bound",
    "thm31_lower_bound",
    "density_check",
    "orbit",
    "periodic_census",
    "pgl3_stability_sweep",
    "MapFile",
    "ParseError",
    "parse_poly",
    "parse_triple",
    "example_maps",
]
