"""Frobenius actions on local cohomology and parameter test ideals over F_p."""

from .arith import GREVLEX, LEX, MonomialOrder, Polynomial, PrimeFieldElement, RingSpec
from .canonical import ext_presentation, free_resolution, suggest_test_element, u_generator
from .errors import (
    FsingError,
    InputError,
    InternalConsistencyError,
    NotCohenMacaulayError,
    NotTorsionFreeError,
    PreconditionError,
)
from .frobroot import (
    FrobeniusPair,
    fedder_f_injective,
    frobenius_root_ideal,
    frobenius_root_poly,
    nilpotency_analysis,
    stable_colon_chain,
    star_closure,
)
from .groebner import Ideal, ideal_colon, ideal_intersection, ideal_membership, krull_dimension, normal_form
from .testideal import f_injectivity_report, parameter_test_ideal

__all__ = [
    "GREVLEX",
    "LEX",
    "MonomialOrder",
    "Polynomial",
    "PrimeFieldElement",
    "RingSpec",
    "Ideal",
    "normal_form",
    "ideal_membership",
    "ideal_intersection",
    "ideal_colon",
    "krull_dimension",
    "frobenius_root_poly",
    "frobenius_root_ideal",
    "star_closure",
    "FrobeniusPair",
    "nilpotency_analysis",
    "stable_colon_chain",
    "fedder_f_injective",
    "free_resolution",
    "ext_presentation",
    "u_generator",
    "suggest_test_element",
    "parameter_test_ideal",
    "f_injectivity_report",
    "FsingError",
    "InputError",
    "PreconditionError",
    "InternalConsistencyError",
    "NotCohenMacaulayError",
    "NotTorsionFreeError",
]
