"""Exact computations with conormal and relative conormal spaces of polynomial
families: Groebner bases over Q, conormal fibers and their decomposition,
Rees-algebra fibers of modules, and arc-based A_f certificates."""

from .arcs import (
    Arc,
    DependenceVerdict,
    af_arcs,
    main_theorem_pipeline,
    monomial_arcs,
    normalization_arc,
    strict_dependence,
    trotman_criterion,
    trotman_space,
    whitney_fiber_check,
)
from .conormal import (
    SpaceWithFunction,
    af_exact,
    conormal_space,
    exceptional_image,
    fiber_at,
    join_point_set,
    relative_conormal,
    verify_decomposition,
)
from .groebner import Ideal, MonomialOrder, dimension, eliminate, radical_equal, radical_member, saturate
from .polycore import Polynomial, PolyMap, TruncatedSeries, parse_polynomial
from .rees import PresentedModule, ReesSetup, rees_presentation, remark_identity_check, theorem_components_check

__version__ = "0.1.0"

__all__ = [
    "Arc",
    "DependenceVerdict",
    "Ideal",
    "MonomialOrder",
    "PolyMap",
    "Polynomial",
    "PresentedModule",
    "ReesSetup",
    "SpaceWithFunction",
    "TruncatedSeries",
    "af_arcs",
    "af_exact",
    "conormal_space",
    "dimension",
    "eliminate",
    "exceptional_image",
    "fiber_at",
    "join_point_set",
    "main_theorem_pipeline",
    "monomial_arcs",
    "normalization_arc",
    "parse_polynomial",
    "radical_equal",
    "radical_member",
    "rees_presentation",
    "relative_conormal",
    "remark_identity_check",
    "saturate",
    "strict_dependence",
    "theorem_components_check",
    "trotman_criterion",
    "trotman_space",
    "verify_decomposition",
    "whitney_fiber_check",
]
