"""Groebner bases and ideal operations over Q."""

from .engine import DEFAULT_MAX_STEPS, AuditFailure, BudgetExceeded, audit, settings, stats
from .ideal import (
    Ideal,
    dimension,
    eliminate,
    fiber_ideal,
    fresh_name,
    groebner_basis,
    intersect,
    projective_fiber_dimension,
    quotient,
    radical_contained,
    radical_equal,
    radical_member,
    saturate,
)
from .orders import MonomialOrder

__all__ = [
    "DEFAULT_MAX_STEPS",
    "AuditFailure",
    "BudgetExceeded",
    "Ideal",
    "MonomialOrder",
    "audit",
    "dimension",
    "eliminate",
    "fiber_ideal",
    "fresh_name",
    "groebner_basis",
    "intersect",
    "projective_fiber_dimension",
    "quotient",
    "radical_contained",
    "radical_equal",
    "radical_member",
    "saturate",
    "settings",
    "stats",
]
