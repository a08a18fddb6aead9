"""Complete m-arcs in PG(2, q) built from the rational points of plane curves."""

from .arcs import Arc, CompletionPolicy, CompletionReport, bound_constant_c, complete_arc, is_complete, is_m_arc
from .curve import PlaneCurve, curve_create, curve_from_affine
from .gf import FieldCtx, field_create, field_of_order, parse_field_spec
from .plane import ProjLine, ProjPoint

__version__ = "0.1.0"

__all__ = [
    "Arc",
    "CompletionPolicy",
    "CompletionReport",
    "FieldCtx",
    "PlaneCurve",
    "ProjLine",
    "ProjPoint",
    "bound_constant_c",
    "complete_arc",
    "curve_create",
    "curve_from_affine",
    "field_create",
    "field_of_order",
    "is_complete",
    "is_m_arc",
    "parse_field_spec",
]
