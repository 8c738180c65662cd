"""Exact traces in bicategories with shadows, and cylinder diagrams that compute them."""

from .core import Bicategory, CellError, DualPair, OneCell, Report, ShadowMorphism, ShadowObject, TwoCell, ZeroCell, check_axioms
from .diagram import Diagram, DiagramError, Valuation, validate
from .evaluator import value
from .instances import GRBimod, MatMod, Span
from .laws import verify_law
from .traces import (
    ClassVector,
    EquivariantChainComplex,
    augment_reidemeister,
    build_trace_diagram,
    euler,
    hattori_stallings,
    lefschetz,
    mate,
    reidemeister,
    trace,
    transfer,
    twisted_trace,
)

__version__ = "0.1.0"

__all__ = [
    "Bicategory",
    "CellError",
    "DualPair",
    "OneCell",
    "Report",
    "ShadowMorphism",
    "ShadowObject",
    "TwoCell",
    "ZeroCell",
    "check_axioms",
    "Diagram",
    "DiagramError",
    "Valuation",
    "validate",
    "value",
    "GRBimod",
    "MatMod",
    "Span",
    "verify_law",
    "ClassVector",
    "EquivariantChainComplex",
    "augment_reidemeister",
    "build_trace_diagram",
    "euler",
    "hattori_stallings",
    "lefschetz",
    "mate",
    "reidemeister",
    "trace",
    "transfer",
    "twisted_trace",
]
