"""The three bicategories with shadows."""

from .grbimod import GRBimod
from .matmod import MatMod
from .span import Span

__all__ = ["MatMod", "Span", "GRBimod"]
