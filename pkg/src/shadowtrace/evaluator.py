"""Values of layered cylinder diagrams.

An elementary layer is worth the shadow of the horizontal composite of its
slots, a rotation layer is worth a power of theta, and a diagram is worth the
composite of its layers from top to bottom.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import ShadowMorphism
from .diagram import DiagramError, Rotation, Wire, validate

__all__ = ["ThetaPower", "theta_power", "value_elementary", "value_layer", "value"]


@dataclass(frozen=True)
class ThetaPower:
    """``theta^n_k: <M1 ... Mn> -> <M(k+1) ... Mn M1 ... Mk>`` for a word of 1-cells."""

    word: tuple
    k: int

    def value(self, B, ambient=None):
        return theta_power(B, self.word, self.k, ambient)


def theta_power(B, word, k, ambient=None):
    word = list(word)
    n = len(word)
    if not 0 <= k <= n:
        raise DiagramError(f"theta power {k} out of range for a word of length {n}")
    if k in (0, n):
        whole = B.compose_word(word, ambient)
        return ShadowMorphism.identity(B.shadow_ob(whole))
    return B.theta(B.compose_word(word[:k]), B.compose_word(word[k:]))


def value_elementary(B, layer, w, v):
    """``<f1 (.) ... (.) fm>`` for the slots of ``layer`` on the word ``w``."""
    cells = []
    region = w.ambient
    for s in layer.slots:
        if isinstance(s, Wire):
            cells.append(B.identity2(v.edge(s.edge)))
        else:
            cells.append(v.generator(B, s.gen))
    if not cells:
        return ShadowMorphism.identity(B.shadow_ob(B.unit(v.region(region))))
    return B.shadow_mor(B.hcompose_many(cells))


def value_layer(B, layer, w, v):
    if isinstance(layer, Rotation):
        return theta_power(B, [v.edge(e) for e in w.letters], layer.k, v.region(w.ambient))
    return value_elementary(B, layer, w, v)


def value(B, d, v):
    """The shadow morphism of ``d`` under ``v``, from the top word to the bottom word."""
    validate(d, v, B)
    words = d.words()
    out = ShadowMorphism.identity(B.shadow_ob(v.word(B, d.top.letters, d.top.ambient)))
    for layer, w in zip(d.layers, words):
        out = value_layer(B, layer, w, v) @ out
    return out
