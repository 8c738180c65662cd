"""Layered string diagrams on a cylinder.

A diagram is a boundary word at the top followed by a list of layers.  Words
are cyclic with an explicit cut: ``letters`` are read clockwise from the cut
and ``ambient`` names the region the cut sits in.  An elementary layer lists
its slots in the same order, each slot either a wire carrying one edge
straight down or a box for a generator.  A rotation layer ``Rotation(k)``
moves the cut ``k`` letters to the right, so the word below is the word
above rotated left by ``k``.

Edges and generators are symbolic here; a :class:`Valuation` assigns cells of
a bicategory to them.  Layer indices in error messages count from 1.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Union

__all__ = [
    "DiagramError",
    "Edge",
    "CyclicWord",
    "Generator",
    "Wire",
    "Box",
    "Elementary",
    "Rotation",
    "Diagram",
    "Valuation",
    "validate",
    "codomain_word",
    "FuseRotations",
    "DropZeroRotation",
    "DropBoxFreeElementary",
    "SplitElementary",
    "MergeElementary",
    "ConjugateByRotation",
    "apply_move",
    "applicable_moves",
    "normalize",
]


class DiagramError(ValueError):
    pass


@dataclass(frozen=True)
class Edge:
    """A 1-cell label running from region ``src`` to region ``tgt``."""

    name: str
    src: str
    tgt: str

    def __repr__(self):
        return self.name


@dataclass(frozen=True)
class CyclicWord:
    letters: tuple = ()
    ambient: str = None

    def __post_init__(self):
        object.__setattr__(self, "letters", tuple(self.letters))
        if self.letters:
            object.__setattr__(self, "ambient", self.letters[0].src)
        elif self.ambient is None:
            raise DiagramError("an empty word needs an ambient region")
        for i, (a, b) in enumerate(zip(self.letters, self.letters[1:] + self.letters[:1])):
            if a.tgt != b.src:
                raise DiagramError(f"word is not composable at position {i}: {a.name} ends in {a.tgt}, {b.name} starts in {b.src}")

    def __len__(self):
        return len(self.letters)

    def rotated(self, k):
        n = len(self.letters)
        if n == 0:
            return self
        k %= n
        return CyclicWord(self.letters[k:] + self.letters[:k])

    def __repr__(self):
        if not self.letters:
            return f"[]@{self.ambient}"
        return "[" + ",".join(e.name for e in self.letters) + "]"


@dataclass(frozen=True)
class Generator:
    """A box label with domain and codomain edge words.

    ``region`` is needed only when both words are empty; otherwise it is
    derived from the edges.
    """

    name: str
    dom: tuple = ()
    cod: tuple = ()
    region: str = None

    def __post_init__(self):
        object.__setattr__(self, "dom", tuple(self.dom))
        object.__setattr__(self, "cod", tuple(self.cod))
        ends = []
        for w in (self.dom, self.cod):
            if w:
                ends.append((w[0].src, w[-1].tgt))
        for w in (self.dom, self.cod):
            for a, b in zip(w, w[1:]):
                if a.tgt != b.src:
                    raise DiagramError(f"generator {self.name}: {a.name} and {b.name} are not composable")
        if len(ends) == 2 and ends[0] != ends[1]:
            raise DiagramError(f"generator {self.name}: domain and codomain have different endpoints")
        if len(ends) == 1 and ends[0][0] != ends[0][1]:
            raise DiagramError(f"generator {self.name}: a word opposite an empty one must be a loop")
        if ends:
            r = ends[0][0]
            if self.region is not None and self.region != r and not (self.dom and self.cod):
                raise DiagramError(f"generator {self.name}: region {self.region} differs from {r}")
            if not (self.dom and self.cod):
                object.__setattr__(self, "region", r)
        elif self.region is None:
            raise DiagramError(f"generator {self.name}: an empty box needs a region")

    @property
    def left(self):
        """The region on the left of the box."""
        w = self.dom or self.cod
        return w[0].src if w else self.region

    def __repr__(self):
        return f"{self.name}:{list(self.dom)}->{list(self.cod)}"


@dataclass(frozen=True)
class Wire:
    edge: Edge

    @property
    def dom(self):
        return (self.edge,)

    cod = dom

    @property
    def left(self):
        return self.edge.src


@dataclass(frozen=True)
class Box:
    gen: Generator

    @property
    def dom(self):
        return self.gen.dom

    @property
    def cod(self):
        return self.gen.cod

    @property
    def left(self):
        return self.gen.left


Slot = Union[Wire, Box]


@dataclass(frozen=True)
class Elementary:
    slots: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "slots", tuple(self.slots))

    @property
    def boxes(self):
        return [s for s in self.slots if isinstance(s, Box)]

    def __repr__(self):
        parts = [s.edge.name if isinstance(s, Wire) else f"<{s.gen.name}>" for s in self.slots]
        return "Elementary(" + " ".join(parts) + ")"


@dataclass(frozen=True)
class Rotation:
    k: int

    def __repr__(self):
        return f"Rotation({self.k})"


Layer = Union[Elementary, Rotation]


@dataclass(frozen=True)
class Diagram:
    top: CyclicWord
    layers: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "layers", tuple(self.layers))

    def words(self):
        """The boundary words between layers, ``len(layers) + 1`` of them."""
        out = [self.top]
        for i, layer in enumerate(self.layers, 1):
            out.append(codomain_word(layer, out[-1], i))
        return out

    def generators(self):
        seen = {}
        for layer in self.layers:
            if isinstance(layer, Elementary):
                for b in layer.boxes:
                    seen.setdefault(b.gen.name, b.gen)
        return seen

    def edges(self):
        seen = {}
        for w in self.words():
            for e in w.letters:
                seen.setdefault(e.name, e)
        for g in self.generators().values():
            for e in g.dom + g.cod:
                seen.setdefault(e.name, e)
        return seen

    def regions(self):
        out = set()
        for w in self.words():
            out.add(w.ambient)
        for e in self.edges().values():
            out.update((e.src, e.tgt))
        for g in self.generators().values():
            out.add(g.left)
        return sorted(out)


@dataclass(frozen=True)
class Valuation:
    """Cells assigned to regions, edges and generators."""

    regions: dict = field(default_factory=dict)
    edges: dict = field(default_factory=dict)
    generators: dict = field(default_factory=dict)

    def region(self, name):
        try:
            return self.regions[name]
        except KeyError:
            raise DiagramError(f"region {name} has no value") from None

    def edge(self, e):
        try:
            cell = self.edges[e.name]
        except KeyError:
            raise DiagramError(f"edge {e.name} has no value") from None
        if cell.src != self.region(e.src) or cell.tgt != self.region(e.tgt):
            raise DiagramError(f"edge {e.name}: value {cell.name} does not run from region {e.src} to region {e.tgt}")
        return cell

    def word(self, B, edges, region):
        return B.compose_word([self.edge(e) for e in edges], self.region(region))

    def generator(self, B, g):
        try:
            cell = self.generators[g.name]
        except KeyError:
            raise DiagramError(f"generator {g.name} has no value") from None
        src, tgt = self.word(B, g.dom, g.left), self.word(B, g.cod, g.left)
        if cell.src != src or cell.tgt != tgt:
            raise DiagramError(f"generator {g.name}: value has type {cell.src.name} => {cell.tgt.name}, expected {src.name} => {tgt.name}")
        return cell

    def check(self, B, d):
        for e in d.edges().values():
            self.edge(e)
        for g in d.generators().values():
            self.generator(B, g)
        for r in d.regions():
            self.region(r)


def codomain_word(layer, w, index=None):
    """The word below ``layer`` when ``w`` is the word above it."""
    where = f"layer {index}: " if index is not None else ""
    n = len(w)
    if isinstance(layer, Rotation):
        k = layer.k
        if n == 0 and k != 0:
            raise DiagramError(f"{where}rotation {k} on an empty word")
        if n and not 0 <= k < n:
            raise DiagramError(f"{where}rotation {k} ≥ word length {n}" if k >= n else f"{where}rotation {k} is negative")
        return w.rotated(k)
    dom = tuple(e for s in layer.slots for e in s.dom)
    if dom != w.letters:
        raise DiagramError(f"{where}interface mismatch: slots consume {list(dom)}, word above is {list(w.letters)}")
    region = w.ambient
    for j, s in enumerate(layer.slots):
        if s.left != region:
            raise DiagramError(f"{where}slot {j + 1} sits in region {s.left}, expected {region}")
        ends = s.dom or s.cod
        region = ends[-1].tgt if ends else region
    cod = tuple(e for s in layer.slots for e in s.cod)
    try:
        return CyclicWord(cod, w.ambient)
    except DiagramError as exc:
        raise DiagramError(f"{where}{exc}") from None


def validate(d, v=None, B=None):
    """``(top word, bottom word)``; with a valuation, also type-checks it in ``B``."""
    words = d.words()
    if v is not None:
        v.check(B, d)
    return words[0], words[-1]


# -- moves ----------------------------------------------------------------------------


@dataclass(frozen=True)
class FuseRotations:
    """Layers ``i`` and ``i + 1`` (0-based), both rotations, become one."""

    i: int


@dataclass(frozen=True)
class DropZeroRotation:
    i: int


@dataclass(frozen=True)
class DropBoxFreeElementary:
    i: int


@dataclass(frozen=True)
class SplitElementary:
    """Boxes with ``mask`` true go to the upper layer, the rest to the lower one."""

    i: int
    mask: tuple


@dataclass(frozen=True)
class MergeElementary:
    i: int


@dataclass(frozen=True)
class ConjugateByRotation:
    """Start the slot scan of layer ``i`` at slot ``j``, compensating with rotations."""

    i: int
    j: int


def _layer(d, i, kind):
    if not 0 <= i < len(d.layers) or not isinstance(d.layers[i], kind):
        raise DiagramError(f"move needs a {kind.__name__.lower()} layer at position {i}")
    return d.layers[i]


def _replace(d, i, count, new):
    return Diagram(d.top, d.layers[:i] + tuple(new) + d.layers[i + count :])


def apply_move(d, m):
    words = d.words()
    if isinstance(m, FuseRotations):
        a, b = _layer(d, m.i, Rotation), _layer(d, m.i + 1, Rotation)
        n = len(words[m.i])
        return _replace(d, m.i, 2, [Rotation((a.k + b.k) % n if n else 0)])
    if isinstance(m, DropZeroRotation):
        if _layer(d, m.i, Rotation).k != 0:
            raise DiagramError("rotation is not zero")
        return _replace(d, m.i, 1, [])
    if isinstance(m, DropBoxFreeElementary):
        if _layer(d, m.i, Elementary).boxes:
            raise DiagramError("layer has boxes")
        return _replace(d, m.i, 1, [])
    if isinstance(m, SplitElementary):
        layer = _layer(d, m.i, Elementary)
        if len(m.mask) != len(layer.boxes):
            raise DiagramError("mask length differs from the number of boxes")
        upper, lower, b = [], [], 0
        for s in layer.slots:
            if isinstance(s, Wire):
                upper.append(s)
                lower.append(s)
                continue
            if m.mask[b]:
                upper.append(s)
                lower.extend(Wire(e) for e in s.cod)
            else:
                upper.extend(Wire(e) for e in s.dom)
                lower.append(s)
            b += 1
        return _replace(d, m.i, 1, [Elementary(upper), Elementary(lower)])
    if isinstance(m, MergeElementary):
        a, b = _layer(d, m.i, Elementary), _layer(d, m.i + 1, Elementary)
        return _replace(d, m.i, 2, [_merge(a, b)])
    if isinstance(m, ConjugateByRotation):
        layer = _layer(d, m.i, Elementary)
        if not 0 <= m.j <= len(layer.slots):
            raise DiagramError(f"slot index {m.j} out of range")
        first = layer.slots[: m.j]
        k = sum(len(s.dom) for s in first)
        k2 = sum(len(s.cod) for s in first)
        n, n2 = len(words[m.i]), len(words[m.i + 1])
        new = [
            Rotation(k % n if n else 0),
            Elementary(layer.slots[m.j :] + first),
            Rotation((n2 - k2) % n2 if n2 else 0),
        ]
        out = _replace(d, m.i, 1, new)
        out.words()
        return out
    raise DiagramError(f"unknown move {m!r}")


def _intervals(slots, side):
    out, pos = [], 0
    for s in slots:
        w = len(s.dom if side == "dom" else s.cod)
        out.append((pos, pos + w, s))
        pos += w
    return out


def _merge(a, b):
    """One layer doing ``a`` then ``b``, when their boxes do not interact."""
    upper = [(x, y, s) for x, y, s in _intervals(a.slots, "cod") if isinstance(s, Box)]
    lower = [(x, y, s) for x, y, s in _intervals(b.slots, "dom") if isinstance(s, Box)]
    for x, y, _ in upper:
        for u, v, _ in lower:
            if x == y and u == v and x == u:
                raise DiagramError("boxes with empty boundaries touch; the merge is ambiguous")
            if max(x, u) < min(y, v):
                raise DiagramError("boxes overlap; layers cannot be merged")
            if x == y and u < x < v or u == v and x < u < y:
                raise DiagramError("an empty boundary lies inside a box of the other layer")
    covered = set()
    for x, y, _ in upper + lower:
        covered.update(range(x, y))
    wires = [(p, p + 1, s) for p, _, s in _intervals(b.slots, "dom") if isinstance(s, Wire) and p not in covered]
    items = sorted(upper + lower + wires, key=lambda t: (t[0], t[1]))
    return Elementary([s for _, _, s in items])


def applicable_moves(d):
    """Every move that applies to ``d``, in a fixed order."""
    out = []
    layers = d.layers
    for i, layer in enumerate(layers):
        nxt = layers[i + 1] if i + 1 < len(layers) else None
        if isinstance(layer, Rotation):
            if isinstance(nxt, Rotation):
                out.append(FuseRotations(i))
            if layer.k == 0:
                out.append(DropZeroRotation(i))
            continue
        nb = len(layer.boxes)
        if nb == 0:
            out.append(DropBoxFreeElementary(i))
        for mask in product((True, False), repeat=nb):
            out.append(SplitElementary(i, mask))
        if isinstance(nxt, Elementary):
            try:
                _merge(layer, nxt)
                out.append(MergeElementary(i))
            except DiagramError:
                pass
        for j in range(len(layer.slots) + 1):
            out.append(ConjugateByRotation(i, j))
    return out


def normalize(d):
    """Fuse rotations, drop trivial layers and merge elementary layers, greedily."""
    d.words()
    while True:
        for i, layer in enumerate(d.layers):
            nxt = d.layers[i + 1] if i + 1 < len(d.layers) else None
            if isinstance(layer, Rotation):
                if isinstance(nxt, Rotation):
                    d = apply_move(d, FuseRotations(i))
                    break
                if layer.k == 0:
                    d = apply_move(d, DropZeroRotation(i))
                    break
            elif not layer.boxes:
                d = apply_move(d, DropBoxFreeElementary(i))
                break
            elif isinstance(nxt, Elementary):
                try:
                    d = apply_move(d, MergeElementary(i))
                    break
                except DiagramError:
                    pass
        else:
            return d

