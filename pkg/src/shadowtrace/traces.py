"""Duality, mates and traces in a bicategory with a shadow.

``trace`` is the four-step composite

    <Q> --<1 (.) eta>--> <Q M M*> --<f (.) 1>--> <M P M*> --theta--> <M* M P> --<eps (.) 1>--> <P>

for ``f: Q (.) M => M (.) P``.  The group-ring traces (Hattori-Stallings,
twisted, Reidemeister) are provided both by a direct formula and through the
bicategory; the tests compare the two.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import CellError, DualPair, OneCell
from .groups import GRMatrix, GroupError, format_combination, twisted_conjugacy_classes
from .instances.grbimod import GRBimod, free_module, group_object, twisted_unit
from .linalg import QQ, entries, join_ring, to_rows

__all__ = [
    "make_dual",
    "compose_duals",
    "mate",
    "unmate",
    "trace",
    "left_trace",
    "euler",
    "transfer",
    "point_diagonal",
    "ClassVector",
    "IdempotentModule",
    "hattori_stallings",
    "hattori_stallings_via_trace",
    "twisted_trace",
    "twisted_trace_via_trace",
    "EquivariantChainComplex",
    "reidemeister",
    "lefschetz",
    "augment_reidemeister",
    "build_trace_diagram",
]


# -- word surgery ----------------------------------------------------------------


def strip_suffix(W, M):
    """``Q`` with ``W = Q (.) M``."""
    k = len(M.factors)
    if W.tgt != M.tgt or (k and W.factors[-k:] != M.factors):
        raise CellError(f"{W.name} does not end with {M.name}")
    return OneCell(W.src, M.src, W.factors[: len(W.factors) - k])


def strip_prefix(W, M):
    """``P`` with ``W = M (.) P``."""
    k = len(M.factors)
    if W.src != M.src or W.factors[:k] != M.factors:
        raise CellError(f"{W.name} does not start with {M.name}")
    return OneCell(M.tgt, W.tgt, W.factors[k:])


# -- duality --------------------------------------------------------------------------


def make_dual(B, M, name=None):
    return B.make_dual(M, name)


def compose_duals(B, dM, dN):
    """The dual pair of ``M (.) N`` with dual ``N* (.) M*``."""
    M, N = dM.M, dN.M
    if M.tgt != N.src:
        raise CellError("dual pairs are not composable")
    MN, D = B.compose1(M, N), B.compose1(dN.Mdual, dM.Mdual)
    idM, idMd = B.identity2(M), B.identity2(dM.Mdual)
    coev = B.vcompose(B.hcompose_many([idM, dN.coev, idMd]), dM.coev)
    ev = B.vcompose(dN.ev, B.hcompose_many([B.identity2(dN.Mdual), dM.ev, B.identity2(N)]))
    return DualPair(MN, D, coev, ev).check(B)


def mate(B, f, dM, dN):
    """``f: Q (.) M => N (.) P`` to ``N* (.) Q => P (.) M*``."""
    Q = strip_suffix(f.src, dM.M)
    P = strip_prefix(f.tgt, dN.M)
    one = B.identity2
    step1 = B.hcompose_many([one(dN.Mdual), one(Q), dM.coev])
    step2 = B.hcompose_many([one(dN.Mdual), f, one(dM.Mdual)])
    step3 = B.hcompose_many([dN.ev, one(P), one(dM.Mdual)])
    return B.vcompose_many([step1, step2, step3])


def unmate(B, g, dM, dN):
    """Inverse of :func:`mate`: ``N* (.) Q => P (.) M*`` back to ``Q (.) M => N (.) P``."""
    Q = strip_prefix(g.src, dN.Mdual)
    P = strip_suffix(g.tgt, dM.Mdual)
    one = B.identity2
    step1 = B.hcompose_many([dN.coev, one(Q), one(dM.M)])
    step2 = B.hcompose_many([one(dN.M), g, one(dM.M)])
    step3 = B.hcompose_many([one(dN.M), one(P), dM.ev])
    return B.vcompose_many([step1, step2, step3])


# -- traces ------------------------------------------------------------------------------


def trace(B, f, d):
    """The trace ``<Q> -> <P>`` of ``f: Q (.) M => M (.) P`` with respect to ``d``."""
    M, D = d.M, d.Mdual
    Q = strip_suffix(f.src, M)
    P = strip_prefix(f.tgt, M)
    if not Q.is_endo or not P.is_endo:
        raise CellError("trace needs endo-1-cells Q and P")
    one = B.identity2
    s1 = B.shadow_mor(B.hcompose(one(Q), d.coev))
    s2 = B.shadow_mor(B.hcompose(f, one(D)))
    s3 = B.theta(B.compose1(M, P), D)
    s4 = B.shadow_mor(B.hcompose(d.ev, one(P)))
    return s4 @ s3 @ s2 @ s1


def left_trace(B, g, d):
    """The trace of ``g: M* (.) Q => P (.) M*`` using ``M*`` as a left dualizable 1-cell.

    This mirrors :func:`trace` with theta applied on the other side:
    ``<Q> -> <M M* Q> -> <M P M*> -> <P M* M> -> <P>``.
    """
    M, D = d.M, d.Mdual
    Q = strip_prefix(g.src, D)
    P = strip_suffix(g.tgt, D)
    one = B.identity2
    s1 = B.shadow_mor(B.hcompose(d.coev, one(Q)))
    s2 = B.shadow_mor(B.hcompose(one(M), g))
    s3 = B.theta(M, B.compose1(P, D))
    s4 = B.shadow_mor(B.hcompose(one(P), d.ev))
    return s4 @ s3 @ s2 @ s1


def euler(B, d):
    """The trace of the identity of ``d.M``."""
    return trace(B, B.identity2(d.M), d)


def transfer(B, delta, d):
    """The trace of a diagonal ``delta: M => M (.) M``."""
    if delta.src != d.M or delta.tgt != B.compose1(d.M, d.M):
        raise CellError("transfer needs a 2-cell M => M (.) M")
    return trace(B, delta, d)


def point_diagonal(B, fhat, name="M"):
    """``(delta, d)`` for ``delta(e_s) = e_fhat(s) (x) e_s`` on the free module over a point.

    ``B`` is a :class:`MatMod` instance and ``fhat`` a list of images of
    ``0..n-1``; the transfer of ``delta`` is the sum of the fixed points.
    """
    from .instances.matmod import finite_set

    n = len(fhat)
    if any(not 0 <= y < n for y in fhat):
        raise CellError("fhat must map 0..n-1 into itself")
    pt = finite_set("pt", ("*",))
    M = B.one_cell(name, pt, pt, [[n]])
    MM = B.compose1(M, M)
    col = {}
    for s, y in enumerate(fhat):
        col.setdefault(y * n + s, {})[s] = 1
    rows = [[col.get(i, {}).get(j, 0) for j in range(n)] for i in range(n * n)]
    delta = B.two_cell(M, MM, {(0, 0): rows})
    return delta, B.make_dual(M)


# -- group-ring traces ----------------------------------------------------------------


class ClassVector:
    """An element of ``K[classes]`` for a set of twisted conjugacy classes."""

    def __init__(self, classes, ring, coeffs):
        self.classes = classes
        self.ring = ring
        if isinstance(coeffs, dict):
            c = [ring.zero] * len(classes)
            for k, v in coeffs.items():
                c[k] += ring.convert(v)
            coeffs = c
        self.coeffs = tuple(ring.convert(v) for v in coeffs)

    @classmethod
    def from_elements(cls, classes, ring, element_coeffs):
        """Project ``sum_x c_x x`` (a sequence indexed by group elements)."""
        out = [ring.zero] * len(classes)
        for x, c in enumerate(element_coeffs):
            out[classes.class_of[x]] += ring.convert(c)
        return cls(classes, ring, out)

    def __eq__(self, other):
        if not isinstance(other, ClassVector):
            return NotImplemented
        return self.classes.classes == other.classes.classes and all(
            QQ.convert(a) == QQ.convert(b) for a, b in zip(self.coeffs, other.coeffs)
        )

    def __hash__(self):
        return hash((self.classes.classes, tuple(QQ.convert(a) for a in self.coeffs)))

    def __add__(self, other):
        K = join_ring(self.ring, other.ring)
        return ClassVector(self.classes, K, [K.convert(a) + K.convert(b) for a, b in zip(self.coeffs, other.coeffs)])

    def __neg__(self):
        return ClassVector(self.classes, self.ring, [-a for a in self.coeffs])

    def __sub__(self, other):
        return self + (-other)

    def scaled(self, c):
        return ClassVector(self.classes, self.ring, [self.ring.convert(c) * a for a in self.coeffs])

    def to_ring(self, K):
        return ClassVector(self.classes, K, self.coeffs)

    def augmentation(self):
        return sum(self.coeffs, self.ring.zero)

    def terms(self):
        return [(k, c) for k, c in enumerate(self.coeffs) if c]

    def __repr__(self):
        names = [self.classes.label(k) for k in range(len(self.classes))]
        return format_combination(self.terms(), names) or "0"


def _as_grmatrix(f, group, ring):
    if isinstance(f, GRMatrix):
        return f
    return GRMatrix.from_entries(group, ring, f)


@dataclass(frozen=True, eq=False)
class IdempotentModule:
    """The projective module ``e K[H]^n`` for an idempotent ``e``."""

    e: GRMatrix

    def __post_init__(self):
        if self.e.rows != self.e.cols or self.e @ self.e != self.e:
            raise GroupError("e is not an idempotent square matrix")

    @property
    def rank(self):
        return self.e.rows


def _check_endo_of(f, mod):
    if isinstance(mod, IdempotentModule):
        e = mod.e
        if f.shape != e.shape or e @ f @ e != f:
            raise GroupError("f is not an endomorphism of the projective module (f != e f e)")
    elif mod is not None and f.shape != (mod, mod):
        raise GroupError(f"f has shape {f.shape}, expected {(mod, mod)}")


def hattori_stallings(f, mod=None):
    """``sum_i f_ii`` in ``K[conjugacy classes]``.

    ``mod`` is the rank of a free module, an :class:`IdempotentModule`, or
    ``None`` for the free module of rank ``f.rows``.
    """
    _check_endo_of(f, mod)
    return twisted_trace(f, None)


def twisted_trace(f, psi=None, mod=None):
    """``sum_i f_ii`` projected onto the psi-twisted conjugacy classes."""
    _check_endo_of(f, mod)
    C = twisted_conjugacy_classes(f.group, psi)
    return ClassVector.from_elements(C, f.ring, f.diagonal_sum().coeffs)


def _free_setup(B, H, K, n):
    one = group_object(_trivial(), K)
    target = group_object(H, K)
    M = free_module(B, f"F{n}", one, target, n)
    return one, target, M


def _trivial():
    from .groups import trivial_group

    return trivial_group()


def _column_classes(t, classes, ring, invert=False):
    """Read the single column of a map out of ``<U_1>`` as a class vector."""
    G = classes.group
    col = [row[0] for row in to_rows(t.matrix)]
    coeffs = [ring.zero] * G.order
    for x, c in enumerate(col):
        coeffs[G.inv(x) if invert else x] += c
    return ClassVector.from_elements(classes, t.tgt.ring, coeffs)


def hattori_stallings_via_trace(f, mod=None, B=None):
    """The same value computed as a bicategorical trace in :class:`GRBimod`."""
    _check_endo_of(f, mod)
    B = B or GRBimod()
    H, K = f.group, f.ring
    _, _, M = _free_setup(B, H, K, f.rows)
    d = B.make_dual(M)
    t = trace(B, B.two_cell(M, M, f), d)
    return _column_classes(t, twisted_conjugacy_classes(H), K)


def twisted_trace_via_trace(f, psi, B=None):
    """The twisted trace as the trace of ``f^dagger: M => M (.) R_psi``.

    ``R_psi`` twists the left action, so its shadow is spanned by classes of
    ``x ~ psi(h) x h^-1``; inverting elements carries these to the classes of
    ``x ~ h x psi(h)^-1`` and the dagger matches the two conventions.
    """
    B = B or GRBimod()
    G, K = f.group, f.ring
    psi = tuple(psi) if psi is not None else tuple(G.elements)
    _, target, M = _free_setup(B, G, K, f.rows)
    R = twisted_unit(B, target, psi)
    d = B.make_dual(M)
    t = trace(B, B.two_cell(M, B.compose1(M, R), f.dagger()), d)
    return _column_classes(t, twisted_conjugacy_classes(G, psi), K, invert=True)


# -- chain complexes ---------------------------------------------------------------------


class EquivariantChainComplex:
    """A free ``K[G]`` chain complex with a psi-semilinear chain self-map.

    ``boundaries[k]`` is the matrix of ``d_k: C_k -> C_(k-1)`` for
    ``k = 1..top`` (index 0 is unused), and ``chain_map[k]`` the matrix of
    ``f_k`` on ``C_k``, so that ``f(e_j) = sum_i e_i A_ij`` and
    ``f(m r) = f(m) psi(r)``.  The chain map condition reads
    ``A_(k-1) psi(D_k) = D_k A_k``.
    """

    def __init__(self, group, ring, ranks, boundaries, chain_map, psi=None):
        self.group = group
        self.ring = ring
        self.ranks = tuple(ranks)
        self.psi = tuple(psi) if psi is not None else tuple(group.elements)
        top = len(self.ranks)
        self.boundaries = [None] + [_as_grmatrix(boundaries[k], group, ring).to_ring(ring) for k in range(1, top)]
        self.chain_map = [_as_grmatrix(A, group, ring).to_ring(ring) for A in chain_map]
        self.validate()

    @property
    def degrees(self):
        return range(len(self.ranks))

    def validate(self):
        G, n = self.group, self.ranks
        if not G.is_homomorphism(G, self.psi):
            raise CellError("psi is not an endomorphism of the group")
        if len(self.chain_map) != len(n):
            raise CellError("need one chain map matrix per degree")
        for k in self.degrees:
            if self.chain_map[k].shape != (n[k], n[k]):
                raise CellError(f"chain map in degree {k} has shape {self.chain_map[k].shape}")
        for k in range(1, len(n)):
            D = self.boundaries[k]
            if D.shape != (n[k - 1], n[k]):
                raise CellError(f"boundary d_{k} has shape {D.shape}, expected {(n[k - 1], n[k])}")
            if k > 1 and not (self.boundaries[k - 1] @ D).is_zero():
                raise CellError(f"d_{k - 1} d_{k} is not zero")
            lhs = self.chain_map[k - 1] @ D.apply_hom(self.psi)
            if lhs != D @ self.chain_map[k]:
                raise CellError(f"chain map does not commute with d_{k}")

    def augmented(self):
        """The complex over ``K`` obtained by applying the augmentation."""
        T = _trivial()
        aug = lambda A: GRMatrix.scalar(T, A.augmentation())
        return EquivariantChainComplex(
            T,
            self.ring,
            self.ranks,
            [None] + [aug(self.boundaries[k]) for k in range(1, len(self.ranks))],
            [aug(A) for A in self.chain_map],
        )

    def rationalized(self):
        return EquivariantChainComplex(
            self.group,
            QQ,
            self.ranks,
            [None] + [D.to_ring(QQ) for D in self.boundaries[1:]],
            [A.to_ring(QQ) for A in self.chain_map],
            self.psi,
        )


def reidemeister(C):
    """``sum_k (-1)^k`` of the twisted traces of the chain map."""
    classes = twisted_conjugacy_classes(C.group, C.psi)
    total = ClassVector(classes, C.ring, [C.ring.zero] * len(classes))
    for k in C.degrees:
        t = twisted_trace(C.chain_map[k], C.psi)
        total = total + (t if k % 2 == 0 else -t)
    return total


def lefschetz(C):
    """The alternating sum of traces, for a complex over the trivial group."""
    if not C.group.is_trivial:
        raise CellError("lefschetz needs a complex over the trivial group; augment it first")
    total = C.ring.zero
    for k in C.degrees:
        t = C.chain_map[k].diagonal_sum().coeffs[0]
        total += t if k % 2 == 0 else -t
    return total


def augment_reidemeister(x):
    """The sum of the coefficients of a class vector."""
    return x.augmentation()


def entries_of(A):
    return entries(A)


# -- the trace as a diagram ---------------------------------------------------------------


def build_trace_diagram(B, f, d):
    """The four-layer cylinder diagram whose value is ``trace(B, f, d)``.

    Layers: coevaluation beside ``Q``; ``f`` beside ``M*``; the rotation
    moving ``M* `` to the front; evaluation beside ``P``.  Unit 1-cells get no
    edge.
    """
    from .diagram import Box, CyclicWord, Diagram, Edge, Elementary, Generator, Rotation, Valuation, Wire

    M, D = d.M, d.Mdual
    Q = strip_suffix(f.src, M)
    P = strip_prefix(f.tgt, M)
    R, S = "R", "S"
    regions = {R: M.src, S: M.tgt}
    edges = {}

    def edge(name, cell, a, b):
        if cell.is_unit:
            return ()
        edges[name] = cell
        return (Edge(name, a, b),)

    q, m, ms, p = edge("Q", Q, R, R), edge("M", M, R, S), edge("M*", D, S, R), edge("P", P, S, S)
    eta = Generator("eta", (), m + ms, R)
    body = Generator("f", q + m, m + p, R)
    eps = Generator("eps", ms + m, (), S)
    layers = [
        Elementary([Wire(e) for e in q] + [Box(eta)]),
        Elementary([Box(body)] + [Wire(e) for e in ms]),
        Rotation(len(m + p) % len(m + p + ms) if m + p + ms else 0),
        Elementary([Box(eps)] + [Wire(e) for e in p]),
    ]
    v = Valuation(regions, edges, {"eta": d.coev, "f": f, "eps": d.ev})
    return Diagram(CyclicWord(q, R), layers), v
