"""Random cells for the axiom and law harnesses.

Every sampler draws from a ``random.Random`` passed in by the caller, so a
trial is reproduced from its seed alone.  Sizes are biased towards the small
end of the allowed range to keep composites cheap.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from .core import CellError
from .groups import GRMatrix, cyclic_group, symmetric_group, trivial_group
from .instances.grbimod import GRBimod, group_object, group_of, ring_of
from .instances.matmod import MatMod, finite_set
from .instances.span import Span
from .linalg import QQ, ZZ, join_ring, matrix


def small_int(rng, bound=3):
    return rng.randint(-bound, bound)


def scalar(rng, ring, bound=3):
    if ring == QQ and rng.random() < 0.4:
        return Fraction(small_int(rng, bound), rng.randint(1, 3))
    return small_int(rng, bound)


def biased(rng, lo, hi):
    """An integer in ``[lo, hi]`` favouring small values."""
    return min(rng.randint(lo, hi), rng.randint(lo, hi))


def random_matrix(rng, m, n, ring, bound=3, density=0.7):
    rows = [[scalar(rng, ring, bound) if rng.random() < density else 0 for _ in range(n)] for _ in range(m)]
    return matrix(rows, ring, (m, n))


class _WordTargets:
    """Random 2-cells out of a given 1-cell into a fresh word of ``length`` letters."""

    def cell_to(self, rng, src, length):
        B = self.B
        R, S = src.src, src.tgt
        if length == 0:
            if R != S:
                raise CellError("a 2-cell into a unit needs an endo-1-cell")
            tgt = B.unit(R)
            return [], self.two_cell(rng, src, tgt)
        stops = [R] + [self.zero_cell(rng) for _ in range(length - 1)] + [S]
        cells = [self.one_cell(rng, a, b, "W") for a, b in zip(stops, stops[1:])]
        return cells, self.two_cell(rng, src, B.compose_word(cells))


class MatModSampler(_WordTargets):
    def __init__(self, ring=ZZ, max_rank=3, max_set=3):
        self.B = MatMod(ring)
        self.ring = ring
        self.max_rank = max_rank
        self.sets = [finite_set(f"X{n}", n) for n in range(1, max_set + 1)]
        self._count = 0

    def fresh(self, stem):
        self._count += 1
        return f"{stem}{self._count}"

    def zero_cell(self, rng):
        return rng.choice(self.sets)

    def one_cell(self, rng, R, S, stem="M", max_rank=None):
        top = self.max_rank if max_rank is None else max_rank
        ranks = [[biased(rng, 0, top) for _ in S.payload] for _ in R.payload]
        return self.B.one_cell(self.fresh(stem), R, S, ranks)

    def triple(self, rng):
        R, S, T = (self.zero_cell(rng) for _ in range(3))
        return self.one_cell(rng, R, S, "M"), self.one_cell(rng, S, T, "N"), self.one_cell(rng, T, R, "P")

    def two_cell(self, rng, src, tgt):
        B = self.B
        blocks = {key: random_matrix(rng, B.rank(tgt, *key), B.rank(src, *key), self.ring) for key in B._keys(src)}
        return B.two_cell(src, tgt, blocks)

    def endo2(self, rng, X):
        return self.two_cell(rng, X, X)

    def automorphism(self, rng, X):
        """A random invertible endo-2-cell: a signed permutation in each block."""
        B = self.B
        blocks = {}
        for key in B._keys(X):
            n = B.rank(X, *key)
            perm = list(range(n))
            rng.shuffle(perm)
            blocks[key] = matrix([[rng.choice((1, -1)) if perm[i] == j else 0 for j in range(n)] for i in range(n)], self.ring, (n, n))
        return B.two_cell(X, X, blocks)


class SpanSampler:
    def __init__(self, max_set=4, max_apex=4):
        self.B = Span()
        self.max_apex = max_apex
        self.sets = [finite_set(f"S{n}", n) for n in range(1, max_set + 1)]
        self._count = 0

    def fresh(self, stem):
        self._count += 1
        return f"{stem}{self._count}"

    def zero_cell(self, rng):
        return rng.choice(self.sets)

    def one_cell(self, rng, R, S, stem="M", required=()):
        """A random span, containing an element over each pair in ``required``."""
        pairs = list(required) + [(rng.choice(R.payload), rng.choice(S.payload)) for _ in range(biased(rng, 0, self.max_apex))]
        return self.B.one_cell(self.fresh(stem), R, S, {i: p for i, p in enumerate(pairs)})

    def dualizable(self, rng, R, S, stem="M"):
        """``R <- A -> S`` with the left leg a bijection (shuffled labels)."""
        labels = list(range(len(R.payload)))
        rng.shuffle(labels)
        legs = {labels[i]: (r, rng.choice(S.payload)) for i, r in enumerate(R.payload)}
        return self.B.one_cell(self.fresh(stem), R, S, legs)

    def triple(self, rng):
        R, S, T = (self.zero_cell(rng) for _ in range(3))
        return self.one_cell(rng, R, S, "M"), self.one_cell(rng, S, T, "N"), self.one_cell(rng, T, R, "P")

    def two_cell(self, rng, src, tgt):
        """A random map of spans; raises when some fiber of ``tgt`` is empty."""
        B = self.B
        xs, sl, sr = B.apex(src)
        ys, tl, tr = B.apex(tgt)
        fibers = {}
        for y in ys:
            fibers.setdefault((tl[y], tr[y]), []).append(y)
        out = {}
        for x in xs:
            choices = fibers.get((sl[x], sr[x]))
            if not choices:
                raise CellError(f"no map {src.name} => {tgt.name}: empty fiber over {(sl[x], sr[x])}")
            out[x] = rng.choice(choices)
        return B.two_cell(src, tgt, out)

    def endo2(self, rng, X):
        return self.two_cell(rng, X, X)

    def cell_to(self, rng, src, length):
        """A 2-cell from ``src`` into a fresh word built to receive it."""
        B = self.B
        R, S = src.src, src.tgt
        xs, left, right = B.apex(src)
        if length == 0:
            if R != S or any(left[x] != right[x] for x in xs):
                raise CellError("no map into the unit: some apex element is not a loop")
            return [], B.two_cell(src, B.unit(R), {x: (left[x],) for x in xs})
        if length == 1:
            N = self.one_cell(rng, R, S, "W", required=[(left[x], right[x]) for x in xs])
            return [N], B.two_cell(src, N, {x: (left[x], i) for i, x in enumerate(xs)})
        T = self.zero_cell(rng)
        mid = {x: rng.choice(T.payload) for x in xs}
        N1 = self.one_cell(rng, R, T, "W", required=[(left[x], mid[x]) for x in xs])
        N2 = self.one_cell(rng, T, S, "W", required=[(mid[x], right[x]) for x in xs])
        return [N1, N2], B.two_cell(src, B.compose1(N1, N2), {x: (left[x], i, i) for i, x in enumerate(xs)})

    def automorphism(self, rng, X):
        B = self.B
        xs, left, right = B.apex(X)
        fibers = {}
        for x in xs:
            fibers.setdefault((left[x], right[x]), []).append(x)
        out = {}
        for fib in fibers.values():
            img = list(fib)
            rng.shuffle(img)
            out.update(zip(fib, img))
        return B.two_cell(X, X, out)


@lru_cache(maxsize=None)
def _homs(G, H):
    return G.homomorphisms(H)


class GRBimodSampler(_WordTargets):
    """Monomial actions, sometimes conjugated by an elementary matrix."""

    def __init__(self, groups=None, ring=ZZ, max_rank=2):
        self.B = GRBimod()
        self.ring = ring
        self.max_rank = max_rank
        groups = groups or [cyclic_group(2), cyclic_group(3), symmetric_group(3)]
        self.objects = [group_object(G, ring) for G in groups]
        self.trivial = group_object(trivial_group(), ring)
        self.perms = {n: symmetric_group(n) for n in range(1, max_rank + 1)}
        self._count = 0

    def fresh(self, stem):
        self._count += 1
        return f"{stem}{self._count}"

    def zero_cell(self, rng):
        return rng.choice(self.objects)

    def action(self, rng, G, H, n, K):
        """A random homomorphism ``G -> GL_n(K[H])``."""
        Sn = self.perms[n]
        pi = rng.choice(_homs(G, Sn))
        phi = rng.choice(_homs(G, H))
        Z2 = cyclic_group(2)
        chi = rng.choice(_homs(G, Z2))
        lam = []
        for g in G.elements:
            perm = symmetric_group_images(Sn, pi[g], n)
            sign = -1 if chi[g] else 1
            lam.append(GRMatrix.monomial(H, K, n, n, {(perm[i], i): (sign, phi[g]) for i in range(n)}))
        if n > 1 and rng.random() < 0.5:
            i, j = rng.sample(range(n), 2)
            c, h = rng.choice((1, -1, 2)), rng.choice(list(H.elements))
            X = GRMatrix.identity(H, K, n) + GRMatrix.monomial(H, K, n, n, {(i, j): (c, h)})
            Xi = GRMatrix.identity(H, K, n) - GRMatrix.monomial(H, K, n, n, {(i, j): (c, h)})
            lam = [X @ L @ Xi for L in lam]
        return lam

    def one_cell(self, rng, R, S, stem="M", rank=None):
        n = rank or biased(rng, 1, self.max_rank)
        K = join_ring(ring_of(R), ring_of(S))
        lam = self.action(rng, group_of(R), group_of(S), n, K)
        return self.B.one_cell(self.fresh(stem), R, S, lam)

    def triple(self, rng):
        R, S, T = (self.zero_cell(rng) for _ in range(3))
        return self.one_cell(rng, R, S, "M"), self.one_cell(rng, S, T, "N"), self.one_cell(rng, T, R, "P")

    def random_grmatrix(self, rng, H, K, m, n, density=0.4):
        return random_grmatrix(rng, H, K, m, n, density)

    def two_cell(self, rng, src, tgt):
        """An intertwiner ``sum_g lam_tgt(g) X lam_src(g^-1)`` for random ``X``."""
        B = self.B
        G, H = group_of(src.src), group_of(src.tgt)
        K = join_ring(B.ring(src), B.ring(tgt))
        ls, lt = B.action(src)[1], B.action(tgt)[1]
        X = self.random_grmatrix(rng, H, K, B.rank(tgt), B.rank(src))
        f = GRMatrix.zero(H, K, B.rank(tgt), B.rank(src))
        for g in G.elements:
            f = f + lt[g] @ X @ ls[G.inv(g)]
        return B.two_cell(src, tgt, f, check=False)

    def endo2(self, rng, X):
        return self.two_cell(rng, X, X)


def random_grmatrix(rng, H, K, m, n, density=0.4):
    """A sparse matrix over ``K[H]`` with monomial entries."""
    terms = {}
    for i in range(m):
        for j in range(n):
            if rng.random() < density:
                terms[(i, j)] = (small_int(rng, 2) or 1, rng.choice(list(H.elements)))
    return GRMatrix.monomial(H, K, m, n, terms)


def symmetric_group_images(Sn, p, n):
    """The permutation of ``range(n)`` named by element ``p`` of ``Sn``."""
    name = Sn.names[p]
    if name == "e":
        return list(range(n))
    return [int(ch) - 1 for ch in name]


def random_diagram(sampler, rng, max_len=3, max_layers=3, box_rate=0.4):
    """A random valid diagram with a valuation in ``sampler.B``.

    Returns ``(diagram, valuation)``.  Boxes get fresh codomain edges; words
    stay at most ``max_len + 1`` letters long.
    """
    from .diagram import Box, CyclicWord, Diagram, Edge, Elementary, Generator, Rotation, Valuation, Wire

    B = sampler.B
    regions, edges, gens = {}, {}, {}
    counter = {"r": 0, "e": 0, "g": 0}

    def fresh(kind):
        counter[kind] += 1
        return f"{kind}{counter[kind]}"

    def region(obj):
        for name, o in regions.items():
            if o == obj:
                return name
        name = fresh("r")
        regions[name] = obj
        return name

    def edge(cell):
        name = fresh("e")
        edges[name] = cell
        return Edge(name, region(cell.src), region(cell.tgt))

    n = biased(rng, 0, max_len)
    objs = [sampler.zero_cell(rng) for _ in range(max(n, 1))]
    letters = [edge(sampler.one_cell(rng, objs[i], objs[(i + 1) % n], "E")) for i in range(n)]
    word = CyclicWord(letters, region(objs[0]))
    top, layers = word, []

    def make_box(dom, obj):
        src = B.compose_word([edges[e.name] for e in dom], obj)
        room = max_len + 1 - len(word) + len(dom)
        choices = [k for k in range(0, min(2, room) + 1) if k or src.is_endo]
        if not dom:
            choices = [k for k in choices if k]
        rng.shuffle(choices)
        for k in choices:
            try:
                cells, cell = sampler.cell_to(rng, src, k)
            except CellError:
                continue
            cod = tuple(edge(c) for c in cells)
            g = Generator(fresh("g"), tuple(dom), cod, region(obj))
            gens[g.name] = cell
            return Box(g)
        return None

    for _ in range(rng.randint(1, max_layers)):
        n = len(word)
        if n and rng.random() < 0.3:
            layer = Rotation(rng.randrange(n))
        else:
            slots, p, here = [], 0, regions[word.ambient]
            while True:
                if len(word) <= max_len and rng.random() < 0.15:
                    box = make_box((), here)
                    if box:
                        slots.append(box)
                if p == n:
                    break
                if rng.random() < box_rate:
                    L = rng.randint(1, min(2, n - p))
                    dom = word.letters[p : p + L]
                    box = make_box(dom, here)
                    if box:
                        slots.append(box)
                        p += L
                        here = regions[dom[-1].tgt]
                        continue
                slots.append(Wire(word.letters[p]))
                here = regions[word.letters[p].tgt]
                p += 1
            layer = Elementary(slots)
        word = layer_codomain(layer, word)
        layers.append(layer)
    return Diagram(top, layers), Valuation(regions, edges, gens)


def layer_codomain(layer, word):
    from .diagram import codomain_word

    return codomain_word(layer, word)


def random_complex(rng, group, ring=ZZ, psi=None, max_degree=3, max_rank=3):
    """A random free ``K[G]`` chain complex with a psi-semilinear chain map.

    It is assembled from one-degree pieces with an arbitrary map and
    two-degree pieces ``K[G] -> K[G]`` with a unit boundary, then perturbed by
    a null-homotopic map and a change of basis in each degree.
    """
    from .groups import GroupRingElement
    from .traces import EquivariantChainComplex

    G = group
    if psi is None:
        psi = rng.choice(_homs(G, G))
    top = rng.randint(0, max_degree)
    ranks = [0] * (top + 1)
    D = {k: {} for k in range(1, top + 1)}
    A = {k: {} for k in range(top + 1)}

    def element(bound=2):
        terms = {g: small_int(rng, bound) for g in rng.sample(list(G.elements), rng.randint(0, min(2, G.order)))}
        return GroupRingElement(G, ring, terms)

    for _ in range(rng.randint(1, 2 * (top + 1))):
        k = rng.randint(0, top)
        if k > 0 and rng.random() < 0.5 and ranks[k] < max_rank and ranks[k - 1] < max_rank:
            i, j = ranks[k - 1], ranks[k]
            d = GroupRingElement.basis(G, ring, rng.choice(list(G.elements)), rng.choice((1, -1)))
            d_inv = GroupRingElement.basis(G, ring, G.inv(d.support()[0][0]), d.support()[0][1])
            a = element()
            D[k][(i, j)] = d
            A[k][(j, j)] = a
            A[k - 1][(i, i)] = d * a * d_inv.apply_hom(psi)
            ranks[k - 1] += 1
            ranks[k] += 1
        elif ranks[k] < max_rank:
            A[k][(ranks[k], ranks[k])] = element()
            ranks[k] += 1

    def grm(entries, m, n):
        rows = [[entries.get((i, j), 0) for j in range(n)] for i in range(m)]
        return GRMatrix.from_entries(G, ring, rows, (m, n))

    Dm = [None] + [grm(D[k], ranks[k - 1], ranks[k]) for k in range(1, top + 1)]
    Am = [grm(A[k], ranks[k], ranks[k]) for k in range(top + 1)]
    S = [random_grmatrix(rng, G, ring, ranks[k + 1], ranks[k], density=0.3) for k in range(top)]
    for k in range(top + 1):
        if k < top:
            Am[k] = Am[k] + Dm[k + 1] @ S[k]
        if k > 0:
            Am[k] = Am[k] + S[k - 1] @ Dm[k].apply_hom(psi)
    X, Xi = [], []
    for k in range(top + 1):
        n = ranks[k]
        I = GRMatrix.identity(G, ring, n)
        if n > 1:
            i, j = rng.sample(range(n), 2)
            E = GRMatrix.monomial(G, ring, n, n, {(i, j): (rng.choice((1, -1, 2)), rng.choice(list(G.elements)))})
            X.append(I + E)
            Xi.append(I - E)
        else:
            X.append(I)
            Xi.append(I)
    Dm = [None] + [Xi[k - 1] @ Dm[k] @ X[k] for k in range(1, top + 1)]
    Am = [Xi[k] @ Am[k] @ X[k].apply_hom(psi) for k in range(top + 1)]
    return EquivariantChainComplex(G, ring, ranks, Dm, Am, psi)
