"""Finite groups by multiplication table, group rings and matrices over them."""

from __future__ import annotations

from functools import cached_property
from itertools import permutations, product

from sympy.polys.matrices import DomainMatrix

from .linalg import entries, eye, join_ring, kron, permutation_matrix, to_ring, zeros


class GroupError(ValueError):
    pass


class FiniteGroup:
    """A finite group given by its multiplication table.

    Elements are the indices ``0..n-1``; the table order is the total order
    used for canonical representatives.
    """

    def __init__(self, table, names=None, name=None):
        self.table = tuple(tuple(int(x) for x in row) for row in table)
        n = len(self.table)
        if n == 0 or any(len(r) != n for r in self.table):
            raise GroupError("multiplication table must be square and nonempty")
        if any(not 0 <= x < n for r in self.table for x in r):
            raise GroupError("table entry out of range")
        self.order = n
        self.names = tuple(names) if names is not None else tuple(f"g{i}" for i in range(n))
        self.name = name or f"G{n}"
        ids = [e for e in range(n) if all(self.table[e][x] == x == self.table[x][e] for x in range(n))]
        if len(ids) != 1:
            raise GroupError("table has no identity element")
        self.identity = ids[0]
        inv = []
        for a in range(n):
            bs = [b for b in range(n) if self.table[a][b] == self.identity]
            if len(bs) != 1 or self.table[bs[0]][a] != self.identity:
                raise GroupError(f"element {self.names[a]} has no inverse")
            inv.append(bs[0])
        self._inv = tuple(inv)
        for a, b, c in product(range(n), repeat=3):
            if self.table[self.table[a][b]][c] != self.table[a][self.table[b][c]]:
                raise GroupError("table is not associative")

    def mul(self, a, b):
        return self.table[a][b]

    def inv(self, a):
        return self._inv[a]

    @property
    def elements(self):
        return range(self.order)

    @property
    def is_trivial(self):
        return self.order == 1

    def __eq__(self, other):
        return isinstance(other, FiniteGroup) and self.table == other.table and self.names == other.names

    def __hash__(self):
        return hash((self.table, self.names))

    def __repr__(self):
        return f"FiniteGroup({self.name}, order={self.order})"

    def closure(self, gens):
        seen = {self.identity}
        frontier = [self.identity]
        while frontier:
            x = frontier.pop()
            for g in gens:
                y = self.mul(x, g)
                if y not in seen:
                    seen.add(y)
                    frontier.append(y)
        return seen

    @cached_property
    def generators(self):
        """A small generating set, chosen greedily in index order."""
        gens, span = [], {self.identity}
        for g in self.elements:
            if g not in span:
                gens.append(g)
                span = self.closure(gens)
        return tuple(gens)

    def is_homomorphism(self, target, images):
        if len(images) != self.order:
            return False
        return all(
            images[self.mul(a, b)] == target.mul(images[a], images[b])
            for a in self.elements
            for b in self.elements
        )

    def homomorphisms(self, target):
        """All homomorphisms into ``target`` as tuples of images."""
        gens = self.generators
        out = []
        for imgs in product(target.elements, repeat=len(gens)):
            images = self._extend(target, dict(zip(gens, imgs)))
            if images is not None:
                out.append(images)
        return out

    def _extend(self, target, assignment):
        images = {self.identity: target.identity}
        frontier = [self.identity]
        while frontier:
            x = frontier.pop()
            for g, y in assignment.items():
                z = self.mul(x, g)
                w = target.mul(images[x], y)
                if z in images:
                    if images[z] != w:
                        return None
                else:
                    images[z] = w
                    frontier.append(z)
        result = tuple(images[a] for a in self.elements)
        return result if self.is_homomorphism(target, result) else None

    def format_table(self):
        lines = [f"group {self.name} {self.order}", "names " + " ".join(self.names)]
        lines += [" ".join(str(x) for x in row) for row in self.table]
        return "\n".join(lines)


def cyclic_group(n):
    table = [[(a + b) % n for b in range(n)] for a in range(n)]
    names = ["e"] + (["g"] if n > 1 else []) + [f"g{k}" for k in range(2, n)]
    return FiniteGroup(table, names, f"Z{n}")


def trivial_group():
    return FiniteGroup([[0]], ["e"], "1")


def symmetric_group(n):
    perms = sorted(permutations(range(n)))
    index = {p: i for i, p in enumerate(perms)}
    # (p*q)(x) = p(q(x))
    table = [[index[tuple(p[q[x]] for x in range(n))] for q in perms] for p in perms]
    names = ["".join(str(x + 1) for x in p) for p in perms]
    names[0] = "e"
    return FiniteGroup(table, names, f"S{n}")


def parse_group(lines):
    """Parse ``n`` followed by ``n`` rows of indices, with optional names line."""
    rows = [ln.split() for ln in lines if ln.strip()]
    names = None
    if rows and rows[0][0] == "names":
        names = rows.pop(0)[1:]
    n = int(rows[0][0])
    table = [[int(x) for x in r] for r in rows[1 : 1 + n]]
    return FiniteGroup(table, names)


STANDARD_GROUPS = {"1": trivial_group, "Z2": lambda: cyclic_group(2), "Z3": lambda: cyclic_group(3), "S3": lambda: symmetric_group(3)}


def standard_group(name):
    """``1``, ``Zn`` (or ``Cn``) and ``Sn`` by name."""
    if name in STANDARD_GROUPS:
        return STANDARD_GROUPS[name]()
    if len(name) > 1 and name[1:].isdigit() and int(name[1:]) > 0:
        n = int(name[1:])
        if name[0] in "ZC":
            return cyclic_group(n)
        if name[0] == "S" and n <= 5:
            return symmetric_group(n)
    raise GroupError(f"unknown group {name!r}")


# -- twisted conjugacy ---------------------------------------------------------


class TwistedConjClasses:
    """Orbits of ``x -> h x psi(h)^-1``, each led by its smallest element."""

    def __init__(self, group, psi, classes):
        self.group = group
        self.psi = tuple(psi)
        self.classes = tuple(classes)
        self.reps = tuple(c[0] for c in self.classes)
        self.class_of = {x: k for k, c in enumerate(self.classes) for x in c}

    def __len__(self):
        return len(self.classes)

    def label(self, k):
        return self.group.names[self.reps[k]]

    def __repr__(self):
        body = ", ".join("{" + ",".join(self.group.names[x] for x in c) + "}" for c in self.classes)
        return f"TwistedConjClasses({body})"


def twisted_conjugacy_classes(G, psi=None):
    if psi is None:
        psi = tuple(G.elements)
    psi = tuple(psi)
    if not G.is_homomorphism(G, psi):
        raise GroupError("psi is not an endomorphism of the group")
    seen, classes = set(), []
    for x in G.elements:
        if x in seen:
            continue
        orbit = sorted({G.mul(G.mul(h, x), G.inv(psi[h])) for h in G.elements})
        seen.update(orbit)
        classes.append(tuple(orbit))
    return TwistedConjClasses(G, psi, classes)


# -- group rings ---------------------------------------------------------------


class GroupRingElement:
    """A finitely supported combination ``sum_g c_g g`` with exact coefficients."""

    __slots__ = ("group", "ring", "coeffs")

    def __init__(self, group, ring, coeffs):
        self.group = group
        self.ring = ring
        if isinstance(coeffs, dict):
            c = [ring.zero] * group.order
            for g, v in coeffs.items():
                c[g] += ring.convert(v)
            coeffs = c
        if len(coeffs) != group.order:
            raise GroupError("coefficient vector has the wrong length")
        self.coeffs = tuple(ring.convert(v) for v in coeffs)

    @classmethod
    def basis(cls, group, ring, g, c=1):
        return cls(group, ring, {g: c})

    def _lift(self, other):
        if not isinstance(other, GroupRingElement):
            other = GroupRingElement.basis(self.group, self.ring, self.group.identity, other)
        if other.group != self.group:
            raise GroupError("elements of different group rings")
        K = join_ring(self.ring, other.ring)
        return K, other

    def __add__(self, other):
        K, other = self._lift(other)
        return GroupRingElement(self.group, K, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return GroupRingElement(self.group, self.ring, [-a for a in self.coeffs])

    def __sub__(self, other):
        return self + (-self._lift(other)[1])

    def __mul__(self, other):
        K, other = self._lift(other)
        G = self.group
        out = [K.zero] * G.order
        for a, x in enumerate(self.coeffs):
            if x:
                for b, y in enumerate(other.coeffs):
                    if y:
                        out[G.mul(a, b)] += x * y
        return GroupRingElement(G, K, out)

    def __rmul__(self, c):
        return GroupRingElement(self.group, self.ring, [self.ring.convert(c) * a for a in self.coeffs])

    def __eq__(self, other):
        if isinstance(other, GroupRingElement):
            return self.group == other.group and self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        return hash((self.group, self.coeffs))

    def __bool__(self):
        return any(self.coeffs)

    def augmentation(self):
        return sum(self.coeffs, self.ring.zero)

    def involution(self):
        """The anti-automorphism induced by ``g -> g^-1``."""
        G = self.group
        return GroupRingElement(G, self.ring, {G.inv(g): c for g, c in enumerate(self.coeffs) if c})

    def apply_hom(self, psi, target=None):
        target = target or self.group
        out = [self.ring.zero] * target.order
        for g, c in enumerate(self.coeffs):
            out[psi[g]] += c
        return GroupRingElement(target, self.ring, out)

    def to_ring(self, K):
        return GroupRingElement(self.group, K, self.coeffs)

    def support(self):
        return [(g, c) for g, c in enumerate(self.coeffs) if c]

    def __repr__(self):
        return format_combination(self.support(), self.group.names) or "0"


def format_scalar(c):
    """Exact scalar as an integer or ``p/q`` in lowest terms."""
    if hasattr(c, "denominator"):
        num, den = int(c.numerator), int(c.denominator)
        return str(num) if den == 1 else f"{num}/{den}"
    return str(int(c))


def format_combination(terms, names):
    parts = []
    for k, c in terms:
        s = format_scalar(c)
        parts.append(f"{s}[{names[k]}]")
    return " + ".join(parts).replace("+ -", "- ")


class GRMatrix:
    """A matrix over the group ring ``K[G]``, stored as one ``K``-matrix per element.

    ``A = sum_g stack[g] * g``.  Matrices act on column vectors of a free
    right module, so products are ordinary matrix products with the group
    multiplication applied to coefficients.
    """

    __slots__ = ("group", "ring", "shape", "stack", "_key")

    def __init__(self, group, ring, shape, stack):
        self.group = group
        self.ring = ring
        self.shape = tuple(shape)
        if len(stack) != group.order:
            raise GroupError("stack length differs from group order")
        self.stack = tuple(to_ring(S, ring) for S in stack)
        for S in self.stack:
            if S.shape != self.shape:
                raise GroupError("stack matrices have inconsistent shapes")
        self._key = None

    # constructors ---------------------------------------------------------------
    @classmethod
    def zero(cls, group, ring, m, n):
        z = zeros(m, n, ring)
        return cls(group, ring, (m, n), [z] * group.order)

    @classmethod
    def identity(cls, group, ring, n):
        return cls.monomial(group, ring, n, n, {(i, i): (1, group.identity) for i in range(n)})

    @classmethod
    def monomial(cls, group, ring, m, n, terms):
        """``terms`` maps ``(i, j)`` to ``(coefficient, element)``."""
        data = [dict() for _ in group.elements]
        for (i, j), (c, g) in terms.items():
            if c:
                data[g].setdefault(i, {})[j] = ring.convert(c)
        return cls(group, ring, (m, n), [DomainMatrix(d, (m, n), ring) for d in data])

    @classmethod
    def from_entries(cls, group, ring, rows, shape=None):
        """Build from a nested list of :class:`GroupRingElement` (or scalars)."""
        if shape is None:
            shape = (len(rows), len(rows[0]) if rows else 0)
        data = [dict() for _ in group.elements]
        for i, row in enumerate(rows):
            for j, x in enumerate(row):
                if not isinstance(x, GroupRingElement):
                    x = GroupRingElement.basis(group, ring, group.identity, x)
                for g, c in x.support():
                    data[g].setdefault(i, {})[j] = ring.convert(c)
        return cls(group, ring, shape, [DomainMatrix(d, shape, ring) for d in data])

    @classmethod
    def scalar(cls, group, M):
        """A ``K``-matrix viewed over ``K[G]``."""
        z = zeros(*M.shape, M.domain)
        return cls(group, M.domain, M.shape, [M if g == group.identity else z for g in group.elements])

    # structure --------------------------------------------------------------------
    @property
    def rows(self):
        return self.shape[0]

    @property
    def cols(self):
        return self.shape[1]

    def entry(self, i, j):
        return GroupRingElement(
            self.group, self.ring, [S.rep.to_sdm().get(i, {}).get(j, self.ring.zero) for S in self.stack]
        )

    def entries(self):
        return [[self.entry(i, j) for j in range(self.cols)] for i in range(self.rows)]

    def to_ring(self, K):
        return self if K == self.ring else GRMatrix(self.group, K, self.shape, self.stack)

    def _common(self, other):
        if other.group != self.group:
            raise GroupError("matrices over different group rings")
        K = join_ring(self.ring, other.ring)
        return self.to_ring(K), other.to_ring(K), K

    # arithmetic ---------------------------------------------------------------------
    def __matmul__(self, other):
        a, b, K = self._common(other)
        if a.cols != b.rows:
            raise GroupError(f"shape mismatch {a.shape} @ {b.shape}")
        G = self.group
        out = [None] * G.order
        for g, A in enumerate(a.stack):
            if not A.rep.to_sdm():
                continue
            for h, B in enumerate(b.stack):
                if not B.rep.to_sdm():
                    continue
                k = G.mul(g, h)
                P = A.matmul(B)
                out[k] = P if out[k] is None else out[k] + P
        z = zeros(a.rows, b.cols, K)
        return GRMatrix(G, K, (a.rows, b.cols), [z if x is None else x for x in out])

    def __add__(self, other):
        a, b, K = self._common(other)
        return GRMatrix(self.group, K, self.shape, [x + y for x, y in zip(a.stack, b.stack)])

    def __sub__(self, other):
        a, b, K = self._common(other)
        return GRMatrix(self.group, K, self.shape, [x - y for x, y in zip(a.stack, b.stack)])

    def __neg__(self):
        return GRMatrix(self.group, self.ring, self.shape, [-x for x in self.stack])

    def scaled(self, c):
        c = self.ring.convert(c)
        return GRMatrix(self.group, self.ring, self.shape, [x * c for x in self.stack])

    def left_mul(self, g):
        """``g * A`` for a group element ``g``."""
        G = self.group
        out = [None] * G.order
        for h, S in enumerate(self.stack):
            out[G.mul(g, h)] = S
        return GRMatrix(G, self.ring, self.shape, out)

    def transpose(self):
        return GRMatrix(self.group, self.ring, (self.cols, self.rows), [S.transpose() for S in self.stack])

    def dagger(self):
        """Transpose composed with the involution ``g -> g^-1`` on entries."""
        G = self.group
        return GRMatrix(G, self.ring, (self.cols, self.rows), [self.stack[G.inv(g)].transpose() for g in G.elements])

    def apply_hom(self, psi, target=None):
        target = target or self.group
        z = zeros(*self.shape, self.ring)
        out = [z] * target.order
        for g, S in enumerate(self.stack):
            out[psi[g]] = out[psi[g]] + S
        return GRMatrix(target, self.ring, self.shape, out)

    def augmentation(self):
        out = zeros(*self.shape, self.ring)
        for S in self.stack:
            out = out + S
        return out

    def diagonal_sum(self):
        """``sum_i A_ii`` as a group ring element."""
        G = self.group
        coeffs = []
        for S in self.stack:
            sdm = S.rep.to_sdm()
            coeffs.append(sum((sdm.get(i, {}).get(i, self.ring.zero) for i in range(min(self.shape))), self.ring.zero))
        return GroupRingElement(G, self.ring, coeffs)

    def push(self, lam):
        """Apply a linear representation entrywise, as a block matrix.

        ``lam[g]`` is a ``GRMatrix`` over ``K[H]`` for each ``g`` in this
        matrix's group; the entry ``a`` at ``(i, j)`` becomes the block
        ``sum_g a_g lam[g]`` with this matrix's indices outermost.
        """
        first = lam[0]
        H, K = first.group, join_ring(self.ring, first.ring)
        p, q = first.shape
        out = [zeros(self.rows * p, self.cols * q, K) for _ in H.elements]
        for g, A in enumerate(self.stack):
            if not A.rep.to_sdm():
                continue
            L = lam[g]
            for h, B in enumerate(L.stack):
                if B.rep.to_sdm():
                    out[h] = out[h] + kron(to_ring(A, K), to_ring(B, K))
        return GRMatrix(H, K, (self.rows * p, self.cols * q), out)

    def unfold(self):
        """The ``K``-linear matrix on the basis ``e_i h`` ordered ``(i, h)``."""
        G = self.group
        n = G.order
        out = zeros(self.rows * n, self.cols * n, self.ring)
        for g, A in enumerate(self.stack):
            if A.rep.to_sdm():
                L = permutation_matrix([G.mul(g, h) for h in G.elements], n, self.ring)
                out = out + kron(A, L)
        return out

    def is_zero(self):
        return not any(S.rep.to_sdm() for S in self.stack)

    def repeated(self, m):
        """``m`` copies of this matrix down the diagonal."""
        I = eye(m, self.ring)
        return GRMatrix(self.group, self.ring, (m * self.rows, m * self.cols), [kron(I, S) for S in self.stack])

    # identity -----------------------------------------------------------------------
    def key(self):
        if self._key is None:
            self._key = (
                self.group,
                self.shape,
                tuple(tuple(sorted(entries(S).items())) for S in self.stack),
            )
        return self._key

    def __eq__(self, other):
        if not isinstance(other, GRMatrix):
            return NotImplemented
        return self.group == other.group and self.shape == other.shape and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        rows = [[repr(x) for x in row] for row in self.entries()]
        return f"GRMatrix({self.group.name}, {rows})"


def regular_representation(group, ring, target=None):
    """The left regular action of ``group`` on ``K[group]`` as matrices over ``K[target]``.

    With ``target`` trivial (the default) this is the usual permutation
    representation on the basis ordered by table index.
    """
    T = target or trivial_group()
    n = group.order
    return tuple(
        GRMatrix.scalar(T, permutation_matrix([group.mul(g, h) for h in group.elements], n, ring))
        for g in group.elements
    )


def is_representation(group, lam):
    """True when ``lam`` is a monoid homomorphism ``G -> M_n(K[H])``."""
    if not lam or len(lam) != group.order:
        return False
    n = lam[0].rows
    H = lam[0].group
    if any(L.shape != (n, n) or L.group != H for L in lam):
        return False
    if lam[group.identity] != GRMatrix.identity(H, lam[0].ring, n).to_ring(lam[group.identity].ring):
        return False
    for g in group.generators:
        for h in group.elements:
            if lam[g] @ lam[h] != lam[group.mul(g, h)]:
                return False
    return True
