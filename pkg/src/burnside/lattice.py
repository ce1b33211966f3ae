"""Subgroup lattices, their zeta and Möbius matrices, and subgroup queries.

Subgroups are bitsets over the parent group's element indices (bit ``i`` set
iff element ``i`` is a member).  A :class:`SubgroupLattice` lists every
subgroup sorted by ``(order, bitset)``; that order is a linear extension of
inclusion, so the zeta matrix is upper unitriangular.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

from .errors import SizeLimitError, ValidationError
from .group import DEFAULT_ORDER_CAP, GroupTable


def _bits(elements):
    b = 0
    for x in elements:
        b |= 1 << x
    return b


def iter_bits(b):
    while b:
        low = b & -b
        yield low.bit_length() - 1
        b ^= low


@dataclass(frozen=True)
class Subgroup:
    members: int
    order: int
    group: GroupTable = field(compare=False, repr=False)

    @classmethod
    def from_bits(cls, G, members):
        return cls(members, members.bit_count(), G)

    def elements(self):
        return list(iter_bits(self.members))

    def __contains__(self, x):
        return bool(self.members >> x & 1)

    def __le__(self, other):
        return self.members & other.members == self.members

    def __lt__(self, other):
        return self.members != other.members and self <= other

    def __ge__(self, other):
        return other <= self

    def __gt__(self, other):
        return other < self

    def sort_key(self):
        return (self.order, self.members)

    def describe(self):
        return "{" + ",".join(map(str, self.elements())) + "}"


def _same_parent(*subs):
    g = subs[0].group
    for s in subs[1:]:
        if s.group is not g and not s.group.same_table(g):
            raise ValidationError("subgroups belong to different parent groups")


def _close(G, start, gens):
    """Closure of the set ``start`` (containing the identity) under right multiplication by gens."""
    m = G.mul
    seen = set(start)
    frontier = list(seen)
    while frontier:
        nxt = []
        for x in frontier:
            row = m[x]
            for g in gens:
                y = row[g]
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return seen


def generated_by(G, elements):
    """Smallest subgroup of G containing ``elements``."""
    elements = list(elements)
    for x in elements:
        if not 0 <= x < G.order:
            raise ValidationError(f"element {x} out of range")
    return Subgroup.from_bits(G, _bits(_close(G, {G.identity}, elements)))


def _small_generating_set(G, members):
    gens, span = [], 1 << G.identity
    for x in iter_bits(members):
        if not span >> x & 1:
            gens.append(x)
            span = _bits(_close(G, iter_bits(span), gens))
            if span == members:
                break
    return gens


def join(A, B):
    """Subgroup generated by A ∪ B."""
    _same_parent(A, B)
    if B <= A:
        return A
    if A <= B:
        return B
    G = A.group
    gens = _small_generating_set(G, A.members) + _small_generating_set(G, B.members)
    return Subgroup.from_bits(G, _bits(_close(G, A.elements(), gens)))


def intersect(A, B):
    _same_parent(A, B)
    m = A.members & B.members
    return Subgroup.from_bits(A.group, m)


def product_set(A, B):
    """The set {ab : a ∈ A, b ∈ B} as a bitset (not necessarily a subgroup)."""
    _same_parent(A, B)
    m = A.group.mul
    bs = B.elements()
    out = 0
    for a in iter_bits(A.members):
        row = m[a]
        for b in bs:
            out |= 1 << row[b]
    return out


def is_normal_in(G, members):
    """True iff the element set is invariant under conjugation by G."""
    for g in G.generators:
        for x in iter_bits(members):
            if not members >> G.conjugate(x, g) & 1:
                return False
    return True


def _is_cyclic_bits(G, members, order):
    orders = G.element_orders
    return any(orders[x] == order for x in iter_bits(members))


@dataclass
class SubgroupLattice:
    group: GroupTable
    subgroups: list
    zeta: list | None = None
    mobius: list | None = None

    def __post_init__(self):
        self._index = {s.members: i for i, s in enumerate(self.subgroups)}

    def __len__(self):
        return len(self.subgroups)

    def __iter__(self):
        return iter(self.subgroups)

    def index(self, H):
        try:
            return self._index[H.members]
        except KeyError:
            raise ValidationError(f"{H.describe()} is not a subgroup in this lattice") from None

    def lookup(self, members):
        """The lattice member with this bitset, or None."""
        i = self._index.get(members)
        return None if i is None else self.subgroups[i]

    @property
    def trivial(self):
        return self.subgroups[0]

    @property
    def top(self):
        return self.subgroups[-1]

    def subgroups_of(self, Y):
        """Lattice members contained in Y (the sub-lattice of Y)."""
        return [X for X in self.subgroups[: self.index(Y) + 1] if X <= Y]

    def supergroups_of(self, X):
        return [Y for Y in self.subgroups[self.index(X):] if X <= Y]

    def mu(self, X, Y):
        return self.mobius[self.index(X)][self.index(Y)]

    @cached_property
    def contained_in(self):
        """contained_in[i]: indices of the lattice members contained in subgroups[i]."""
        subs = self.subgroups
        return [[j for j in range(i + 1) if subs[j] <= subs[i]] for i in range(len(subs))]

    @cached_property
    def cyclic_flags(self):
        G = self.group
        return [_is_cyclic_bits(G, s.members, s.order) for s in self.subgroups]

    @cached_property
    def normal_flags(self):
        G = self.group
        return [is_normal_in(G, s.members) for s in self.subgroups]

    @cached_property
    def maximal_flags(self):
        top = self.top.members
        flags = []
        subs = self.subgroups
        for i, H in enumerate(subs):
            if H.members == top:
                flags.append(False)
                continue
            flags.append(not any(H < K and K.members != top for K in subs[i + 1:]))
        return flags


def enumerate_subgroups(G, cap=DEFAULT_ORDER_CAP):
    """All subgroups of G: cyclic subgroups, closed under joins until stable."""
    if G.order > cap:
        raise SizeLimitError(f"group order {G.order} exceeds cap {cap}")
    cyclic = {}
    for x in range(G.order):
        b = _bits(_close(G, {G.identity}, [x]))
        cyclic.setdefault(b, x)
    # every subgroup is the join of the cyclic subgroups it contains, so joining
    # with cyclic seeds reaches the same fixed point as all pairwise joins
    found = {b: [x] if x != G.identity else [] for b, x in cyclic.items()}
    frontier = list(found)
    while frontier:
        nxt = []
        for b in frontier:
            gens = found[b]
            for c, x in cyclic.items():
                if c & b == c:
                    continue
                j = _bits(_close(G, iter_bits(b), gens + [x]))
                if j not in found:
                    found[j] = gens + [x]
                    nxt.append(j)
        frontier = nxt
    subs = sorted((Subgroup.from_bits(G, b) for b in found), key=Subgroup.sort_key)
    return SubgroupLattice(G, subs)


def compute_incidence(L):
    """Fill in zeta and the Möbius matrix (exact inverse of zeta)."""
    subs = L.subgroups
    n = len(subs)
    zeta = [[int(subs[i] <= subs[j]) for j in range(n)] for i in range(n)]
    for i in range(n):
        for j in range(i):
            if zeta[i][j]:
                raise AssertionError("subgroup ordering is not a linear extension of inclusion")
    # back-substitution: mu(i, j) = -sum_{i < k <= j, i <= k} mu(k, j)
    mob = [[0] * n for _ in range(n)]
    above = [[k for k in range(i + 1, n) if zeta[i][k]] for i in range(n)]
    for i in range(n - 1, -1, -1):
        row = mob[i]
        row[i] = 1
        for j in above[i]:
            s = 0
            for k in above[i]:
                if k > j:
                    break
                s += mob[k][j]
            row[j] = -s
    L.zeta = zeta
    L.mobius = mob
    return L


def mobius_recursive(L):
    """Möbius matrix from the defining recursion mu(X,Y) = -sum_{X<=Z<Y} mu(X,Z)."""
    subs = L.subgroups
    n = len(subs)
    mob = [[0] * n for _ in range(n)]
    for i in range(n):
        mob[i][i] = 1
        for j in range(i + 1, n):
            if subs[i] <= subs[j]:
                mob[i][j] = -sum(mob[i][k] for k in range(i, j) if subs[k] <= subs[j] and subs[i] <= subs[k])
    return mob


def build_lattice(G, cap=DEFAULT_ORDER_CAP):
    return compute_incidence(enumerate_subgroups(G, cap))


def is_normal(L, X):
    return L.normal_flags[L.index(X)]


def normal_subgroups(L):
    return [s for s, f in zip(L.subgroups, L.normal_flags) if f]


def minimal_normal_subgroups(L):
    nontrivial = [N for N in normal_subgroups(L) if N.order > 1]
    return [N for N in nontrivial if not any(M < N for M in nontrivial)]


def maximal_subgroups(L):
    return [s for s, f in zip(L.subgroups, L.maximal_flags) if f]


def maximal_subgroups_containing(L, N):
    """Maximal subgroups H of G with N <= H (H = N allowed when N is maximal)."""
    if N.members == L.top.members:
        raise ValidationError("N must be a proper subgroup")
    return [H for H in maximal_subgroups(L) if N <= H]


def is_cyclic(L, X):
    return L.cyclic_flags[L.index(X)]


def cyclic_subgroups(L):
    return [s for s, f in zip(L.subgroups, L.cyclic_flags) if f]


def check_lattice(L):
    """Exact incidence-algebra identities; raises InvariantError on failure."""
    from .errors import InvariantError

    z, m = L.zeta, L.mobius
    n = len(z)
    for i in range(n):
        if m[i][i] != 1:
            raise InvariantError(f"mobius[{i}][{i}] != 1")
        for j in range(n):
            zm = sum(z[i][k] * m[k][j] for k in range(n))
            mz = sum(m[i][k] * z[k][j] for k in range(n))
            want = int(i == j)
            if zm != want or mz != want:
                raise InvariantError(f"zeta*mobius differs from identity at ({i},{j})")
            if not z[i][j] and m[i][j]:
                raise InvariantError(f"mobius[{i}][{j}] nonzero outside inclusion")
    return True
