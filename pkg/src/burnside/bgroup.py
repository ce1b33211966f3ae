"""B-groups, the largest B-group quotient beta(G), and supporting group tests."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

from .errors import InvariantError, ValidationError
from .group import GroupTable, is_prime
from .lattice import (
    Subgroup, build_lattice, generated_by, is_normal_in, iter_bits,
    minimal_normal_subgroups, normal_subgroups,
)
from .mgn import m_direct


@dataclass
class BetaResult:
    chosen_N: Subgroup
    beta: GroupTable
    all_nonzero_N: list = field(default_factory=list)
    maximal_N: list = field(default_factory=list)


def is_b_group(L, full_check=False):
    """True iff m_{G,N} = 0 for every minimal non-trivial normal N.

    With ``full_check`` every non-trivial normal subgroup is tested as well and
    the two verdicts must agree.
    """
    verdict = all(m_direct(L, N) == 0 for N in minimal_normal_subgroups(L))
    if full_check:
        full = all(m_direct(L, N) == 0 for N in normal_subgroups(L) if N.order > 1)
        if full != verdict:
            raise InvariantError(f"{L.group.name}: minimal-normal and all-normal B-group checks disagree")
    return verdict


def quotient_group(G, N, name=None):
    """G/N on left cosets; coset k is represented by its least element index."""
    members = N.members if isinstance(N, Subgroup) else N
    if not members & 1 << G.identity or not is_normal_in(G, members):
        raise ValidationError("quotient needs a normal subgroup")
    nelems = list(iter_bits(members))
    coset_of = [-1] * G.order
    reps = []
    for x in range(G.order):
        if coset_of[x] < 0:
            k = len(reps)
            reps.append(x)
            for n in nelems:
                coset_of[G.mul[x][n]] = k
    mul = [[coset_of[G.mul[a][b]] for b in reps] for a in reps]
    return GroupTable.from_table(mul, name or f"{G.name}/N")


def beta(L):
    """beta(G) = G/N for N normal, maximal subject to m_{G,N} != 0."""
    G = L.group
    nonzero = []
    for N in normal_subgroups(L):
        m = m_direct(L, N)
        if m != 0:
            nonzero.append((N, m))
    candidates = [N for N, _ in nonzero]
    maximal = [N for N in candidates if not any(N < M for M in candidates)]
    chosen = maximal[0]
    quotient = quotient_group(G, chosen, f"beta({G.name})")
    for other in maximal[1:]:
        if not are_isomorphic(quotient, quotient_group(G, other)):
            raise InvariantError(f"{G.name}: maximal N with m != 0 give non-isomorphic quotients")
    return BetaResult(chosen, quotient, nonzero, maximal)


# -- isomorphism ------------------------------------------------------------

def _invariants(G):
    orders = G.element_orders
    center = sum(1 for z in range(G.order) if all(G.mul[z][g] == G.mul[g][z] for g in G.generators))
    squares = len({G.mul[x][x] for x in range(G.order)})
    # orders of centralizers, bucketed by element order
    cent = Counter()
    for x in range(G.order):
        c = sum(1 for y in range(G.order) if G.mul[x][y] == G.mul[y][x])
        cent[(orders[x], c)] += 1
    return (G.order, tuple(sorted(Counter(orders).items())), center, squares, tuple(sorted(cent.items())))


def _extend(A, B, gens, images):
    """Extend gens -> images to the subgroup they generate; None if inconsistent."""
    phi = {A.identity: B.identity}
    frontier = [A.identity]
    while frontier:
        nxt = []
        for x in frontier:
            px = phi[x]
            for g, h in zip(gens, images):
                y = A.mul[x][g]
                py = B.mul[px][h]
                seen = phi.get(y)
                if seen is None:
                    phi[y] = py
                    nxt.append(y)
                elif seen != py:
                    return None
        frontier = nxt
    if len(set(phi.values())) != len(phi):
        return None
    return phi


def find_isomorphism(A, B):
    """An isomorphism A -> B as a list of images, or None."""
    if A.order != B.order or A.is_abelian != B.is_abelian:
        return None
    if _invariants(A) != _invariants(B):
        return None
    gens = list(A.generators)
    a_orders, b_orders = A.element_orders, B.element_orders
    by_order = {}
    for y in range(B.order):
        by_order.setdefault(b_orders[y], []).append(y)

    def search(k, images):
        phi = _extend(A, B, gens[:k], images)
        if phi is None:
            return None
        if k == len(gens):
            return phi if len(phi) == A.order else None
        hit = set(phi.values())
        for y in by_order.get(a_orders[gens[k]], ()):
            # gens[k] lies outside the subgroup mapped so far, so its image must too
            if y in hit:
                continue
            found = search(k + 1, images + [y])
            if found is not None:
                return found
        return None

    phi = search(0, [])
    if phi is None:
        return None
    return [phi[x] for x in range(A.order)]


def are_isomorphic(A, B):
    return find_isomorphism(A, B) is not None


# -- series and O_p ---------------------------------------------------------

def _commutator_subgroup(G, X, Y):
    """[X, Y] as a subgroup of G (X, Y given as element lists)."""
    return generated_by(G, {G.commutator(x, y) for x in X for y in Y})


def derived_series(G):
    series = [generated_by(G, range(G.order))]
    while True:
        cur = series[-1].elements()
        nxt = _commutator_subgroup(G, cur, cur)
        if nxt.members == series[-1].members:
            return series
        series.append(nxt)


def lower_central_series(G):
    everything = list(range(G.order))
    series = [generated_by(G, everything)]
    while True:
        nxt = _commutator_subgroup(G, series[-1].elements(), everything)
        if nxt.members == series[-1].members:
            return series
        series.append(nxt)


def is_solvable(G):
    return derived_series(G)[-1].order == 1


def is_nilpotent(G):
    return lower_central_series(G)[-1].order == 1


def _is_p_power(n, p):
    while n % p == 0:
        n //= p
    return n == 1


def largest_normal_p_subgroup(L, p):
    """O_p(G): the join of all normal p-subgroups, itself the largest one."""
    ps = [N for N in normal_subgroups(L) if _is_p_power(N.order, p)]
    best = max(ps, key=lambda N: N.order)
    if any(not N <= best for N in ps):
        raise InvariantError("normal p-subgroups are not all contained in the largest one")
    return best


def is_cyclic_table(G):
    return any(o == G.order for o in G.element_orders)


def is_cyclic_mod_p(G, p, lattice=None):
    """True iff G / O_p(G) is cyclic."""
    if not is_prime(p):
        raise ValidationError(f"{p} is not prime")
    L = lattice if lattice is not None else build_lattice(G)
    O = largest_normal_p_subgroup(L, p)
    return is_cyclic_table(quotient_group(G, O))
