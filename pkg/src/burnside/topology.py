"""Posets of subgroups above a cyclic subgroup and Euler characteristics of their nerves.

For a cyclic C <= H < G the poset T_C(G, H) consists of the proper subgroups
X of G with C <= X and X not contained in H, ordered by inclusion.  The nerve
of a poset has one i-simplex per strictly increasing chain of i+1 elements;
we count those chains exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import ValidationError
from .group import euler_phi


@dataclass
class TPoset:
    C: object
    H: object
    elements: list
    strict_order: list  # strict_order[i][j] is True iff elements[i] < elements[j]

    def __len__(self):
        return len(self.elements)


@dataclass(frozen=True)
class EulerSummary:
    chain_counts: tuple
    chi: int
    chi_tilde: int


@dataclass(frozen=True)
class CyclicTerm:
    C: object
    phi: int
    chi_tilde: int
    signed_contribution: int
    summary: EulerSummary | None = field(default=None, compare=False, repr=False)


def poset_from_relation(elements, less):
    """TPoset over arbitrary elements with ``less(a, b)`` the strict order."""
    elements = list(elements)
    rel = [[bool(less(a, b)) for b in elements] for a in elements]
    return TPoset(None, None, elements, rel)


def build_t_poset(L, C, H):
    """T_C(G, H) = {X : C <= X < G, X not <= H}."""
    G = L.top
    if not L.cyclic_flags[L.index(C)]:
        raise ValidationError(f"C = {C.describe()} is not cyclic")
    if not C <= H:
        raise ValidationError("C must be contained in H")
    if H.members == G.members:
        raise ValidationError("H must be a proper subgroup")
    elems = [X for X in L.subgroups[L.index(C):-1] if C <= X and not X <= H]
    rel = [[a < b for b in elems] for a in elems]
    return TPoset(C, H, elems, rel)


def count_chains(P):
    """Chain counts of the nerve by dynamic programming over a linear extension."""
    n = len(P.elements)
    rel = P.strict_order
    # the number of strict predecessors strictly increases along the order
    below = [[i for i in range(n) if rel[i][j]] for j in range(n)]
    order = sorted(range(n), key=lambda j: len(below[j]))
    # ending[j][k] = chains of k+1 elements whose top is j
    ending = [None] * n
    counts = []
    for j in order:
        row = [1]
        for i in below[j]:
            prev = ending[i]
            if len(prev) + 1 > len(row):
                row.extend([0] * (len(prev) + 1 - len(row)))
            for k, c in enumerate(prev):
                row[k + 1] += c
        ending[j] = row
        if len(row) > len(counts):
            counts.extend([0] * (len(row) - len(counts)))
        for k, c in enumerate(row):
            counts[k] += c
    chi = sum(c if k % 2 == 0 else -c for k, c in enumerate(counts))
    return EulerSummary(tuple(counts), chi, chi - 1)


def reduced_euler_characteristic(L, C, H):
    return count_chains(build_t_poset(L, C, H)).chi_tilde


def chi_tilde_for_all_cyclic(L, H):
    """One CyclicTerm per cyclic C <= H; the chi_tilde * phi terms sum to M'_{G,H}."""
    if H.members == L.top.members:
        raise ValidationError("H must be a proper subgroup")
    terms = []
    for C, cyc in zip(L.subgroups, L.cyclic_flags):
        if cyc and C <= H:
            s = count_chains(build_t_poset(L, C, H))
            phi = euler_phi(C.order)
            terms.append(CyclicTerm(C, phi, s.chi_tilde, s.chi_tilde * phi, s))
    return terms


def is_cone(P):
    """True if some element is comparable with every other one."""
    n = len(P.elements)
    rel = P.strict_order
    return any(all(i == j or rel[i][j] or rel[j][i] for j in range(n)) for i in range(n))
