"""The invariant m_{G,N} and the partial sums M'_{G,H}, by three independent routes.

* direct: the Möbius-function definition, (1/|G|) * sum over X with XN = G of |X| mu(X, G).
* recursive: m_{G,G} minus the XN != G part, assembled from M'_{G,K} for
  N <= K < G, each evaluated by recursion on proper subgroups (no Möbius matrix).
* theorem: inclusion-exclusion over the maximal subgroups containing N, with each
  M'_{G,H_sigma} expressed through reduced Euler characteristics of T_C(G, H_sigma).

All values are exact: ``fractions.Fraction`` for m-values, ``int`` for M'.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from .errors import InvariantError, SizeLimitError, ValidationError
from .group import euler_phi
from .lattice import intersect, maximal_subgroups_containing, product_set
from .topology import CyclicTerm, build_t_poset, count_chains

METHODS = ("direct", "theorem", "recursive")
MAX_COVER_SIZE = 20


@dataclass
class SigmaTerm:
    sigma: tuple  # 1-based indices into the maximal-subgroup list
    H_sigma: object
    terms: list = field(default_factory=list)

    @property
    def total(self):
        return sum(t.signed_contribution for t in self.terms)


@dataclass
class MgnReport:
    group: str
    N: object
    N_label: str
    m_direct: Fraction | None = None
    m_theorem: Fraction | None = None
    m_recursive: Fraction | None = None
    agreement: bool = True
    fallback: str | None = None
    notes: dict = field(default_factory=dict)
    maximal: list = field(default_factory=list)
    breakdown: list = field(default_factory=list)

    def values(self):
        return [v for v in (self.m_direct, self.m_theorem, self.m_recursive) if v is not None]


@dataclass(frozen=True)
class DecompositionTerm:
    sigma: tuple
    H_sigma: object
    M_prime: int


def _proper(L, H):
    if H.members == L.top.members:
        raise ValidationError("H must be a proper subgroup of G")
    L.index(H)


def _require_normal(L, N):
    if not L.normal_flags[L.index(N)]:
        raise ValidationError(f"N = {N.describe()} is not normal in {L.group.name}")


def _self_closed_form(L):
    G = L.group
    if L.cyclic_flags[-1]:
        return Fraction(euler_phi(G.order), G.order)
    return Fraction(0)


def m_direct(L, N):
    """(1/|G|) * sum_{XN = G} |X| mu(X, G)."""
    _require_normal(L, N)
    top = L.top.members
    last = len(L) - 1
    total = 0
    for i, X in enumerate(L.subgroups):
        xn = product_set(X, N)
        if L.lookup(xn) is None:
            raise InvariantError(f"XN is not a subgroup for X = {X.describe()}")
        if xn == top:
            total += X.order * L.mobius[i][last]
    return Fraction(total, L.group.order)


def m_self(L):
    return m_direct(L, L.top)


def M_prime_direct(L, H):
    """sum_{X <= H} |X| mu(X, G), for any proper subgroup H."""
    _proper(L, H)
    last = len(L) - 1
    subs = L.subgroups
    return sum(subs[j].order * L.mobius[j][last] for j in L.contained_in[L.index(H)])


def m_prime_direct(L, H):
    return Fraction(M_prime_direct(L, H), L.group.order)


def M_prime_recursive(L, H, memo=None):
    """M'_{G,H} = -sum_{C <= H cyclic} phi(|C|) - sum_{Y < G, Y not <= H} M'_{Y, Y ∩ H}.

    Sub-lattices of Y are read off the parent lattice.  ``memo`` maps
    (Y bitset, K bitset) to M'_{Y,K} and may be shared across calls.
    """
    _proper(L, H)
    if memo is None:
        memo = {}
    subs = L.subgroups
    below = L.contained_in
    cyclic = L.cyclic_flags
    phi = [euler_phi(s.order) for s in subs]

    def rec(y, k_bits):
        key = (subs[y].members, k_bits)
        hit = memo.get(key)
        if hit is not None:
            return hit
        total = 0
        for j in below[y]:
            Z = subs[j].members
            if Z & k_bits == Z:
                if cyclic[j]:
                    total -= phi[j]
            elif j != y:
                total -= rec(j, Z & k_bits)
        memo[key] = total
        return total

    return rec(len(subs) - 1, H.members)


def m_prime_recursive(L, H, memo=None):
    return Fraction(M_prime_recursive(L, H, memo), L.group.order)


def _cover(L, N):
    Hs = maximal_subgroups_containing(L, N)
    if len(Hs) > MAX_COVER_SIZE:
        raise SizeLimitError(
            f"{len(Hs)} maximal subgroups contain N; inclusion-exclusion over 2^{len(Hs)} sets refused"
        )
    return Hs


def _sigmas(Hs):
    for size in range(1, len(Hs) + 1):
        for sigma in combinations(range(len(Hs)), size):
            H = Hs[sigma[0]]
            for i in sigma[1:]:
                H = intersect(H, Hs[i])
            yield tuple(i + 1 for i in sigma), H


def theorem_sum(L, N):
    """Signed sum over (sigma, C) of chi_tilde(T_C(G, H_sigma)) * phi(|C|).

    Returns (total, maximal subgroups, list of SigmaTerm).  Only the subgroup
    list, cyclicity flags and chain counts are used.
    """
    Hs = _cover(L, N)
    cyclic = [(C, euler_phi(C.order)) for C, f in zip(L.subgroups, L.cyclic_flags) if f]
    chi_cache = {}
    breakdown = []
    total = 0
    for sigma, H in _sigmas(Hs):
        sign = -1 if len(sigma) % 2 else 1
        st = SigmaTerm(sigma, H)
        for C, phi in cyclic:
            if not C <= H:
                continue
            key = (C.members, H.members)
            summary = chi_cache.get(key)
            if summary is None:
                summary = chi_cache[key] = count_chains(build_t_poset(L, C, H))
            st.terms.append(CyclicTerm(C, phi, summary.chi_tilde, sign * summary.chi_tilde * phi, summary))
        total += st.total
        breakdown.append(st)
    return total, Hs, breakdown


def m_main_theorem(L, N):
    """m_{G,N} through the inclusion-exclusion / Euler characteristic formula.

    For cyclic G the formula does not apply; the report then carries the
    direct value with ``fallback="direct"``.
    """
    if N.members == L.top.members:
        raise ValidationError("N must be a proper normal subgroup")
    return mgn_report(L, N, METHODS)


def m_recursive(L, N, memo=None):
    """m_{G,G} minus the XN != G sum, with every M' taken from the recursion.

    X <= K iff XN <= K for N <= K, so M'_{G,K} = sum over N <= K' <= K of
    f(K') with f(K') = sum_{XN = K'} |X| mu(X, G).  Peeling f off along the
    interval [N, G) gives the XN != G sum without any Möbius values.
    """
    _require_normal(L, N)
    if N.members == L.top.members:
        return _self_closed_form(L)
    memo = {} if memo is None else memo
    interval = [K for K in L.subgroups[L.index(N):-1] if N <= K]
    f = {}
    for K in interval:
        f[K.members] = M_prime_recursive(L, K, memo) - sum(
            v for k, v in f.items() if k & K.members == k
        )
    return _self_closed_form(L) - Fraction(sum(f.values()), L.group.order)


def subgroup_label(L, X):
    """``order=k,index=j`` with j counted among subgroups of that order in lattice order."""
    same = [s for s in L.subgroups if s.order == X.order]
    return f"order={X.order},index={same.index(X)}"


def mgn_report(L, N, methods=METHODS, breakdown=True):
    methods = tuple(methods)
    unknown = set(methods) - set(METHODS)
    if unknown or not methods:
        raise ValidationError(f"methods must be a non-empty subset of {METHODS}")
    _require_normal(L, N)
    rep = MgnReport(L.group.name, N, subgroup_label(L, N))
    is_top = N.members == L.top.members
    if "direct" in methods:
        rep.m_direct = m_direct(L, N)
    if "recursive" in methods:
        try:
            rep.m_recursive = m_recursive(L, N)
        except SizeLimitError as exc:
            rep.notes["recursive"] = f"refused: {exc}"
    if "theorem" in methods:
        if L.cyclic_flags[-1]:
            rep.fallback = "direct"
            rep.m_theorem = rep.m_direct if rep.m_direct is not None else m_direct(L, N)
        elif is_top:
            rep.notes["theorem"] = "n/a: N = G"
        else:
            try:
                total, Hs, terms = theorem_sum(L, N)
            except SizeLimitError as exc:
                rep.notes["theorem"] = f"refused: {exc}"
            else:
                rep.m_theorem = Fraction(total, L.group.order)
                rep.maximal = Hs
                if breakdown:
                    rep.breakdown = terms
    vals = rep.values()
    rep.agreement = all(v == vals[0] for v in vals)
    return rep


def cover_sum(L, N):
    """sum over X with XN != G of |X| mu(X, G)."""
    top = L.top.members
    last = len(L) - 1
    return sum(
        X.order * L.mobius[i][last]
        for i, X in enumerate(L.subgroups)
        if product_set(X, N) != top
    )


def inclusion_exclusion_decomposition(L, N):
    """(sigma, H_sigma, M'_{G,H_sigma}) for every non-empty sigma.

    sum (-1)^(|sigma|+1) M'_{G,H_sigma} equals cover_sum(L, N) = |G| (m_{G,G} - m_{G,N}).
    """
    _require_normal(L, N)
    if N.members == L.top.members:
        raise ValidationError("N must be a proper normal subgroup")
    return [DecompositionTerm(sigma, H, M_prime_direct(L, H)) for sigma, H in _sigmas(_cover(L, N))]


def alternating_total(terms):
    return sum(t.M_prime if len(t.sigma) % 2 else -t.M_prime for t in terms)


__all__ = [
    "m_direct", "m_self", "M_prime_direct", "m_prime_direct", "M_prime_recursive",
    "m_prime_recursive", "m_main_theorem", "m_recursive", "mgn_report", "theorem_sum",
    "inclusion_exclusion_decomposition", "alternating_total", "cover_sum", "MgnReport",
    "SigmaTerm", "CyclicTerm", "DecompositionTerm",
]
