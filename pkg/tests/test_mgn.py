from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from burnside.errors import ValidationError
from burnside.group import build_from_generators, build_from_spec, euler_phi
from burnside.lattice import build_lattice, normal_subgroups
from burnside.mgn import (
    M_prime_direct, M_prime_recursive, alternating_total, cover_sum, inclusion_exclusion_decomposition,
    m_direct, m_main_theorem, m_prime_direct, m_prime_recursive, m_recursive, m_self, mgn_report,
    theorem_sum,
)
from burnside.topology import chi_tilde_for_all_cyclic
from conftest import catalog_specs, lattice_of, subgroup
from oracles import closed_subsets, mobius_by_chains, phi_brute


def m_oracle(G, normal_members):
    """m_{G,N} from a brute-force subgroup list and signed chain counts only."""
    subs = closed_subsets(G.mul, G.identity)
    top = frozenset(range(G.order))
    total = 0
    for X in subs:
        xn = {G.mul[x][n] for x in X for n in normal_members}
        if xn == top:
            total += len(X) * mobius_by_chains(lambda a, b: a <= b, X, top, subs)
    return Fraction(total, G.order)


def proper_normal(L):
    return [N for N in normal_subgroups(L) if N.members != L.top.members]


@pytest.mark.parametrize("spec", catalog_specs(max_order=24))
def test_all_methods_match_oracle(spec):
    L = lattice_of(spec)
    for N in normal_subgroups(L):
        want = m_oracle(L.group, N.elements())
        rep = mgn_report(L, N)
        assert rep.agreement
        assert rep.m_direct == want
        assert m_recursive(L, N) == want
        if rep.m_theorem is not None:
            assert rep.m_theorem == want


def test_s3_values(S3):
    A3 = subgroup(S3, 3)
    assert m_direct(S3, A3) == 0
    assert m_direct(S3, S3.trivial) == 1
    rep = m_main_theorem(S3, A3)
    assert rep.m_theorem == 0 and rep.agreement
    assert rep.fallback is None


def test_s3_breakdown(S3):
    A3 = subgroup(S3, 3)
    total, Hs, terms = theorem_sum(S3, A3)
    assert Hs == [A3] and total == 0
    [st_] = terms
    assert st_.sigma == (1,)
    got = {(t.C.order, t.chi_tilde, t.signed_contribution) for t in st_.terms}
    assert got == {(1, 2, -2), (3, -1, 2)}


def test_cyclic_six_self_value():
    L = lattice_of("cyclic:6")
    assert m_self(L) == Fraction(1, 3)
    rep = mgn_report(L, L.top)
    assert rep.m_direct == Fraction(1, 3) and rep.m_recursive == Fraction(1, 3)
    assert rep.fallback == "direct"


def test_klein_four_values(V4):
    assert m_direct(V4, V4.trivial) == 1
    for N in proper_normal(V4)[1:]:
        assert m_direct(V4, N) == 0
    assert m_self(V4) == 0


def test_decomposition_identity_klein_four(V4):
    terms = inclusion_exclusion_decomposition(V4, V4.trivial)
    assert len(terms) == 7
    assert alternating_total(terms) == cover_sum(V4, V4.trivial) == -4
    assert V4.group.order * (m_self(V4) - m_direct(V4, V4.trivial)) == -4


@pytest.mark.parametrize("spec", catalog_specs(max_order=24, noncyclic=True))
def test_decomposition_identity(spec):
    L = lattice_of(spec)
    n = L.group.order
    for N in proper_normal(L):
        terms = inclusion_exclusion_decomposition(L, N)
        assert alternating_total(terms) == cover_sum(L, N) == n * (m_self(L) - m_direct(L, N))


@pytest.mark.parametrize("spec", catalog_specs(max_order=24))
def test_partial_sum_three_ways(spec):
    L = lattice_of(spec)
    memo = {}
    for H in L.subgroups[:-1]:
        euler = sum(t.chi_tilde * t.phi for t in chi_tilde_for_all_cyclic(L, H))
        assert euler == M_prime_direct(L, H) == M_prime_recursive(L, H, memo)
        assert m_prime_direct(L, H) == m_prime_recursive(L, H)


def test_partial_sum_hand_cases(S3, V4):
    assert M_prime_direct(S3, subgroup(S3, 3)) == 0
    assert M_prime_direct(V4, subgroup(V4, 2, 1)) == 0
    # X <= 1: |1| mu(1, S3) = 3
    assert M_prime_direct(S3, S3.trivial) == 3
    assert M_prime_recursive(S3, S3.trivial) == 3


@pytest.mark.parametrize("n", range(1, 25))
def test_cyclic_closed_form(n):
    L = lattice_of(f"cyclic:{n}")
    assert m_self(L) == Fraction(phi_brute(n), n)
    assert m_self(L) == Fraction(euler_phi(n), n)


def test_cyclic_group_reports_fallback():
    L = lattice_of("cyclic:12")
    rep = mgn_report(L, subgroup(L, 2))
    assert rep.fallback == "direct"
    assert rep.m_theorem == rep.m_direct
    assert rep.breakdown == []


def test_n_equals_g_has_no_theorem_value(S3):
    rep = mgn_report(S3, S3.top)
    assert rep.m_theorem is None
    assert rep.notes["theorem"].startswith("n/a")
    assert rep.m_direct == 0 == rep.m_recursive
    with pytest.raises(ValidationError):
        m_main_theorem(S3, S3.top)
    with pytest.raises(ValidationError):
        inclusion_exclusion_decomposition(S3, S3.top)


def test_non_normal_rejected(S3):
    T = subgroup(S3, 2)
    for f in (m_direct, m_recursive, mgn_report):
        with pytest.raises(ValidationError):
            f(S3, T)


def test_partial_sums_need_proper_subgroup(S3):
    with pytest.raises(ValidationError):
        M_prime_direct(S3, S3.top)
    with pytest.raises(ValidationError):
        M_prime_recursive(S3, S3.top)


def test_method_selection(S3):
    rep = mgn_report(S3, S3.trivial, ("direct",))
    assert rep.m_theorem is None and rep.m_recursive is None
    with pytest.raises(ValidationError):
        mgn_report(S3, S3.trivial, ("bogus",))
    with pytest.raises(ValidationError):
        mgn_report(S3, S3.trivial, ())


def test_large_cover_is_refused_not_guessed():
    # A5 has 21 maximal subgroups: 2^21 inclusion-exclusion terms
    L = lattice_of("alt:5")
    rep = mgn_report(L, L.trivial)
    assert rep.m_theorem is None
    assert rep.notes["theorem"].startswith("refused")
    assert rep.m_direct == 1 == rep.m_recursive


def test_s4_values():
    L = lattice_of("sym:4")
    by_order = {N.order: m_direct(L, N) for N in normal_subgroups(L)}
    for N in proper_normal(L):
        assert mgn_report(L, N).agreement
    assert by_order[1] == 1
    assert by_order[24] == 0


perm_groups = st.integers(min_value=3, max_value=5).flatmap(
    lambda d: st.lists(st.permutations(list(range(d))), min_size=1, max_size=2)
)


@settings(max_examples=25, deadline=None)
@given(perm_groups)
def test_random_permutation_groups(gens):
    G = build_from_generators([tuple(p) for p in gens])
    L = build_lattice(G)
    for N in normal_subgroups(L):
        rep = mgn_report(L, N)
        assert rep.agreement, rep.values()
        if not L.cyclic_flags[-1] and N.members != L.top.members and rep.m_theorem is not None:
            assert rep.m_theorem == rep.m_direct
    for H in L.subgroups[:-1]:
        euler = sum(t.signed_contribution for t in chi_tilde_for_all_cyclic(L, H))
        assert euler == M_prime_direct(L, H) == M_prime_recursive(L, H)


def test_product_spec_agreement():
    L = build_lattice(build_from_spec("product:sym:3,cyclic:3"))
    for N in proper_normal(L):
        assert mgn_report(L, N).agreement
