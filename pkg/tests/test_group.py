from collections import Counter

import pytest
from hypothesis import given, settings, strategies as st

from burnside.errors import SizeLimitError, SpecParseError, ValidationError
from burnside.group import (
    GroupSpec, GroupTable, build_from_generators, build_from_spec, cycles_to_perm,
    element_order, euler_phi, parse_spec, spec_order,
)
from oracles import phi_brute


def test_single_three_cycle_is_cyclic_of_order_3():
    G = build_from_generators([cycles_to_perm([[1, 2, 3]], 3)])
    assert G.order == 3
    assert max(G.element_orders) == 3


def test_transposition_and_three_cycle_give_s3():
    G = build_from_generators([cycles_to_perm([[1, 2]], 3), cycles_to_perm([[1, 2, 3]], 3)])
    assert G.order == 6
    assert Counter(G.element_orders) == {1: 1, 2: 3, 3: 2}


def test_empty_generating_set_is_trivial():
    G = build_from_generators([], degree=3)
    assert G.order == 1
    assert G.identity == 0


def test_non_bijection_rejected():
    with pytest.raises(ValidationError):
        build_from_generators([(0, 0, 1)])


def test_order_cap():
    with pytest.raises(SizeLimitError):
        build_from_spec("sym:5", cap=100)


def test_cyclic_6_has_generator_of_order_6():
    G = build_from_spec("cyclic:6")
    assert G.order == 6
    assert 6 in G.element_orders


def test_klein_four():
    G = build_from_spec("product:cyclic:2,cyclic:2")
    assert G.order == 4
    assert sorted(G.element_orders) == [1, 2, 2, 2]


def test_dihedral_8_element_orders():
    # D8 = <r, s>: r, r^3 have order 4, r^2 and the four reflections order 2
    G = build_from_spec("dihedral:8")
    assert sorted(G.element_orders) == [1, 2, 2, 2, 2, 2, 4, 4]


@pytest.mark.parametrize("spec,order", [
    ("cyclic:1", 1), ("dihedral:2", 2), ("dihedral:4", 4), ("sym:1", 1), ("sym:2", 2),
    ("sym:4", 24), ("alt:3", 3), ("alt:4", 12), ("alt:5", 60), ("quaternion:8", 8),
    ("quaternion:16", 16), ("elab:3:2", 9), ("product:cyclic:2,sym:3,cyclic:3", 36),
    ("product:[product:cyclic:2,cyclic:2],cyclic:3", 12), ("perm:(1 2 3 4);(1 3)", 8),
    ("perm:(1,2)(3,4);(1,3)(2,4)", 4),
])
def test_family_orders(spec, order):
    G = build_from_spec(spec)
    assert G.order == order
    assert spec_order(spec) == order


def test_quaternion_has_single_involution():
    G = build_from_spec("quaternion:8")
    assert Counter(G.element_orders) == {1: 1, 2: 1, 4: 6}


def test_element_order_examples():
    S3 = build_from_spec("sym:3")
    assert element_order(S3, S3.identity) == 1
    transposition = next(x for x in range(6) if S3.mul[x][x] == S3.identity and x != S3.identity)
    assert element_order(S3, transposition) == 2
    C6 = build_from_spec("cyclic:6")
    assert element_order(C6, 1) == 6


@pytest.mark.parametrize("spec", ["sym:4", "dihedral:12", "quaternion:8", "product:cyclic:4,cyclic:6", "alt:5"])
def test_lagrange_for_element_orders(spec):
    G = build_from_spec(spec)
    assert all(G.order % o == 0 for o in G.element_orders)


def test_euler_phi_examples():
    assert euler_phi(1) == 1
    assert euler_phi(6) == 2
    assert euler_phi(12) == 4
    with pytest.raises(ValidationError):
        euler_phi(0)


@given(st.integers(min_value=1, max_value=2000))
def test_euler_phi_matches_gcd_count(n):
    assert euler_phi(n) == phi_brute(n)


def test_determinism():
    a = build_from_spec("product:dihedral:8,cyclic:2")
    b = build_from_spec(parse_spec("product:dihedral:8,cyclic:2"))
    assert a.same_table(b)


def test_invariants_enforced_on_bad_tables():
    with pytest.raises(ValidationError):
        GroupTable.from_table([[0, 1], [1, 1]])
    # Latin square with identity that is not associative (order 5 loop)
    loop = [
        [0, 1, 2, 3, 4],
        [1, 0, 3, 4, 2],
        [2, 4, 0, 1, 3],
        [3, 2, 4, 0, 1],
        [4, 3, 1, 2, 0],
    ]
    with pytest.raises(ValidationError, match="associative"):
        GroupTable.from_table(loop)


@pytest.mark.parametrize("text", [
    "cyclic:6", "dihedral:8", "sym:3", "alt:5", "quaternion:8", "elab:2:3",
    "product:cyclic:2,cyclic:4", "product:[product:cyclic:2,cyclic:2],cyclic:3", "perm:(1 2 3);(1 2)",
])
def test_spec_round_trip(text):
    assert str(parse_spec(text)) == text


@pytest.mark.parametrize("text,pos", [
    ("cyclic:x", 7), ("bogus:3", 0), ("cyclic", 0), ("product:cyclic:2,dihedral:y", 26),
    ("perm:(1 2;(1 3)", 5),
])
def test_spec_errors_carry_positions(text, pos):
    with pytest.raises(SpecParseError) as info:
        parse_spec(text)
    assert info.value.position == pos


@pytest.mark.parametrize("kind,params", [
    ("cyclic", (0,)), ("dihedral", (7,)), ("elementary_abelian", (4, 2)), ("quaternion", (12,)),
    ("direct_product", ()),
])
def test_spec_validation(kind, params):
    with pytest.raises(ValidationError):
        GroupSpec(kind, params)


perms = st.integers(min_value=2, max_value=5).flatmap(
    lambda d: st.lists(st.permutations(list(range(d))), min_size=0, max_size=3).map(lambda ps: (d, ps))
)


@settings(max_examples=40, deadline=None)
@given(perms)
def test_closure_tables_are_groups(data):
    degree, gens = data
    G = build_from_generators([tuple(p) for p in gens], degree)
    # construction validated the table; element 0 is the identity by construction
    assert G.identity == 0
    assert all(G.order % o == 0 for o in G.element_orders)
    again = build_from_generators([tuple(p) for p in gens], degree)
    assert G.same_table(again)
