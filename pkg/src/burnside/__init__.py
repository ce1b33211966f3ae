"""Exact computation of the invariant m_{G,N}, B-groups and beta(G) for small finite groups."""

from .bgroup import are_isomorphic, beta, is_b_group, quotient_group
from .group import GroupSpec, GroupTable, build_from_generators, build_from_spec, element_order, euler_phi, parse_spec
from .lattice import Subgroup, SubgroupLattice, build_lattice, compute_incidence, enumerate_subgroups
from .mgn import m_direct, m_main_theorem, m_prime_direct, m_prime_recursive, m_self, mgn_report

__version__ = "0.1.0"
