"""Cross-verification sweep over a catalog.

For every group and every proper normal subgroup the requested m-value routes
are compared exactly; on top of that each group runs the identity checks of
the lattice, topology, m-value and B-group layers.  Failures are collected
as strings rather than raised so a sweep always reports every problem.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from .bgroup import beta, is_b_group
from .cache import load_or_build
from .errors import InvariantError, ValidationError
from .group import DEFAULT_ORDER_CAP, euler_phi, is_prime, spec_order
from .lattice import build_lattice, check_lattice, mobius_recursive, normal_subgroups
from .mgn import (
    METHODS, M_prime_direct, M_prime_recursive, cover_sum, m_direct, mgn_report,
)
from .topology import chi_tilde_for_all_cyclic

TSV_COLUMNS = ("group", "order", "N_order", "N_index", "m_direct", "m_theorem", "m_recursive", "agree")


@dataclass
class RunConfig:
    max_group_order: int = 48
    methods: tuple = METHODS
    cache_dir: str | None = None
    parallelism: int = 1
    output_format: str = "tsv"

    def __post_init__(self):
        self.methods = tuple(self.methods)
        if not self.methods or set(self.methods) - set(METHODS):
            raise ValidationError(f"methods must be a non-empty subset of {METHODS}")
        if self.max_group_order > DEFAULT_ORDER_CAP:
            raise ValidationError(f"max_group_order exceeds the global cap {DEFAULT_ORDER_CAP}")
        if self.output_format not in ("human", "tsv"):
            raise ValidationError("output_format must be 'human' or 'tsv'")
        if self.parallelism < 1:
            raise ValidationError("parallelism must be >= 1")


@dataclass
class Row:
    group: str
    order: int
    N_order: int
    N_index: int
    m_direct: str
    m_theorem: str
    m_recursive: str
    agree: bool

    def tsv(self):
        return "\t".join([
            self.group, str(self.order), str(self.N_order), str(self.N_index),
            self.m_direct, self.m_theorem, self.m_recursive, "true" if self.agree else "false",
        ])


@dataclass
class GroupResult:
    name: str
    order: int
    rows: list = field(default_factory=list)
    failures: list = field(default_factory=list)
    skipped: bool = False


def fmt_rational(q):
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def report_cells(rep, methods):
    """TSV cells for the three method columns; '-' marks a method not requested."""
    cells = []
    for method in METHODS:
        value = getattr(rep, "m_" + method)
        if method not in methods:
            cells.append("-")
        elif method == "theorem" and rep.fallback:
            cells.append(f"fallback={rep.fallback}")
        elif value is None:
            cells.append(rep.notes.get(method, "-").split(":")[0])
        else:
            cells.append(fmt_rational(value))
    return cells


def _invariant_checks(G, L, failures):
    def fail(msg):
        failures.append(f"{G.name}: {msg}")

    try:
        check_lattice(L)
    except InvariantError as exc:
        fail(str(exc))
    if mobius_recursive(L) != L.mobius:
        fail("back-substituted Mobius matrix differs from the recursive definition")
    last = len(L) - 1
    for i in range(last):
        if sum(L.mobius[i][j] for j in range(len(L)) if L.zeta[i][j]) != 0:
            fail(f"sum of mu(X, Y) over X <= Y <= G is nonzero for subgroup #{i}")

    m_gg = m_direct(L, L.top)
    want = Fraction(euler_phi(G.order), G.order) if L.cyclic_flags[-1] else Fraction(0)
    if m_gg != want:
        fail(f"m_G,G = {m_gg}, expected {want}")
    if m_direct(L, L.trivial) != 1:
        fail("m_G,1 != 1")
    try:
        is_b_group(L, full_check=True)
    except InvariantError as exc:
        fail(str(exc))
    try:
        b = beta(L)
        if not is_b_group(build_lattice(b.beta)):
            fail("beta(G) is not a B-group")
    except InvariantError as exc:
        fail(str(exc))
    return m_gg


def _expected_checks(entry, L, failures):
    exp = entry.expected_properties
    if not exp:
        return
    if "b_group" in exp and is_b_group(L) != exp["b_group"]:
        failures.append(f"{entry.name}: b_group != {exp['b_group']}")
    if "beta_order" in exp and beta(L).beta.order != exp["beta_order"]:
        failures.append(f"{entry.name}: beta order != {exp['beta_order']}")


def verify_entry(entry, config):
    """Run every check for one catalog entry; never raises for check failures."""
    G, L = load_or_build(entry.spec, config.cache_dir, name=entry.name)
    res = GroupResult(entry.name, G.order)
    failures = res.failures
    m_gg = _invariant_checks(G, L, failures)
    _expected_checks(entry, L, failures)
    for N in normal_subgroups(L):
        if N.members == L.top.members:
            continue
        rep = mgn_report(L, N, config.methods, breakdown=False)
        same = [s for s in L.subgroups if s.order == N.order]
        refused = [m for m, note in rep.notes.items() if note.startswith("refused")]
        agree = rep.agreement and not refused
        res.rows.append(Row(entry.name, G.order, N.order, same.index(N), *report_cells(rep, config.methods), agree))
        if not rep.agreement:
            failures.append(f"{entry.name}: methods disagree for N {rep.N_label}: {rep.values()}")
        for m in refused:
            failures.append(f"{entry.name}: {m} method could not run for N {rep.N_label}: {rep.notes[m]}")

        m_n = rep.m_direct if rep.m_direct is not None else m_direct(L, N)
        if m_n + Fraction(cover_sum(L, N), G.order) != m_gg:
            failures.append(f"{entry.name}: complement identity fails for N {rep.N_label}")
        terms = chi_tilde_for_all_cyclic(L, N)
        euler = sum(t.chi_tilde * t.phi for t in terms)
        direct = M_prime_direct(L, N)
        if not euler == direct == M_prime_recursive(L, N):
            failures.append(f"{entry.name}: M' routes disagree for H {rep.N_label}")
        index = G.order // N.order
        if (is_prime(index)
                and not L.cyclic_flags[-1] and all(t.chi_tilde == 0 for t in terms) and m_n != 0):
            failures.append(f"{entry.name}: acyclic T_C posets but m != 0 for N {rep.N_label}")
    return res


def _verify_one(args):
    entry, config = args
    try:
        return verify_entry(entry, config)
    except (ValidationError, InvariantError) as exc:
        res = GroupResult(entry.name, 0)
        res.failures.append(f"{entry.name}: {exc}")
        return res


def run_verify(catalog, config):
    """Verify every catalog group of order <= config.max_group_order.

    Returns the per-group results in catalog order (deterministic for any
    worker count).
    """
    todo = []
    skipped = []
    for e in catalog:
        order = spec_order(e.spec)
        if order <= config.max_group_order:
            todo.append(e)
        else:
            skipped.append(GroupResult(e.name, order, skipped=True))
    jobs = [(e, config) for e in todo]
    if config.parallelism > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=config.parallelism) as pool:
            results = list(pool.map(_verify_one, jobs))
    else:
        results = [_verify_one(j) for j in jobs]
    by_name = {r.name: r for r in results + skipped}
    return [by_name[e.name] for e in catalog]


def format_results(results, output_format="tsv"):
    out = []
    if output_format == "tsv":
        out.append("\t".join(TSV_COLUMNS))
        for r in results:
            out.extend(row.tsv() for row in r.rows)
    else:
        for r in results:
            if r.skipped:
                out.append(f"{r.name} (order {r.order}): skipped, above --max-order")
                continue
            status = "ok" if not r.failures else f"{len(r.failures)} FAILURE(S)"
            out.append(f"{r.name} (order {r.order}): {len(r.rows)} normal N, {status}")
            for row in r.rows:
                out.append(
                    f"  N order={row.N_order},index={row.N_index}: direct={row.m_direct} "
                    f"theorem={row.m_theorem} recursive={row.m_recursive} agree={str(row.agree).lower()}"
                )
    return "\n".join(out) + "\n"
