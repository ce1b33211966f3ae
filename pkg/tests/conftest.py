import sys
from functools import lru_cache
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from burnside.catalog import default_catalog  # noqa: E402
from burnside.group import build_from_spec  # noqa: E402
from burnside.lattice import build_lattice  # noqa: E402


@lru_cache(maxsize=None)
def lattice_of(spec):
    return build_lattice(build_from_spec(spec))


def subgroup(L, order, index=0):
    return [s for s in L.subgroups if s.order == order][index]


CATALOG = default_catalog()


def catalog_specs(max_order=None, noncyclic=False):
    out = []
    for e in CATALOG:
        L = lattice_of(str(e.spec))
        if max_order is not None and L.group.order > max_order:
            continue
        if noncyclic and L.cyclic_flags[-1]:
            continue
        out.append(str(e.spec))
    return out


@pytest.fixture
def S3():
    return lattice_of("sym:3")


@pytest.fixture
def V4():
    return lattice_of("elab:2:2")


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for n in sorted(results):
            terminalreporter.write_line(results[n])
