import logging

import pytest

from burnside import cache
from burnside.catalog import default_catalog, format_catalog, load_catalog, parse_catalog
from burnside.errors import ValidationError
from burnside.group import build_from_spec, parse_spec
from burnside.lattice import build_lattice
from burnside.mgn import m_direct, mgn_report


def test_default_catalog_contents():
    entries = default_catalog()
    names = [e.name for e in entries]
    assert len(names) == len(set(names))
    for n in ("S3", "A4", "A5", "Q8", "C2^2", "C1", "C24"):
        assert n in names
    by_name = {e.name: e for e in entries}
    assert by_name["A5"].expected_properties == {"b_group": True, "beta_order": 60}


def test_catalog_round_trip():
    entries = default_catalog()
    assert parse_catalog(format_catalog(entries)) == entries


def test_catalog_comments_and_properties(tmp_path):
    p = tmp_path / "cat.txt"
    p.write_text("# mine\n\nV4 elab:2:2 b_group=yes beta_order=4  # trailing\nC6 cyclic:6\n")
    entries = load_catalog(p)
    assert [e.name for e in entries] == ["V4", "C6"]
    assert entries[0].expected_properties == {"b_group": True, "beta_order": 4}
    assert entries[1].spec == parse_spec("cyclic:6")


@pytest.mark.parametrize("text,msg", [
    ("A cyclic:2\nA cyclic:3\n", "duplicate"),
    ("A cyclic:x\n", "line 1"),
    ("A\n", "expected"),
    ("A cyclic:2 colour=red\n", "unknown property"),
    ("A cyclic:2 b_group=maybe\n", "yes or no"),
    ("A cyclic:2 beta_order=big\n", "integer"),
    ("A cyclic:2 b_group\n", "key=value"),
])
def test_catalog_errors(text, msg):
    with pytest.raises(ValidationError, match=msg):
        parse_catalog(text)


def test_cache_round_trip(tmp_path):
    spec = parse_spec("sym:4")
    G1, L1 = cache.load_or_build(spec, tmp_path)
    path = cache.cache_path(tmp_path, spec)
    assert path.exists()
    G2, L2 = cache.load_or_build(spec, tmp_path)
    assert L2.zeta == L1.zeta and L2.mobius == L1.mobius
    assert [s.members for s in L2.subgroups] == [s.members for s in L1.subgroups]
    assert G2.same_table(G1)


def test_cache_text_is_exact():
    L = build_lattice(build_from_spec("sym:3"))
    text = cache.dumps_lattice(L)
    assert text.splitlines()[0] == "group sym:3 order 6 subgroups 6"
    again = cache.loads_lattice(L.group, text)
    assert again.mobius == L.mobius


def test_cache_paths_differ_per_spec(tmp_path):
    a = cache.cache_path(tmp_path, parse_spec("cyclic:6"))
    b = cache.cache_path(tmp_path, parse_spec("product:cyclic:2,cyclic:3"))
    assert a != b and a.suffix == b.suffix == cache.SUFFIX


def corrupt_variants(text):
    lines = text.splitlines()
    yield ""
    yield "nonsense\n"
    yield "\n".join(lines[:-1]) + "\n"
    yield text.replace("zeta", "zetta")
    bad = lines[:]
    bad[1] = "99"
    yield "\n".join(bad) + "\n"
    bad = lines[:]
    bad[2] = "0 x"
    yield "\n".join(bad) + "\n"
    k = int(lines[0].split()[-1])
    bad = lines[:]
    row = bad[2 + k].split()
    row[-1] = "0" if row[-1] == "1" else "1"
    bad[2 + k] = " ".join(row)
    yield "\n".join(bad) + "\n"


def test_corrupt_cache_text_rejected():
    G = build_from_spec("sym:3")
    text = cache.dumps_lattice(build_lattice(G))
    for bad in corrupt_variants(text):
        with pytest.raises(ValidationError):
            cache.loads_lattice(G, bad)
    with pytest.raises(ValidationError):
        cache.loads_lattice(build_from_spec("cyclic:4"), text)


def test_corrupt_cache_file_is_rebuilt(tmp_path, caplog):
    spec = parse_spec("elab:2:2")
    path = cache.cache_path(tmp_path, spec)
    path.write_text("group junk\n")
    with caplog.at_level(logging.WARNING):
        G, L = cache.load_or_build(spec, tmp_path)
    assert len(L) == 5
    assert "ignoring" in caplog.text
    assert path.read_text().startswith("group elab:2:2 order 4")


def test_list_and_clear(tmp_path):
    assert cache.list_cache(tmp_path / "missing") == []
    for s in ("cyclic:4", "sym:3"):
        cache.load_or_build(s, tmp_path)
    assert len(cache.list_cache(tmp_path)) == 2
    assert cache.clear_cache(tmp_path) == 2
    assert cache.list_cache(tmp_path) == []


def test_no_cache_dir_builds_in_memory():
    G, L = cache.load_or_build("cyclic:5")
    assert len(L) == 2


def test_default_cache_dir_from_environment(monkeypatch, tmp_path):
    monkeypatch.setenv(cache.ENV_VAR, str(tmp_path))
    assert cache.default_cache_dir() == tmp_path
    monkeypatch.delenv(cache.ENV_VAR)
    assert cache.default_cache_dir() is None


def test_cached_lattice_gives_same_m_value(tmp_path):
    spec = parse_spec("dihedral:12")
    _, fresh = cache.load_or_build(spec, None)
    cache.load_or_build(spec, tmp_path)
    _, cached = cache.load_or_build(spec, tmp_path)  # second call reads the file
    for N_fresh in fresh.subgroups:
        if fresh.normal_flags[fresh.index(N_fresh)]:
            N_cached = cached.lookup(N_fresh.members)
            assert m_direct(cached, N_cached) == m_direct(fresh, N_fresh)
            assert mgn_report(cached, N_cached).values() == mgn_report(fresh, N_fresh).values()
