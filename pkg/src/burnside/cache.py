"""On-disk lattice cache.

File layout (plain text, exact integers only)::

    group <name> order <n> subgroups <k>
    <member indices of subgroup 0, ascending>
    ...
    zeta
    <k rows of k integers>
    mobius
    <k rows of k integers>

The multiplication table is not stored: it is rebuilt from the group spec,
which is deterministic.
"""

from __future__ import annotations

import hashlib
import logging
import os
from pathlib import Path
import re

from .errors import ValidationError
from .group import build_from_spec, parse_spec
from .lattice import Subgroup, SubgroupLattice, build_lattice

log = logging.getLogger(__name__)

ENV_VAR = "BURNSIDE_CACHE_DIR"
SUFFIX = ".lattice"


def default_cache_dir():
    value = os.environ.get(ENV_VAR)
    return Path(value) if value else None


def cache_path(cache_dir, spec):
    text = str(spec)
    slug = re.sub(r"[^A-Za-z0-9._-]+", "_", text).strip("_")[:60]
    digest = hashlib.sha1(text.encode()).hexdigest()[:8]
    return Path(cache_dir) / f"{slug}-{digest}{SUFFIX}"


def dumps_lattice(L):
    lines = [f"group {L.group.name} order {L.group.order} subgroups {len(L)}"]
    lines += [" ".join(map(str, s.elements())) for s in L.subgroups]
    lines.append("zeta")
    lines += [" ".join(map(str, row)) for row in L.zeta]
    lines.append("mobius")
    lines += [" ".join(map(str, row)) for row in L.mobius]
    return "\n".join(lines) + "\n"


def write_lattice(L, path):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_text(dumps_lattice(L), encoding="utf-8")
    tmp.replace(path)
    return path


def _ints(line, lineno):
    try:
        return [int(t) for t in line.split()]
    except ValueError:
        raise ValidationError(f"cache line {lineno}: expected integers") from None


def loads_lattice(G, text):
    """Rebuild a SubgroupLattice for G from cache text, checking it against G."""
    lines = text.splitlines()
    if not lines:
        raise ValidationError("empty lattice cache")
    head = lines[0].split()
    if len(head) < 6 or head[0] != "group" or head[-4] != "order" or head[-2] != "subgroups":
        raise ValidationError("cache line 1: malformed header")
    order, k = int(head[-3]), int(head[-1])
    if order != G.order:
        raise ValidationError(f"cache is for a group of order {order}, not {G.order}")
    if len(lines) != 1 + k + 1 + k + 1 + k:
        raise ValidationError("lattice cache has the wrong number of lines")
    subs = []
    for i in range(k):
        members = 0
        for x in _ints(lines[1 + i], 2 + i):
            if not 0 <= x < order:
                raise ValidationError(f"cache line {2 + i}: element {x} out of range")
            members |= 1 << x
        subs.append(Subgroup.from_bits(G, members))
    if lines[1 + k] != "zeta" or lines[2 + 2 * k] != "mobius":
        raise ValidationError("lattice cache is missing its zeta/mobius sections")
    zeta = [_ints(lines[2 + k + i], 3 + k + i) for i in range(k)]
    mobius = [_ints(lines[3 + 2 * k + i], 4 + 2 * k + i) for i in range(k)]
    for row in zeta + mobius:
        if len(row) != k:
            raise ValidationError("lattice cache matrix row has the wrong length")
    for i in range(k):
        for j in range(k):
            if zeta[i][j] != int(subs[i] <= subs[j]):
                raise ValidationError("lattice cache zeta does not match its subgroups")
    return SubgroupLattice(G, subs, zeta, mobius)


def read_lattice(G, path):
    return loads_lattice(G, Path(path).read_text(encoding="utf-8"))


def load_or_build(spec, cache_dir=None, name=None):
    """(GroupTable, SubgroupLattice) for a spec, going through the cache when one is configured."""
    if isinstance(spec, str):
        spec = parse_spec(spec)
    G = build_from_spec(spec, name=name)
    if cache_dir is None:
        return G, build_lattice(G)
    path = cache_path(cache_dir, spec)
    if path.exists():
        try:
            return G, read_lattice(G, path)
        except ValidationError as exc:
            log.warning("ignoring unreadable cache %s: %s", path, exc)
    L = build_lattice(G)
    write_lattice(L, path)
    return G, L


def list_cache(cache_dir):
    d = Path(cache_dir)
    return sorted(d.glob("*" + SUFFIX)) if d.is_dir() else []


def clear_cache(cache_dir):
    removed = 0
    for p in list_cache(cache_dir):
        p.unlink()
        removed += 1
    return removed
