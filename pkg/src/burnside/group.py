"""Finite groups as explicit multiplication tables.

Every group is a :class:`GroupTable` whose elements are the integers
``0 .. order-1``; element 0 is always the identity.  Tables are built by
breadth-first closure of a generator list, so element numbering is fully
determined by the generators (and hence by the :class:`GroupSpec`).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property, reduce
import re

from .errors import SizeLimitError, SpecParseError, ValidationError

DEFAULT_ORDER_CAP = 5000
ASSOCIATIVITY_CHECK_LIMIT = 512


@dataclass(frozen=True, eq=False)
class GroupTable:
    order: int
    mul: tuple
    identity: int
    inv: tuple
    name: str = "G"
    check: bool = field(default=True, repr=False)

    def __post_init__(self):
        if self.check:
            _check_table(self)

    @classmethod
    def from_table(cls, mul, name="G", check=True):
        """Wrap a raw Cayley table; identity and inverses are located from it."""
        mul = tuple(tuple(row) for row in mul)
        n = len(mul)
        if n == 0:
            raise ValidationError("a group needs at least one element")
        for row in mul:
            if len(row) != n:
                raise ValidationError("multiplication table is not square")
        identity = next((e for e in range(n) if all(mul[e][x] == x for x in range(n))), None)
        if identity is None:
            raise ValidationError("multiplication table has no left identity")
        inv = []
        for x in range(n):
            y = next((y for y in range(n) if mul[x][y] == identity), None)
            if y is None:
                raise ValidationError(f"element {x} has no inverse")
            inv.append(y)
        return cls(n, mul, identity, tuple(inv), name, check)

    def __len__(self):
        return self.order

    def __repr__(self):
        return f"GroupTable({self.name!r}, order={self.order})"

    def same_table(self, other):
        return self.order == other.order and self.mul == other.mul and self.identity == other.identity

    def power(self, x, k):
        y = self.identity
        for _ in range(k):
            y = self.mul[y][x]
        return y

    def conjugate(self, x, g):
        """g^-1 x g"""
        return self.mul[self.mul[self.inv[g]][x]][g]

    def commutator(self, x, y):
        """x^-1 y^-1 x y"""
        m, i = self.mul, self.inv
        return m[m[m[i[x]][i[y]]][x]][y]

    @cached_property
    def element_orders(self):
        return tuple(element_order(self, x) for x in range(self.order))

    @cached_property
    def generators(self):
        """A small generating set, chosen greedily (largest element order first)."""
        candidates = sorted(range(self.order), key=lambda x: (-self.element_orders[x], x))
        gens, span = [], {self.identity}
        for x in candidates:
            if len(span) == self.order:
                break
            if x not in span:
                gens.append(x)
                span = _span(self, gens)
        return tuple(gens)

    @cached_property
    def is_abelian(self):
        m = self.mul
        gens = self.generators
        return all(m[a][b] == m[b][a] for a in gens for b in gens)


def _span(G, gens):
    seen = {G.identity}
    frontier = [G.identity]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = G.mul[x][g]
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return seen


def _check_table(G):
    n, m, e = G.order, G.mul, G.identity
    if n < 1 or len(m) != n:
        raise ValidationError("table size does not match order")
    full = set(range(n))
    for row in m:
        if len(row) != n or set(row) != full:
            raise ValidationError("multiplication table is not a Latin square")
    for j in range(n):
        if {m[i][j] for i in range(n)} != full:
            raise ValidationError("multiplication table is not a Latin square")
    for x in range(n):
        if m[e][x] != x or m[x][e] != x:
            raise ValidationError(f"element {e} is not a two-sided identity")
        if m[x][G.inv[x]] != e:
            raise ValidationError(f"inv[{x}] is not an inverse")
    if n <= ASSOCIATIVITY_CHECK_LIMIT:
        # Light's test: associativity against a generating set suffices.
        for c in G.generators:
            for a in range(n):
                ma = m[a]
                for b in range(n):
                    if m[ma[b]][c] != ma[m[b][c]]:
                        raise ValidationError(f"table is not associative at ({a}, {b}, {c})")


def closure_table(gens, op, identity, name="G", cap=DEFAULT_ORDER_CAP, check=True):
    """Breadth-first closure of ``gens`` under ``op``, returned as a GroupTable.

    Elements are numbered in discovery order starting from ``identity``;
    ``op(x, g)`` must implement the group law on hashable element values.
    """
    gens = list(gens)
    elements = [identity]
    index = {identity: 0}
    parent = [None]
    right = []
    i = 0
    while i < len(elements):
        x = elements[i]
        row = []
        for j, g in enumerate(gens):
            y = op(x, g)
            k = index.get(y)
            if k is None:
                if len(elements) >= cap:
                    raise SizeLimitError(f"group generated by {len(gens)} generators exceeds order cap {cap}")
                k = len(elements)
                index[y] = k
                elements.append(y)
                parent.append((i, j))
            row.append(k)
        right.append(row)
        i += 1

    n = len(elements)
    mul = []
    for a in range(n):
        row = [0] * n
        row[0] = a
        for b in range(1, n):
            p, j = parent[b]
            row[b] = right[row[p]][j]
        mul.append(tuple(row))
    inv = [0] * n
    for a in range(n):
        inv[a] = mul[a].index(0)
    return GroupTable(n, tuple(mul), 0, tuple(inv), name, check)


# -- permutations -----------------------------------------------------------

def compose(p, q):
    """Apply p, then q (points are 0-based)."""
    return tuple(q[i] for i in p)


def cycles_to_perm(cycles, degree):
    """Cycles are sequences of 1-based points."""
    image = list(range(degree))
    seen = set()
    for cyc in cycles:
        for pt in cyc:
            if pt < 1 or pt > degree:
                raise ValidationError(f"point {pt} outside 1..{degree}")
            if pt in seen:
                raise ValidationError(f"point {pt} appears twice in one permutation")
            seen.add(pt)
        for a, b in zip(cyc, cyc[1:] + cyc[:1]):
            image[a - 1] = b - 1
    return tuple(image)


def _check_perm(p, degree):
    if len(p) != degree or sorted(p) != list(range(degree)):
        raise ValidationError(f"{p!r} is not a bijection on {degree} points")


def build_from_generators(generators, degree=None, name="G", cap=DEFAULT_ORDER_CAP):
    """Closure of permutation generators, given as 0-based image tuples.

    >>> build_from_generators([(1, 2, 0)]).order
    3
    """
    generators = [tuple(g) for g in generators]
    if degree is None:
        degree = max((len(g) for g in generators), default=1)
    for g in generators:
        _check_perm(g, degree)
    return closure_table(generators, compose, tuple(range(degree)), name, cap)


# -- specs ------------------------------------------------------------------

KINDS = (
    "cyclic", "dihedral", "symmetric", "alternating", "quaternion",
    "elementary_abelian", "direct_product", "permutation_generators",
)

_ALIASES = {
    "cyclic": "cyclic", "c": "cyclic",
    "dihedral": "dihedral", "d": "dihedral",
    "sym": "symmetric", "symmetric": "symmetric", "s": "symmetric",
    "alt": "alternating", "alternating": "alternating", "a": "alternating",
    "quaternion": "quaternion", "q": "quaternion",
    "elab": "elementary_abelian", "elementary_abelian": "elementary_abelian",
    "product": "direct_product", "direct_product": "direct_product",
    "perm": "permutation_generators", "permutation_generators": "permutation_generators",
}


@dataclass(frozen=True)
class GroupSpec:
    """A named group family plus its parameters.

    ``params`` holds ints for the numeric families, child GroupSpecs for
    ``direct_product`` and ``(degree, generators)`` for permutation groups
    (generators as tuples of 1-based cycles).
    """

    kind: str
    params: tuple = ()

    def __post_init__(self):
        validate_spec(self)

    def __str__(self):
        k, p = self.kind, self.params
        if k == "cyclic":
            return f"cyclic:{p[0]}"
        if k == "dihedral":
            return f"dihedral:{p[0]}"
        if k == "symmetric":
            return f"sym:{p[0]}"
        if k == "alternating":
            return f"alt:{p[0]}"
        if k == "quaternion":
            return f"quaternion:{p[0]}"
        if k == "elementary_abelian":
            return f"elab:{p[0]}:{p[1]}"
        if k == "direct_product":
            parts = [f"[{c}]" if c.kind == "direct_product" else str(c) for c in p]
            return "product:" + ",".join(parts)
        gens = p[1]
        return "perm:" + ";".join(
            "".join("(" + " ".join(map(str, c)) + ")" for c in g) or "()" for g in gens
        )


def _is_prime(n):
    if n < 2:
        return False
    f = 2
    while f * f <= n:
        if n % f == 0:
            return False
        f += 1
    return True


def validate_spec(spec):
    k, p = spec.kind, spec.params
    if k not in KINDS:
        raise ValidationError(f"unknown group kind {k!r}")

    def need_int(count):
        if len(p) != count or not all(isinstance(v, int) for v in p):
            raise ValidationError(f"{k} takes {count} integer parameter(s), got {p!r}")

    if k == "cyclic":
        need_int(1)
        if p[0] < 1:
            raise ValidationError("cyclic order must be >= 1")
    elif k == "dihedral":
        need_int(1)
        if p[0] < 2 or p[0] % 2:
            raise ValidationError("dihedral order must be even and >= 2")
    elif k in ("symmetric", "alternating"):
        need_int(1)
        if p[0] < 1:
            raise ValidationError(f"{k} degree must be >= 1")
    elif k == "quaternion":
        need_int(1)
        n = p[0]
        if n < 8 or n & (n - 1):
            raise ValidationError("quaternion order must be a power of 2, at least 8")
    elif k == "elementary_abelian":
        need_int(2)
        if not _is_prime(p[0]) or p[1] < 1:
            raise ValidationError("elab needs a prime and an exponent >= 1")
    elif k == "direct_product":
        if len(p) < 2 or not all(isinstance(c, GroupSpec) for c in p):
            raise ValidationError("direct_product needs at least two component specs")
    else:
        if len(p) != 2 or not isinstance(p[0], int) or p[0] < 1:
            raise ValidationError("permutation_generators needs (degree, generators)")
        for gen in p[1]:
            cycles_to_perm([list(c) for c in gen], p[0])


def _cyclic_op(n):
    return lambda x, g: (x + g) % n


def _dihedral_op(n):
    # (r^a s^e)(r^b s^f) = r^(a + (-1)^e b) s^(e+f)
    def op(x, y):
        a, e = x
        b, f = y
        return ((a - b if e else a + b) % n, e ^ f)
    return op


def _dicyclic_op(m):
    # <a, x | a^2m, x^2 = a^m, x^-1 a x = a^-1>, element a^i x^e
    n = 2 * m

    def op(u, v):
        i, e = u
        j, f = v
        if not e:
            return ((i + j) % n, f)
        if not f:
            return ((i - j) % n, 1)
        return ((i - j + m) % n, 0)
    return op


def build_from_spec(spec, cap=DEFAULT_ORDER_CAP, name=None):
    """Deterministic GroupTable for a GroupSpec (or spec string)."""
    if isinstance(spec, str):
        spec = parse_spec(spec)
    name = name or str(spec)
    k, p = spec.kind, spec.params
    if k == "cyclic":
        n = p[0]
        gens = [1 % n] if n > 1 else []
        return closure_table(gens, _cyclic_op(n), 0, name, cap)
    if k == "dihedral":
        n = p[0] // 2
        gens = [(1 % n, 0), (0, 1)]
        return closure_table(gens, _dihedral_op(n), (0, 0), name, cap)
    if k == "quaternion":
        m = p[0] // 4
        return closure_table([(1, 0), (0, 1)], _dicyclic_op(m), (0, 0), name, cap)
    if k == "elementary_abelian":
        q, e = p
        gens = [tuple(int(i == j) for j in range(e)) for i in range(e)]
        op = lambda x, y: tuple((a + b) % q for a, b in zip(x, y))  # noqa: E731
        return closure_table(gens, op, (0,) * e, name, cap)
    if k in ("symmetric", "alternating"):
        d = p[0]
        if k == "symmetric":
            cycles = [[[1, 2]], [list(range(1, d + 1))]] if d >= 2 else []
        else:
            cycles = [[[1, 2, j]] for j in range(3, d + 1)]
        gens = [cycles_to_perm(c, d) for c in cycles]
        return build_from_generators(gens, d, name, cap)
    if k == "permutation_generators":
        d, gen_cycles = p
        gens = [cycles_to_perm([list(c) for c in g], d) for g in gen_cycles]
        return build_from_generators(gens, d, name, cap)
    factors = [build_from_spec(c, cap) for c in p]
    return direct_product(factors, name, cap)


def spec_order(spec):
    """Group order implied by a spec (permutation groups are built to find out)."""
    if isinstance(spec, str):
        spec = parse_spec(spec)
    k, p = spec.kind, spec.params
    if k in ("cyclic", "dihedral", "quaternion"):
        return p[0]
    if k == "elementary_abelian":
        return p[0] ** p[1]
    if k in ("symmetric", "alternating"):
        f = 1
        for i in range(2, p[0] + 1):
            f *= i
        return f if k == "symmetric" or p[0] < 2 else f // 2
    if k == "direct_product":
        return reduce(lambda a, c: a * spec_order(c), p, 1)
    return build_from_spec(spec).order


def direct_product(factors, name=None, cap=DEFAULT_ORDER_CAP):
    """Componentwise product; element index is the mixed-radix tuple, first factor most significant."""
    factors = list(factors)
    order = reduce(lambda a, G: a * G.order, factors, 1)
    if order > cap:
        raise SizeLimitError(f"direct product has order {order} > cap {cap}")
    name = name or " x ".join(G.name for G in factors)
    table = factors[0].mul
    size = factors[0].order
    for G in factors[1:]:
        m = G.order
        new = [[0] * (size * m) for _ in range(size * m)]
        for a in range(size):
            for b in range(size):
                base = table[a][b] * m
                for x in range(m):
                    row = new[a * m + x]
                    gx = G.mul[x]
                    for y in range(m):
                        row[b * m + y] = base + gx[y]
        table = new
        size *= m
    # identities sit at index 0 in every factor, so index 0 is the identity here too
    return GroupTable.from_table(table, name)


# -- spec grammar -----------------------------------------------------------

def _split_top(text, sep, offset, full=None):
    """Split on ``sep`` outside brackets; returns (piece, absolute offset) pairs."""
    full = text if full is None else full
    pieces, opened, start = [], [], 0
    for i, ch in enumerate(text):
        if ch in "[(":
            opened.append(i)
        elif ch in "])":
            if not opened:
                raise SpecParseError("unbalanced bracket", full, offset + i)
            opened.pop()
        elif ch == sep and not opened:
            pieces.append((text[start:i], offset + start))
            start = i + 1
    if opened:
        raise SpecParseError("unclosed bracket", full, offset + opened[-1 if len(opened) == 1 else 0])
    pieces.append((text[start:], offset + start))
    return pieces


_CYCLE = re.compile(r"\(([^()]*)\)")


def _parse_perm_gens(body, offset, full):
    gens = []
    degree = 1
    for piece, pos in _split_top(body, ";", offset, full):
        piece_s = piece.strip()
        cycles = []
        cursor = 0
        for m in _CYCLE.finditer(piece_s):
            if piece_s[cursor:m.start()].strip():
                raise SpecParseError("expected '(' starting a cycle", full, pos + cursor)
            cursor = m.end()
            pts = [t for t in re.split(r"[\s,]+", m.group(1).strip()) if t]
            try:
                cyc = [int(t) for t in pts]
            except ValueError:
                raise SpecParseError("cycle entries must be integers", full, pos + m.start()) from None
            if cyc:
                degree = max(degree, max(cyc))
                cycles.append(tuple(cyc))
        if piece_s[cursor:].strip():
            raise SpecParseError("trailing text after cycles", full, pos + cursor)
        gens.append(tuple(c for c in cycles if len(c) > 1))
    return degree, tuple(gens)


def parse_spec(text, _offset=0, _full=None):
    """Parse the CLI group grammar, e.g. ``sym:4``, ``elab:2:3``,
    ``product:cyclic:2,dihedral:8``, ``perm:(1 2 3);(1 2)``.

    Nested products are wrapped in square brackets:
    ``product:[product:cyclic:2,cyclic:2],cyclic:3``.
    """
    full = text if _full is None else _full
    raw = text
    text = raw.strip()
    _offset += len(raw) - len(raw.lstrip())
    if text.startswith("[") and text.endswith("]") and len(_split_top(text, ",", _offset, full)) == 1:
        return parse_spec(text[1:-1], _offset + 1, full)
    head, sep, body = text.partition(":")
    if not sep:
        raise SpecParseError("expected '<kind>:<parameters>'", full, _offset)
    kind = _ALIASES.get(head.strip().lower())
    if kind is None:
        raise SpecParseError(f"unknown group kind {head.strip()!r}", full, _offset)
    body_off = _offset + len(head) + 1
    try:
        if kind == "direct_product":
            parts = [parse_spec(piece, pos, full) for piece, pos in _split_top(body, ",", body_off, full)]
            return GroupSpec(kind, tuple(parts))
        if kind == "permutation_generators":
            return GroupSpec(kind, _parse_perm_gens(body, body_off, full))
        fields = body.split(":")
        values = []
        pos = body_off
        for f in fields:
            try:
                values.append(int(f))
            except ValueError:
                raise SpecParseError("expected an integer", full, pos) from None
            pos += len(f) + 1
        return GroupSpec(kind, tuple(values))
    except SpecParseError:
        raise
    except ValidationError as exc:
        raise SpecParseError(str(exc), full, _offset) from None


# -- elementary arithmetic --------------------------------------------------

def element_order(G, x):
    """Least k >= 1 with x^k = 1."""
    if not 0 <= x < G.order:
        raise ValidationError(f"element {x} out of range for order {G.order}")
    k, y = 1, x
    while y != G.identity:
        y = G.mul[y][x]
        k += 1
    return k


def euler_phi(n):
    if not isinstance(n, int) or n < 1:
        raise ValidationError("euler_phi needs a positive integer")
    result, m, p = n, n, 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


def is_prime(n):
    return _is_prime(n)


__all__ = [
    "GroupTable", "GroupSpec", "build_from_generators", "build_from_spec", "parse_spec",
    "element_order", "euler_phi", "spec_order", "direct_product", "closure_table", "cycles_to_perm",
    "compose", "is_prime",
]
