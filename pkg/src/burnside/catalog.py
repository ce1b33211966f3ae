"""Group catalogs: named GroupSpecs with optional pinned properties."""

from __future__ import annotations

from dataclasses import dataclass, field
from importlib.resources import files
import shlex

from .errors import SpecParseError, ValidationError
from .group import GroupSpec, parse_spec

PROPERTY_KEYS = {"b_group", "beta_order"}


@dataclass(frozen=True)
class CatalogEntry:
    spec: GroupSpec
    name: str
    expected_properties: dict = field(default_factory=dict, compare=False)


def _parse_property(key, value, lineno):
    if key not in PROPERTY_KEYS:
        raise ValidationError(f"line {lineno}: unknown property {key!r}")
    if key == "b_group":
        if value not in ("yes", "no"):
            raise ValidationError(f"line {lineno}: b_group must be yes or no")
        return value == "yes"
    try:
        return int(value)
    except ValueError:
        raise ValidationError(f"line {lineno}: {key} must be an integer") from None


def parse_catalog(text):
    entries, names = [], set()
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        fields = shlex.split(line, comments=True)
        if len(fields) < 2:
            raise ValidationError(f"line {lineno}: expected '<name> <spec> [key=value ...]'")
        name, spec_text, *props = fields
        if name in names:
            raise ValidationError(f"line {lineno}: duplicate catalog name {name!r}")
        names.add(name)
        try:
            spec = parse_spec(spec_text)
        except SpecParseError as exc:
            raise ValidationError(f"line {lineno}: {exc}") from None
        expected = {}
        for p in props:
            key, sep, value = p.partition("=")
            if not sep:
                raise ValidationError(f"line {lineno}: property {p!r} is not key=value")
            expected[key] = _parse_property(key, value, lineno)
        entries.append(CatalogEntry(spec, name, expected))
    return entries


def load_catalog(path):
    with open(path, encoding="utf-8") as fh:
        return parse_catalog(fh.read())


def default_catalog():
    return parse_catalog(files("burnside").joinpath("data/default_catalog.txt").read_text("utf-8"))


def format_catalog(entries):
    lines = []
    for e in entries:
        props = [f"{k}={'yes' if v is True else 'no' if v is False else v}" for k, v in e.expected_properties.items()]
        lines.append(" ".join([shlex.quote(e.name), shlex.quote(str(e.spec)), *props]))
    return "\n".join(lines) + "\n"
