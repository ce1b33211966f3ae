"""Command-line front end: ``burnside <command> ...``."""

from __future__ import annotations

import argparse
from collections import Counter
import logging
import sys

from . import cache as lattice_cache
from .bgroup import are_isomorphic, beta, is_b_group
from .catalog import default_catalog, load_catalog
from .errors import ValidationError
from .group import build_from_spec, parse_spec, spec_order
from .lattice import maximal_subgroups, normal_subgroups
from .mgn import METHODS, mgn_report, subgroup_label
from .verify import TSV_COLUMNS, RunConfig, fmt_rational, format_results, report_cells, run_verify

SPEC_HELP = """\
group specs:
  cyclic:N          cyclic group of order N
  dihedral:N        dihedral group of order N (N even)
  sym:N, alt:N      symmetric / alternating group on N points
  quaternion:N      generalized quaternion group of order N (power of 2, >= 8)
  elab:P:K          elementary abelian group of order P^K
  product:A,B,...   direct product; bracket nested products: product:[product:A,B],C
  perm:(1 2 3);(1 2)
                    group generated by permutations (';' separates generators)

subgroup selectors (--N):
  order=K[,index=J] the J-th (from 0) subgroup of order K, in lattice order
                    (sorted by order, then by element bitset)
  all               every proper normal subgroup
"""


def _methods(text):
    if text == "all":
        return METHODS
    chosen = tuple(m.strip() for m in text.split(",") if m.strip())
    bad = [m for m in chosen if m not in METHODS]
    if bad or not chosen:
        raise argparse.ArgumentTypeError(f"methods must be 'all' or a comma list of {', '.join(METHODS)}")
    return chosen


def _load(spec_text, args):
    spec = parse_spec(spec_text)
    return lattice_cache.load_or_build(spec, args.cache_dir)


def _select(L, selector):
    if selector == "all":
        return [N for N in normal_subgroups(L) if N.members != L.top.members]
    fields = {}
    for part in selector.split(","):
        key, sep, value = part.partition("=")
        if not sep or key.strip() not in ("order", "index"):
            raise ValidationError(f"bad subgroup selector {selector!r}; expected order=K[,index=J] or all")
        try:
            fields[key.strip()] = int(value)
        except ValueError:
            raise ValidationError(f"bad integer in selector {selector!r}") from None
    if "order" not in fields:
        raise ValidationError("selector needs order=K")
    same = [s for s in L.subgroups if s.order == fields["order"]]
    j = fields.get("index", 0)
    if not 0 <= j < len(same):
        raise ValidationError(f"no subgroup with order={fields['order']},index={j} ({len(same)} of that order)")
    return [same[j]]


def _identify(G):
    if G.order == 1:
        return "trivial"
    for e in default_catalog():
        if spec_order(e.spec) == G.order and are_isomorphic(G, build_from_spec(e.spec)):
            return e.name
    return None


def cmd_lattice(args, out):
    G, L = _load(args.spec, args)
    n = len(L)
    out.write(f"{n} subgroup{'s' if n != 1 else ''}\n")
    normal = Counter(s.order for s in normal_subgroups(L))
    maximal = Counter(s.order for s in maximal_subgroups(L))
    total = Counter(s.order for s in L.subgroups)
    out.write(f"group {G.name}, order {G.order}\n")
    out.write("order\tcount\tnormal\tmaximal\n")
    for k in sorted(total):
        out.write(f"{k}\t{total[k]}\t{normal[k]}\t{maximal[k]}\n")
    if args.list:
        for i, s in enumerate(L.subgroups):
            flags = "".join(f for f, on in (("N", L.normal_flags[i]), ("M", L.maximal_flags[i]),
                                             ("C", L.cyclic_flags[i])) if on)
            out.write(f"#{i}\t{subgroup_label(L, s)}\t{flags or '-'}\t{s.describe()}\n")
    return 0


def _write_report(rep, L, args, out):
    cells = []
    for m in METHODS:
        if m not in args.methods:
            continue
        v = getattr(rep, "m_" + m)
        if m == "theorem" and rep.fallback:
            cells.append(f"theorem=fallback={rep.fallback}")
        elif v is None:
            cells.append(f"{m}={rep.notes.get(m, '-')}")
        else:
            cells.append(f"{m}={fmt_rational(v)}")
    first = next((v for v in (rep.m_direct, rep.m_theorem, rep.m_recursive) if v is not None), None)
    m_text = fmt_rational(first) if first is not None else "?"
    out.write(f"N {rep.N_label}: m = {m_text}  {' '.join(cells)}  agreement={str(rep.agreement).lower()}\n")
    if args.breakdown and rep.breakdown:
        label = {}

        def lab(X):
            if X.members not in label:
                label[X.members] = subgroup_label(L, X)
            return label[X.members]

        out.write("  maximal subgroups containing N: "
                  + ", ".join(f"H{i + 1}={lab(H)}" for i, H in enumerate(rep.maximal)) + "\n")
        out.write("  sigma\tH_sigma\tC\tphi\tchi_tilde\tsigned\n")
        for st in rep.breakdown:
            for t in st.terms:
                out.write(f"  {{{','.join(map(str, st.sigma))}}}\t{lab(st.H_sigma)}\t"
                          f"{lab(t.C)}\t{t.phi}\t{t.chi_tilde}\t{t.signed_contribution}\n")


def cmd_mgn(args, out):
    G, L = _load(args.spec, args)
    targets = _select(L, args.N)
    bad = [N for N in targets if not L.normal_flags[L.index(N)]]
    if bad:
        N = bad[0]
        raise ValidationError(f"subgroup {subgroup_label(L, N)} {N.describe()} is not normal in {G.name}")
    if args.format == "tsv":
        out.write("\t".join(TSV_COLUMNS) + "\n")
    else:
        out.write(f"group {G.name}, order {G.order}\n")
    status = 0
    for N in targets:
        rep = mgn_report(L, N, args.methods, breakdown=args.breakdown)
        if args.format == "tsv":
            same = [s for s in L.subgroups if s.order == N.order]
            cells = report_cells(rep, args.methods)
            out.write("\t".join([G.name, str(G.order), str(N.order), str(same.index(N)), *cells,
                                 str(rep.agreement).lower()]) + "\n")
        else:
            _write_report(rep, L, args, out)
        if not rep.agreement:
            status = 1
    return status


def cmd_bgroup(args, out):
    G, L = _load(args.spec, args)
    verdict = is_b_group(L, full_check=True)
    b = beta(L)
    if b.chosen_N.order == 1:
        desc = "G"
    elif b.chosen_N.members == L.top.members:
        desc = "trivial"
    else:
        name = _identify(b.beta)
        desc = f"order {b.beta.order}" + (f" ({name})" if name else "")
    out.write(f"B-group: {'yes' if verdict else 'no'}; beta = {desc}\n")
    out.write(f"chosen N: {subgroup_label(L, b.chosen_N)}\n")
    return 0


def cmd_beta(args, out):
    G, L = _load(args.spec, args)
    b = beta(L)
    out.write(f"group {G.name}, order {G.order}\n")
    out.write("normal N with m != 0:\n")
    for N, m in b.all_nonzero_N:
        mark = " (maximal)" if N in b.maximal_N else ""
        out.write(f"  {subgroup_label(L, N)}: m = {fmt_rational(m)}{mark}\n")
    out.write(f"chosen N: {subgroup_label(L, b.chosen_N)}\n")
    name = _identify(b.beta)
    out.write(f"beta(G): order {b.beta.order}" + (f", isomorphic to {name}" if name else "") + "\n")
    return 0


def cmd_verify(args, out):
    catalog = load_catalog(args.catalog) if args.catalog else default_catalog()
    config = RunConfig(args.max_order, args.methods, args.cache_dir, args.jobs, args.format)
    results = run_verify(catalog, config)
    out.write(format_results(results, config.output_format))
    failures = [f for r in results for f in r.failures]
    rows = sum(len(r.rows) for r in results)
    for f in failures:
        print(f"FAIL {f}", file=sys.stderr)
    print(f"verified {sum(not r.skipped for r in results)} groups, {rows} (G, N) pairs, "
          f"{len(failures)} failure(s)", file=sys.stderr)
    return 0 if not failures else 1


def cmd_cache(args, out):
    if args.cache_dir is None:
        raise ValidationError(f"no cache directory: pass --cache-dir or set {lattice_cache.ENV_VAR}")
    if args.action == "build":
        for text in args.specs:
            spec = parse_spec(text)
            G, L = lattice_cache.load_or_build(spec, args.cache_dir)
            out.write(f"{lattice_cache.cache_path(args.cache_dir, spec)}\t{len(L)} subgroups\n")
    elif args.action == "list":
        for p in lattice_cache.list_cache(args.cache_dir):
            with open(p, encoding="utf-8") as fh:
                out.write(f"{p.name}\t{fh.readline().strip()}\n")
    elif args.action == "clear":
        out.write(f"removed {lattice_cache.clear_cache(args.cache_dir)} file(s)\n")
    return 0


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--cache-dir", default=lattice_cache.default_cache_dir(),
                        help=f"lattice cache directory (default: ${lattice_cache.ENV_VAR})")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(
        prog="burnside",
        description="Exact computation of m_{G,N}, B-groups and beta(G) for small finite groups.",
        epilog=SPEC_HELP,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("lattice", parents=[common], help="subgroup lattice summary")
    sp.add_argument("spec")
    sp.add_argument("--list", action="store_true", help="list every subgroup")
    sp.set_defaults(func=cmd_lattice)

    sp = sub.add_parser("mgn", parents=[common], help="compute m_{G,N}",
                        epilog=SPEC_HELP, formatter_class=argparse.RawDescriptionHelpFormatter)
    sp.add_argument("spec")
    sp.add_argument("--N", required=True, help="order=K[,index=J] or all")
    sp.add_argument("--methods", type=_methods, default=METHODS, help="direct|theorem|recursive|all")
    sp.add_argument("--breakdown", action="store_true", help="print per-(sigma, C) terms")
    sp.add_argument("--format", choices=("human", "tsv"), default="human")
    sp.set_defaults(func=cmd_mgn)

    sp = sub.add_parser("bgroup", parents=[common], help="B-group verdict")
    sp.add_argument("spec")
    sp.set_defaults(func=cmd_bgroup)

    sp = sub.add_parser("beta", parents=[common], help="compute beta(G)")
    sp.add_argument("spec")
    sp.set_defaults(func=cmd_beta)

    sp = sub.add_parser("verify", parents=[common], help="cross-verify a catalog")
    sp.add_argument("--catalog", help="catalog file (default: built-in catalog)")
    sp.add_argument("--max-order", type=int, default=48)
    sp.add_argument("--methods", type=_methods, default=METHODS)
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("--format", choices=("human", "tsv"), default="tsv")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("cache", parents=[common], help="manage the lattice cache")
    sp.add_argument("action", choices=("build", "list", "clear"))
    sp.add_argument("specs", nargs="*")
    sp.set_defaults(func=cmd_cache)
    return p


def main(argv=None, out=None):
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args, out)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
