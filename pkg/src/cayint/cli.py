"""Command-line interface.

Exit codes: 0 = success (and "integral" for spectrum/check), 1 = a
non-integral verdict or a golden-record mismatch, 2 = usage or internal
error.  JSON output is schema-stable: sorted keys, no volatile fields
(timings stay in the human-readable text).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from collections import Counter

from .catalog import catalog, group_from_spec, classify_default_names, manifest
from .groups import (GroupError, center, conjugacy_classes, exponent,
                     is_abelian, normal_subgroups, order_spectrum,
                     quotient_group)
from .spectral import ConnectionSet, SpectralError, is_integral_graph
from .characters import character_table, bh1_spectrum, UnsupportedGroupError
from .search import is_cayley_integral, classify_catalog
from .repro import run_target, run_all, target_ids, quotient_filter
from .catalog import identify


def _emit(data) -> None:
    print(json.dumps(data, sort_keys=True, separators=(",", ": "), indent=1))


def _default_jobs() -> int:
    return int(os.environ.get("CAYINT_JOBS", "1"))


def cmd_group(args) -> int:
    G = group_from_spec(args.group)
    spec_hist = Counter(order_spectrum(G))
    classes = conjugacy_classes(G)
    if args.json:
        data = G.to_json()
        data.update({
            "abelian": is_abelian(G),
            "exponent": exponent(G),
            "order_spectrum": {str(k): v for k, v in sorted(spec_hist.items())},
            "center_size": center(G).size,
            "class_sizes": sorted(len(c) for c in classes),
        })
        _emit(data)
    else:
        print(f"{G.name}: order {G.order}, "
              f"{'abelian' if is_abelian(G) else 'non-abelian'}, exponent {exponent(G)}")
        print("element orders:",
              ", ".join(f"{k}^{v}" if v > 1 else str(k) for k, v in sorted(spec_hist.items())))
        print(f"center size {center(G).size}; class sizes "
              f"{sorted(len(c) for c in classes)}")
        if G.generators:
            print("generators:", ", ".join(f"{k}={v}" for k, v in G.generators.items()))
    return 0


def _build_set(G, args) -> ConnectionSet:
    if args.indices:
        ids = [int(t) for t in args.indices.split(",") if t.strip() != ""]
        return ConnectionSet.from_indices(G, ids)
    if not args.set:
        raise SpectralError("provide --set words or --indices")
    words = [w.strip() for w in args.set.split(",") if w.strip()]
    return ConnectionSet.from_words(G, words)


def cmd_spectrum(args) -> int:
    G = group_from_spec(args.group)
    S = _build_set(G, args)
    if args.method == "characters":
        T = character_table(G)
        entries = bh1_spectrum(G, S, T)
        integral = all(e.value.is_rational for e in entries)
        if args.json:
            _emit({
                "group": G.name,
                "set": S.describe(),
                "method": "characters",
                "verdict": "integral" if integral else "non-integral",
                "eigenvalues": [
                    {"coords": list(e.value.coeffs), "modulus": e.value.e,
                     "multiplicity": e.multiplicity} for e in entries],
            })
        else:
            print(f"Cay({G.name}, {{{', '.join(S.describe())}}}) via characters:")
            for e in entries:
                val = (str(e.value.rational_value) if e.value.is_rational
                       else f"cyclotomic{e.value.coeffs}")
                print(f"  {val} (multiplicity {e.multiplicity})")
            print("verdict:", "integral" if integral else "non-integral")
        return 0 if integral else 1
    rep = is_integral_graph(G, S)
    if args.json:
        _emit(rep.to_json())
    else:
        print(f"Cay({G.name}, {{{', '.join(S.describe())}}}):")
        print(f"  {rep.display}")
        print(f"  verdict: {rep.verdict}")
    return 0 if rep.is_integral else 1


def cmd_check(args) -> int:
    G = group_from_spec(args.group)
    v = is_cayley_integral(G, strategy=args.strategy, exhaustive=args.exhaustive,
                           jobs=args.jobs, subset_bound=args.max_subsets)
    if args.json:
        _emit(v.to_json())
    else:
        print(f"{G.name}: {'Cayley integral' if v.cayley_integral else 'NOT Cayley integral'} "
              f"({v.sets_checked} of {v.subset_count} sets checked, "
              f"{v.elapsed:.2f}s, methods {v.method_breakdown})")
        if v.witness is not None:
            S, rep = v.witness
            print(f"witness S = {{{', '.join(S.describe())}}}")
            print(f"  {rep.display}")
    return 0 if v.cayley_integral else 1


def cmd_classify(args) -> int:
    if args.catalog == "all":
        names = classify_default_names()
    else:
        names = [n.strip() for n in args.catalog.split(",") if n.strip()]
    verdicts = classify_catalog(names, jobs=args.jobs)
    if args.json:
        _emit([v.to_json() for v in verdicts])
    else:
        for v in verdicts:
            mark = "integral    " if v.cayley_integral else "NOT integral"
            extra = ""
            if v.witness is not None:
                extra = f"  witness {{{', '.join(v.witness[0].describe())}}}"
            print(f"{v.group:20s} {mark} ({v.sets_checked}/{v.subset_count} sets){extra}")
        yes = [v.group for v in verdicts if v.cayley_integral]
        no = [v.group for v in verdicts if not v.cayley_integral]
        print(f"\nCayley integral: {', '.join(yes) or 'none'}")
        print(f"not Cayley integral: {', '.join(no) or 'none'}")
    return 0


def cmd_reproduce(args) -> int:
    if args.target == "all":
        results = run_all(jobs=args.jobs)
    else:
        results = [run_target(args.target, jobs=args.jobs)]
    if args.json:
        _emit([r.to_json() for r in results])
    else:
        for r in results:
            print(f"[{'PASS' if r.ok else 'FAIL'}] {r.target}  ({r.detail})")
            if not r.ok:
                print("  expected:", json.dumps(r.expected, sort_keys=True))
                print("  actual:  ", json.dumps(r.actual, sort_keys=True))
    return 0 if all(r.ok for r in results) else 1


def _parse_filter(text: str) -> dict:
    out = {"nonabelian": False, "exponent": None}
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if part == "nonabelian":
            out["nonabelian"] = True
        elif part.startswith("exponent="):
            out["exponent"] = int(part.split("=", 1)[1])
        else:
            raise GroupError(f"unknown filter term {part!r}")
    return out


def cmd_quotients(args) -> int:
    G = group_from_spec(args.group)
    if args.filter:
        flt = _parse_filter(args.filter)
        types = quotient_filter(G, nonabelian=flt["nonabelian"],
                                exp=flt["exponent"], bound=args.max_order)
        if args.json:
            _emit({"group": G.name, "filter": flt, "types": types})
        else:
            print(f"{G.name}: quotient types after filter {flt}: {types or 'none'}")
        return 0
    rows = []
    for N in normal_subgroups(G, bound=args.max_order):
        Q = quotient_group(G, N)
        name = identify(Q) if Q.order <= 256 else None
        rows.append({"normal_subgroup_order": N.size, "quotient_order": Q.order,
                     "quotient": name or f"unidentified(order={Q.order})"})
    if args.json:
        _emit({"group": G.name, "quotients": rows})
    else:
        print(f"{G.name}: {len(rows)} normal subgroups")
        for r in rows:
            print(f"  |N|={r['normal_subgroup_order']:4d} -> {r['quotient']}")
    return 0


def cmd_catalog(args) -> int:
    rows = manifest()
    if args.json:
        _emit(rows)
    else:
        for r in rows:
            gens = ", ".join(r["generators"]) or "-"
            print(f"{r['name']:20s} order {r['order']:4d}  {r['construction']:20s} "
                  f"generators: {gens}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="cayint",
        description="Exact integrality of undirected Cayley graphs over finite groups.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("group", help="build a group and describe it")
    p.add_argument("group", help="catalog name or inline presentation '<x,y | ...>'")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_group)

    p = sub.add_parser("spectrum", help="spectrum report for one connection set")
    p.add_argument("group")
    p.add_argument("--set", help="comma-separated words in generator labels")
    p.add_argument("--indices", help="comma-separated element indices (debugging)")
    p.add_argument("--method", choices=["matrix", "characters"], default="matrix")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("check", help="decide the Cayley-integral property")
    p.add_argument("group")
    p.add_argument("--strategy", choices=["matrix", "characters-when-valid", "auto"],
                   default="auto")
    p.add_argument("--exhaustive", action="store_true",
                   help="scan the whole subset space even after a witness")
    p.add_argument("--jobs", type=int, default=_default_jobs())
    p.add_argument("--max-subsets", type=int, default=1 << 24)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("classify", help="batch verdicts over catalog groups")
    p.add_argument("--catalog", default="all", help="'all' or comma-separated names")
    p.add_argument("--jobs", type=int, default=_default_jobs())
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("reproduce", help="rerun a named verification target")
    p.add_argument("target", help=f"one of: all, {', '.join(target_ids())}")
    p.add_argument("--jobs", type=int, default=_default_jobs())
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_reproduce)

    p = sub.add_parser("quotients", help="normal subgroups and quotient identification")
    p.add_argument("group")
    p.add_argument("--filter", help="e.g. 'nonabelian,exponent=12'")
    p.add_argument("--max-order", type=int, default=1024)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_quotients)

    p = sub.add_parser("catalog", help="list the built-in group catalog")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_catalog)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except (GroupError, SpectralError, UnsupportedGroupError, KeyError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
