"""Command-line front end.

Exit codes: 0 computed / property holds, 1 property fails, 2 usage error,
3 input format error, 4 resource cap hit.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import __version__
from .bounds import (
    antichain_bounds,
    dilworth_audit,
    embed_sum_in_cube,
    haussler_long_bound,
    height_width,
    natarajan_dimension,
    poly_construction,
    sat_min,
    chain_construction,
    verify_cube_sum,
)
from .dichotomy import classify_dichotomy
from .errors import (
    CapTooSmall,
    CycleError,
    DuplicatePoint,
    FormatError,
    GridsatError,
    LemmaViolation,
    NotPFree,
    ResourceCap,
)
from .family import (
    Family,
    greedy_saturate,
    is_induced_p_free,
    is_saturated,
    load_family,
    separating_coordinates,
)
from .grid import GridShape
from .poset import NAMED_POSETS, antichain, chain, is_uctp, load_poset, named_poset
from .report import Report, point_text
from .search import enumerate_saturated, naive_saturated_families, naive_sat_min
from .sweep import DEFAULT_NS, DEFAULT_POSETS, DEFAULT_TS, default_workers, run_sweep

OK, FAILS, USAGE, FORMAT, CAP = 0, 1, 2, 3, 4
ORACLE_CAP = 16


class UsageError(Exception):
    pass


def _poset(spec: str):
    """A poset file path, or one of the built-in names."""
    if os.path.exists(spec):
        return load_poset(spec), os.path.basename(spec)
    if spec in NAMED_POSETS:
        return named_poset(spec), spec
    raise UsageError(f"no poset file or built-in named {spec!r} (built-ins: {', '.join(NAMED_POSETS)})")


def _family(path: str) -> Family:
    if not os.path.exists(path):
        raise UsageError(f"no such family file: {path}")
    return load_family(path)


def _shape(args) -> GridShape:
    if args.t is None or args.n is None:
        raise UsageError("-t and -n are required")
    try:
        return GridShape(args.t, args.n)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _family_json(fam: Family) -> list:
    return [list(f) for f in fam.points]


def _write_family(fam: Family, path: str | None, comment: str) -> None:
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(fam.to_text(comment))


# ---------------------------------------------------------------------------
# subcommands


def cmd_check_free(args, rep: Report) -> int:
    p, pid = _poset(args.poset)
    fam = _family(args.family)
    v = is_induced_p_free(fam, p)
    rep.add(
        {"kind": "check-free", "poset": pid, "holds": v.holds, "certificate": v.certificate.to_json()},
        f"induced {pid}-free: {'yes' if v.holds else 'no'}",
        *([v.certificate.to_text()] if not v.holds else []),
    )
    return OK if v.holds else FAILS


def cmd_check_saturated(args, rep: Report) -> int:
    p, pid = _poset(args.poset)
    fam = _family(args.family)
    try:
        v = is_saturated(fam, p)
    except NotPFree as exc:
        rep.add(
            {"kind": "check-saturated", "poset": pid, "holds": False, "free": False,
             "certificate": exc.certificate.to_json()},
            f"induced {pid}-saturated: no (family is not {pid}-free)",
            exc.certificate.to_text(),
        )
        return FAILS
    rep.add(
        {"kind": "check-saturated", "poset": pid, "holds": v.holds, "free": True,
         "certificate": v.certificate.to_json()},
        f"induced {pid}-saturated: {'yes' if v.holds else 'no'}",
        *([v.certificate.to_text()] if not v.holds else []),
    )
    return OK if v.holds else FAILS


def cmd_sat_min(args, rep: Report) -> int:
    p, pid = _poset(args.poset)
    shape = _shape(args)
    if args.oracle and shape.size > ORACLE_CAP:
        raise UsageError(f"--oracle needs t^n <= {ORACLE_CAP}, {shape} has {shape.size} points")
    res = sat_min(p, shape, budget=args.budget, poset_id=pid)
    rec = res.to_json()
    lines = [
        f"sat*({shape}, {pid}) = {res.value}" if res.exact
        else f"sat*({shape}, {pid}) in [{res.lower}, {res.upper}] (budget exhausted)",
        f"nodes explored: {res.nodes_explored}",
        "witness:",
        *("  " + point_text(f) for f in res.witness.points),
    ]
    code = OK if res.exact else CAP
    if args.oracle:
        value, _ = naive_sat_min(p, shape, ORACLE_CAP)
        rec["oracle"] = value
        rec["oracle_agrees"] = res.exact and value == res.value
        lines.append(f"oracle value: {value} ({'agrees' if rec['oracle_agrees'] else 'DISAGREES'})")
        if res.exact and not rec["oracle_agrees"]:
            code = FAILS
    rep.add(rec, *lines)
    _write_family(res.witness, args.out, f"sat-min witness for {pid}")
    return code


def cmd_classify(args, rep: Report) -> int:
    p, pid = _poset(args.poset)
    if args.t is None or args.t < 2:
        raise UsageError("-t must be at least 2")
    r = classify_dichotomy(
        p, args.t, args.n_max, args.size_cap, poset_id=pid, budget=args.budget,
        trust=args.trust_lemmas,
    )
    rec = r.to_json()
    rec["verified"] = r.verify(p)
    lines = [f"{pid} at t={args.t}: {r.verdict}"]
    for row in r.rows:
        if not row.embeds:
            lines.append(f"  n={row.n}: does not embed")
        else:
            val = row.sat if row.sat is not None else f"> {args.size_cap}"
            seps = ",".join(map(str, sorted(row.separating))) or "none"
            lines.append(f"  n={row.n}: least saturated size {val}; separating coords of witness: {seps}")
    if r.witness is not None:
        w = r.witness
        lines.append(f"bounded witness at n={w.family.shape.n}, coordinate {w.coordinate} not separating:")
        lines.extend("  " + point_text(f) for f in w.family.points)
        lines.append(f"  deflate steps: {len(w.deflate_steps)}; lift and drop re-verified")
    lines.append(f"verified: {rec['verified']}")
    rep.add(rec, *lines)
    return OK if rec["verified"] else FAILS


def cmd_uctp(args, rep: Report) -> int:
    p, pid = _poset(args.poset)
    r = is_uctp(p)
    rec = {"kind": "uctp", "poset": pid, "holds": r.holds,
           "violating_cover": list(r.violating_cover) if r.violating_cover else None}
    lines = [f"UCTP({pid}): {'yes' if r.holds else 'no'}"]
    if not r.holds:
        lo, hi = r.violating_cover
        lines.append(f"witness cover: {lo} covered by {hi} has no twin")
    rep.add(rec, *lines)
    return OK if r.holds else FAILS


def cmd_separating(args, rep: Report) -> int:
    fam = _family(args.family)
    seps = separating_coordinates(fam)
    non = [i for i in range(1, fam.shape.n + 1) if i not in seps]
    rep.add(
        {"kind": "separating", "separating": {str(i): c.to_json()["payload"] for i, c in seps.items()},
         "non_separating": non},
        *(c.to_text() for c in seps.values()),
        f"non-separating coordinates: {' '.join(map(str, non)) or 'none'}",
    )
    return OK


def cmd_construct(args, rep: Report) -> int:
    if args.which == "chain":
        shape = _shape(args)
        fam = chain_construction(args.k, shape)
        p = chain(args.k)
        free = is_induced_p_free(fam, p).holds
        sat = free and is_saturated(fam, p).holds
        rep.add(
            {"kind": "construct-chain", "k": args.k, "t": shape.t, "n": shape.n,
             "size": len(fam), "free": free, "saturated": sat, "family": _family_json(fam)},
            fam.to_text(f"C_{args.k} construction").rstrip("\n"),
            f"# size {len(fam)}, C_{args.k}-free: {free}, saturated: {sat}",
        )
        _write_family(fam, args.out, f"C_{args.k} construction")
        return OK if sat else FAILS
    if args.which == "antichain-audit":
        if args.family:
            fam = _family(args.family)
            shape = fam.shape
        else:
            shape = _shape(args)
            fam = greedy_saturate(Family(shape), antichain(args.k))
        lo, hi = antichain_bounds(args.k, shape)
        audit = dilworth_audit(fam, args.k)
        rec = {"kind": "antichain-audit", "t": shape.t, "n": shape.n, "lower": lo, "upper": hi,
               "size": len(fam), "audit": audit.to_json()}
        rep.add(
            rec,
            f"A_{args.k} bracket on {shape}: [{lo}, {hi}]; family size {len(fam)}",
            f"chain cover: {len(audit.chains)} chains; union of maximal extensions matches: "
            f"{audit.union_matches}; saturated: {audit.saturated}",
            f"audit: {'ok' if audit.ok else 'FAILED'}",
        )
        return OK if audit.ok else FAILS
    p1, _ = _poset(args.p1)
    p2, _ = _poset(args.p2)
    shape = _shape(args)
    audit = poly_construction(p1, args.k, p2, shape)
    rep.add(
        {"kind": "construct-poly", "t": shape.t, "n": shape.n, **audit.to_json()},
        f"saturated family of size {len(audit.family)} from a layer seed of {audit.seed_size}",
        f"Natarajan dimension {audit.natarajan} < N = {audit.N}; "
        f"Haussler-Long bound at N-1: {audit.bound}",
        f"audit: {'ok' if audit.ok else 'FAILED'}",
    )
    _write_family(audit.family, args.out, "layer-seeded saturated family")
    return OK if audit.ok else FAILS


def cmd_natarajan(args, rep: Report) -> int:
    fam = _family(args.family)
    dim, w = natarajan_dimension(fam)
    bound = haussler_long_bound(dim, fam.shape)
    ok = len(fam) <= bound
    rep.add(
        {"kind": "natarajan", "dimension": dim, "witness": w.to_json(), "size": len(fam),
         "haussler_long": bound, "bound_holds": ok},
        f"Natarajan dimension: {dim}",
        f"witness X = {list(w.coords)}, F- = {point_text(w.lower)}, F+ = {point_text(w.upper)}",
        f"|F| = {len(fam)} <= {bound}: {ok}",
    )
    return OK if ok else FAILS


def cmd_embed_cube(args, rep: Report) -> int:
    p1, id1 = _poset(args.p1)
    p2, id2 = _poset(args.p2)
    e = embed_sum_in_cube(p1, args.k, p2)
    checks = verify_cube_sum(e)
    ok = all(checks.values())
    rep.add(
        {"kind": "embed-cube", "p1": id1, "k": args.k, "p2": id2, **e.to_json(), "checks": checks},
        f"{id1} above A_{args.k} above {id2} into [2]^{e.N}:",
        *(f"  {a} -> {point_text(f)}" for a, f in enumerate(e.images)),
        *(f"check {k}: {v}" for k, v in checks.items()),
    )
    return OK if ok else FAILS


def cmd_height_width(args, rep: Report) -> int:
    p, pid = _poset(args.poset)
    prof = height_width(p, args.n_cap)
    rep.add(
        {"kind": "height-width", "poset": pid, **prof.to_json()},
        f"h+ = {prof.h_plus}, w+ = {prof.w_plus}, h- = {prof.h_minus}, w- = {prof.w_minus}",
    )
    return OK


def cmd_verify_lemmas(args, rep: Report) -> int:
    results, sandwich = run_sweep(
        args.posets, args.ts, args.ns, seed=args.seed, size_cap=args.size_cap,
        samples=args.samples, workers=args.workers,
    )
    bad = 0
    for r in results:
        bad += len(r.violations)
        sat = r.sat if r.embeds else "-"
        rep.add(
            r.to_json(),
            f"{r.poset:<7} t={r.t} n={r.n} sat*={sat} families={r.families} "
            f"random={r.random_families} pipelines={r.pipelines} violations={len(r.violations)}",
            *("  " + v for v in r.violations),
        )
    bad += len(sandwich)
    rep.add(
        {"kind": "sweep-summary", "jobs": len(results), "violations": bad, "sandwich": sandwich},
        *("sandwich: " + s for s in sandwich),
        f"{len(results)} jobs, {bad} violations",
    )
    return OK if bad == 0 else FAILS


def cmd_oracle_diff(args, rep: Report) -> int:
    p, pid = _poset(args.poset)
    shape = _shape(args)
    if shape.size > ORACLE_CAP:
        raise UsageError(f"oracle-diff needs t^n <= {ORACLE_CAP}, {shape} has {shape.size} points")
    naive = naive_saturated_families(p, shape, ORACLE_CAP)
    fast = [fam.points for fam in enumerate_saturated(p, shape, shape.size)]
    only_naive = sorted(set(naive) - set(fast))
    only_fast = sorted(set(fast) - set(naive))
    agree = not only_naive and not only_fast
    rep.add(
        {"kind": "oracle-diff", "poset": pid, "t": shape.t, "n": shape.n,
         "naive_count": len(naive), "search_count": len(fast), "agree": agree,
         "only_naive": [[list(f) for f in fam] for fam in only_naive],
         "only_search": [[list(f) for f in fam] for fam in only_fast]},
        f"saturated families of {pid} in {shape}: naive {len(naive)}, search {len(fast)}",
        f"agree: {agree}",
    )
    return OK if agree else FAILS


# ---------------------------------------------------------------------------
# parser


def _positive(text: str) -> int:
    v = int(text)
    if v <= 0:
        raise argparse.ArgumentTypeError(f"must be positive, got {v}")
    return v


def _nonneg(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError(f"must be non-negative, got {v}")
    return v


def _int_list(text: str) -> tuple[int, ...]:
    return tuple(_positive(x) for x in text.split(","))


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="gridsat", description="Induced poset saturation in [t]^n.")
    ap.add_argument("--version", action="version", version=f"gridsat {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit the structured report stream")
    common.add_argument("--budget", type=_positive, help="search node budget")
    common.add_argument("--trust-lemmas", action="store_true", help="skip re-verification of lemma outputs")
    common.add_argument("--workers", type=_positive, default=None, help="worker processes (default: CPU count)")
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, func, helptext):
        sp = sub.add_parser(name, parents=[common], help=helptext)
        sp.set_defaults(func=func)
        return sp

    def shape_flags(sp):
        sp.add_argument("-t", type=_positive)
        sp.add_argument("-n", type=_positive)

    sp = add("check-free", cmd_check_free, "is the family induced P-free")
    sp.add_argument("--poset", required=True)
    sp.add_argument("--family", required=True)

    sp = add("check-saturated", cmd_check_saturated, "is the family induced P-saturated")
    sp.add_argument("--poset", required=True)
    sp.add_argument("--family", required=True)

    sp = add("sat-min", cmd_sat_min, "exact minimum saturated size")
    sp.add_argument("--poset", required=True)
    shape_flags(sp)
    sp.add_argument("--oracle", action="store_true", help="cross-check with the all-subsets oracle")
    sp.add_argument("--out", help="write the witness family here")

    sp = add("classify", cmd_classify, "dichotomy classification over n = 1..n-max")
    sp.add_argument("--poset", required=True)
    sp.add_argument("-t", type=_positive, required=True)
    sp.add_argument("--n-max", type=_positive, default=3)
    sp.add_argument("--size-cap", type=_positive, default=6)

    sp = add("uctp", cmd_uctp, "unique cover twin property")
    sp.add_argument("--poset", required=True)

    sp = add("separating", cmd_separating, "separating coordinates of a family")
    sp.add_argument("--family", required=True)

    sp = add("construct", cmd_construct, "chain construction, antichain audit, layer-seeded construction")
    sp.add_argument("which", choices=["chain", "antichain-audit", "poly"])
    shape_flags(sp)
    sp.add_argument("-k", type=_positive, required=True)
    sp.add_argument("--family", help="antichain-audit: family to audit (default: greedy)")
    sp.add_argument("--p1", default="empty", help="poly: top poset")
    sp.add_argument("--p2", default="empty", help="poly: bottom poset")
    sp.add_argument("--out", help="write the constructed family here")

    sp = add("natarajan", cmd_natarajan, "Natarajan dimension and Haussler-Long check")
    sp.add_argument("--family", required=True)

    sp = add("embed-cube", cmd_embed_cube, "embed p1 above A_k above p2 into a hypercube")
    sp.add_argument("--p1", required=True)
    sp.add_argument("-k", type=_positive, required=True)
    sp.add_argument("--p2", required=True)

    sp = add("height-width", cmd_height_width, "h and w profiles in the hypercube")
    sp.add_argument("--poset", required=True)
    sp.add_argument("--n-cap", type=_positive)

    sp = add("verify-lemmas", cmd_verify_lemmas, "property sweep over a (poset, t, n) grid")
    sp.add_argument("--seed", type=_nonneg, default=0)
    sp.add_argument("--posets", type=lambda s: tuple(s.split(",")), default=DEFAULT_POSETS)
    sp.add_argument("--ts", type=_int_list, default=DEFAULT_TS)
    sp.add_argument("--ns", type=_int_list, default=DEFAULT_NS)
    sp.add_argument("--size-cap", type=_positive, default=6)
    sp.add_argument("--samples", type=_nonneg, default=8)

    sp = add("oracle-diff", cmd_oracle_diff, "compare the search against the all-subsets oracle")
    sp.add_argument("--poset", required=True)
    shape_flags(sp)
    return ap


_NOT_CONFIG = {"func", "json", "workers", "out"}


def _config(args) -> dict:
    cfg = {}
    for k, v in sorted(vars(args).items()):
        if k in _NOT_CONFIG:
            continue
        cfg[k] = list(v) if isinstance(v, tuple) else v
    return cfg


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "workers", None) is None:
        args.workers = default_workers()
    if args.command == "verify-lemmas":
        unknown = [x for x in args.posets if x not in NAMED_POSETS]
        if unknown:
            parser.error(f"unknown posets: {unknown}")
    rep = Report(args.command, _config(args))
    err = sys.stderr
    try:
        code = args.func(args, rep)
    except UsageError as exc:
        print(f"gridsat: {exc}", file=err)
        return USAGE
    except (FormatError, CycleError, DuplicatePoint) as exc:
        print(f"gridsat: format error: {exc}", file=err)
        return FORMAT
    except (ResourceCap, CapTooSmall) as exc:
        print(f"gridsat: resource cap: {exc}", file=err)
        return CAP
    except LemmaViolation as exc:
        print(f"gridsat: lemma violation: {exc}", file=err)
        return FAILS
    except GridsatError as exc:
        print(f"gridsat: {type(exc).__name__}: {exc}", file=err)
        return USAGE
    except OSError as exc:
        print(f"gridsat: {exc}", file=err)
        return USAGE
    rep.write(args.json)
    return code


if __name__ == "__main__":
    sys.exit(main())
