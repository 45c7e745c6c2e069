"""Command-line surface: every subcommand prints one JSON report.

Reports carry {command, parameters, status, payload, toolkit_version,
wall_time} with status pass/fail/incomplete and exit code 0 only on pass
(usage errors exit 2).  Output is byte-identical across runs for identical
inputs; wall_time is therefore null unless --timing is given.  Floating
payload values appear as {"value": ..., "tolerance": ...} pairs.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from typing import Optional

from . import __version__, geombounds
from .congruence import (
    CongruenceGroup,
    audit_short_geodesics,
    count_cusps,
    peripheral_check,
    systole_lower_bound,
)
from .covers import (
    branch_preimage_counts,
    component_cycle_warnings,
    extend_trivially,
    format_cycles,
    parse_monodromy,
    validate_monodromy,
)
from .errors import BianchikitError
from .fillpipe import FillPipeline, LEVEL
from .fpcore import (
    DEFAULT_PANEL_NAMES,
    abelianization,
    coset_table_from_hom,
    fingerprint,
    todd_coxeter,
)
from .matgroup import classify, enumerate_image, reduce_mat
from .quadint import QuadInt, parse_gaussian, residue_ring
from .words import (
    MERIDIAN_COUNT,
    Presentation,
    bianchi_matrices,
    bianchi_presentation,
    eval_word,
    load_meridians,
    parse_presentation,
    parse_word,
)

FLOAT_TOL = 1e-12


def _float_field(value: float, tolerance: float = FLOAT_TOL) -> dict:
    return {"value": value, "tolerance": tolerance}


def _report(command: str, parameters: dict, status: str, payload: dict,
            wall_time: Optional[float]) -> int:
    doc = {
        "command": command,
        "parameters": parameters,
        "status": status,
        "payload": payload,
        "toolkit_version": __version__,
        "wall_time": wall_time,
    }
    print(json.dumps(doc, indent=2, sort_keys=True))
    return 0 if status == "pass" else 1


def _alpha_arg(text: str) -> QuadInt:
    return parse_gaussian(text)


# ---------------------------------------------------------------------------
# subcommand implementations, each returning (status, payload)
# ---------------------------------------------------------------------------


def cmd_relators_check(args) -> tuple[str, dict]:
    P = bianchi_presentation()
    dictionary = bianchi_matrices()
    images = {str(rel): eval_word(rel, dictionary).is_identity() for rel in P.relators}
    ok = all(images.values())
    return ("pass" if ok else "fail", {"relators": images, "all_identity": ok})


def cmd_meridians_check(args) -> tuple[str, dict]:
    meridians = load_meridians()
    group = CongruenceGroup(LEVEL)
    dictionary = bianchi_matrices()
    bad = []
    for k in range(1, len(meridians) + 1):
        m = eval_word(meridians[k], dictionary)
        kind = classify(m).kind
        if kind != "parabolic" or not reduce_mat(m, LEVEL).is_identity():
            bad.append({"index": k, "kind": kind})
    payload = {
        "count": len(meridians),
        "parabolic_kernel_members": len(meridians) - len(bad),
        "failures": bad,
        "peripheral_pair_ok": peripheral_check(group),
    }
    return ("pass" if not bad and payload["peripheral_pair_ok"] else "fail", payload)


def cmd_systole_bound(args) -> tuple[str, dict]:
    group = CongruenceGroup(args.alpha)
    bound = systole_lower_bound(group)
    threshold = geombounds.genus2_exclusion_threshold()
    payload = {
        "alpha": str(args.alpha),
        "norm": args.alpha.norm(),
        "bound": _float_field(bound),
        "genus2_exclusion_threshold": _float_field(threshold),
        "exceeds_genus2_threshold": bound > threshold,
    }
    return ("pass", payload)


def cmd_cusp_count(args) -> tuple[str, dict]:
    cusps = count_cusps(args.alpha)
    return ("pass", {"alpha": str(args.alpha), "cusps": cusps})


def cmd_coset_table(args) -> tuple[str, dict]:
    P = bianchi_presentation()
    dictionary = bianchi_matrices()
    images = {g: reduce_mat(dictionary[g], args.alpha) for g in P.generators}
    ring = residue_ring(args.alpha)
    from .matgroup import ProjMat

    ident = ProjMat(ring.one(), ring.zero(), ring.zero(), ring.one())
    table = coset_table_from_hom(
        P, images, mul=lambda a, b: a * b, inv=lambda m: m.inverse(), identity=ident
    )
    payload = {"alpha": str(args.alpha), "table": table.to_json_dict(P.generators)}
    return ("pass", payload)


def cmd_todd_coxeter(args) -> tuple[str, dict]:
    with open(args.file, "r", encoding="utf-8") as fh:
        P = parse_presentation(fh.read())
    if args.extra_relators:
        extra = tuple(parse_word(w, alphabet=P.generators) for w in args.extra_relators)
        P = Presentation(P.generators, P.relators + extra)
    table = todd_coxeter(P, (), limit=args.limit)
    payload = {
        "file": args.file,
        "extra_relators": args.extra_relators or [],
        "cosets": table.n,
        "table": table.to_json_dict(P.generators) if args.table else None,
    }
    return ("pass", payload)


def cmd_rewrite(args) -> tuple[str, dict]:
    if args.alpha != LEVEL:
        raise BianchikitError("rewrite is implemented for alpha = 3+2i only")
    pipe = FillPipeline(tc_limit=args.limit)
    pres, _ = pipe.build_kernel_presentation()
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(str(pres))
    payload = {
        "alpha": str(args.alpha),
        "generators": len(pres.generators),
        "relators": len(pres.relators),
        "written_to": args.out,
    }
    return ("pass", payload)


def cmd_fill(args) -> tuple[str, dict]:
    panel = tuple(args.panel) if args.panel else DEFAULT_PANEL_NAMES
    pipe = FillPipeline(budget=args.budget, panel=panel)
    if args.keep == "all":
        results = pipe.scan_all(jobs=args.jobs)
        matching = [r.kept_index for r in results if r.matches_fig8]
        payload = {
            "results": [r.to_json_dict() for r in results],
            "matching_indices": matching,
            "note": "fingerprint equality is evidence of isomorphism, not proof",
        }
        status = "pass" if matching else (
            "incomplete" if any(not r.complete for r in results) else "fail"
        )
        return (status, payload)
    kept = int(args.keep)
    result = pipe.fill(kept)
    status = "pass" if result.complete else "incomplete"
    payload = result.to_json_dict()
    payload["note"] = "fingerprint equality is evidence of isomorphism, not proof"
    return (status, payload)


def cmd_fingerprint(args) -> tuple[str, dict]:
    with open(args.file, "r", encoding="utf-8") as fh:
        P = parse_presentation(fh.read())
    panel = tuple(args.targets) if args.targets else DEFAULT_PANEL_NAMES
    fp = fingerprint(P, panel, jobs=args.jobs)
    return ("pass", {"file": args.file, "fingerprint": fp.to_json_list()})


def cmd_compare(args) -> tuple[str, dict]:
    presentations = []
    for path in (args.file1, args.file2):
        with open(path, "r", encoding="utf-8") as fh:
            presentations.append(parse_presentation(fh.read()))
    panel = tuple(args.targets) if args.targets else DEFAULT_PANEL_NAMES
    ab = [abelianization(P) for P in presentations]
    fps = [fingerprint(P, panel, jobs=args.jobs) for P in presentations]
    same_ab = ab[0] == ab[1]
    same_fp = fps[0] == fps[1]
    payload = {
        "abelian": [str(a) for a in ab],
        "fingerprints": [fp.to_json_list() for fp in fps],
        "abelian_equal": same_ab,
        "fingerprint_equal": same_fp,
        "verdict": "distinguished" if not (same_ab and same_fp)
        else "indistinguishable on this panel (not a proof of isomorphism)",
    }
    return ("pass", payload)


def cmd_audit_geodesics(args) -> tuple[str, dict]:
    group = CongruenceGroup(args.alpha)
    audit = audit_short_geodesics(group, args.radius, max_elements=args.max_elements)
    payload = audit.to_json_dict()
    payload["bound"] = _float_field(audit.bound)
    if audit.min_loxodromic_length is not None:
        payload["min_loxodromic_length"] = _float_field(audit.min_loxodromic_length)
    return ("pass" if audit.ok else "fail", payload)


def cmd_geometry(args) -> tuple[str, dict]:
    query = geombounds.GeomQuery(sys=args.sys, area=args.area, r=args.r)
    derived = query.derive()
    payload = {}
    for key, value in derived.items():
        payload[key] = _float_field(value) if isinstance(value, float) else value
    return ("pass", payload)


def cmd_monodromy_check(args) -> tuple[str, dict]:
    with open(args.file, "r", encoding="utf-8") as fh:
        m = parse_monodromy(fh.read())
    try:
        validate_monodromy(m)
    except BianchikitError as exc:
        return ("fail", {"file": args.file, "valid": False, "reason": str(exc)})
    payload = {
        "file": args.file,
        "valid": True,
        "degree": m.degree,
        "branch_preimage_counts": branch_preimage_counts(m) if m.components else [],
        "warnings": component_cycle_warnings(m),
    }
    return ("pass", payload)


def cmd_monodromy_extend(args) -> tuple[str, dict]:
    with open(args.file, "r", encoding="utf-8") as fh:
        m = parse_monodromy(fh.read())
    new = set(args.new_meridians)
    unknown = new - set(m.presentation.generators)
    if unknown:
        raise BianchikitError(f"unknown meridian generators: {sorted(unknown)}")
    sub_gens = [g for g in m.presentation.generators if g not in new]
    sub_pres = Presentation(
        tuple(sub_gens),
        tuple(r for r in m.presentation.relators if not (r.generators() & new)),
    )
    sub_components = tuple(
        comp for comp in m.components if not (set(comp) & new)
    )
    from .covers import Monodromy

    sub = Monodromy(
        presentation=sub_pres,
        degree=m.degree,
        images={g: m.images[g] for g in sub_gens},
        components=sub_components,
    )
    validate_monodromy(sub)
    extended = extend_trivially(
        sub, m.presentation, {g: g for g in sub_gens}, m.components
    )
    payload = {
        "file": args.file,
        "new_meridians": sorted(new),
        "degree": extended.degree,
        "images": {g: format_cycles(p) for g, p in extended.images.items()},
        "branch_preimage_counts": branch_preimage_counts(extended)
        if extended.components
        else [],
        "valid": True,
    }
    return ("pass", payload)


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bianchikit",
        description="Exact computations for Bianchi groups and congruence links; "
        "each subcommand prints one JSON report.",
    )
    parser.add_argument("--timing", action="store_true",
                        help="include wall time in the report (breaks byte-reproducibility)")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("relators-check", help="evaluate the 8 defining relators to +-I")

    sub.add_parser("meridians-check", help="all 42 meridians are parabolic kernel members")

    p = sub.add_parser("systole-bound", help="closed-form systole lower bound")
    p.add_argument("--alpha", type=_alpha_arg, required=True)

    p = sub.add_parser("cusp-count", help="cusp count via the finite quotient")
    p.add_argument("--alpha", type=_alpha_arg, required=True)

    p = sub.add_parser("coset-table", help="coset table of Gamma(alpha) from reduction images")
    p.add_argument("--alpha", type=_alpha_arg, required=True)

    p = sub.add_parser("todd-coxeter", help="enumerate cosets for a presentation file")
    p.add_argument("file")
    p.add_argument("--extra-relators", nargs="*", default=[])
    p.add_argument("--limit", type=int, default=100_000)
    p.add_argument("--table", action="store_true", help="include the full table")

    p = sub.add_parser("rewrite", help="Schreier presentation of Gamma(3+2i)")
    p.add_argument("--alpha", type=_alpha_arg, default=LEVEL)
    p.add_argument("--limit", type=int, default=50_000)
    p.add_argument("--out", help="write the presentation file here")

    p = sub.add_parser("fill", help="fill all meridians but one and compare with fig-8")
    p.add_argument("--keep", required=True,
                   help="kept meridian index 1..42, 'all' to scan, or 0 to fill everything")
    p.add_argument("--budget", type=int, default=30_000_000)
    p.add_argument("--panel", nargs="*", default=None)
    p.add_argument("--jobs", type=int, default=1)

    p = sub.add_parser("fingerprint", help="hom-count fingerprint of a presentation file")
    p.add_argument("file")
    p.add_argument("--targets", nargs="*", default=None)
    p.add_argument("--jobs", type=int, default=1)

    p = sub.add_parser("compare", help="compare two presentation files by invariants")
    p.add_argument("file1")
    p.add_argument("file2")
    p.add_argument("--targets", nargs="*", default=None)
    p.add_argument("--jobs", type=int, default=1)

    p = sub.add_parser("audit-geodesics", help="exhaustive short-geodesic audit")
    p.add_argument("--alpha", type=_alpha_arg, required=True)
    p.add_argument("--radius", type=int, required=True)
    p.add_argument("--max-elements", type=int, default=5_000_000)
    p.add_argument("--jobs", type=int, default=1)

    p = sub.add_parser("geometry", help="derived genus/area/systole bounds")
    p.add_argument("--sys", type=float)
    p.add_argument("--area", type=float)
    p.add_argument("--r", type=float)

    p = sub.add_parser("monodromy-check", help="validate a monodromy file")
    p.add_argument("file")

    p = sub.add_parser("monodromy-extend",
                       help="extend trivially over the listed new meridians")
    p.add_argument("file")
    p.add_argument("--new-meridians", nargs="+", required=True)

    return parser


_HANDLERS = {
    "relators-check": cmd_relators_check,
    "meridians-check": cmd_meridians_check,
    "systole-bound": cmd_systole_bound,
    "cusp-count": cmd_cusp_count,
    "coset-table": cmd_coset_table,
    "todd-coxeter": cmd_todd_coxeter,
    "rewrite": cmd_rewrite,
    "fill": cmd_fill,
    "fingerprint": cmd_fingerprint,
    "compare": cmd_compare,
    "audit-geodesics": cmd_audit_geodesics,
    "geometry": cmd_geometry,
    "monodromy-check": cmd_monodromy_check,
    "monodromy-extend": cmd_monodromy_extend,
}


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    parameters = {
        k: (str(v) if isinstance(v, QuadInt) else v)
        for k, v in vars(args).items()
        if k not in ("command", "timing") and v is not None
    }
    started = time.monotonic()
    try:
        status, payload = _HANDLERS[args.command](args)
    except BianchikitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        wall = time.monotonic() - started if args.timing else None
        return _report(args.command, parameters, "fail",
                       {"error": str(exc)}, wall)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        parser.exit(2, f"{parser.prog}: {exc}\n")
    wall = time.monotonic() - started if args.timing else None
    return _report(args.command, parameters, status, payload, wall)


if __name__ == "__main__":
    sys.exit(main())
