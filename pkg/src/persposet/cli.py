"""Command line surface: validate, extend, barcode, fibers, verify, lemma, cover, random.

Exit codes: 0 success / bound holds, 1 verdict violated, 2 invalid input.
All output is deterministic; --report writes the machine-readable JSON
document next to the human-readable text on stdout.
"""

from __future__ import annotations

import argparse
import random
import sys
from pathlib import Path

from .documents import (
    GeneratorLimits,
    InstanceDocument,
    Scale,
    canonical_json,
    cover_from_doc,
    cover_to_pposet,
    parse_instance,
    pposet_to_doc,
    random_instance,
    random_pposet,
)
from .errors import HypothesisUnmet, PersistenceError, SchemaError, ValidationError
from .homology import FieldSpec, homology_tower
from .complexes import order_complex_tower
from .modules import INF, barcode
from .pposets import persistence_linear_extension, top_degree, tracks
from .verifier import (
    TheoremCertificate,
    chain_puncture_suite,
    fiber_defects,
    verify_cylinder_retraction,
    verify_join_acyclicity,
    verify_split_ses_properties,
    verify_theorem,
)


def _enc(v):
    return "inf" if v == INF else v


def _scaled(v, scale: Scale | None):
    """Durations (eps values, distances) scale by the step only."""
    if scale is None or v == INF:
        return _enc(v)
    return scale.step * v


def _timestamp(v, scale: Scale | None):
    """Index positions (births, deaths) map to t = origin + step * i."""
    if scale is None or v == INF:
        return _enc(v)
    return scale.origin + scale.step * v


def _load_instance(path: str, scale_flag: str | None) -> InstanceDocument:
    inst = parse_instance(Path(path).read_text(encoding="utf-8"))
    if scale_flag is not None:
        origin, step = (float(part) for part in scale_flag.split(","))
        inst.scale = Scale(origin, step)
    return inst


def _write_report(path: str | None, doc: dict) -> None:
    if path:
        Path(path).write_text(canonical_json(doc), encoding="utf-8")


def _certificate_doc(cert: TheoremCertificate, scale: Scale | None) -> dict:
    doc = {
        "schema": cert.schema,
        "field": cert.field.p,
        "k_max": cert.k_max,
        "m": cert.m,
        "fiber_defects": {label: _enc(v) for label, v in sorted(cert.fiber_eps.items())},
        "epsilon": _enc(cert.epsilon),
        "bound": _enc(cert.bound),
        "distances": {str(k): _enc(v) for k, v in sorted(cert.distances.items())},
        "verdict": cert.verdict,
        "ratio": cert.ratio,
        "induced_ranks": {str(k): v for k, v in sorted(cert.induced_ranks.items())},
    }
    if scale is not None:
        doc["scale"] = {"origin": scale.origin, "step": scale.step}
        doc["scaled"] = {
            "epsilon": _scaled(cert.epsilon, scale),
            "bound": _scaled(cert.bound, scale),
            "distances": {str(k): _scaled(v, scale) for k, v in sorted(cert.distances.items())},
        }
    return doc


def _cmd_validate(args) -> int:
    inst = _load_instance(args.instance, None)
    m = len(tracks(inst.y))
    n = len(tracks(inst.x))
    print(f"valid instance: T={inst.map.T}, {n} source tracks, {m} target tracks")
    return 0


def _cmd_extend(args) -> int:
    inst = _load_instance(args.instance, None)
    doc = {}
    for name, pp in (("x", inst.x), ("y", inst.y)):
        orders = persistence_linear_extension(pp)
        doc[name] = orders
        for i, order in enumerate(orders):
            print(f"{name}[{i}]: " + (" < ".join(order) if order else "(empty)"))
    _write_report(args.report, {"schema": "extension/1", "orders": doc})
    return 0


def _cmd_barcode(args) -> int:
    inst = _load_instance(args.instance, args.scale)
    field = FieldSpec(args.field)
    k_max = args.kmax if args.kmax is not None else max(top_degree(inst.x), top_degree(inst.y))
    report = {"schema": "barcode/1", "field": field.p, "k_max": k_max, "x": {}, "y": {}}
    for name, pp in (("x", inst.x), ("y", inst.y)):
        tower = order_complex_tower(pp)
        for k in range(k_max + 1):
            code = barcode(homology_tower(tower, k, field))
            report[name][str(k)] = [[b, _enc(d)] for b, d in code.bars]
            for b, d in code.bars:
                line = f"{name}\t{k}\t{b}\t{_enc(d)}"
                if inst.scale is not None:
                    line += f"\t{_timestamp(b, inst.scale)}\t{_timestamp(d, inst.scale)}"
                print(line)
    _write_report(args.report, report)
    return 0


def _cmd_fibers(args) -> int:
    inst = _load_instance(args.instance, args.scale)
    field = FieldSpec(args.field)
    defects = fiber_defects(inst.map, field, args.kmax)
    doc = {"schema": "fibers/1", "field": field.p, "defects": {}}
    for track, eps in defects.items():
        doc["defects"][track.label] = _enc(eps)
        line = f"{track.label}\t{_enc(eps)}"
        if inst.scale is not None:
            line += f"\t{_scaled(eps, inst.scale)}"
        print(line)
    _write_report(args.report, doc)
    return 0


def _cmd_verify(args) -> int:
    inst = _load_instance(args.instance, args.scale)
    field = FieldSpec(args.field)
    cert = verify_theorem(inst.map, field, args.kmax)
    doc = _certificate_doc(cert, inst.scale)
    if args.json:
        print(canonical_json(doc), end="")
    else:
        print(f"m = {cert.m}")
        line = f"epsilon = {_enc(cert.epsilon)}"
        if inst.scale is not None:
            line += f" (scaled: {_scaled(cert.epsilon, inst.scale)})"
        print(line)
        for label, eps in sorted(cert.fiber_eps.items()):
            print(f"  fiber {label}: {_enc(eps)}")
        print(f"bound 4*m*epsilon = {_enc(cert.bound)}")
        for k, d in sorted(cert.distances.items()):
            print(f"  degree {k}: distance {_enc(d)}")
        if cert.ratio is not None:
            print(f"observed ratio = {cert.ratio:.4f}")
        print(f"verdict: {cert.verdict}")
    _write_report(args.report, doc)
    return 0 if cert.verdict == "holds" else 1


def _cmd_lemma(args) -> int:
    field = FieldSpec(args.field)
    if args.suite == "puncture":
        inst = _load_instance(args.instance, None)
        report = chain_puncture_suite(inst.map, field, args.kmax)
        print(
            f"puncture steps: {report.checked} checked, {report.trivial} trivial, "
            f"{report.skipped} skipped, {len(report.violations)} violations"
        )
        for v in report.violations:
            print(f"  VIOLATION {v}")
        _write_report(args.report, {
            "schema": "lemma/1", "suite": "puncture", "checked": report.checked,
            "trivial": report.trivial, "skipped": report.skipped, "violations": report.violations,
        })
        return 0 if report.ok else 1
    if args.suite == "cylinder":
        inst = _load_instance(args.instance, None)
        report = verify_cylinder_retraction(inst.map, field, args.kmax)
        print(f"cylinder distances: { {k: _enc(v) for k, v in sorted(report.distances.items())} }")
        print(f"cone steps acyclic: {report.cone_steps_ok}")
        _write_report(args.report, {
            "schema": "lemma/1", "suite": "cylinder",
            "distances": {str(k): _enc(v) for k, v in sorted(report.distances.items())},
            "cone_steps_ok": report.cone_steps_ok, "ok": report.ok,
        })
        return 0 if report.ok else 1
    if args.suite == "join":
        violations = 0
        applicable = 0
        limits = GeneratorLimits()
        for i in range(args.count):
            rng = random.Random(args.seed + i)
            T = rng.randint(0, limits.t_max)
            A = random_pposet(rng, T, 3, 3, limits, name_prefix="a")
            B = random_pposet(rng, T, 3, 3, limits, name_prefix="b")
            try:
                report = verify_join_acyclicity(A, B, field)
            except HypothesisUnmet:
                continue
            applicable += 1
            if not report.ok:
                violations += 1
        print(f"join suite: {applicable} applicable of {args.count}, {violations} violations")
        _write_report(args.report, {
            "schema": "lemma/1", "suite": "join", "count": args.count,
            "applicable": applicable, "violations": violations,
        })
        return 0 if violations == 0 else 1
    # ses
    report = verify_split_ses_properties(args.seed, args.count, field)
    print(f"ses suite: {report.cases} cases, {len(report.violations)} violations")
    for v in report.violations:
        print(f"  VIOLATION {v}")
    _write_report(args.report, {
        "schema": "lemma/1", "suite": "ses", "cases": report.cases,
        "violations": report.violations,
    })
    return 0 if report.ok else 1


def _cmd_cover(args) -> int:
    cover = cover_from_doc(Path(args.cover).read_text(encoding="utf-8"))
    pp = cover_to_pposet(cover, args.max_arity)
    doc = pposet_to_doc(pp)
    print(canonical_json(doc), end="")
    _write_report(args.report, doc)
    return 0


def _cmd_random(args) -> int:
    limits = GeneratorLimits(t_max=args.t_max, max_slice=args.max_slice, max_y_tracks=args.max_y_tracks)
    doc = random_instance(args.seed, limits)
    print(canonical_json(doc), end="")
    _write_report(args.report, doc)
    return 0


def _add_common(p: argparse.ArgumentParser, scale: bool = True) -> None:
    p.add_argument("--field", type=int, default=2, help="prime characteristic (default 2)")
    p.add_argument("--kmax", type=int, default=None, help="top homology degree to check")
    p.add_argument("--report", default=None, help="write the machine-readable report here")
    if scale:
        p.add_argument("--scale", default=None, metavar="ORIGIN,STEP",
                       help="report distances also as timestamps t = origin + step*i")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="persposet")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="parse and validate an instance document")
    p.add_argument("instance")
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("extend", help="coherent linear extension of both posets")
    p.add_argument("instance")
    p.add_argument("--report", default=None)
    p.set_defaults(func=_cmd_extend)

    p = sub.add_parser("barcode", help="barcodes of both classifying-space towers")
    p.add_argument("instance")
    _add_common(p)
    p.set_defaults(func=_cmd_barcode)

    p = sub.add_parser("fibers", help="acyclicity defect of every fiber")
    p.add_argument("instance")
    _add_common(p)
    p.set_defaults(func=_cmd_fibers)

    p = sub.add_parser("verify", help="verify the 4*m*epsilon bound")
    p.add_argument("instance")
    p.add_argument("--json", action="store_true", help="print the certificate as JSON")
    _add_common(p)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("lemma", help="run a lemma suite")
    p.add_argument("suite", choices=["puncture", "cylinder", "join", "ses"])
    p.add_argument("instance", nargs="?", help="instance document (puncture and cylinder)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=100)
    _add_common(p, scale=False)
    p.set_defaults(func=_cmd_lemma)

    p = sub.add_parser("cover", help="intersection poset of a nested cover")
    p.add_argument("cover")
    p.add_argument("--max-arity", type=int, default=None)
    p.add_argument("--report", default=None)
    p.set_defaults(func=_cmd_cover)

    p = sub.add_parser("random", help="generate a random instance document")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--t-max", type=int, default=4)
    p.add_argument("--max-slice", type=int, default=6)
    p.add_argument("--max-y-tracks", type=int, default=4)
    p.add_argument("--report", default=None)
    p.set_defaults(func=_cmd_random)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "lemma" and args.suite in ("puncture", "cylinder") and not args.instance:
        print("error: this suite needs an instance document", file=sys.stderr)
        return 2
    try:
        return args.func(args)
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (SchemaError, ValidationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except PersistenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
