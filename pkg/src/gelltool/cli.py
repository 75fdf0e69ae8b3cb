"""Command-line interface.

Subcommands::

    gelltool gell SPEC [--depth N] [--out FILE]
    gelltool verify-gap SPEC [--depth N]
    gelltool compare SPEC_A SPEC_B [--certificate FILE] [--depth N]
    gelltool rieffel --p P --q Q --eps EPS

Exit codes: 0 success, 1 input error, 2 mathematical inconsistency.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from gelltool import __version__
from gelltool.errors import CertificateError, GellError, SpecError
from gelltool.report import DEFAULT_DEPTH, SpecDocument, load_spec

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_INCONSISTENT = 2


def _depth(args, doc: SpecDocument) -> int:
    if args.depth is not None:
        return args.depth
    return doc.depth if doc.depth is not None else DEFAULT_DEPTH


def _clamp(doc: SpecDocument, depth: int) -> int:
    limit = doc.spec.depth
    return depth if limit is None else min(depth, limit)


def cmd_gell(args) -> int:
    from gelltool.pairing import compute_gell

    doc = load_spec(args.spec)
    report = compute_gell(doc.spec, doc.theta, _depth(args, doc), echo=doc.echo())
    text = report.to_json()
    if args.out == "-":
        sys.stdout.write(text)
        return EXIT_OK if report.consistent else EXIT_INCONSISTENT
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    labels = report.gap_labels
    print(f"spec: {doc.name or args.spec}  rank {doc.spec.d}  depth {report.depth}")
    print(f"K^0 rank {report.k_even['ranks'][0]}, K^1 rank {report.k_odd['ranks'][0]}")
    print(f"order unit trace: {report.order_unit['trace']}")
    print(f"gap labels: {labels['untwisted']['display']}  (clopen measures {labels['clopen_measures']['display']})")
    if "twisted_route_A" in labels:
        print(f"twisted labels: route A {labels['twisted_route_A']['display']}, "
              f"route B {labels['twisted_route_B']['display']}, agree={labels['agree']}")
    for note in report.notes:
        print(f"note: {note}")
    print("consistent" if report.consistent else "INCONSISTENT")
    return EXIT_OK if report.consistent else EXIT_INCONSISTENT


def cmd_verify_gap(args) -> int:
    from gelltool.pairing import verify_gap_labelling

    doc = load_spec(args.spec)
    if doc.theta is not None:
        raise SpecError("verify-gap takes untwisted specs only", "/theta")
    depth = _clamp(doc, _depth(args, doc))
    failures = 0
    print(f"{'depth':>5}  {'tau(K_0)':>20}  {'Z[mu]':>20}  verdict")
    for n in range(depth + 1):
        rep = verify_gap_labelling(doc.spec, n)
        failures += not rep.equal
        print(f"{n:>5}  {str(rep.lhs):>20}  {str(rep.rhs):>20}  {'equal' if rep.equal else 'DIFFERENT'}")
    return EXIT_OK if not failures else EXIT_INCONSISTENT


def load_certificate(path):
    from gelltool.exact import Matrix
    from gelltool.ktheory import IntertwinerCertificate

    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
        maps = [[Matrix([[int(x) for x in r] for r in block]) for block in stage] for stage in doc["maps"]]
        return IntertwinerCertificate(tuple(doc["stage_map"]), tuple(tuple(m) for m in maps))
    except (KeyError, TypeError, ValueError) as exc:
        raise CertificateError(f"malformed certificate {path}: {exc}") from None


def compare_obstructions(doc_a: SpecDocument, doc_b: SpecDocument, depth: int) -> tuple[bool, list[str]]:
    """Computable obstructions; True means the two invariants provably differ."""
    from gelltool.lattice import index_steinitz
    from gelltool.pairing import gap_label_group

    spec_a, spec_b = doc_a.spec, doc_b.spec
    lines = []
    distinguished = False
    if spec_a.tail and spec_b.tail:
        sa, sb = index_steinitz(spec_a), index_steinitz(spec_b)
        lines.append(f"top-degree Steinitz: {sa} vs {sb}")
        if sa != sb:
            distinguished = True
        if sa.infinite != sb.infinite:
            lines.append("infinite prime supports differ: the top-degree groups are not even isomorphic")
    elif not spec_a.tail and not spec_b.tail:
        sa, sb = index_steinitz(spec_a, spec_a.depth), index_steinitz(spec_b, spec_b.depth)
        lines.append(f"top-degree Steinitz (finite towers): {sa} vs {sb}")
        distinguished |= sa != sb
    else:
        lines.append("one tower is finite and the other is not: Steinitz numbers not compared")
    da, db = _clamp(doc_a, depth), _clamp(doc_b, depth)
    ga, gb = gap_label_group(spec_a, doc_a.theta, da), gap_label_group(spec_b, doc_b.theta, db)
    lines.append(f"gap labels at depth {da}/{db}: {ga} vs {gb}")
    if spec_a.depth is not None and spec_b.depth is not None and ga != gb:
        distinguished = True
    return distinguished, lines


def cmd_compare(args) -> int:
    from gelltool.ktheory import check_basic_certificate

    doc_a, doc_b = load_spec(args.spec_a), load_spec(args.spec_b)
    if doc_a.spec.d != doc_b.spec.d:
        raise SpecError(f"ranks differ: {doc_a.spec.d} vs {doc_b.spec.d}", "/rank")
    if args.certificate:
        cert = load_certificate(args.certificate)
        rep = check_basic_certificate(doc_a.spec, doc_b.spec, cert)
        for line in rep.diagnostics:
            print(f"  {line}")
        if not rep.lower_degree_commutes:
            print("  lower-degree squares do not commute (reported only)")
        print("verdict: certificate verified" if rep.ok else "verdict: certificate rejected")
        return EXIT_OK if rep.ok else EXIT_INCONSISTENT
    distinguished, lines = compare_obstructions(doc_a, doc_b, _depth(args, doc_a))
    for line in lines:
        print(f"  {line}")
    print("verdict: distinguished" if distinguished else "verdict: not distinguished at this depth")
    return EXIT_OK


def cmd_rieffel(args) -> int:
    from gelltool.rotation import rieffel_projection

    try:
        eps = Fraction(args.eps)
    except (ValueError, ZeroDivisionError):
        raise SpecError(f"cannot parse eps {args.eps!r}", "--eps") from None
    res = rieffel_projection(args.p, args.q, eps)
    print(json.dumps(res.record(), indent=2))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gelltool", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"gelltool {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gell", help="compute the geometric Elliott invariant report")
    p.add_argument("spec")
    p.add_argument("--depth", type=int, default=None, help=f"truncation depth (default {DEFAULT_DEPTH})")
    p.add_argument("--out", help="write the JSON report to this file ('-' for stdout)")
    p.set_defaults(func=cmd_gell)

    p = sub.add_parser("verify-gap", help="check tau(K_0) = Z[mu] at every depth up to N")
    p.add_argument("spec")
    p.add_argument("--depth", type=int, default=None)
    p.set_defaults(func=cmd_verify_gap)

    p = sub.add_parser("compare", help="verify a certificate or compare computable obstructions")
    p.add_argument("spec_a")
    p.add_argument("spec_b")
    p.add_argument("--certificate")
    p.add_argument("--depth", type=int, default=None)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("rieffel", help="numeric Rieffel projection in the q x q clock/shift model")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--eps", required=True, help="a rational such as 1/7")
    p.set_defaults(func=cmd_rieffel)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "depth", None) is not None and args.depth < 0:
        print("error: --depth must be >= 0", file=sys.stderr)
        return EXIT_INPUT
    try:
        return args.func(args)
    except (GellError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
