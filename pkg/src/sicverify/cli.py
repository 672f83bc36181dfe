"""Command-line entry point: ``sicverify verify | list | report``."""
from __future__ import annotations

import argparse
import json
import sys

from . import __version__
from .claims import ClaimReport, all_verified, headline, registry, run

EXIT_OK, EXIT_FAILED, EXIT_USAGE, EXIT_LIMIT = 0, 1, 2, 3


def to_document(reports: list[ClaimReport]) -> dict:
    return {
        "artifact_version": __version__,
        "reports": [r.to_json() for r in reports],
        "all_verified": all_verified(reports),
    }


def render(doc: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(doc, sort_keys=True, indent=2) + "\n"
    lines = []
    for rec in doc["reports"]:
        rep = ClaimReport(**rec)
        line = f"{rep.claim:<4} {rep.status:<25} {headline(rep)}"
        if rep.runtime_ms:
            line += f" ({rep.runtime_ms} ms)"
        lines.append(line.rstrip())
    lines.append(f"all_verified={str(doc['all_verified']).lower()}")
    return "\n".join(lines) + "\n"


def _emit(text: str, output: str | None) -> None:
    if output:
        with open(output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_verify(args) -> int:
    ids = [c.strip() for c in args.claims.split(",") if c.strip()] if args.claims else []
    known = {c.id for c in registry()}
    unknown = [c for c in ids if c not in known]
    if unknown:
        print(f"sicverify: unknown claim id(s): {', '.join(unknown)}", file=sys.stderr)
        return EXIT_USAGE
    reports, status = run(ids, threads=args.threads, cache_dir=args.cache_dir, timings=args.timings)
    doc = to_document(reports)
    _emit(render(doc, args.format), args.output)
    return status


def cmd_list(args) -> int:
    for c in registry():
        tag = " [finding]" if c.finding else ""
        print(f"{c.id:<4} {c.name}{tag}\n     {c.description}\n     anchor: {c.paper_anchor}")
    return EXIT_OK


def cmd_report(args) -> int:
    try:
        with open(args.file) as fh:
            doc = json.load(fh)
        doc["reports"]
    except (OSError, ValueError, KeyError) as exc:
        print(f"sicverify: cannot read report: {exc}", file=sys.stderr)
        return EXIT_USAGE
    sys.stdout.write(render(doc, args.format))
    if any(r["status"] == "failed" for r in doc["reports"]):
        return EXIT_FAILED
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="sicverify", description="Exact verification of sporadic SIC claims.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run claims and print a report")
    v.add_argument("--claims", default="", help="comma-separated claim ids (default: all)")
    v.add_argument("--format", choices=("text", "json"), default="text")
    v.add_argument("--threads", type=int, default=1)
    v.add_argument("--cache-dir", default=None, help="directory for versioned prerequisite snapshots")
    v.add_argument("--output", default=None, help="write the report here instead of stdout")
    v.add_argument("--timings", action="store_true", help="record wall-clock runtime_ms (breaks byte-identity)")
    v.set_defaults(func=cmd_verify)

    ls = sub.add_parser("list", help="print the claim registry")
    ls.set_defaults(func=cmd_list)

    r = sub.add_parser("report", help="re-render a saved JSON report")
    r.add_argument("file")
    r.add_argument("--format", choices=("text", "json"), default="text")
    r.set_defaults(func=cmd_report)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    if getattr(args, "threads", 1) < 1:
        print("sicverify: --threads must be >= 1", file=sys.stderr)
        return EXIT_USAGE
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
