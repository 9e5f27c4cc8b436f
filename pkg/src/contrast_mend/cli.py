"""``contrast-mend`` command line."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .errors import ContrastMendError
from .pipeline import PatchReport, build_db, repair_app, verify
from .refdb import ReferenceDb
from .reports import read_report

EXIT_OK = 0
EXIT_FATAL = 1
EXIT_PARTIAL = 2

log = logging.getLogger("contrast_mend")


def _cmd_build_db(args) -> int:
    db = build_db(args.apps)
    db.check_consistency()
    db.save(args.out)
    print(f"{len(db)} pairs written to {args.out} ({db.rejected} rejected)", file=sys.stderr)
    return EXIT_OK


def _cmd_repair(args) -> int:
    report = read_report(args.report)
    if not report.app_id:
        report.app_id = Path(args.app).name
    db = ReferenceDb.load(args.db) if args.db else ReferenceDb()
    out_dir, plan = repair_app(args.app, report, db, args.out, skip=args.skip_issue)
    text = plan.dumps()
    if args.patches_out:
        Path(args.patches_out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    for idx, reason, detail in plan.unrepaired:
        log.warning("issue %d unrepaired: %s (%s)", idx, reason, detail)
    print(
        f"{len(plan.patches)} patches, {len(plan.repaired_indexes)}/{plan.in_scope} issues repaired -> {out_dir}",
        file=sys.stderr,
    )
    return EXIT_PARTIAL if plan.unrepaired else EXIT_OK


def _cmd_verify(args) -> int:
    plan = PatchReport.load(args.patches)
    report = read_report(args.report)
    known = {i.index for i in report.issues}
    missing = sorted(set(plan.issues) - known)
    if missing:
        raise ContrastMendError(f"patch report names issues absent from the report: {missing}")
    results = verify(args.app, plan)
    for r in results:
        print(json.dumps({"issue_index": r.issue_index, "contrast": round(r.contrast, 4), "passed": r.passed}))
    return EXIT_OK if all(r.passed for r in results) else EXIT_PARTIAL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="contrast-mend", description="Repair color contrast issues in decompiled Android apps.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build-db", help="mine issue-free color pairs into a reference DB")
    p.add_argument("--apps", required=True, type=Path, help="directory with one subdirectory per app")
    p.add_argument("--out", required=True, type=Path, help="JSONL database to write")
    p.set_defaults(func=_cmd_build_db)

    p = sub.add_parser("repair", help="repair one app tree")
    p.add_argument("--app", required=True, type=Path)
    p.add_argument("--report", required=True, type=Path)
    p.add_argument("--db", type=Path)
    p.add_argument("--out", required=True, type=Path, help="where the repaired tree is written")
    p.add_argument("--skip-issue", type=int, action="append", default=[], metavar="N")
    p.add_argument("--patches-out", type=Path, help="patch report path (default: stdout)")
    p.set_defaults(func=_cmd_repair)

    p = sub.add_parser("verify", help="re-check contrast of applied patches")
    p.add_argument("--app", required=True, type=Path, help="the repaired tree")
    p.add_argument("--report", required=True, type=Path)
    p.add_argument("--patches", required=True, type=Path)
    p.set_defaults(func=_cmd_verify)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (ContrastMendError, OSError, ValueError) as exc:
        print(f"contrast-mend: {exc}", file=sys.stderr)
        return EXIT_FATAL


if __name__ == "__main__":
    sys.exit(main())
